"""Permutations on [d], projection of real matrices onto them, and the
normalized Hamming loss modulo one global permutation.

A permutation is stored as its image vector: ``images[i]`` is where ``i``
goes.  The matrix view puts a 1 in row ``images[j]`` of column ``j``, so
``matrix(a) @ matrix(b)`` is the matrix of the composed map ``a(b(.))``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Exact global-alignment search in hamming_loss is gated above this size.
EXACT_ALIGNMENT_CAP = 8


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0, ..., d-1}."""

    images: tuple[int, ...]

    def __post_init__(self):
        d = len(self.images)
        if d < 1:
            raise ValueError("permutation dimension must be >= 1")
        if sorted(self.images) != list(range(d)):
            raise ValueError(f"not a bijection of range({d}): {self.images}")
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))

    @property
    def d(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(d)))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def matrix(self) -> np.ndarray:
        """Dense 0/1 view: column j carries a 1 in row images[j]."""
        p = np.zeros((self.d, self.d))
        p[list(self.images), np.arange(self.d)] = 1.0
        return p


def compose(a: Permutation, b: Permutation) -> Permutation:
    """The permutation whose matrix is matrix(a) @ matrix(b)."""
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} != {b.d}")
    return Permutation(tuple(a.images[b.images[i]] for i in range(a.d)))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.d
    for i, j in enumerate(a.images):
        inv[j] = i
    return Permutation(tuple(inv))


def sample_uniform(d: int, rng: np.random.Generator) -> Permutation:
    """Fisher-Yates draw; every one of the d! permutations equally likely."""
    if d < 1:
        raise ValueError("d must be >= 1")
    images = list(range(d))
    for i in range(d - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        images[i], images[j] = images[j], images[i]
    return Permutation(tuple(images))


def assignment_score(q: np.ndarray, images: Sequence[int]) -> float:
    """<P, q> accumulated left to right over columns (the canonical order)."""
    total = 0.0
    for j, i in enumerate(images):
        total += float(q[i, j])
    return total


def _hungarian_max(q: np.ndarray) -> list[int]:
    """Assignment maximizing sum_j q[rows[j], j]; returns rows indexed by column.

    O(d^3) shortest-augmenting-path form on the negated-and-offset matrix.
    """
    d = q.shape[0]
    cost = (q.max() - q).tolist()  # negation with offset -> minimization
    inf = float("inf")
    u = [0.0] * (d + 1)
    v = [0.0] * (d + 1)
    match = [0] * (d + 1)  # match[col 1..d] = row (1-based), 0 = free
    way = [0] * (d + 1)
    for i in range(1, d + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (d + 1)
        used = [False] * (d + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = inf
            j1 = -1
            row = cost[i0 - 1]
            for j in range(1, d + 1):
                if not used[j]:
                    cur = row[j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(d + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    return [match[j] - 1 for j in range(1, d + 1)]


def _refine_lexicographic(q: np.ndarray, best: list[int]) -> list[int]:
    """Smallest image vector among assignments tying the optimum of `best`.

    Column by column, try every unused row smaller than the incumbent; keep
    it if some completion still reaches the optimal score.  Scores are
    compared in the canonical summation order, matching exhaustive search.
    """
    d = q.shape[0]
    target = assignment_score(q, best)
    cols = np.arange(d)
    for j in range(d):
        taken = best[:j]
        free = sorted(set(range(d)) - set(taken))
        for r in free:
            if r == best[j]:
                break
            rows_left = [x for x in free if x != r]
            cols_left = cols[j + 1:]
            candidate = taken + [r]
            if len(cols_left) > 0:
                sub = q[np.ix_(rows_left, cols_left)]
                comp = _hungarian_max(sub)
                candidate += [rows_left[i] for i in comp]
            if assignment_score(q, candidate) == target:
                best = candidate
                break
    return best


def project_to_permutation(q: np.ndarray | Sequence[Sequence[float]]) -> Permutation:
    """argmax_{P in Pi_d} <P, q>, exactly, via the Hungarian algorithm.

    Equivalently the Frobenius-nearest permutation matrix, since every P in
    Pi_d has the same Frobenius norm.  Ties resolve to the lexicographically
    smallest image vector.
    """
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {q.shape}")
    if q.shape[0] < 1:
        raise ValueError("dimension must be >= 1")
    if not np.isfinite(q).all():
        raise ValueError("matrix contains NaN or infinite entries")
    best = _hungarian_max(q)
    best = _refine_lexicographic(q, best)
    return Permutation(tuple(best))


def hamming_loss(
    est: Sequence[Permutation],
    truth: Sequence[Permutation],
    *,
    allow_large_d: bool = False,
) -> float:
    """min_P (1/n) sum_j 1{est_j != compose(truth_j, inverse(P))}.

    est_j matches truth_j composed with inverse(P) exactly when
    P == compose(inverse(est_j), truth_j), so the minimizing P is the most
    frequent such product and the minimum is exact for every d.  The d > 8
    gate mirrors the exact-search cap of the projection-side tooling and
    needs an explicit opt-in.
    """
    n = len(est)
    if n < 1 or len(truth) != n:
        raise ValueError(f"length mismatch: {len(est)} vs {len(truth)}")
    d = est[0].d
    for p in (*est, *truth):
        if p.d != d:
            raise ValueError("all permutations must share one dimension")
    if d > EXACT_ALIGNMENT_CAP and not allow_large_d:
        raise ValueError(
            f"d={d} exceeds the exact-alignment cap {EXACT_ALIGNMENT_CAP}; "
            "pass allow_large_d=True to proceed"
        )
    counts = Counter(compose(inverse(e), t).images for e, t in zip(est, truth))
    return 1.0 - max(counts.values()) / n
