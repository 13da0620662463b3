"""Counter-based random streams keyed by (seed, object indices, role).

Every random quantity in the synthetic model is drawn from a stateless
stream addressed by its coordinates, so the value of one draw never depends
on how many other draws happened or in which order.  The mixer is the
SplitMix64 finalizer chained over the key fields; uniforms take the top 53
bits, normals come from Box-Muller.
"""

from __future__ import annotations

import numpy as np

# Stream roles inside one instance.
ROLE_MASK = 0
ROLE_NOISE = 1
ROLE_TRUTH = 2

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


def _finalize(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def mix64(seed: int, *fields) -> int:
    """Hash an integer key chain down to one uint64. Order-sensitive."""
    h = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    for f in fields:
        h = _finalize((h + _GAMMA) ^ np.uint64(int(f) & 0xFFFFFFFFFFFFFFFF))
    return int(h)


def _keyed_words(seed: int, a, b, role: int, counters) -> np.ndarray:
    """uint64 words for streams (seed, a_i, b_i, role) at the given counters.

    `a` and `b` are equal-length integer arrays; `counters` is a 1-D array.
    Result has shape (len(a), len(counters)).
    """
    h = np.uint64(mix64(seed, role))
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    h = _finalize((h + _GAMMA) ^ a)
    h = _finalize((h + _GAMMA) ^ b)
    c = np.asarray(counters, dtype=np.uint64)
    return _finalize((h[:, None] + _GAMMA) ^ c[None, :])


def keyed_uniforms(seed: int, a, b, role: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1), shape (len(a), count)."""
    words = _keyed_words(seed, a, b, role, np.arange(count))
    return (words >> np.uint64(11)).astype(np.float64) * _U53


def keyed_normals(seed: int, a, b, role: int, count: int) -> np.ndarray:
    """Standard normals via Box-Muller, shape (len(a), count)."""
    npairs = (count + 1) // 2
    u = keyed_uniforms(seed, a, b, role, 2 * npairs)
    u1 = u[:, :npairs]
    u2 = u[:, npairs:]
    # 1 - u1 lies in (0, 1], keeping the log finite.
    r = np.sqrt(-2.0 * np.log1p(-u1))
    theta = (2.0 * np.pi) * u2
    z = np.concatenate([r * np.cos(theta), r * np.sin(theta)], axis=1)
    return z[:, :count]
