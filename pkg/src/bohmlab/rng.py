"""Counter-based random numbers with a fully documented algorithm.

Every random draw in this package comes from the SplitMix64 output
function, used in counter mode so that the i-th draw of a stream is a
pure function of (seed, i).  This gives bit-reproducible sample streams
that are trivial to parallelize (disjoint counter ranges) and to
re-implement in any language.

Algorithm (all arithmetic modulo 2**64):

    GAMMA = 0x9E3779B97F4A7C15
    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    i-th raw output of stream `seed` (i = 0, 1, 2, ...):
        out_i = mix64(seed + (i + 1) * GAMMA)

    uniform double in [0, 1):
        u_i = (out_i >> 11) / 2**53

    child stream derivation (for per-trial / per-stage substreams):
        derive(seed, tag) = mix64(seed ^ mix64((tag + 1) * GAMMA))
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix64_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def derive(seed: int, tag: int) -> int:
    """Deterministic child seed for substream `tag` of stream `seed`."""
    return _mix64_int((seed & _MASK) ^ _mix64_int(((tag & _MASK) + 1) * _GAMMA))


def raw(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Raw 64-bit outputs out_start .. out_{start+count-1} of the stream."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    with np.errstate(over="ignore"):
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        z = np.uint64(seed & _MASK) + idx * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    """`count` doubles in [0, 1), draws start..start+count-1 of the stream."""
    return (raw(seed, count, start) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def sample_from_density(x_nodes: np.ndarray, density: np.ndarray, n: int,
                        seed: int, start: int = 0) -> np.ndarray:
    """Inverse-transform samples from a piecewise-constant node density.

    Node j owns the cell [x_j - dx/2, x_j + dx/2); the density is
    constant on each cell, so the cumulative distribution is piecewise
    linear and the inverse transform interpolates linearly within the
    selected cell.  Centering the cells on the nodes keeps the sampled
    law aligned with the continuum density to second order in dx.
    Draw i uses counter start+i of stream `seed`.
    """
    x_nodes = np.asarray(x_nodes, dtype=float)
    density = np.asarray(density, dtype=float)
    if x_nodes.ndim != 1 or x_nodes.shape != density.shape:
        raise ValueError("x_nodes and density must be equal-length 1D arrays")
    dx = x_nodes[1] - x_nodes[0]
    masses = density * dx
    cum = np.cumsum(masses)
    total = cum[-1]
    if not total > 0.0:
        raise ValueError("density has no mass to sample from")
    u = uniforms(seed, n, start) * total
    j = np.searchsorted(cum, u, side="right")
    left = np.where(j > 0, cum[np.maximum(j - 1, 0)], 0.0)
    frac = (u - left) / masses[j]
    return x_nodes[j] - 0.5 * dx + frac * dx
