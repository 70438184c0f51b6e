"""Counter-based Philox4x32-10 generator usable from numba kernels.

Every variate is a pure function of ``(key, replicate, draw counter)``, so a
replicate's stream never depends on which worker simulates it.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_TWO_M53 = 1.0 / 9007199254740992.0

U64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & U64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & U64
    return z ^ (z >> 31)


def derive_key(root_seed: int, stream_id: int) -> int:
    """64-bit Philox key for one ``(root_seed, stream_id)`` pair."""
    return splitmix64((root_seed & U64) ^ splitmix64(stream_id & U64))


@njit(cache=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> _S32) ^ c1 ^ k0) & _MASK
        n1 = p1 & _MASK
        n2 = ((p0 >> _S32) ^ c3 ^ k1) & _MASK
        n3 = p0 & _MASK
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


@njit(cache=True)
def new_state(key, replicate):
    """State layout: key, replicate, counter, spare-uniform flag, spare-normal flag."""
    st = np.zeros(5, dtype=np.uint64)
    st[0] = np.uint64(key)
    st[1] = np.uint64(replicate)
    return st


@njit(cache=True)
def _block(st):
    key = st[0]
    rep = st[1]
    ctr = st[2]
    st[2] = ctr + np.uint64(1)
    c0, c1, c2, c3 = philox4x32(ctr & _MASK, ctr >> _S32, rep & _MASK, rep >> _S32,
                                key & _MASK, key >> _S32)
    u1 = ((c0 >> np.uint64(5)) * 67108864.0 + (c1 >> np.uint64(6)) + 0.5) * _TWO_M53
    u2 = ((c2 >> np.uint64(5)) * 67108864.0 + (c3 >> np.uint64(6)) + 0.5) * _TWO_M53
    return u1, u2


@njit(cache=True)
def uniform(st, buf):
    """Uniform variate on the open interval (0, 1)."""
    if st[3] == 1:
        st[3] = 0
        return buf[0]
    u1, u2 = _block(st)
    buf[0] = u2
    st[3] = 1
    return u1


@njit(cache=True)
def normal(st, buf):
    if st[4] == 1:
        st[4] = 0
        return buf[1]
    u1 = uniform(st, buf)
    u2 = uniform(st, buf)
    rad = math.sqrt(-2.0 * math.log(u1))
    buf[1] = rad * math.sin(2.0 * math.pi * u2)
    st[4] = 1
    return rad * math.cos(2.0 * math.pi * u2)


@njit(cache=True)
def exponential(st, buf):
    return -math.log(uniform(st, buf))


@njit(cache=True)
def _uniform_matrix(key, first, n, k):
    out = np.empty((n, k))
    buf = np.empty(2)
    for i in range(n):
        st = new_state(key, first + i)
        for j in range(k):
            out[i, j] = uniform(st, buf)
    return out


def uniforms(root_seed: int, stream_id: int, n: int, k: int = 1, first: int = 0) -> np.ndarray:
    """``k`` uniforms for each of ``n`` replicates (row ``i`` = replicate ``first + i``)."""
    return _uniform_matrix(derive_key(root_seed, stream_id), first, n, k)
