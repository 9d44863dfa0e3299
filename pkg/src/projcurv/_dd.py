"""Minimal vectorized double-double arithmetic built on the error-free
two-sum and two-product transformations. Values are ``(hi, lo)`` pairs of float arrays."""
from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd(x):
    x = np.asarray(x, dtype=float)
    return x, np.zeros_like(x)


def add(x, y):
    s, e = two_sum(x[0], y[0])
    return _quick(s, e + x[1] + y[1])


def neg(x):
    return -x[0], -x[1]


def sub(x, y):
    return add(x, neg(y))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    return _quick(p, e + x[0] * y[1] + x[1] * y[0])


def power(x, n: int):
    out = dd(np.ones_like(x[0]))
    for _ in range(n):
        out = mul(out, x)
    return out


def value(x):
    return x[0] + x[1]
