"""Hot inner loops over machine-sized integers.

Every kernel is written as a plain scalar-loop function and compiled
with numba when available.  Setting COLLATZ_LAB_NO_NUMBA=1 (or any
truthy value) skips compilation so the identical Python source runs
uncompiled; results must match bit for bit either way.  Arbitrary
precision work never lands here, it stays in the pure-Python modules.

Values are int64 throughout.  Any step whose 3x+1 product could exceed
int64 bails out instead of wrapping; callers re-run those rare starts
with Python integers.
"""

from __future__ import annotations

import os

import numpy as np

# largest x with 3x+1 guaranteed inside int64
_OVF = (2**63 - 2) // 3


def _flag_set(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


_DISABLED = _flag_set("COLLATZ_LAB_NO_NUMBA")

USING_NUMBA = False
if not _DISABLED:
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

if not USING_NUMBA:

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@_njit(cache=True)
def scan_sigma_peak(hi, max_steps):
    """Per-start step counts and excursion peaks for every n in [1, hi].

    sigma[n] = steps of the halved 3x+1 rule to reach 1 (-2 if a budget
    or the int64 guard interfered).  peak1[n] = largest iterate strictly
    after the start, up to and including the first 1.  Later starts chase
    down to an earlier one and reuse its totals, which is exact because
    the orbit tail is literally the earlier orbit.
    """
    sigma = np.full(hi + 1, -1, np.int64)
    peak1 = np.zeros(hi + 1, np.int64)
    if hi >= 1:
        sigma[1] = 0
        peak1[1] = 1
    for n in range(2, hi + 1):
        x = n
        d = 0
        pk = 0
        bad = False
        while x >= n:
            if x & 1:
                if x > 3074457345618258602:
                    bad = True
                    break
                x = (3 * x + 1) >> 1
            else:
                x >>= 1
            d += 1
            if x > pk:
                pk = x
            if d > max_steps:
                bad = True
                break
        if bad or sigma[x] < 0:
            sigma[n] = -2
            peak1[n] = -2
        else:
            sigma[n] = d + sigma[x]
            p = peak1[x]
            if pk > p:
                p = pk
            peak1[n] = p
    return sigma, peak1


@_njit(cache=True)
def verify_span(b0, b1, k, lo, hi, survivors, c_tab, s_tab, pow3, qmax, max_jumps):
    """Drive every surviving residue in blocks [b0, b1) down below lo or to 1.

    Block b covers [b * 2^k, (b+1) * 2^k); only starts inside [lo, hi]
    count.  Iteration advances k steps at a time through the table
    identity T^k(q * 2^k + r) = 3^c(r) * q + s(r).  Starts that exhaust
    max_jumps or would overflow int64 are returned for exact re-checking.
    """
    mask = (1 << k) - 1
    cap = (b1 - b0) * survivors.size
    if cap < 16:
        cap = 16
    unresolved = np.empty(cap, np.int64)
    u = 0
    checked = 0
    for b in range(b0, b1):
        base = b << k
        for i in range(survivors.size):
            n = base + survivors[i]
            if n < lo or n > hi:
                continue
            checked += 1
            x = n
            ok = False
            for _ in range(max_jumps):
                if x <= 2 or x < lo:
                    ok = True
                    break
                q = x >> k
                r = x & mask
                cc = c_tab[r]
                if q > qmax[cc]:
                    break
                x = pow3[cc] * q + s_tab[r]
            if not ok:
                unresolved[u] = n
                u += 1
    return checked, unresolved[:u].copy()


@_njit(cache=True)
def verify_dense(n0, n1, lo, max_steps):
    """Plain stepping over [n0, n1], where no class is skipped.

    Success means falling below lo (the whole run's floor, usually
    <= n0) or reaching the 1-2 loop.
    """
    cap = n1 - n0 + 1
    if cap < 16:
        cap = 16
    unresolved = np.empty(cap, np.int64)
    u = 0
    checked = 0
    for n in range(n0, n1 + 1):
        checked += 1
        x = n
        ok = False
        for _ in range(max_steps):
            if x <= 2 or x < lo:
                ok = True
                break
            if x & 1:
                if x > 3074457345618258602:
                    break
                x = (3 * x + 1) >> 1
            else:
                x >>= 1
        if not ok:
            unresolved[u] = n
            u += 1
    return checked, unresolved[:u].copy()


@_njit(cache=True)
def residue_survivor_count(survivors, base, lo, hi):
    """How many base+survivor starts fall inside [lo, hi]; resume bookkeeping."""
    count = 0
    for i in range(survivors.size):
        n = base + survivors[i]
        if lo <= n <= hi:
            count += 1
    return count


def py_func(fn):
    """The uncompiled source of a kernel, for backend comparisons."""
    return getattr(fn, "py_func", fn)
