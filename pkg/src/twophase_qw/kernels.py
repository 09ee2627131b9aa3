"""Hot evolution kernels: numba-compiled loop with a pure-numpy fallback.

Backend selection happens once at import time via the ``QW_BACKEND``
environment variable:

    QW_BACKEND=numba   require numba (ImportError if missing)
    QW_BACKEND=numpy   force the vectorized numpy path
    unset / auto       numba if importable, else numpy

Both implementations advance the same recurrence

    L_t(x) = a(x+1) L_{t-1}(x+1) + b(x+1) R_{t-1}(x+1)
    R_t(x) = c(x-1) L_{t-1}(x-1) + d(x-1) R_{t-1}(x-1)

in place on flat complex arrays, growing the support by one slot per
side per step.  Callers must leave a margin of at least two zero slots
beyond the final support on each side.  The return value is the largest
deviation of the post-step norm from 1.0 seen during the call; when
``accumulate`` is set, the pre-step probability |L|^2 + |R|^2 of every
visited time slice (including the entry state) is added into ``acc``.

``benchmarks/bench_evolution.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np


def evolve_accumulate_numpy(L, R, a, b, c, d, lo, hi, n_steps, acc, accumulate):
    # Vectorized shifted-slice update; new support is [lo-1, hi+1].
    maxdev = 0.0
    for _ in range(n_steps):
        if accumulate:
            s = slice(lo, hi + 1)
            acc[s] += L[s].real ** 2 + L[s].imag ** 2 + R[s].real ** 2 + R[s].imag ** 2
        nlo = lo - 1
        nhi = hi + 1
        new_l = a[nlo + 1 : nhi + 2] * L[nlo + 1 : nhi + 2] + b[nlo + 1 : nhi + 2] * R[nlo + 1 : nhi + 2]
        new_r = c[nlo - 1 : nhi] * L[nlo - 1 : nhi] + d[nlo - 1 : nhi] * R[nlo - 1 : nhi]
        L[nlo : nhi + 1] = new_l
        R[nlo : nhi + 1] = new_r
        nrm = float(np.sum(new_l.real ** 2 + new_l.imag ** 2 + new_r.real ** 2 + new_r.imag ** 2))
        dev = abs(nrm - 1.0)
        if dev > maxdev:
            maxdev = dev
        lo, hi = nlo, nhi
    return maxdev


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def evolve_accumulate_numba(L, R, a, b, c, d, lo, hi, n_steps, acc, accumulate):
        maxdev = 0.0
        for _ in range(n_steps):
            if accumulate:
                for i in range(lo, hi + 1):
                    acc[i] += (
                        L[i].real * L[i].real
                        + L[i].imag * L[i].imag
                        + R[i].real * R[i].real
                        + R[i].imag * R[i].imag
                    )
            # Single ascending sweep; carry the not-yet-overwritten
            # old values at i-1 in scalars.
            prev_l = L[lo - 2]
            prev_r = R[lo - 2]
            nrm = 0.0
            for i in range(lo - 1, hi + 2):
                cur_l = L[i]
                cur_r = R[i]
                new_l = a[i + 1] * L[i + 1] + b[i + 1] * R[i + 1]
                new_r = c[i - 1] * prev_l + d[i - 1] * prev_r
                L[i] = new_l
                R[i] = new_r
                prev_l = cur_l
                prev_r = cur_r
                nrm += (
                    new_l.real * new_l.real
                    + new_l.imag * new_l.imag
                    + new_r.real * new_r.real
                    + new_r.imag * new_r.imag
                )
            dev = abs(nrm - 1.0)
            if dev > maxdev:
                maxdev = dev
            lo -= 1
            hi += 1
        return maxdev

    return evolve_accumulate_numba


_requested = os.environ.get("QW_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy", ""):
    raise ValueError(f"QW_BACKEND must be 'numba', 'numpy' or 'auto', got {_requested!r}")

evolve_accumulate_numba = None
if _requested in ("auto", "numba", ""):
    try:
        evolve_accumulate_numba = _make_numba_kernel()
    except ImportError:
        if _requested == "numba":
            raise

if evolve_accumulate_numba is not None:
    BACKEND = "numba"
    evolve_accumulate = evolve_accumulate_numba
else:
    BACKEND = "numpy"
    evolve_accumulate = evolve_accumulate_numpy
