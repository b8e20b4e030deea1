"""Compiled hot loop: per-grid-point line summation. Private module.

The kernel is deliberately free of threading concerns: it fills a contiguous
slice [j0, j1) of the output arrays, each grid point summed independently
over its own line window in fixed ascending-position order with Neumaier
compensation. Callers may run any number of kernel invocations concurrently
on disjoint slices (the GIL is released); the values written never depend on
the partitioning, which is what makes thread-count determinism structural.

fastmath stays off: it would allow reassociation that defeats the
compensated accumulation.
"""

import math

from numba import njit


@njit(cache=True, nogil=True)
def sum_lines(
    omega,
    lo,
    hi,
    j0,
    j1,
    pos,
    pref_l,
    g2_l,
    pref_n,
    g2_n,
    active,
    r_core,
    r_neutral,
    r_wing,
    slope_core,
    slope_mid,
    ln_base,
    core_level,
    wing_level,
    out_l,
    out_n,
):
    for j in range(j0, j1):
        w = omega[j]
        s_l = 0.0
        c_l = 0.0
        s_n = 0.0
        c_n = 0.0
        for i in range(lo[j], hi[j]):
            d = w - pos[i]
            if d < 0.0:
                d = -d
            d2 = d * d

            v = pref_l[i] / (d2 + g2_l[i])
            t = s_l + v
            if abs(s_l) >= abs(v):
                c_l += (s_l - t) + v
            else:
                c_l += (v - t) + s_l
            s_l = t

            u = pref_n[i] / (d2 + g2_n[i])
            if active[i]:
                if d <= r_core[i]:
                    u *= core_level[i]
                elif d >= r_wing[i]:
                    u *= wing_level[i]
                elif d > r_neutral[i]:
                    u *= math.exp(slope_mid[i] * (d - r_neutral[i]) * ln_base[i])
                else:
                    u *= math.exp(slope_core[i] * (r_neutral[i] - d) * ln_base[i])
            t = s_n + u
            if abs(s_n) >= abs(u):
                c_n += (s_n - t) + u
            else:
                c_n += (u - t) + s_n
            s_n = t

        out_l[j] = s_l + c_l
        out_n[j] = s_n + c_n
