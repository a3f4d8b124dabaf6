"""Pure NumPy LLF kernels; used when the compiled extension is unavailable.

Both backends expose the same two functions with identical signatures:

``max_speed(rho, m, I, a, rho_bar, floor)``
    largest |lambda_a|, |lambda_0| over the non-vacuum cells.
``llf_update(rho, m, I, a, rho_bar, floor, ratio, periodic)``
    one Lax-Friedrichs step, ``ratio = dt / dx``; returns new arrays.
``renormalize(rho, m, tol, min_run, dry)``
    replace near-constant runs by their mean, skipping runs that reach
    down to ``dry``; returns new arrays.
"""
import numpy as np


def _prims(rho, m, I, a, rho_bar, floor):
    wet = rho > floor
    safe = np.where(wet, rho, rho_bar)
    u = np.where(wet, m / safe, 0.0)
    phi = np.exp(a * np.log(safe / rho_bar))
    return wet, safe, u, phi


def max_speed(rho, m, I, a, rho_bar, floor):
    wet, safe, u, phi = _prims(rho, m, I, a, rho_bar, floor)
    v = u + I
    lam_a = np.abs(v * (1.0 - (a + 1.0) * phi))
    lam_0 = np.abs(v * (1.0 - phi))
    speeds = np.where(wet, np.maximum(lam_a, lam_0), 0.0)
    return float(speeds.max()) if speeds.size else 0.0


def fluxes(rho, m, I, a, rho_bar, floor):
    wet, safe, u, phi = _prims(rho, m, I, a, rho_bar, floor)
    f1 = np.where(wet, safe * (u + I) * (1.0 - phi), 0.0)
    return f1, u * f1


def llf_update(rho, m, I, a, rho_bar, floor, ratio, periodic):
    n = rho.size
    r = np.empty(n + 2)
    q = np.empty(n + 2)
    r[1:-1] = rho
    q[1:-1] = m
    if periodic:
        r[0], r[-1] = rho[-1], rho[0]
        q[0], q[-1] = m[-1], m[0]
    else:
        r[0], r[-1] = rho[0], rho[-1]
        q[0], q[-1] = m[0], m[-1]
    g1, g2 = fluxes(r, q, I, a, rho_bar, floor)
    half = 0.5 * ratio
    new_rho = 0.5 * (r[:-2] + r[2:]) - half * (g1[2:] - g1[:-2])
    new_m = 0.5 * (q[:-2] + q[2:]) - half * (g2[2:] - g2[:-2])
    dry = new_rho <= floor
    if dry.any():
        new_rho = np.where(new_rho < 0.0, 0.0, new_rho)
        new_m = np.where(dry, 0.0, new_m)
    return new_rho, new_m


def renormalize(rho, m, tol, min_run, dry=0.0):
    rho = rho.copy()
    m = m.copy()
    d_rho = np.abs(np.diff(rho))
    d_m = np.abs(np.diff(m))
    n = rho.size
    i = 0
    while i < n - 1:
        tv_r = tv_m = 0.0
        j = i
        while j < n - 1:
            nr, nm = tv_r + d_rho[j], tv_m + d_m[j]
            if nr >= tol or nm >= tol:
                break
            tv_r, tv_m = nr, nm
            j += 1
        if j - i + 1 >= min_run and rho[i:j + 1].min() >= dry:
            # an exactly flat component is left alone: its mean can be off by an ulp
            if tv_r > 0:
                rho[i:j + 1] = rho[i:j + 1].mean()
            if tv_m > 0:
                m[i:j + 1] = m[i:j + 1].mean()
        i = j + 1
    return rho, m
