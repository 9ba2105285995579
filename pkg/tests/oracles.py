"""Independent reference computations used to check the library.

Nothing here calls into ``dirpl.mpm`` or ``dirpl.plcorr``; the Monte-Carlo
oracle samples scatterers directly on the ellipse via its eccentric anomaly.
"""

import math

import numpy as np

from dirpl.tr38901 import pdp_split_tau0

C = 299_792_458.0


def bisect(f, lo, hi, tol=1e-15):
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def uma_los_by_hand(fc_ghz, d2d, h_bs=25.0, h_ut=1.5):
    d3d = math.sqrt(d2d**2 + (h_bs - h_ut) ** 2)
    d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc_ghz * 1e9 / 3.0e8
    if d2d <= d_bp:
        return 28.0 + 22.0 * math.log10(d3d) + 20.0 * math.log10(fc_ghz)
    return 28.0 + 40.0 * math.log10(d3d) + 20.0 * math.log10(fc_ghz) - 9.0 * math.log10(d_bp**2 + (h_bs - h_ut) ** 2)


def uma_nlos_by_hand(fc_ghz, d2d, h_bs=25.0, h_ut=1.5):
    d3d = math.sqrt(d2d**2 + (h_bs - h_ut) ** 2)
    nlos = 13.54 + 39.08 * math.log10(d3d) + 20.0 * math.log10(fc_ghz) - 0.6 * (h_ut - 1.5)
    return max(nlos, uma_los_by_hand(fc_ghz, d2d, h_bs, h_ut))


def sample_ellipse_arc(tau, d, n, rng):
    """``n`` points uniform in arc length on the ellipse with foci (0,0), (d,0)."""
    a = 0.5 * (C * tau + d)
    b = math.sqrt(a * a - 0.25 * d * d)
    xs, ys = [], []
    have = 0
    while have < n:
        m = int((n - have) * 1.6) + 1000
        t = rng.uniform(0.0, 2.0 * math.pi, m)
        speed = np.sqrt((a * np.sin(t)) ** 2 + (b * np.cos(t)) ** 2)
        keep = rng.uniform(0.0, a, m) < speed
        t = t[keep][: n - have]
        xs.append(0.5 * d + a * np.cos(t))
        ys.append(b * np.sin(t))
        have += len(t)
    return np.concatenate(xs), np.concatenate(ys)


def mc_cluster_fraction(tau, d, tx, rx, alpha_t, alpha_r, n, rng):
    """Mean Tx*Rx pattern weight over arc-length-uniform scatterers."""
    x, y = sample_ellipse_arc(tau, d, n, rng)
    phi_r = np.degrees(np.arctan2(y, x))
    phi_t = np.degrees(np.arctan2(y, x - d))
    return float(np.mean(tx(phi_t - alpha_t) * rx(phi_r - alpha_r)))


def mc_correction_db(pdp, d, gamma, tx, rx, alpha_t, alpha_r, n=1_000_000, seed=0):
    rng = np.random.default_rng(seed)
    direct, local, delayed = pdp_split_tau0(pdp)
    p_in = direct + local + sum(t.power for t in delayed)
    p_out = direct * float(tx(180.0 - alpha_t)) * float(rx(0.0 - alpha_r))
    if local > 0:
        phi = np.degrees(rng.vonmises(0.0, gamma, n)) if gamma > 0 else rng.uniform(-180, 180, n)
        p_out += local * float(tx(180.0 - alpha_t)) * float(np.mean(rx(phi - alpha_r)))
    for tap in delayed:
        p_out += tap.power * mc_cluster_fraction(tap.delay, d, tx, rx, alpha_t, alpha_r, n, rng)
    return 10.0 * math.log10(p_in / p_out)
