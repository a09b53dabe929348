"""Independent reference values frozen into the C++ tests.

Uses numpy's Hermite-Gauss nodes and plain scalar arithmetic, sharing no
code with the library. Run: python3 tests/oracles/frozen_values.py
"""
import math

import numpy as np


def varphi(noise_variance, lam, length, sigma, nodes=200):
    x, w = np.polynomial.hermite_e.hermegauss(nodes)
    w = w / w.sum()
    s2 = sigma * sigma
    k = s2 * s2 + 2 * s2 * noise_variance + 3 * noise_variance ** 2
    xi = math.sqrt(noise_variance) * x
    return float(np.sum(w * k / (lam * (s2 + xi ** 2) ** 2 + k * (1 - lam) * length)))


def varphi_monte_carlo(noise_variance, lam, length, sigma, n=10_000_000, seed=7):
    rng = np.random.default_rng(seed)
    s2 = sigma * sigma
    k = s2 * s2 + 2 * s2 * noise_variance + 3 * noise_variance ** 2
    xi = math.sqrt(noise_variance) * rng.standard_normal(n)
    vals = k / (lam * (s2 + xi ** 2) ** 2 + k * (1 - lam) * length)
    return float(vals.mean()), float(vals.std() / math.sqrt(n))


def emse_db(noise_variance, lam, length, sigma):
    a = (1 - lam) * length * varphi(noise_variance, lam, length, sigma)
    return 10 * math.log10(noise_variance * a / (2 - a))


TABLE = [(25, 0.5, 14), (40, 1.8, 14), (20, 0.2, 14), (30, 0.45, 14), (10, 0.9, 20), (30, 0.6, 20)]

if __name__ == "__main__":
    print("# steady-state theory, unit clean power")
    for snr, sigma, length in TABLE:
        v = 10 ** (-snr / 10)
        print(f"snr={snr} sigma={sigma} L={length} varphi={varphi(v, .99, length, sigma):.12f} "
              f"emse_db={emse_db(v, .99, length, sigma):.10f}")
    v = 10 ** -2.5
    mc, se = varphi_monte_carlo(v, .99, 14, .5)
    print(f"MC varphi row1 = {mc:.8f} +- {se:.2e}")

    print("# single scalar step: L=1, zeta=0.01, lambda=0.99, sigma=1, x=1, d=1")
    p0, lam, sigma, x, d = 100.0, 0.99, 1.0, 1.0, 1.0
    e = d
    rho = sigma ** 2 / (sigma ** 2 + e * e) ** 2
    psi = rho * p0 * x / (lam + rho * x * p0 * x)
    h1 = psi * e
    p1 = (p0 - psi * x * p0) / lam
    print(f"rho={rho} psi={psi:.15g} h1={h1:.15g} p1={p1:.15g}")

    print("# estimator values")
    print(f"gm_score max at 1/sqrt3: {9 / (8 * math.sqrt(3)):.15g}")
    grid = np.linspace(0, 3, 3_000_001)
    sc = 2 * grid / (1 + grid ** 2) ** 2
    print(f"  grid argmax {grid[sc.argmax()]:.6f} (1/sqrt3 = {1 / math.sqrt(3):.6f})")
    print(f"gm_score(10, 1) = {20 / 101 ** 2:.15g}")
    print(f"gm_weight(10, 0.3) = {0.09 / (0.09 + 100) ** 2:.15g}")
    print(f"lp_weight(10, 1.2) = {10 ** -0.8:.15g}")
    print(f"lp_weight(0, 1.2, 1e-3) = {(1e-3) ** -0.8:.15g}")
    print(f"calibrate_snr(1, 25) = {10 ** -2.5:.15g}")
    print(f"calibrate_snr(2, 10log10 2) = {2 / 10 ** (10 * math.log10(2) / 10):.15g}")
