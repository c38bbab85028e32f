"""Independent reference values.

``FROZEN`` holds numbers produced by :func:`generate` with mpmath at 50
digits, copied here so the tests do not depend on the generator. The
``test_oracles`` module re-runs the generator and checks the two agree.
Brute-force helpers used by several test modules live here too.
"""
from __future__ import annotations

import itertools

import numpy as np

FROZEN = {
    "ten_e": 27.182818284590454,
    "inv_e": 0.36787944117144233,
    "two_over_e": 0.7357588823428847,
    "four_e": 10.873127313836181,
    "four_over_e": 1.4715177646857693,
    "e_minus_2": 0.1353352832366127,
    "canonical_a_at_1": 2.0535651114765110,
    "canonical_c_first_zero": 1.8137993642342179,
    "w_inv_phi_at_0_1": 0.18488097080356140,
    "p_star_inv_phi": 0.34285943101969777,
    "p_star_phi": 0.70886412043036478,
    "p_star_061": 0.33878114431913281,
    "p_star_069": 0.37756448885132838,
}


def generate(dps: int = 50) -> dict:
    """Recompute every frozen value with arbitrary precision."""
    import mpmath as mp

    mp.mp.dps = dps
    e = mp.e
    phi = (1 + mp.sqrt(5)) / 2

    def w(g, p):
        return p**g / (p**g + (1 - p) ** g) ** (1 / g)

    def p_star(g):
        return mp.findroot(lambda p: w(g, p) - p, (mp.mpf("0.05"), mp.mpf("0.95")), solver="anderson")

    out = {
        "ten_e": 10 * e,
        "inv_e": 1 / e,
        "two_over_e": 2 / e,
        "four_e": 4 * e,
        "four_over_e": 4 / e,
        "e_minus_2": mp.exp(-2),
        "canonical_a_at_1": mp.exp(-phi) + mp.exp(1 / phi),
        "canonical_c_first_zero": mp.pi / mp.sqrt(3),
        "w_inv_phi_at_0_1": w(1 / phi, mp.mpf("0.1")),
        "p_star_inv_phi": p_star(1 / phi),
        "p_star_phi": p_star(phi),
        "p_star_061": p_star(mp.mpf("0.61")),
        "p_star_069": p_star(mp.mpf("0.69")),
    }
    return {k: float(v) for k, v in out.items()}


def random_bistochastic(rng: np.random.Generator, n: int, k: int | None = None):
    """Convex combination of ``k`` random permutations; returns (matrix, perms, weights)."""
    k = k if k is not None else int(rng.integers(1, n + 2))
    perms = [rng.permutation(n) for _ in range(k)]
    weights = rng.dirichlet(np.ones(k))
    M = np.zeros((n, n))
    for w, p in zip(weights, perms):
        M[np.arange(n), p] += w
    return M, perms, weights


def all_permutations(n: int):
    return itertools.permutations(range(n))


def grid_fixed_point(gamma: float, points: int = 1_000_000) -> float:
    """Interior sign change of ``w(p) - p`` located by a dense grid scan."""
    p = np.linspace(1e-6, 1 - 1e-6, points)
    a = p**gamma
    b = (1 - p) ** gamma
    f = a / (a + b) ** (1 / gamma) - p
    idx = np.flatnonzero(np.sign(f[:-1]) != np.sign(f[1:]))
    if idx.size != 1:
        raise AssertionError(f"expected one interior crossing, found {idx.size}")
    k = idx[0]
    # linear interpolation inside the bracketing cell
    return float(p[k] - f[k] * (p[k + 1] - p[k]) / (f[k + 1] - f[k]))


def central_difference(f, m, h: float = 1e-5, order: int = 1):
    if order == 1:
        return (f(m + h) - f(m - h)) / (2 * h)
    return (f(m + h) - 2 * f(m) + f(m - h)) / h**2
