"""Cross-oracle invariant suite behind ``multiweb verify``.

Each check returns ``(passed, detail)``; ``run_checks`` collects them.
Quick mode shrinks the parameter ranges but keeps every check.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from . import cycle as cy
from .fibonacci import fibonacci, lucas
from .gauge import solve_critical_gauge
from .graph import make_cycle, make_path
from .laplacian import gaussian_law, pseudo_inverse_on_image
from .polynomial import partition_function_exact
from .sampler import (ChainConfig, empirical_assignment_law, enumerate_multiwebs, heat_bath_sample,
                      total_variation)
from .tiles import enumerate_tiles, incidence_matrix
from .window import enumerate_local_configs, local_law, local_law_from_tiles, local_limits

CHECKS = []


def check(name, quick=True):
    def register(fn):
        CHECKS.append((name, fn, quick))
        return fn
    return register


def _odd(upper):
    return range(3, upper + 1, 2)


@check("tile counts match Lucas and Fibonacci recurrences")
def _counts(quick):
    top = 13 if quick else 17
    for L in _odd(top):
        got = len(enumerate_tiles(make_cycle(L)))
        if got != lucas(L):
            return False, f"cycle({L}): {got} != {lucas(L)}"
    for n in range(0, 15 if quick else 21):
        got = len(enumerate_tiles(make_path(n)))
        if got != fibonacci(n + 1):
            return False, f"path({n}): {got} != F_{n + 1}"
    return True, f"odd L <= {top}"


@check("critical density: three expressions agree")
def _alpha_hat(quick):
    for L in _odd(13):
        tiles = enumerate_tiles(make_cycle(L))
        by_enum = Fraction(2 * sum(t.size for t in tiles), L * len(tiles))
        values = {cy.alpha_hat(L), cy.alpha_hat_from_sizes(L), cy.alpha_hat_from_paths(L), by_enum}
        if len(values) != 1:
            return False, f"L={L}: {values}"
    return True, "odd L <= 13"


@check("gauge solver at the critical density is uniform; sigma = log Lucas_L")
def _gauge(quick):
    worst = 0.0
    for L in _odd(9 if quick else 13):
        tiles = enumerate_tiles(make_cycle(L))
        T = len(tiles)
        a = float(cy.alpha_hat(L))
        g = solve_critical_gauge(tiles, None, [a] * L)
        worst = max(worst, np.abs(g.x - T ** (-1 / L)).max(), np.abs(g.critical_weights - 1 / T).max(),
                    abs(g.sigma - math.log(lucas(L))) * 10)
    return worst <= 1e-9, f"max deviation {worst:.2e}"


@check("closed-form inverse Laplacian")
def _inverse(quick):
    worst = 0.0
    for L in _odd(11 if quick else 17):
        D = incidence_matrix(enumerate_tiles(make_cycle(L))).astype(float)
        delta = D @ D.T
        inv = cy.inverse_laplacian_closed(L)
        worst = max(worst, np.abs(delta @ inv - np.eye(L + 1)).max(),
                    np.abs(inv - pseudo_inverse_on_image(delta)).max())
    return worst <= 1e-9, f"max error {worst:.2e}"


@check("eigenvalue closed form vs DFT (k >= 1); k = 0 discrepancy reported")
def _eigen(quick):
    worst = 0.0
    notes = []
    for L in _odd(21):
        audit = cy.eigenvalue_audit(L)
        worst = max(worst, audit["max_rel_error_k_ge_1"])
        if L in (3, 5):
            notes.append(f"L={L}: lambda_0 DFT={audit['lambda0_dft']:g}, "
                         f"closed form at k=0={audit['lambda0_closed_form']}")
    return worst <= 1e-9, f"max rel error {worst:.2e}; " + "; ".join(notes)


@check("g_L: eigenvalue sum, a_l expansion and closed form agree")
def _gl(quick):
    worst = 0.0
    for L in _odd(21):
        for l in range(L):
            closed = cy.g_L(L, l)
            if closed != cy.g_L_expanded(L, l):
                return False, f"L={L}, l={l}: expansion differs"
            worst = max(worst, abs(cy.g_L_direct(L, l) - float(closed)))
            worst = max(worst, abs(cy.root_of_unity_sum_direct(L, l) - float(cy.root_of_unity_sum(L, l))))
    return worst <= 1e-9, f"max error {worst:.2e}"


@check("partition function matches exhaustive enumeration")
def _zexact(quick):
    tiles = enumerate_tiles(make_cycle(5))
    rng = np.random.default_rng(7)
    w = [Fraction(int(k), 3) for k in rng.integers(1, 7, len(tiles))]
    for n, N in [((1, 1, 1, 1, 1), 3), ((2, 1, 2, 1, 2), 3), ((1, 2, 1, 1, 1), 2)]:
        a = partition_function_exact(tiles, w, n, N, exact=True)
        b = enumerate_multiwebs(tiles, w, n, N, exact=True).Z
        if a != b:
            return False, f"n={n}, N={N}: {a} != {b}"
    return True, "cycle(5), rational weights"


@check("Gaussian covariance structure for cycle(9)")
def _gauss(quick):
    D = incidence_matrix(enumerate_tiles(make_cycle(9)))
    N = 100.0
    law = gaussian_law(D, np.full(D.shape[1], 1 / D.shape[1]), N)
    err = max(np.abs(D @ law.covariance).max(), np.abs(law.covariance.sum(axis=1)).max())
    return err <= 1e-9 * N, f"max |D Cov|, |Cov 1| = {err:.2e}"


@check("local window: 21 configurations, class sizes, limits at L = 501")
def _window(quick):
    configs = enumerate_local_configs()
    if len(configs) != 21:
        return False, f"{len(configs)} configurations"
    for L in range(11, 102, 2):
        if sum(fibonacci(L - c.epsilon - 4) for c in configs) != lucas(L):
            return False, f"partition identity fails at L={L}"
    a, b = local_law(11), local_law_from_tiles(11)
    if np.abs(a.covariance - b.covariance).max() > 1e-9:
        return False, "closed-form Cov(S) differs from B Cov(X) B^T at L=11"
    law = local_law(501)
    worst = 0.0
    for j, c in enumerate(configs):
        m, v = local_limits(c.epsilon, c.f)
        worst = max(worst, abs(law.mean[j] - m), abs(law.covariance[j, j] - v))
    return worst <= 1e-3, f"max deviation from limits at L=501: {worst:.2e}"


@check("heat-bath chain reproduces the exact law on cycle(3)", quick=False)
def _sampler(quick):
    tiles = enumerate_tiles(make_cycle(3))
    exact = enumerate_multiwebs(tiles, None, (2, 2, 2), 4).assignment_law()
    run = heat_bath_sample(tiles, None, (2, 2, 2), 4, ChainConfig(seed=11, sweeps=200_100, burn_in=100),
                           keep_states=True)[0]
    tv = total_variation(empirical_assignment_law(run), exact)
    return tv <= 0.01, f"total variation {tv:.4f} over {len(run.counts)} samples"


def run_checks(quick: bool = False) -> list[dict]:
    results = []
    for name, fn, in_quick in CHECKS:
        if quick and not in_quick:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn(quick)
        except Exception as exc:  # report, do not abort the suite
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"check": name, "passed": bool(passed), "detail": detail,
                        "seconds": round(time.perf_counter() - t0, 3)})
    return results
