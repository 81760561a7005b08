from fractions import Fraction

import numpy as np
import pytest

from multiweb import cycle as cy
from multiweb.errors import InvalidArgument, NotFeasible
from multiweb.fibonacci import fibonacci, lucas
from multiweb.laplacian import build_laplacian, pseudo_inverse_on_image

ODD = list(range(3, 22, 2))


def test_reduced_polynomials():
    assert cy.reduced_poly_closed(3, 1, 1) == pytest.approx(4)
    assert cy.reduced_poly_closed(5, 1, 0) == pytest.approx(1)
    assert cy.reduced_poly_closed(5, 1, 1) == pytest.approx(11)
    assert cy.line_poly_recurrence(0, 7, 3) == 1
    assert cy.line_poly_recurrence(1, 7, 3) == 7
    assert cy.line_poly_recurrence(4, 1, 1) == 5
    assert cy.line_poly_closed(4, 1, 1) == pytest.approx(5)


def test_recurrence_matches_closed_form(rng):
    for L in range(3, 31):
        x0, x1 = rng.uniform(0.1, 1.0, 2)
        assert cy.reduced_poly_recurrence(L, x0, x1) == pytest.approx(cy.reduced_poly_closed(L, x0, x1),
                                                                       rel=1e-12)
        assert cy.line_poly_recurrence(L, x0, x1) == pytest.approx(cy.line_poly_closed(L, x0, x1), rel=1e-12)


@pytest.mark.parametrize("L", [3, 5, 7, 9, 11])
def test_reduced_polynomial_against_enumeration(cycle_tiles, L):
    from multiweb.polynomial import tiling_polynomial
    tiles, _ = cycle_tiles(L)
    reduced = tiling_polynomial(tiles).reduce([[0], list(range(1, L + 1))])
    x0, x1 = 0.7, 0.4
    assert reduced.evaluate([x0, x1]) == pytest.approx(cy.reduced_poly_closed(L, x0, x1), rel=1e-12)
    assert sorted(c for (_, e1), c in reduced.terms.items()) == sorted(cy.size_counts(L))


def test_alpha_hat_values():
    assert cy.alpha_hat(3) == Fraction(1, 2)
    assert cy.alpha_hat(5) == Fraction(6, 11)
    assert cy.alpha_hat(9) == Fraction(21, 38)
    with pytest.raises(InvalidArgument):
        cy.alpha_hat(4)


@pytest.mark.parametrize("L", ODD[:7])
def test_laplacian_closed_form_matches_enumeration(cycle_tiles, L):
    _, D = cycle_tiles(L)
    np.testing.assert_array_equal(cy.laplacian_closed(L), build_laplacian(D, np.ones(D.shape[1])))


def test_circulant_entries_examples():
    assert cy.circulant_entries(3) == [2, 1, 1]
    assert cy.circulant_entries(5) == [6, 4, 3, 3, 4]
    for L in ODD:
        c = cy.circulant_entries(L)
        assert all(c[k] == c[L - k] for k in range(1, L))
        assert cy.lambda_0(L) == cy.lambda_0_alternative(L)


def test_eigenvalues():
    np.testing.assert_allclose(cy.circulant_eigenvalues(3).real, [4, 1, 1], atol=1e-12)
    lam = cy.circulant_eigenvalues(5)
    assert lam[1].real == pytest.approx(3.618034, abs=1e-6)
    assert cy.eigenvalue_closed_form(5, 1) == pytest.approx(lam[1], rel=1e-12)
    # the closed form holds for k >= 1 only
    assert lam[0].real == pytest.approx(20)
    assert cy.eigenvalue_closed_form(5, 0) == pytest.approx(4)
    assert cy.eigenvalue_closed_form(3, 0) == pytest.approx(8 / 5)


def test_root_of_unity_sums():
    assert [cy.root_of_unity_sum(3, l) for l in range(3)] == [Fraction(-3, 4), Fraction(9, 4), Fraction(-3, 4)]
    for L in ODD:
        for l in range(-L, 2 * L):
            assert cy.root_of_unity_sum_direct(L, l) == pytest.approx(float(cy.root_of_unity_sum(L, l)),
                                                                      abs=1e-9)


def test_g_L_values():
    assert cy.g_L(3, 0) == 2
    assert cy.g_L(3, 1) == -1
    assert cy.g_L(5, 0) == 2
    for L in ODD:
        for l in range(L):
            assert cy.g_L_direct(L, l) == pytest.approx(float(cy.g_L(L, l)), abs=1e-9)
            assert cy.g_L_expanded(L, l) == cy.g_L(L, l)


def test_inverse_entries_cycle3():
    e = cy.inverse_laplacian_entries(3)
    assert e["corner"] == Fraction(1, 9)
    assert e["border"] == Fraction(-1, 18)
    assert e["row"][:2] == [Fraction(7, 9), Fraction(-2, 9)]


@pytest.mark.parametrize("L", [3, 5, 7, 9, 11, 13])
def test_inverse_is_exact(L):
    e = cy.inverse_laplacian_entries(L)
    inv = [[e["corner"]] + [e["border"]] * L]
    inv += [[e["border"]] + [e["row"][(i - j) % L] for j in range(L)] for i in range(L)]
    delta = cy.laplacian_closed(L).astype(int).tolist()
    product = [[sum(Fraction(delta[i][k]) * inv[k][j] for k in range(L + 1)) for j in range(L + 1)]
               for i in range(L + 1)]
    assert product == [[int(i == j) for j in range(L + 1)] for i in range(L + 1)]


def test_inverse_matches_pseudo_inverse():
    for L in (5, 17):
        delta = cy.laplacian_closed(L)
        inv = cy.inverse_laplacian_closed(L)
        assert np.abs(delta @ inv - np.eye(L + 1)).max() <= 1e-10
        assert np.abs(inv - pseudo_inverse_on_image(delta)).max() <= 1e-9
        idx = (np.arange(L)[:, None] - np.arange(L)[None, :]) % L
        np.testing.assert_array_equal(inv[1:, 1:], inv[1, 1:][idx])


def test_scaled_inverse():
    L = 11
    a = cy.inverse_laplacian_closed(L, scale=lucas(L))
    b = pseudo_inverse_on_image(cy.laplacian_closed(L) / lucas(L))
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_tile_probability_curves():
    rows = cy.tile_probability_curves(11, [float(cy.alpha_hat(11))])
    assert len(rows) == 6
    for r in rows:
        assert r["probability"] == pytest.approx(1 / 199, abs=1e-12)
    low = cy.tile_probability_curves(3, [1e-4])
    assert low[0]["probability"] == pytest.approx(1, abs=1e-3)
    grid = np.linspace(0.01, 0.66, 50)
    sols = [cy.reduced_critical_solution(3, a) for a in grid]
    x0 = [s[0] for s in sols]
    x1 = [s[1] for s in sols]
    assert all(np.diff(x0) < 0) and all(np.diff(x1) > 0)
    total = {}
    for r in cy.tile_probability_curves(7, [0.3]):
        total[r["alpha"]] = total.get(r["alpha"], 0) + r["probability"] * cy.size_counts(7)[r["size"]]
    assert total[0.3] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NotFeasible):
        cy.reduced_critical_solution(3, 0.7)


def test_reduced_solution_matches_full_solver(cycle_tiles):
    from multiweb.gauge import solve_critical_gauge
    tiles, _ = cycle_tiles(7)
    x0, x1, sigma = cy.reduced_critical_solution(7, 0.4)
    g = solve_critical_gauge(tiles, None, [0.4] * 7)
    assert g.x[0] == pytest.approx(x0, rel=1e-10)
    np.testing.assert_allclose(g.x[1:], x1, rtol=1e-10)
    assert g.sigma == pytest.approx(sigma, abs=1e-12)


def test_size_counts_sum_to_lucas():
    for L in ODD:
        assert sum(cy.size_counts(L)) == lucas(L)
        assert cy.alpha_hat(L) == 1 - Fraction(fibonacci(L), lucas(L))
