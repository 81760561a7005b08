"""Closed forms for the odd cycle with unit tile weights and constant density.

Rational quantities are returned as ``fractions.Fraction`` and built from
integer Fibonacci/Lucas recurrences.  The Laplacian here is the integer
matrix D D^T (unit weights); the 1/|T| factor of the critical weights is
applied by callers.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, NotFeasible
from .fibonacci import fibonacci as F
from .fibonacci import lucas


def _require_odd(L: int, minimum: int = 3) -> int:
    if int(L) != L or L < minimum or L % 2 == 0:
        raise InvalidArgument(f"cycle length must be odd and >= {minimum}, got {L!r}")
    return int(L)


# reduced tiling polynomials

def reduced_poly_closed(L: int, x0: float, x1: float) -> float:
    """P_0^L(x0, x1), the cycle tiling polynomial with x_1 = ... = x_L."""
    r = math.sqrt(x0 * x0 + 4 * x1 * x1)
    return ((x0 - r) ** L + (x0 + r) ** L) / 2.0**L


def line_poly_closed(L: int, x0: float, x1: float) -> float:
    """Q_0^L(x0, x1) for the path with L vertices."""
    if L < 0:
        raise InvalidArgument("path length must be nonnegative")
    r = math.sqrt(x0 * x0 + 4 * x1 * x1)
    return ((x0 + r) ** (L + 1) - (x0 - r) ** (L + 1)) / (2.0 ** (L + 1) * r)


def line_poly_recurrence(L: int, x0, x1):
    """Q_0^L by Q^L = x0 Q^{L-1} + x1^2 Q^{L-2}; exact for integer/Fraction inputs."""
    if L < 0:
        raise InvalidArgument("path length must be nonnegative")
    prev, cur = 1, x0
    if L == 0:
        return prev
    for _ in range(L - 1):
        prev, cur = cur, x0 * cur + x1 * x1 * prev
    return cur


def reduced_poly_recurrence(L: int, x0, x1):
    """P_0^L = Q_0^L + x1^2 Q_0^{L-2} for L >= 3."""
    if L < 3:
        raise InvalidArgument("recurrence form needs L >= 3")
    return line_poly_recurrence(L, x0, x1) + x1 * x1 * line_poly_recurrence(L - 2, x0, x1)


def size_counts(L: int) -> list[int]:
    """Number of L-cycle tiles with s edges, s = 0..floor(L/2).

    A cycle matching with s edges: L/(L-s) * C(L-s, s).
    """
    return [L * math.comb(L - s, s) // (L - s) for s in range(L // 2 + 1)]


# critical density

def alpha_hat(L: int) -> Fraction:
    _require_odd(L)
    return 1 - Fraction(F(L), lucas(L))


def alpha_hat_from_sizes(L: int) -> Fraction:
    """(2 / (L |T|)) * sum_t s(t), from tile-size counts."""
    _require_odd(L)
    counts = size_counts(L)
    return Fraction(2 * sum(s * c for s, c in enumerate(counts)), L * sum(counts))


def alpha_hat_from_paths(L: int) -> Fraction:
    """1 - W_{L-1} / Y_L with W, Y the path and cycle matching counts."""
    _require_odd(L)
    W = line_poly_recurrence(L - 1, 1, 1)
    Y = reduced_poly_recurrence(L, 1, 1)
    return 1 - Fraction(W, Y)


# Laplacian entries

def delta_00(L: int) -> Fraction:
    _require_odd(L)
    FL = F(L)
    return Fraction(L, 5) * (4 * FL + Fraction(L * F(2 * L), FL))


def delta_0v(L: int) -> Fraction:
    _require_odd(L)
    FL = F(L)
    return -Fraction(1, 5) * ((4 - 5 * L) * FL + Fraction(L * F(2 * L), FL))


def circulant_entries(L: int) -> list[int]:
    """c_0..c_{L-1}: number of tiles covering two vertices at cyclic distance k."""
    _require_odd(L)
    c = [2 * F(L - 1)]
    for k in range(1, L):
        c.append(F(k) * F(L - k - 2) + 2 * F(k - 1) * F(L - k - 1) + F(k - 2) * F(L - k))
    return c


def lambda_0(L: int) -> int:
    """Row sum of the circulant block, the k = 0 eigenvalue."""
    return sum(circulant_entries(L))


def lambda_0_alternative(L: int) -> Fraction:
    """L (Lucas_L - F_L) - Delta_0v; must agree with ``lambda_0``."""
    return L * (lucas(L) - F(L)) - delta_0v(L)


def laplacian_closed(L: int) -> np.ndarray:
    """Integer D D^T for the L-cycle assembled from the closed-form entries."""
    c = circulant_entries(L)
    d00, d0v = delta_00(L), delta_0v(L)
    assert d00.denominator == 1 and d0v.denominator == 1
    out = np.zeros((L + 1, L + 1))
    out[0, 0] = int(d00)
    out[0, 1:] = out[1:, 0] = int(d0v)
    idx = (np.arange(L)[:, None] - np.arange(L)[None, :]) % L
    out[1:, 1:] = np.array(c, dtype=float)[np.minimum(idx, L - idx)]
    return out


# spectrum

def circulant_eigenvalues(L: int) -> np.ndarray:
    """lambda_k = sum_j c_j omega^{kj} for k = 0..L-1 (DFT definition)."""
    c = np.array(circulant_entries(L), dtype=float)
    omega = np.exp(2j * np.pi * np.arange(L) / L)
    k = np.arange(L)
    return np.array([np.sum(c * omega[(kk * k) % L]) for kk in k])


def eigenvalue_closed_form(L: int, k: int) -> complex:
    """F_L (1 + w)^2 / (1 + 3w + w^2) with w = omega^k."""
    _require_odd(L)
    w = cmath.exp(2j * math.pi * k / L)
    return F(L) * (1 + w) ** 2 / (1 + 3 * w + w * w)


def eigenvalue_audit(L: int) -> dict:
    """DFT eigenvalues against the closed form; the k = 0 values differ."""
    dft = circulant_eigenvalues(L)
    closed = np.array([eigenvalue_closed_form(L, k) for k in range(L)])
    rel = np.abs(dft[1:] - closed[1:]) / np.abs(dft[1:])
    return {
        "L": L,
        "max_rel_error_k_ge_1": float(rel.max()) if rel.size else 0.0,
        "lambda0_dft": float(dft[0].real),
        "lambda0_row_sum": lambda_0(L),
        "lambda0_closed_form": Fraction(4 * F(L), 5),
    }


def root_of_unity_sum(L: int, l: int) -> Fraction:
    """sum over z^L = 1 of z^l / (z + 1)^2, L-periodic in l."""
    _require_odd(L, minimum=1)
    l %= L
    if l == 0:
        return Fraction(-L * (L - 2), 4)
    return Fraction((-1) ** (l + 1) * L * (L - 2 * l + 2), 4)


def root_of_unity_sum_direct(L: int, l: int) -> complex:
    return sum(cmath.exp(2j * math.pi * k * l / L) / (cmath.exp(2j * math.pi * k / L) + 1) ** 2
               for k in range(L))


def g_L(L: int, l: int) -> Fraction:
    """sum_{k=1}^{L-1} omega^{kl} / lambda_k in closed form."""
    _require_odd(L)
    l %= L
    FL = F(L)
    if l == 0:
        return Fraction(L * (L + 4) - 5, 4 * FL)
    return Fraction((-1) ** l * L * (L - 2 * l) - 5, 4 * FL)


def g_L_direct(L: int, l: int) -> complex:
    lam = circulant_eigenvalues(L)
    return sum(cmath.exp(2j * math.pi * k * l / L) / lam[k] for k in range(1, L))


def g_L_expanded(L: int, l: int) -> Fraction:
    """(1/F_L)(-5/4 + a_l + 3 a_{l+1} + a_{l+2})."""
    a = root_of_unity_sum
    return (Fraction(-5, 4) + a(L, l) + 3 * a(L, l + 1) + a(L, l + 2)) / F(L)


# inverse Laplacian

def inverse_laplacian_entries(L: int) -> dict:
    """Exact block entries of (D D^T)^{-1}, keyed corner / border / row (the circulant row A[0, j])."""
    _require_odd(L)
    d00, d0v, lam0 = delta_00(L), delta_0v(L), lambda_0(L)
    det = lam0 * d00 - L * d0v * d0v
    row = [(d00 / det + g_L(L, j)) / L for j in range(L)]
    return {"corner": lam0 / det, "border": -d0v / det, "row": row}


def inverse_laplacian_closed(L: int, scale=1) -> np.ndarray:
    """(L+1) x (L+1) inverse of D D^T, rows/columns ordered v_0, v_1..v_L.

    Entries are multiplied by the exact ``scale`` before rounding to float,
    e.g. ``scale=lucas(L)`` gives the inverse of D D^T / |T|.
    """
    e = inverse_laplacian_entries(L)
    out = np.empty((L + 1, L + 1))
    out[0, 0] = float(e["corner"] * scale)
    out[0, 1:] = out[1:, 0] = float(e["border"] * scale)
    row = np.array([float(x * scale) for x in e["row"]])
    idx = (np.arange(L)[:, None] - np.arange(L)[None, :]) % L
    out[1:, 1:] = row[idx]
    return out


# critical tile probabilities as a function of the density

def reduced_incidence(L: int):
    """Two-variable incidence (rows x_0, x_1) over tile sizes, and size multiplicities."""
    sizes = np.arange(L // 2 + 1)
    D = np.vstack([L - 2 * sizes, 2 * sizes]).astype(float)
    return D, np.array(size_counts(L), dtype=float)


def reduced_critical_solution(L: int, alpha: float, tol: float = 1e-12):
    """(x_0, x_1, sigma) solving the reduced criticality system with P_0 = 1."""
    from .gauge import solve_critical_gauge

    _require_odd(L)
    if not (0 < alpha < (L - 1) / L):
        raise NotFeasible(f"alpha={alpha} outside (0, {(L - 1) / L})")
    D, counts = reduced_incidence(L)
    gauge = solve_critical_gauge(D, counts, [L * alpha], tol=tol, check=False)
    x0, x1 = gauge.x
    return float(x0), float(x1), gauge.sigma


def tile_probability_curves(L: int, alpha_grid, tol: float = 1e-12) -> list[dict]:
    """Rows (alpha, size, probability, x0, x1): the critical weight of one tile of each size."""
    rows = []
    for alpha in alpha_grid:
        x0, x1, _ = reduced_critical_solution(L, float(alpha), tol=tol)
        for s in range(L // 2 + 1):
            rows.append({"alpha": float(alpha), "size": s,
                         "probability": x0 ** (L - 2 * s) * x1 ** (2 * s), "x0": x0, "x1": x1})
    return rows
