"""Critical gauge and the growth rate sigma.

The criticality equations x_v dP/dx_v / P = alpha_v are the stationarity
conditions of the convex function

    F(y) = log P(e^y) - sum_v alpha_v y_v,

so they are solved by damped Newton in log coordinates ``y = log x``.  All
vectors here are indexed v_0, v_1, ..., v_V with v_0 the zero vertex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp

from .errors import InvalidArgument, NoConvergence, NotFeasible
from .tiles import incidence_matrix

log = logging.getLogger(__name__)

STRICT = "strictly-feasible"
BOUNDARY = "boundary"
INFEASIBLE = "infeasible"

FEASIBILITY_MARGIN = 1e-9
KERNEL_THRESHOLD = 1e-10


def as_incidence(tiles) -> np.ndarray:
    if isinstance(tiles, np.ndarray):
        return np.asarray(tiles, dtype=float)
    tiles = list(tiles)
    return incidence_matrix(tiles).astype(float)


def full_density(D: np.ndarray, alpha) -> np.ndarray:
    """Prepend alpha_0 = (tile degree) - sum(alpha)."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (D.shape[0] - 1,):
        raise InvalidArgument(f"density vector must have {D.shape[0] - 1} entries")
    degree = D[:, 0].sum() if D.shape[1] else 0.0
    return np.concatenate([[degree - alpha.sum()], alpha])


def check_feasible(tiles, alpha, margin: float = FEASIBILITY_MARGIN) -> str:
    """Classify alpha by the largest achievable min_t p_t with D p = alpha, sum p = 1."""
    D = as_incidence(tiles)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (D.shape[0] - 1,):
        raise InvalidArgument(f"density vector must have {D.shape[0] - 1} entries")
    T = D.shape[1]
    # variables (p_1..p_T, s); maximize s subject to p_t >= s
    c = np.zeros(T + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-np.eye(T), np.ones((T, 1))])
    b_ub = np.zeros(T)
    A_eq = np.vstack([np.hstack([np.ones(T), [0.0]]), np.hstack([D[1:], np.zeros((D.shape[0] - 1, 1))])])
    b_eq = np.concatenate([[1.0], alpha])
    bounds = [(0, None)] * T + [(None, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 2:
        return INFEASIBLE
    if res.status != 0:
        raise RuntimeError(f"feasibility LP failed: {res.message}")
    return STRICT if -res.fun > margin else BOUNDARY


def gauge_subspaces(D: np.ndarray, threshold: float = KERNEL_THRESHOLD):
    """Orthonormal bases (active, gauge) of R^{V+1}.

    Gauge directions u have D^T u constant across tiles: the global scaling
    and ker D^T.  F is flat along them.
    """
    M = D.T - D.T.mean(axis=0, keepdims=True)
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > threshold * (s[0] if s.size else 0.0)))
    return vt[:rank].T, vt[rank:].T


def objective(D, w, alpha_full, y) -> float:
    return float(logsumexp(np.log(w) + D.T @ y) - alpha_full @ y)


def gradient(D, w, alpha_full, y) -> np.ndarray:
    z = np.log(w) + D.T @ y
    p = np.exp(z - logsumexp(z))
    return D @ p - alpha_full


def hessian(D, w, y) -> np.ndarray:
    z = np.log(w) + D.T @ y
    p = np.exp(z - logsumexp(z))
    m = D @ p
    return (D * p) @ D.T - np.outer(m, m)


@dataclass
class CriticalGauge:
    x: np.ndarray
    critical_weights: np.ndarray
    sigma: float
    residual: float
    iterations: int
    alpha: np.ndarray
    incidence: np.ndarray
    weights: np.ndarray

    def residuals(self) -> np.ndarray:
        """sum_t t_v w'(t) - alpha_v, recomputed from the critical weights."""
        return self.incidence @ self.critical_weights - self.alpha

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "critical_weights": self.critical_weights.tolist(),
            "sigma": self.sigma,
            "residuals": self.residuals().tolist(),
            "iterations": self.iterations,
        }


def _log_P(D, w, y):
    return float(logsumexp(np.log(w) + D.T @ y))


def sigma_at(D, w, alpha_full, x) -> float:
    """log P(x) - sum_v alpha_v log x_v, with v running over v_0..v_V."""
    y = np.log(np.asarray(x, dtype=float))
    return _log_P(D, w, y) - float(alpha_full @ y)


def solve_critical_gauge(tiles, w=None, alpha=None, tol: float = 1e-12, max_iter: int = 200,
                         init=None, check: bool = True) -> CriticalGauge:
    """Positive solution of the criticality equations, normalized so P(x) = 1.

    ``tiles`` is a tile list or a homogenized incidence matrix (rows v_0..v_V).
    ``alpha`` gives alpha_v for v_1..v_V; alpha_0 is derived.
    """
    D = as_incidence(tiles)
    T = D.shape[1]
    w = np.ones(T) if w is None else np.asarray(w, dtype=float)
    if w.shape != (T,) or np.any(w <= 0):
        raise InvalidArgument("weights must be a positive vector with one entry per tile")
    if alpha is None:
        raise InvalidArgument("a density vector is required")
    if check:
        status = check_feasible(D, alpha)
        if status != STRICT:
            raise NotFeasible(f"density vector is {status}")
    alpha_full = full_density(D, alpha)
    active, _ = gauge_subspaces(D)
    logw = np.log(w)
    y = np.zeros(D.shape[0]) if init is None else np.log(np.asarray(init, dtype=float))

    def F(yy):
        return float(logsumexp(logw + D.T @ yy) - alpha_full @ yy)

    f = F(y)
    for it in range(max_iter + 1):
        z = logw + D.T @ y
        p = np.exp(z - logsumexp(z))
        m = D @ p
        g = m - alpha_full
        res = float(np.max(np.abs(g)))
        if res <= tol:
            break
        if it == max_iter:
            raise NoConvergence(f"residual {res:.3e} after {max_iter} Newton steps")
        H = (D * p) @ D.T - np.outer(m, m)
        Hr = active.T @ H @ active
        gr = active.T @ g
        step = active @ np.linalg.solve(Hr, -gr)
        slope = float(g @ step)
        t = 1.0
        while True:
            f_new = F(y + t * step)
            if f_new <= f + 1e-4 * t * slope or t < 1e-12:
                break
            # rounding floor near the optimum
            if abs(f_new - f) <= 1e-15 * max(1.0, abs(f)) and t < 1e-3:
                break
            t *= 0.5
        y = y + t * step
        f = f_new
    log.debug("critical gauge: %d Newton steps, residual %.3e", it, res)
    sigma = _log_P(D, w, y) - float(alpha_full @ y)
    degree = D[:, 0].sum()
    y = y - _log_P(D, w, y) / degree
    sigma_normalized = _log_P(D, w, y) - float(alpha_full @ y)
    assert abs(sigma - sigma_normalized) <= max(tol, 1e-11) * max(1.0, abs(sigma)), \
        "growth rate must not depend on the global scale"
    z = logw + D.T @ y
    wprime = np.exp(z)
    return CriticalGauge(np.exp(y), wprime, sigma, res, it, alpha_full, D, w)


def growth_rate(gauge: CriticalGauge, alpha=None) -> float:
    """sigma = log P(x) - sum_v alpha_v log x_v at the gauge's solution."""
    alpha_full = gauge.alpha if alpha is None else full_density(gauge.incidence, alpha)
    return sigma_at(gauge.incidence, gauge.weights, alpha_full, gauge.x)


def regauge(gauge: CriticalGauge, direction) -> np.ndarray:
    """x multiplied pointwise by exp(direction); valid gauges need direction in the gauge subspace."""
    return gauge.x * np.exp(np.asarray(direction, dtype=float))
