"""Exact laws by enumeration and a pair heat-bath Markov chain on multiwebs.

A multiweb is an int array of length N giving the tile index of each color.
The chain picks two distinct colors and redraws their tile pair from the
conditional law proportional to w(a) w(b) over all pairs (a, b) with the
same combined vertex multiplicities, which leaves the measure
P(m) = w(m) / Z invariant and reversible.

Uniform variates come from numpy's Philox4x64 counter-based generator, so a
seed reproduces a stream bit for bit on any platform.
"""

from __future__ import annotations

import math
import os
import struct
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .errors import InitFailure, InvalidArgument, ResourceLimit
from .polynomial import _vertex_columns, _weights

RNG_ALGORITHM = "numpy.random.Philox (Philox4x64-10), SeedSequence-spawned streams"
DEFAULT_ENUM_CAP = 10**8


# exhaustive enumeration

@dataclass
class ExactLaw:
    """Exact law of the tile-count vector X on Omega_{n,N}."""

    Z: object
    support: dict  # X tuple -> probability
    weights: list
    N: int

    def mean(self) -> np.ndarray:
        xs = np.array(list(self.support), dtype=float)
        ps = np.array([float(p) for p in self.support.values()])
        return ps @ xs

    def covariance(self) -> np.ndarray:
        xs = np.array(list(self.support), dtype=float)
        ps = np.array([float(p) for p in self.support.values()])
        mu = ps @ xs
        d = xs - mu
        return (d * ps[:, None]).T @ d

    def assignment_probability(self, assignment) -> object:
        """P(m) = w(m) / Z for one colored multiweb."""
        counts = np.bincount(np.asarray(assignment), minlength=len(self.weights))
        if tuple(int(c) for c in counts) not in self.support:
            return 0
        wm = 1
        for t, c in enumerate(counts):
            if c:
                wm = wm * self.weights[t] ** int(c)
        return wm / self.Z

    def assignment_law(self) -> dict:
        """Probability of every colored multiweb (tuple of tile indices)."""
        from itertools import permutations

        out = {}
        for x in self.support:
            tiles = [t for t, c in enumerate(x) for _ in range(c)]
            for perm in set(permutations(tiles)):
                out[perm] = self.assignment_probability(perm)
        return out


def enumerate_multiwebs(tiles, w, n, N, exact=False, cap=DEFAULT_ENUM_CAP) -> ExactLaw:
    """Exhaustive enumeration of Omega_{n,N}, grouped by tile-count vector.

    Depth-first over tiles choosing how many colors use each tile, pruned by
    the remaining vertex budget; each count vector X carries the multinomial
    number N! / prod X_t! of color assignments.
    """
    cols = _vertex_columns(tiles)
    V, T = cols.shape
    weights = _weights(w, T)
    if exact:
        weights = [Fraction(x) for x in weights]
    n = np.array([int(x) for x in n], dtype=np.int64)
    if n.shape != (V,):
        raise InvalidArgument(f"multiplicity vector must have {V} entries")
    raw: dict = {}
    counts = [0] * T
    visited = [0]
    fact = math.factorial

    def dfs(t, budget, colors_left):
        visited[0] += 1
        if visited[0] > cap:
            raise ResourceLimit(f"enumeration exceeded {cap} nodes")
        if t == T:
            if colors_left == 0 and not budget.any():
                mult = fact(N)
                wm = 1
                for k, c in enumerate(counts):
                    if c:
                        mult //= fact(c)
                        wm = wm * weights[k] ** c
                raw[tuple(counts)] = mult * wm
            return
        col = cols[:, t]
        if t == T - 1:
            # the last tile must absorb every remaining color
            if np.array_equal(col * colors_left, budget):
                counts[t] = colors_left
                dfs(t + 1, budget - col * colors_left, 0)
                counts[t] = 0
            return
        c = 0
        b = budget
        while c <= colors_left and (b >= 0).all():
            counts[t] = c
            dfs(t + 1, b, colors_left - c)
            c += 1
            b = b - col
        counts[t] = 0

    dfs(0, n.copy(), N)
    Z = sum(raw.values()) if raw else 0
    if not exact:
        Z = float(Z)
    support = {x: (v / Z if exact else float(v) / Z) for x, v in raw.items()} if Z else {}
    return ExactLaw(Z, support, weights, N)


# initial state

def initial_counts(cols, w, n, N) -> np.ndarray:
    """Tile counts near round(N * w / sum w) with D m = n and sum m = N."""
    V, T = cols.shape
    w = np.asarray(w, dtype=float)
    target = np.rint(N * w / w.sum())
    # variables m (T), d (T) with d >= |m - target|
    c = np.concatenate([np.zeros(T), np.ones(T)])
    A_eq = np.vstack([np.hstack([cols, np.zeros((V, T))]), np.hstack([np.ones(T), np.zeros(T)])])
    b_eq = np.concatenate([n, [N]]).astype(float)
    eye = np.eye(T)
    A_abs = np.vstack([np.hstack([eye, -eye]), np.hstack([-eye, -eye])])
    b_abs = np.concatenate([target, -target])
    constraints = [LinearConstraint(A_eq, b_eq, b_eq), LinearConstraint(A_abs, -np.inf, b_abs)]
    integrality = np.concatenate([np.ones(T), np.zeros(T)])
    res = milp(c, constraints=constraints, integrality=integrality,
               bounds=Bounds(np.zeros(2 * T), np.full(2 * T, np.inf)))
    if res.status != 0 or res.x is None:
        raise InitFailure(f"no multiweb with multiplicities {tuple(int(x) for x in n)} and N={N}: {res.message}")
    m = np.rint(res.x[:T]).astype(np.int64)
    if not (np.array_equal(cols @ m, n) and m.sum() == N and (m >= 0).all()):
        raise InitFailure("integer repair did not produce a valid multiweb")
    return m


# pair tables and kernel

def pair_tables(cols, w):
    """Group ordered tile pairs by combined multiplicity vector.

    Returns (group_of[a, b], start, length, first, second, cumulative)
    where cumulative holds the normalized cumulative conditional law.
    """
    T = cols.shape[1]
    w = np.asarray(w, dtype=float)
    groups = defaultdict(list)
    for a in range(T):
        for b in range(T):
            groups[tuple(cols[:, a] + cols[:, b])].append((a, b))
    group_of = np.empty((T, T), dtype=np.int64)
    start, length, first, second, cum = [], [], [], [], []
    for g, members in enumerate(groups.values()):
        start.append(len(first))
        length.append(len(members))
        probs = np.array([w[a] * w[b] for a, b in members])
        probs = np.cumsum(probs / probs.sum())
        probs[-1] = 1.0
        for (a, b), p in zip(members, probs):
            group_of[a, b] = g
            first.append(a)
            second.append(b)
            cum.append(p)
    return (group_of, np.array(start, dtype=np.int64), np.array(length, dtype=np.int64),
            np.array(first, dtype=np.int64), np.array(second, dtype=np.int64), np.array(cum))


@numba.njit(cache=True, nogil=True)
def _run_moves(state, group_of, start, length, first, second, cum, uniforms, moves_per_sample,
               out_states, out_counts, T):
    N = state.shape[0]
    n_samples = out_counts.shape[0]
    k = 0
    for s in range(n_samples):
        for _ in range(moves_per_sample):
            i = int(uniforms[k] * N)
            j = int(uniforms[k + 1] * (N - 1))
            u = uniforms[k + 2]
            k += 3
            if i >= N:
                i = N - 1
            if j >= N - 1:
                j = N - 2
            if j >= i:
                j += 1
            g = group_of[state[i], state[j]]
            lo = start[g]
            hi = lo + length[g] - 1
            # first index with cum > u
            while lo < hi:
                mid = (lo + hi) // 2
                if cum[mid] > u:
                    hi = mid
                else:
                    lo = mid + 1
            state[i] = first[lo]
            state[j] = second[lo]
        for t in range(T):
            out_counts[s, t] = 0
        for c in range(N):
            out_counts[s, state[c]] += 1
        if out_states.shape[0] > 0:
            for c in range(N):
                out_states[s, c] = state[c]


@dataclass
class ChainConfig:
    seed: int = 0
    sweeps: int = 2000
    burn_in: int = 200
    thinning: int = 1
    debug: bool = False

    def __post_init__(self):
        if self.sweeps <= self.burn_in:
            raise InvalidArgument("sweeps must exceed burn_in")
        if min(self.sweeps, self.burn_in, self.thinning) < 0 or self.thinning < 1:
            raise InvalidArgument("sweeps, burn_in and thinning must be positive")


@dataclass
class ChainRun:
    counts: np.ndarray                  # (samples, T) tile counts X
    states: np.ndarray | None           # (samples, N) assignments when kept
    seed_entropy: object = None
    extra: dict = field(default_factory=dict)


class HeatBathChain:
    """Pair heat-bath chain on Omega_{n,N} for one RNG stream."""

    block = 100_000

    def __init__(self, tiles, w, n, N, rng: np.random.Generator, init=None):
        self.cols = _vertex_columns(tiles)
        V, T = self.cols.shape
        self.T, self.N = T, int(N)
        if self.N < 2:
            raise InvalidArgument("the pair chain needs N >= 2")
        self.w = np.asarray(_weights(w, T), dtype=float)
        self.n = np.array([int(x) for x in n], dtype=np.int64)
        self.rng = rng
        self.tables = pair_tables(self.cols, self.w)
        if init is None:
            m = initial_counts(self.cols, self.w, self.n, self.N)
            init = np.repeat(np.arange(T), m)
            rng.shuffle(init)
        self.state = np.ascontiguousarray(init, dtype=np.int64)
        self.validate(self.state)

    @property
    def moves_per_sweep(self) -> int:
        return max(1, self.N // 2)

    def validate(self, state) -> None:
        counts = np.bincount(state, minlength=self.T)
        if not np.array_equal(self.cols @ counts, self.n) or state.shape != (self.N,):
            raise AssertionError("multiweb violates the vertex multiplicities")

    def run(self, n_samples: int, moves_per_sample: int, keep_states: bool = False,
            debug: bool = False) -> ChainRun:
        counts = np.empty((n_samples, self.T), dtype=np.int64)
        states = np.empty((n_samples if keep_states else 0, self.N), dtype=np.int64)
        done = 0
        while done < n_samples:
            m = min(self.block, n_samples - done)
            u = self.rng.random(3 * m * moves_per_sample)
            sub_states = states[done:done + m] if keep_states else states
            _run_moves(self.state, *self.tables, u, moves_per_sample, sub_states,
                       counts[done:done + m], self.T)
            done += m
        stride = 1 if debug else 100
        check = counts[::stride]
        assert np.array_equal(check @ self.cols.T, np.broadcast_to(self.n, (len(check), len(self.n)))), \
            "emitted multiweb violates the vertex multiplicities"
        assert (check.sum(axis=1) == self.N).all()
        return ChainRun(counts, states if keep_states else None)

    def sample(self, cfg: ChainConfig, keep_states: bool = False) -> ChainRun:
        if cfg.burn_in:
            self.run(1, cfg.burn_in * self.moves_per_sweep)
        n_samples = (cfg.sweeps - cfg.burn_in) // cfg.thinning
        return self.run(n_samples, cfg.thinning * self.moves_per_sweep, keep_states, cfg.debug)


def chain_generators(seed: int, chains: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.Philox(s))
            for s in np.random.SeedSequence(seed).spawn(chains)]


def worker_count() -> int:
    env = os.environ.get("MULTIWEB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def heat_bath_sample(tiles, w, n, N, cfg: ChainConfig, chains: int = 1,
                     keep_states: bool = False) -> list[ChainRun]:
    """Run independent chains, one Philox stream each, in parallel threads."""
    gens = chain_generators(cfg.seed, chains)
    # init is built on the first stream so every chain starts from the same multiweb
    base = HeatBathChain(tiles, w, n, N, gens[0])
    init = base.state.copy()

    def one(k):
        chain = base if k == 0 else HeatBathChain(tiles, w, n, N, gens[k], init=init.copy())
        return chain.sample(cfg, keep_states)

    with ThreadPoolExecutor(max_workers=min(chains, worker_count())) as pool:
        return list(pool.map(one, range(chains)))


# reporting

def batch_means_se(series: np.ndarray, batches: int = 25) -> np.ndarray:
    """Standard error of the mean of each column by non-overlapping batch means."""
    n = len(series) // batches * batches
    means = series[:n].reshape(batches, -1, *series.shape[1:]).mean(axis=1)
    return means.std(axis=0, ddof=1) / math.sqrt(batches)


def split_rhat(chains: list[np.ndarray]) -> np.ndarray:
    """Split-R-hat per column over chains of equal length; NaN for constant columns."""
    halves = []
    for c in chains:
        h = len(c) // 2
        halves += [c[:h], c[h:2 * h]]
    x = np.stack(halves).astype(float)          # (m, n, k)
    m, n = x.shape[:2]
    chain_means = x.mean(axis=1)
    W = x.var(axis=1, ddof=1).mean(axis=0)
    B = n * chain_means.var(axis=0, ddof=1)
    var_hat = (n - 1) / n * W + B / n
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(W > 0, np.sqrt(var_hat / W), np.nan)


def empirical_vs_gaussian(runs: list[ChainRun], law, threshold: float = 5.0,
                          batches: int = 25) -> dict:
    """Compare empirical tile-count moments with a Gaussian law, in standard errors."""
    chains = [r.counts.astype(float) for r in runs]
    X = np.concatenate(chains)
    T = X.shape[1]
    mean = X.mean(axis=0)
    se_mean = np.concatenate([batch_means_se(c, batches)[None] for c in chains]).mean(axis=0)
    se_mean = se_mean / math.sqrt(len(chains))
    d = X - mean
    iu = np.triu_indices(T)
    prods = d[:, iu[0]] * d[:, iu[1]]
    cov = np.zeros((T, T))
    cov[iu] = prods.mean(axis=0)
    cov = cov + np.triu(cov, 1).T
    offset = 0
    se_parts = []
    for c in chains:
        se_parts.append(batch_means_se(prods[offset:offset + len(c)], batches))
        offset += len(c)
    se_cov_u = np.mean(se_parts, axis=0) / math.sqrt(len(chains))
    se_cov = np.zeros((T, T))
    se_cov[iu] = se_cov_u
    se_cov = se_cov + np.triu(se_cov, 1).T

    pred_mean = np.asarray(law.mean)
    pred_cov = np.asarray(law.covariance)
    flags = []
    z_mean = np.abs(mean - pred_mean) / np.maximum(se_mean, 1e-300)
    for t in range(T):
        if abs(mean[t] - pred_mean[t]) > threshold * se_mean[t]:
            flags.append({"kind": "mean", "tile": t, "z": float(z_mean[t])})
    z_cov = np.abs(cov - pred_cov) / np.maximum(se_cov, 1e-300)
    for a, b in zip(*iu):
        if abs(cov[a, b] - pred_cov[a, b]) > threshold * se_cov[a, b]:
            flags.append({"kind": "cov", "tiles": [int(a), int(b)], "z": float(z_cov[a, b])})
    rhat = split_rhat(chains)
    total = X.sum(axis=1)
    return {
        "rng": RNG_ALGORITHM,
        "samples": int(len(X)),
        "chains": len(chains),
        "threshold_se": threshold,
        "empirical_mean": mean.tolist(),
        "se_mean": se_mean.tolist(),
        "predicted_mean": pred_mean.tolist(),
        "empirical_cov": cov.tolist(),
        "se_cov": se_cov.tolist(),
        "predicted_cov": pred_cov.tolist(),
        "max_z_mean": float(np.max(z_mean)),
        "max_z_cov": float(np.max(z_cov[iu])),
        "split_rhat_max": float(np.nanmax(rhat)) if np.isfinite(rhat).any() else 1.0,
        "total_count_variance": float(total.var()),
        "flags": flags,
        "passed": not flags,
    }


def empirical_assignment_law(run: ChainRun) -> dict:
    keys, counts = np.unique(run.states, axis=0, return_counts=True)
    total = counts.sum()
    return {tuple(int(x) for x in k): c / total for k, c in zip(keys, counts)}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


# binary frames

_FRAME_HEADER = struct.Struct("<Q")


def write_frames(path, states) -> None:
    """Each frame: 8-byte little-endian counter, then N little-endian uint32 tile indices."""
    states = np.asarray(states)
    with open(path, "wb") as fh:
        for k, row in enumerate(states):
            fh.write(_FRAME_HEADER.pack(k))
            fh.write(row.astype("<u4").tobytes())


def read_frames(path, N: int) -> np.ndarray:
    raw = np.fromfile(path, dtype=np.uint8)
    frame = 8 + 4 * N
    if raw.size % frame:
        raise ValueError("file is not a whole number of frames")
    frames = raw.reshape(-1, frame)
    counters = frames[:, :8].copy().view("<u8").ravel()
    if not np.array_equal(counters, np.arange(len(frames))):
        raise ValueError("frame counters are not consecutive")
    return frames[:, 8:].copy().view("<u4").reshape(-1, N).astype(np.int64)
