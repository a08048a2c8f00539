"""Max-min packing of k points in the unit square.

A sanity oracle for the pps bounds, not a record solver: seeded hexagonal or
jittered-grid starts, a local search that relocates the most constrained
point to the farthest sampled spot, then an SLSQP polish of
max s subject to |p_i - p_j|^2 >= s.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from ips import config
from ips.errors import PackingError

log = logging.getLogger(__name__)

SQUARE_TOLERANCE = 1e-9
_CANDIDATES = 24


@dataclass(frozen=True)
class Packing:
    k: int
    coordinates: Tuple[Tuple[float, float], ...]
    min_pairwise: float
    provenance: Dict[str, object] = field(default_factory=dict)

    def as_array(self) -> np.ndarray:
        return np.array(self.coordinates, dtype=float)


def _min_distance(points: np.ndarray) -> float:
    return float(pdist(points).min())


def jittered_grid_start(k: int, rng: np.random.Generator) -> np.ndarray:
    m = max(int(np.ceil(np.sqrt(k))), 2)
    xs = (np.arange(m) + 0.5) / m
    X, Y = np.meshgrid(xs, xs)
    P = np.c_[X.ravel(), Y.ravel()]
    P = P[rng.permutation(len(P))[:k]]
    P += rng.uniform(-0.15 / m, 0.15 / m, size=P.shape)
    return np.clip(P, 0.0, 1.0)


def hex_start(k: int, rng: np.random.Generator) -> np.ndarray:
    a = 1.0 / np.sqrt(k)
    pts = []
    y = a / 2
    row = 0
    while y < 1.0:
        x = a / 2 if row % 2 == 1 else a
        while x < 1.0:
            pts.append([x, y])
            x += a
        y += np.sqrt(3) / 2 * a
        row += 1
    P = np.array(pts, dtype=float).reshape(-1, 2)
    if len(P) < k:
        P = np.vstack([P, rng.uniform(0, 1, size=(k - len(P), 2))])
    P = P[:k]
    P += rng.uniform(-0.1 * a, 0.1 * a, size=P.shape)
    return np.clip(P, 0.0, 1.0)


def _nearest_other(P: np.ndarray) -> np.ndarray:
    diff = P[:, None, :] - P[None, :, :]
    D = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(D, np.inf)
    return D


def local_search(P: np.ndarray, rng: np.random.Generator, iterations: int) -> np.ndarray:
    """Relocate the most constrained point to the farthest sampled spot; shrink the radius geometrically."""
    k = len(P)
    best = _min_distance(P)
    radius = 0.25 / np.sqrt(k)
    shrink = (1e-4) ** (1.0 / max(iterations, 1))
    for it in range(iterations):
        D = _nearest_other(P)
        i, j = np.unravel_index(np.argmin(D), D.shape)
        # of the closest pair, move the one with the tighter second neighbour
        second = np.sort(D, axis=1)[:, 1] if k > 2 else np.full(k, np.inf)
        idx = i if second[i] <= second[j] else j
        candidate = P.copy()
        if it % 10 == 9:
            candidate = np.clip(P + rng.normal(0.0, radius / 4, size=P.shape), 0.0, 1.0)
        else:
            spots = np.clip(P[idx] + rng.normal(0.0, radius, size=(_CANDIDATES, 2)), 0.0, 1.0)
            others = np.delete(P, idx, axis=0)
            reach = np.sqrt(((spots[:, None, :] - others[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
            candidate[idx] = spots[np.argmax(reach)]
        value = _min_distance(candidate)
        if value >= best:
            P, best = candidate, value
        radius *= shrink
    return P


def polish(P: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """SLSQP on the epigraph form; returns the input when the polish does not improve it."""
    k = len(P)
    I, J = np.triu_indices(k, 1)
    rows = np.arange(len(I))

    def objective(z):
        return -z[-1]

    def objective_grad(z):
        g = np.zeros_like(z)
        g[-1] = -1.0
        return g

    def separation(z):
        X = z[:-1].reshape(k, 2)
        d = X[I] - X[J]
        return (d ** 2).sum(axis=1) - z[-1]

    def separation_jac(z):
        X = z[:-1].reshape(k, 2)
        d = 2.0 * (X[I] - X[J])
        jac = np.zeros((len(I), 2 * k + 1))
        jac[rows, 2 * I] = d[:, 0]
        jac[rows, 2 * I + 1] = d[:, 1]
        jac[rows, 2 * J] = -d[:, 0]
        jac[rows, 2 * J + 1] = -d[:, 1]
        jac[:, -1] = -1.0
        return jac

    z0 = np.append(P.ravel(), _min_distance(P) ** 2)
    bounds = [(0.0, 1.0)] * (2 * k) + [(0.0, 2.0)]
    res = minimize(
        objective,
        z0,
        jac=objective_grad,
        method="SLSQP",
        bounds=bounds,
        constraints=[{"type": "ineq", "fun": separation, "jac": separation_jac}],
        options={"ftol": 1e-14, "maxiter": max_iter},
    )
    Q = np.clip(res.x[:-1].reshape(k, 2), 0.0, 1.0)
    if _min_distance(Q) > _min_distance(P):
        return Q
    log.debug("polish did not improve (%s)", res.message)
    return P


def _restart(args) -> Tuple[float, Tuple[Tuple[float, float], ...]]:
    k, seed_seq, iterations, index = args
    rng = np.random.default_rng(seed_seq)
    start = hex_start(k, rng) if index % 2 == 0 else jittered_grid_start(k, rng)
    P = polish(local_search(start, rng, iterations))
    coords = tuple((float(x), float(y)) for x, y in P)
    return _min_distance(np.array(coords)), coords


def pps_solve(
    k: int,
    seed: int = 0,
    restarts: Optional[int] = None,
    iterations: Optional[int] = None,
    jobs: Optional[int] = None,
) -> Packing:
    """Best packing over independent restarts.

    Restart i uses the i-th child of SeedSequence(seed); the winner is the
    smallest (-objective, coordinates) so the worker count never changes it.
    """
    restarts = config.PACK_RESTARTS if restarts is None else restarts
    iterations = config.PACK_ITERATIONS if iterations is None else iterations
    jobs = config.JOBS if jobs is None else jobs
    if k < 2:
        raise PackingError(f"k must be >= 2, got {k}")
    if restarts < 1:
        raise PackingError(f"restarts must be >= 1, got {restarts}")
    if iterations < 0:
        raise PackingError(f"iterations must be >= 0, got {iterations}")
    children = np.random.SeedSequence(seed).spawn(restarts)
    tasks = [(k, child, iterations, i) for i, child in enumerate(children)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_restart, tasks))
    else:
        results = [_restart(t) for t in tasks]
    value, coords = min(results, key=lambda r: (-r[0], r[1]))
    log.info("pps_solve(k=%d): best %.12f over %d restarts", k, value, restarts)
    return Packing(
        k=k,
        coordinates=coords,
        min_pairwise=value,
        provenance={"seed": seed, "restarts": restarts, "iterations": iterations},
    )


def pps_validate(p: Packing) -> Tuple[bool, float]:
    P = p.as_array()
    if p.k < 2 or P.shape != (p.k, 2):
        raise PackingError(f"expected {p.k} points, got array of shape {P.shape}")
    in_square = bool(np.all(P >= -SQUARE_TOLERANCE) and np.all(P <= 1 + SQUARE_TOLERANCE))
    return in_square, _min_distance(P)
