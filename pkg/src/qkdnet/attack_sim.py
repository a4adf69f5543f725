"""Attack models: uncorrelated Monte Carlo and the finite-resource optimum.

The uncorrelated estimator flips every relay independently with its own
probability and counts the trials whose fallen set disconnects the
endpoints.  Trials are drawn in fixed-size batches whose generators come
from ``numpy.random.SeedSequence(seed).spawn``, so a run is reproducible for
a given seed no matter how the batches are executed.

The correlated model gives the adversary a resource budget R and a
piecewise-linear per-node success function f(x) = min(slope * x, 1).  Within
the unsaturated regime the optimum concentrates everything on one node per
path; an exhaustive grid search over discretized allocations serves as an
independent check of that analysis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import _bitgraph
from .errors import SizeCapError
from .net_model import Network, PathSystem

_BATCH = 1 << 16

GRID_NODE_CAP = 8
GRID_STEP_CAP = 20


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    hits: int
    estimate: float
    std_error: float
    seed: int


@dataclass(frozen=True)
class ResourceAttack:
    """A resource split over nodes: node id -> amount, within the budget."""

    alpha_slope: float
    total_resources: float
    allocation: Mapping[str, float]

    def __post_init__(self):
        spent = sum(self.allocation.values())
        if spent > self.total_resources * (1 + 1e-12) + 1e-12:
            raise ValueError(f"allocation spends {spent}, exceeding budget {self.total_resources}")
        if any(r < 0 for r in self.allocation.values()):
            raise ValueError("allocations must be non-negative")


def compromise_rate(slope: float, x: float) -> float:
    """Piecewise-linear success probability: slope * x, saturating at 1."""
    return min(max(slope * x, 0.0), 1.0)


def simulate_uncorrelated(net: Network, trials: int, seed: int = 0) -> MonteCarloResult:
    """Estimate the disconnection probability under independent node failures.

    Each trial compromises relay i with its trust probability p_i and scores
    a hit when the compromised set disconnects A from B.  Identical seeds
    give identical results.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    bg = _bitgraph.from_network(net)
    m = bg.size
    probs = np.array([net.trust[v] for v in bg.order], dtype=np.float64)

    if bg.ab_adjacent or m == 0:
        # No subset can change connectivity: hit always or never.
        connected = bg.ab_adjacent
        hits = 0 if connected else trials
    elif not probs.any():
        hits = 0
    else:
        powers = np.int64(1) << np.arange(m, dtype=np.int64)
        hits = 0
        n_batches = (trials + _BATCH - 1) // _BATCH
        for i, ss in enumerate(np.random.SeedSequence(seed).spawn(n_batches)):
            rng = np.random.default_rng(ss)
            b = min(_BATCH, trials - i * _BATCH)
            fallen = rng.random((b, m)) < probs
            masks = (fallen * powers).sum(axis=1, dtype=np.int64)
            hits += int(_bitgraph.count_cut_masks(bg.adj, bg.src, bg.tgt, masks))

    estimate = hits / trials
    return MonteCarloResult(
        trials=trials,
        hits=hits,
        estimate=estimate,
        std_error=math.sqrt(estimate * (1.0 - estimate) / trials),
        seed=seed,
    )


def single_path_extrema(n: int, alpha_slope: float, total_resources: float) -> list[float]:
    """Candidate optima for attacking one path: spread the budget over k nodes.

    Splitting R equally over k of the n nodes succeeds with probability
    1 - (1 - slope*R/k)^k, which decreases in k, so k = 1 is the adversary's
    optimum.  Requires the unsaturated regime slope*R <= 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if alpha_slope < 0 or total_resources < 0:
        raise ValueError("slope and resources must be non-negative")
    x = alpha_slope * total_resources
    if x > 1.0:
        raise ValueError(f"slope * resources = {x} > 1: saturated regime, extrema formula invalid")
    return [1.0 - (1.0 - x / k) ** k for k in range(1, n + 1)]


def correlated_optimal_attack(
    sys: PathSystem, alpha_slope: float, total_resources: float
) -> tuple[ResourceAttack, float]:
    """Best adversary strategy against a disjoint-path system.

    One node per path gets an equal share R/N; the success probability is
    (slope * R / N)^N.  Refuses the saturated regime where an equal share
    would exceed the linear range of the success function.
    """
    n_paths = sys.count
    if n_paths < 1:
        raise ValueError("path system is empty")
    if alpha_slope < 0 or total_resources < 0:
        raise ValueError("slope and resources must be non-negative")
    share = total_resources / n_paths
    if alpha_slope * share > 1.0:
        raise ValueError(
            f"slope * R/N = {alpha_slope * share} > 1: equal shares saturate, "
            "the linear analysis does not apply"
        )
    allocation = {path[0]: share for path in sys.paths}
    probability = (alpha_slope * share) ** n_paths
    return ResourceAttack(alpha_slope, total_resources, allocation), probability


def _grid_allocations(n_nodes: int, steps: int):
    """All ways to split `steps` indivisible units over n_nodes cells."""
    for bars in combinations(range(steps + n_nodes - 1), n_nodes - 1):
        prev = -1
        alloc = []
        for bar in bars:
            alloc.append(bar - prev - 1)
            prev = bar
        alloc.append(steps + n_nodes - 1 - prev - 1)
        yield alloc


def correlated_grid_oracle(
    path_lengths: Sequence[int],
    alpha_slope: float,
    total_resources: float,
    grid_steps: int,
    slopes: Sequence[Sequence[float]] | None = None,
) -> tuple[dict[str, float], float]:
    """Exhaustive search over discretized resource splits.

    Scores every allocation of the budget in R/grid_steps increments with
    the exact product formula over paths and returns the best one.  Node ids
    follow the p{path}_{position} convention.  ``slopes`` optionally gives a
    per-node success slope, one inner sequence per path.
    """
    lengths = list(path_lengths)
    if not lengths or any(n < 1 for n in lengths):
        raise ValueError(f"path_lengths must be non-empty positive integers, got {lengths}")
    n_nodes = sum(lengths)
    if n_nodes > GRID_NODE_CAP:
        raise SizeCapError(f"{n_nodes} nodes exceeds the grid-search cap of {GRID_NODE_CAP}")
    if not 1 <= grid_steps <= GRID_STEP_CAP:
        raise SizeCapError(f"grid_steps must be in [1, {GRID_STEP_CAP}], got {grid_steps}")
    if slopes is None:
        node_slopes = [alpha_slope] * n_nodes
    else:
        node_slopes = [s for path in slopes for s in path]
        if len(node_slopes) != n_nodes:
            raise ValueError("slopes shape does not match path_lengths")

    names = [f"p{j}_{k}" for j, n in enumerate(lengths, start=1) for k in range(1, n + 1)]
    unit = total_resources / grid_steps
    offsets = [0]
    for n in lengths:
        offsets.append(offsets[-1] + n)

    best_prob = -1.0
    best_units: list[int] | None = None
    for units in _grid_allocations(n_nodes, grid_steps):
        prob = 1.0
        for j in range(len(lengths)):
            survive = 1.0
            for i in range(offsets[j], offsets[j + 1]):
                survive *= 1.0 - compromise_rate(node_slopes[i], units[i] * unit)
            prob *= 1.0 - survive
            if prob == 0.0:
                break
        if prob > best_prob:
            best_prob = prob
            best_units = list(units)

    assert best_units is not None
    allocation = {names[i]: u * unit for i, u in enumerate(best_units) if u}
    return allocation, best_prob


def path_count_crossover(n: int, p: float) -> tuple[float, float, int]:
    """Single-path versus two-path tradeoff on the two-bridges network.

    On the network whose short route crosses just the two bridge relays and
    whose two disjoint routes take n+1 relays each, the compromise bounds
    are P1 = 2p and P2 = ((n+1) p)^2.  One path wins exactly when
    p > 2/(n+1)^2; the tie at equality reports 2.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p out of [0, 1]: {p}")
    if (n + 1) * p >= 1.0:
        warnings.warn(
            f"(n+1)*p = {(n + 1) * p} is not small; the linearized bounds are unreliable",
            stacklevel=2,
        )
    p1 = 2.0 * p
    p2 = ((n + 1) * p) ** 2
    best = 1 if p > 2.0 / (n + 1) ** 2 else 2
    return p1, p2, best


def mc_csv_rows(
    scheme: str,
    n: int | None,
    l: int | None,
    p: float | None,
    result: MonteCarloResult,
    exact: float | None,
) -> str:
    """One-result CSV in the scheme,n,l,p,trials,estimate,std_error,exact layout."""
    cells = [
        scheme,
        "" if n is None else str(n),
        "" if l is None else str(l),
        "" if p is None else f"{p:.6g}",
        str(result.trials),
        f"{result.estimate:.6g}",
        f"{result.std_error:.6g}",
        "" if exact is None else f"{exact:.6g}",
    ]
    return "scheme,n,l,p,trials,estimate,std_error,exact\n" + ",".join(cells) + "\n"
