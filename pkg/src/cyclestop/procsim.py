"""Monte Carlo and exhaustive runs of the random insertion process.

A run fixes an element e, inserts the other elements one at a time in
uniform random order, and stops at the first prefix whose closure captures
e; if no prefix ever does (e is an isthmus/bridge), the stopping time is
|E| by convention.  The first-element variants draw the distinguished
element uniformly too and report 1 plus the stopping time, i.e. the step
at which the process first closes a circuit through that element.

Randomness is fully deterministic given (instance, seed): trial i uses its
own generator built as PCG64 seeded with SeedSequence(entropy=seed,
spawn_key=(i,)), so trials are independent streams and any prefix of a run
is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import limits
from .graphs import Graph, UnionFind, expected_stop_exact
from .matroids import Matroid, expected_stop_matroid

__all__ = [
    "RNG_ALGORITHM",
    "trial_generator",
    "SimulationReport",
    "simulate_stop",
    "simulate_stop_by_rank",
    "exhaustive_stop_distribution",
    "exhaustive_stop_mean",
    "exhaustive_feasible",
    "monte_carlo_element",
    "monte_carlo_element_averaged",
    "monte_carlo_first_edge",
]

RNG_ALGORITHM = "numpy PCG64, SeedSequence(entropy=seed, spawn_key=(trial,))"

_METHODS = ("auto", "sample", "exhaustive")


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial of a seeded run."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SimulationReport:
    """Summary of one simulation run.

    ``method`` is "sample" or "exhaustive"; exhaustive runs enumerate every
    insertion order instead of sampling, so their ``trials`` is the number
    of permutations, ``stderr`` is 0.0, and ``variance`` is the population
    variance of the stopping time.  For sampled runs ``variance`` is the
    unbiased sample variance and stderr = sqrt(variance / trials).
    ``exact_expectation`` carries the exactly computed mean when one is
    available for side-by-side display.
    """

    target: str
    trials: int
    mean: float
    variance: float
    stderr: float
    seed: int
    rng_algorithm: str
    method: str
    exact_expectation: Fraction | None = None

    def to_dict(self) -> dict:
        exact = self.exact_expectation
        return {
            "target": self.target,
            "trials": self.trials,
            "mean": self.mean,
            "variance": self.variance,
            "stderr": self.stderr,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "method": self.method,
            "exact_expectation": None if exact is None else str(exact),
        }


def _require_non_loop(matroid: Matroid, e):
    ei = matroid.index_of(e)
    if matroid.rank_mask(1 << ei) == 0:
        raise ValueError(f"element {e!r} is a loop; its stopping time is undefined")


def simulate_stop(matroid: Matroid, e, rng: np.random.Generator) -> int:
    """One stopping time draw for element e.

    Uses a union-find walk when the matroid carries its source graph, and
    the rank oracle otherwise; both consume exactly one permutation from
    ``rng``, so the two paths agree draw for draw.
    """
    if matroid.graph is not None:
        return _simulate_stop_graphic(matroid, e, rng)
    return simulate_stop_by_rank(matroid, e, rng)


def _simulate_stop_graphic(matroid: Matroid, e, rng: np.random.Generator) -> int:
    graph: Graph = matroid.graph
    ei = matroid.index_of(e)
    others = [i for i in range(len(matroid)) if i != ei]
    perm = rng.permutation(len(others))
    uf = UnionFind(graph.n)
    u0, v0 = matroid.elements[ei]
    u0 -= 1
    v0 -= 1
    for step, j in enumerate(perm, start=1):
        a, b = matroid.elements[others[j]]
        uf.union(a - 1, b - 1)
        if uf.connected(u0, v0):
            return step
    return len(matroid)


def simulate_stop_by_rank(matroid: Matroid, e, rng: np.random.Generator) -> int:
    """Rank-oracle walk, exposed so tests can compare it with the
    union-find fast path on graphic matroids."""
    _require_non_loop(matroid, e)
    ei = matroid.index_of(e)
    m = len(matroid)
    others = [i for i in range(m) if i != ei]
    perm = rng.permutation(len(others))
    ebit = 1 << ei
    rank_fn = matroid._rank_fn
    mask = 0
    for step, j in enumerate(perm, start=1):
        mask |= 1 << others[j]
        if rank_fn(mask | ebit) == rank_fn(mask):
            return step
    return m


def exhaustive_feasible(m: int) -> bool:
    """Whether all (|E|-1)! insertion orders can be enumerated."""
    return m >= 1 and math.factorial(m - 1) <= limits.EXHAUSTIVE_PERM_LIMIT


def exhaustive_stop_distribution(matroid: Matroid, e) -> dict[int, int]:
    """Exact distribution of T_e: map from stopping time to the number of
    insertion orders attaining it (counts sum to (|E|-1)!).

    Prefixes are explored as a tree; once a prefix captures e, all orders
    extending it are counted at once, so the work is far below (|E|-1)!
    for most instances.
    """
    _require_non_loop(matroid, e)
    m = len(matroid)
    if not exhaustive_feasible(m):
        raise ValueError(
            f"exhaustive enumeration needs (|E|-1)! <= {limits.EXHAUSTIVE_PERM_LIMIT}, "
            f"got |E|={m}")
    ei = matroid.index_of(e)
    ebit = 1 << ei
    others = [1 << i for i in range(m) if i != ei]
    fact = [math.factorial(i) for i in range(m)]
    rank = matroid.rank_mask
    counts: dict[int, int] = {}

    def walk(mask: int, depth: int):
        if depth == m - 1:
            counts[m] = counts.get(m, 0) + 1
            return
        for bit in others:
            if mask & bit:
                continue
            nxt = mask | bit
            if rank(nxt | ebit) == rank(nxt):
                stop = depth + 1
                counts[stop] = counts.get(stop, 0) + fact[m - 1 - stop]
            else:
                walk(nxt, depth + 1)

    walk(0, 0)
    return counts


def exhaustive_stop_mean(matroid: Matroid, e) -> Fraction:
    counts = exhaustive_stop_distribution(matroid, e)
    m = len(matroid)
    total = sum(stop * c for stop, c in counts.items())
    return Fraction(total, math.factorial(m - 1))


def _sample_summary(values_sum: float, squares_sum: float, n: int):
    mean = values_sum / n
    if n > 1:
        variance = (squares_sum - values_sum * values_sum / n) / (n - 1)
        variance = max(variance, 0.0)
    else:
        variance = 0.0
    stderr = math.sqrt(variance / n)
    return mean, variance, stderr


def _census_summary(counts: dict[int, int], shift: int = 0):
    n = sum(counts.values())
    mean_f = Fraction(sum((s + shift) * c for s, c in counts.items()), n)
    var_f = Fraction(
        sum(c * (Fraction(s + shift) - mean_f) ** 2 for s, c in counts.items()), n)
    return float(mean_f), float(var_f), n


def _check_method(method: str):
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")


def _try_exact(compute) -> Fraction | None:
    try:
        return compute()
    except ValueError:
        return None


def monte_carlo_element(matroid: Matroid, e, trials: int, seed: int,
                        method: str = "auto") -> SimulationReport:
    """Estimate (or exhaustively compute) E[T_e] for a fixed element."""
    _check_method(method)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _require_non_loop(matroid, e)
    m = len(matroid)
    target = f"T[{e!r}] in {matroid.name}"
    exact = _try_exact(lambda: expected_stop_matroid(matroid, e))
    if method == "exhaustive" or (method == "auto" and exhaustive_feasible(m)):
        counts = exhaustive_stop_distribution(matroid, e)
        mean, variance, n = _census_summary(counts)
        return SimulationReport(target, n, mean, variance, 0.0, seed,
                                RNG_ALGORITHM, "exhaustive", exact)
    s = 0.0
    s2 = 0.0
    for i in range(trials):
        stop = simulate_stop(matroid, e, trial_generator(seed, i))
        s += stop
        s2 += stop * stop
    mean, variance, stderr = _sample_summary(s, s2, trials)
    return SimulationReport(target, trials, mean, variance, stderr, seed,
                            RNG_ALGORITHM, "sample", exact)


def _averaged_exact(matroid: Matroid) -> Fraction:
    total = Fraction(0)
    for e in matroid.elements:
        total += expected_stop_matroid(matroid, e)
    return 1 + total / len(matroid)


def monte_carlo_element_averaged(matroid: Matroid, trials: int, seed: int,
                                 method: str = "auto") -> SimulationReport:
    """First-circuit-step estimate with the element drawn uniformly.

    Each trial picks an element e uniformly, runs the insertion process,
    and records 1 + T_e; for a loopless matroid the exact mean is the rank
    plus one.
    """
    _check_method(method)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    m = len(matroid)
    if not matroid.is_loopless:
        raise ValueError("averaged runs need a loopless matroid")
    target = f"1+T[uniform element] in {matroid.name}"
    exact = _try_exact(lambda: _averaged_exact(matroid))
    if method == "exhaustive" or (method == "auto" and exhaustive_feasible(m)):
        combined: dict[int, int] = {}
        for e in matroid.elements:
            for stop, c in exhaustive_stop_distribution(matroid, e).items():
                combined[stop] = combined.get(stop, 0) + c
        mean, variance, n = _census_summary(combined, shift=1)
        return SimulationReport(target, n, mean, variance, 0.0, seed,
                                RNG_ALGORITHM, "exhaustive", exact)
    s = 0.0
    s2 = 0.0
    for i in range(trials):
        rng = trial_generator(seed, i)
        e = matroid.elements[int(rng.integers(m))]
        stop = 1 + simulate_stop(matroid, e, rng)
        s += stop
        s2 += stop * stop
    mean, variance, stderr = _sample_summary(s, s2, trials)
    return SimulationReport(target, trials, mean, variance, stderr, seed,
                            RNG_ALGORITHM, "sample", exact)


def _first_edge_exact(graph: Graph) -> Fraction:
    try:
        total = Fraction(0)
        for e in graph.edges:
            total += expected_stop_exact(graph, e)
        return 1 + total / graph.m
    except ValueError:
        # graph too large for the subset scan: components are cheap and the
        # averaged identity gives the same value
        c = graph.component_count()
        return Fraction(1 + graph.n - c)


def monte_carlo_first_edge(graph: Graph, trials: int, seed: int,
                           method: str = "auto") -> SimulationReport:
    """Insert all edges in uniform random order; report the first step at
    which the edge inserted first lies on a cycle (orders that never close
    one count as |E| + 1 via the stopping convention).

    Equivalent to the averaged element run on the graphic matroid, with
    the drawn edge being the first one inserted.
    """
    _check_method(method)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    m = graph.m
    if m == 0:
        raise ValueError("first-edge runs need at least one edge")
    target = f"first cycle step in graph(n={graph.n},m={m})"
    exact = _first_edge_exact(graph)
    if method == "exhaustive" or (method == "auto" and exhaustive_feasible(m)):
        from .matroids import graphic

        mat = graphic(graph)
        combined: dict[int, int] = {}
        for e in mat.elements:
            for stop, c in exhaustive_stop_distribution(mat, e).items():
                combined[stop] = combined.get(stop, 0) + c
        mean, variance, n = _census_summary(combined, shift=1)
        return SimulationReport(target, n, mean, variance, 0.0, seed,
                                RNG_ALGORITHM, "exhaustive", exact)
    ends = [(u - 1, v - 1) for u, v in graph.edges]
    n_v = graph.n
    s = 0.0
    s2 = 0.0
    for i in range(trials):
        perm = trial_generator(seed, i).permutation(m)
        u0, v0 = ends[perm[0]]
        uf = UnionFind(n_v)
        stop = m + 1
        for step in range(1, m):
            a, b = ends[perm[step]]
            uf.union(a, b)
            if uf.connected(u0, v0):
                stop = step + 1
                break
        s += stop
        s2 += stop * stop
    mean, variance, stderr = _sample_summary(s, s2, trials)
    return SimulationReport(target, trials, mean, variance, stderr, seed,
                            RNG_ALGORITHM, "sample", exact)
