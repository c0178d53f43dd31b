"""Constructive solvers and the brute-force enumerator used as a testing oracle.

Greedy constructions run until their state repeats up to translation, at
which point the chosen set is ultimately periodic and is returned exactly.
The state is the residue of the last pick modulo a period of the instance
together with the remaining candidate pool written relative to that pick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .epsets import Extensional, SetSequenceDesc, UPSet, a_sigma, enumerate_upsets, signed, subset_star
from .problems import (
    INF,
    PROBLEMS,
    GraphDesc,
    NeighborCounts,
    Problem,
    Variant,
    graph_solution_check,
    lcm,
)

DEFAULT_BUDGET = 20000


class SearchBudgetExceeded(RuntimeError):
    """An unbounded search ran past its budget."""


class CertificateViolation(ValueError):
    """A precondition that a construction relies on failed; ``witness`` says where."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class SolveReport:
    solution: UPSet
    trace: list = field(default_factory=list)
    exact: bool = True

    def to_json(self) -> dict:
        return {"solution": self.solution.to_json(), "trace": self.trace, "exact": self.exact}


def periodic_extension(xs: Sequence[int], j: int, i: int) -> UPSet:
    """The set x_0..x_j followed by the block x_{j+1}..x_i repeated with shift x_i - x_j."""
    members = set(xs[: i + 1])
    lo, hi = xs[j], xs[i]
    prefix = "".join("1" if n in members else "0" for n in range(lo + 1))
    period = "".join("1" if n in members else "0" for n in range(lo + 1, hi + 1))
    return UPSet(prefix, period)


def pool_greedy(
    pool: UPSet,
    update: Callable[[UPSet, int], UPSet],
    period: int,
    base: int,
    seeds: Sequence[int] = (),
    budget: int = DEFAULT_BUDGET,
    on_pick: Optional[Callable[[int, UPSet], None]] = None,
) -> UPSet:
    """Run x_{n+1} = least member of the pool above x_n, then pool := update(pool, x_{n+1}).

    ``update`` must commute with translation by ``period`` for picks at or
    beyond ``base``; under that contract the result is exact.
    """
    chosen = list(seeds)
    last = max(chosen, default=-1)
    pool = pool.above(last)
    seen: dict = {}
    for _ in range(budget):
        x = pool.next_member(last)
        if x is None:
            raise CertificateViolation("candidate pool ran out", witness=tuple(chosen))
        chosen.append(x)
        pool = update(pool, x).above(x)
        if on_pick is not None:
            on_pick(x, pool)
        last = x
        if x >= base:
            key = (x % period, pool.shift(-x))
            if key in seen:
                return periodic_extension(chosen, seen[key], len(chosen) - 1)
            seen[key] = len(chosen) - 1
    raise SearchBudgetExceeded(f"greedy construction did not settle within {budget} picks")


def _graph_period(G: GraphDesc, *sets: UPSet) -> tuple[int, int]:
    period = lcm(G.period, *(len(s.period) for s in sets))
    base = max([G.threshold] + [len(s.prefix) for s in sets]) + G.band
    return period, base


def greedy_highly_recursive_rsgr(G: GraphDesc) -> SolveReport:
    """Pick each next vertex outside the radius-2 balls of the earlier picks."""
    if not G.highly_recursive:
        raise CertificateViolation("graph is not presented as highly recursive")
    reach = G.max_edge_length()
    if reach is None:
        bad = next(v for v in G.vertices.members(G.threshold + G.band + G.period + 1)
                   if G.neighbors(v).is_infinite())
        raise CertificateViolation(f"N({bad}) is infinite", witness=bad)

    def ball(x: int) -> UPSet:
        out = UPSet.finite([x]) | G.neighbors(x)
        for y in G.neighbors(x):
            out = out | G.neighbors(y)
        return out

    trace = []
    period, base = _graph_period(G)

    def note(x, pool):
        if len(trace) < 8:
            trace.append({"pick": x, "excluded": sorted(ball(x))})

    H = pool_greedy(G.vertices, lambda pool, x: pool - ball(x), period, base + 2 * reach, on_pick=note)
    if not graph_solution_check(Variant.RSGR, G, H):
        raise AssertionError("self-check failed: greedy output is not an RSgr solution")
    return SolveReport(H, trace, exact=True)


def independent_grow(G: GraphDesc, K: UPSet, budget: int = DEFAULT_BUDGET) -> UPSet:
    """Greedy independent set inside K; each pick must have finitely many neighbors in K."""
    if not K <= G.vertices:
        raise ValueError("K is not a set of vertices")

    def update(pool, x):
        nb = G.neighbors(x)
        if (nb & K).is_infinite():
            raise CertificateViolation(f"vertex {x} has infinitely many neighbors in K", witness=x)
        return pool - nb

    period, base = _graph_period(G, K)
    return pool_greedy(K, update, period, base + period, budget=budget)


def clique_grow(G: GraphDesc, seeds: Iterable[int], candidates: Optional[UPSet] = None,
                budget: int = DEFAULT_BUDGET) -> UPSet:
    """Extend a finite clique by repeatedly adding the next candidate adjacent to all picks."""
    seeds = sorted(set(seeds))
    for i, u in enumerate(seeds):
        for v in seeds[i + 1:]:
            if not G.adj(u, v):
                raise CertificateViolation(f"seeds {u} and {v} are not adjacent", witness=(u, v))
    pool = G.vertices if candidates is None else candidates
    for s in seeds:
        pool = pool & G.neighbors(s)
    if pool.is_finite():
        raise CertificateViolation("seeds have only finitely many common neighbors", witness=tuple(seeds))
    period, base = _graph_period(G, pool)
    return pool_greedy(pool, lambda p, x: p & G.neighbors(x), period, base + period,
                       seeds=seeds, budget=budget)


# cohesive sets

def cohesive_solve(seq: Extensional, Z: UPSet) -> tuple[UPSet, str]:
    """An infinite C inside Z, cohesive for an extensional sequence, and its sign word.

    Walks the signed intersections over the head, keeping a branch that
    still meets Z infinitely often; the tail is empty or full, so every
    later set is almost contained or almost disjoint automatically.
    """
    if not isinstance(seq, Extensional):
        raise TypeError("cohesive_solve needs an extensional sequence")
    if Z.is_finite():
        raise ValueError("Z must be infinite")
    current, word = Z, ""
    for a in seq.head:
        inside = current & a
        if inside.is_infinite():
            current, word = inside, word + "1"
        else:
            current, word = current - a, word + "0"
    return current, word


# the described RSgr solver

def _far_rows(G: GraphDesc) -> list[UPSet]:
    """The neighborhoods of representative vertices, one per row class."""
    reps = G.vertices.members(G.threshold + G.band + G.period + 1)
    rows = []
    for v in reps:
        nb = G.neighbors(v).above(G.threshold + G.band + v)
        if all(not (nb == r) for r in rows):
            rows.append(nb)
    return rows


def rsgr_solve_described(G: GraphDesc, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """RSgr through the split on F = {x : N(x) finite}."""
    V = G.vertices
    full = NeighborCounts(G, V)
    F = full.where(V, lambda v, c: c != INF, depth=0)
    trace: list = [{"F": F.to_json(), "F_finite": F.is_finite()}]

    if F.is_finite():
        H = V
        for x in F:
            H = H - G.neighbors(x)
        trace.append({"case": "F finite", "removed_neighborhoods_of": list(F)})
        report = SolveReport(H, trace)
    else:
        # Almost every neighborhood agrees with one of finitely many rows.
        rows = Extensional(tuple(_far_rows(G)))
        C, word = cohesive_solve(rows, F)
        trace.append({"case": "F infinite", "cohesive": C.to_json(), "row_signs": word})

        def sign(y: int) -> bool:
            return subset_star(C, G.neighbors(y))

        constrained: dict[int, None] = {}
        bounds = []

        def update(pool, x):
            nb = G.neighbors(x)
            pool = pool - nb
            for y in nb:
                if y not in constrained:
                    constrained[y] = None
                    pool = pool & signed(G.neighbors(y), int(sign(y)))
            if len(bounds) < 8:
                spill = [C - signed(G.neighbors(y), int(sign(y))) for y in constrained]
                bounds.append({"pick": x, "bound": max((s.max() for s in spill if s), default=-1)})
            return pool

        period, base = _graph_period(G, C)
        H = pool_greedy(C, update, period, base + 2 * period, budget=budget)
        trace.append({"bounds": bounds})
        report = SolveReport(H, trace)

    if not graph_solution_check(Variant.RSGR, G, report.solution):
        raise AssertionError("self-check failed: output is not an RSgr solution")
    return report


# brute force

@lru_cache(maxsize=64)
def upsets_within(max_prefix: int, max_period: int) -> tuple[UPSet, ...]:
    return tuple(enumerate_upsets(max_prefix, max_period))


class TreePath:
    """A branch through {sigma : node_infinite(sigma)} chosen by a finite table.

    At the k-th node where both children qualify, ``choices[k]`` picks the
    child (``default`` once the table runs out); otherwise the single
    qualifying child is forced.
    """

    def __init__(self, node_infinite: Callable[[str], bool], choices: Sequence[int] = (), default: int = 0):
        self.node_infinite = node_infinite
        self.choices = tuple(choices)
        self.default = default
        self._bits: list[str] = []
        self._branchings = 0

    def _extend(self, n: int) -> None:
        while len(self._bits) <= n:
            sigma = "".join(self._bits)
            zero, one = self.node_infinite(sigma + "0"), self.node_infinite(sigma + "1")
            if zero and one:
                k = self._branchings
                bit = str(self.choices[k] if k < len(self.choices) else self.default)
                self._branchings += 1
            elif zero or one:
                bit = "1" if one else "0"
            else:
                raise CertificateViolation(f"node {sigma!r} has no infinite child", witness=sigma)
            self._bits.append(bit)

    def __call__(self, n: int) -> int:
        self._extend(n)
        return int(self._bits[n])

    def word(self, n: int) -> str:
        if n:
            self._extend(n - 1)
        return "".join(self._bits[:n])

    def __repr__(self) -> str:
        return f"TreePath(choices={self.choices}, default={self.default}, bits={''.join(self._bits[:24])!r})"


def tree_paths(node_infinite: Callable[[str], bool], max_choices: int) -> Iterator[TreePath]:
    for k in range(max_choices + 1):
        for table in product((0, 1), repeat=k):
            for default in (0, 1):
                if k and table[-1] == default:
                    continue  # same path as the shorter table
                yield TreePath(node_infinite, table, default)


def candidates(problem: Problem, instance, bounds: tuple[int, int]) -> Iterator:
    """The bounded descriptor space of a problem, in a fixed order."""
    max_prefix, max_period = bounds
    if problem.space == "set":
        domain = problem.domain(instance)
        sets = (s for s in upsets_within(max_prefix, max_period) if s <= domain)
        if problem.wrap is not None:
            return (problem.wrap(instance, s) for s in sets)
        return sets
    if problem.space == "tagged_set":
        domain = problem.domain(instance)
        return ((tag, s) for s in upsets_within(max_prefix, max_period) if s <= domain
                for tag in ("asc", "desc"))
    if problem.space == "branch":
        return tree_paths(problem.tree(instance), max_prefix)
    raise ValueError(f"problem {problem.id} has no enumerable solution space")


def brute_force_enumerate(problem_id: str, instance, bounds: tuple[int, int] = (3, 2)) -> list:
    """Every solution within the bounded descriptor space that passes the problem's predicate.

    For branch spaces the first bound caps the number of free choices.
    """
    problem = PROBLEMS[problem_id]
    return [sol for sol in candidates(problem, instance, bounds) if problem.check(instance, sol)]
