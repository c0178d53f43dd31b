"""Reductions between the problems: forward maps, decodes and the catalog.

Every record pairs ``forward(instance)`` with ``backward(source, image,
solution)``.  For strong reductions the harness passes ``None`` as the
source, so the decode sees only the forward image and the solution.
Decodes return exact descriptors wherever the output is a set; lazily
computed outputs (bit streams, range membership) are callables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from typing import Callable, Optional

from .epsets import (
    Delta02Desc,
    Extensional,
    Intensional,
    SequenceFamily,
    SetSequenceDesc,
    UPSet,
    _register_family,
    a_sigma,
    nth_element,
    subset_star,
)
from .machines import (
    FunctionalCatalog,
    OracleValue,
    eval_steps,
    halts_certified,
    jump_string,
    pair,
    string_code,
    string_decode,
    triple,
    unpair,
)
from .problems import (
    INF,
    LAZY_DEPTH,
    PROBLEMS,
    ColoringDesc,
    GraphDesc,
    InjectionDesc,
    LexOrder,
    NeighborCounts,
    Problem,
    StableColoringDesc,
    Tripartite,
    Variant,
    dnr_check,
    finite_edges,
    graph_solution_check,
    homogeneous_check,
    instance_to_json,
    lcm,
    lpo,
    order_from_json,
    register_graph_family,
    register_problem,
)
from .solvers import (
    DEFAULT_BUDGET,
    CertificateViolation,
    SearchBudgetExceeded,
    TreePath,
    independent_grow,
    pool_greedy,
)


# shared helpers

def _settle(G: GraphDesc, *sets: UPSet) -> tuple[int, int]:
    """A period and a base past which greedy updates on G and sets are translation invariant."""
    period = lcm(G.period, *(len(s.period) for s in sets))
    base = max([G.threshold] + [len(s.prefix) for s in sets]) + G.band + 2 * period
    return period, base


def heavy_vertices(G: GraphDesc, H: UPSet, scope: Optional[UPSet] = None) -> UPSet:
    """Members x of scope (default H) with H & N(x) infinite."""
    return NeighborCounts(G, H).where(H if scope is None else scope, lambda v, c: c == INF, depth=0)


def at_least(G: GraphDesc, H: UPSet, k: int) -> UPSet:
    """Members x of H with at least k neighbors in H."""
    return NeighborCounts(G, H).where(H, lambda v, c: c >= k, depth=k)


def _require(variant: Variant, G: GraphDesc, H: UPSet) -> None:
    if not graph_solution_check(variant, G, H):
        raise ValueError(f"H is not a {variant.value} solution")


def first_index_with(S: UPSet, found: Callable[[list[int]], bool], budget: int = DEFAULT_BUDGET) -> Optional[int]:
    """Least n such that found(first n members of S) holds, scanning S in order."""
    seen: list[int] = []
    if found(seen):
        return 0
    for x in islice(iter(S), budget):
        seen.append(x)
        if found(seen):
            return len(seen)
    if S.is_finite():
        return None
    raise SearchBudgetExceeded("prefix search did not finish")


def _has_edge(G: GraphDesc, xs: list[int]) -> bool:
    return bool(xs) and any(G.adj(u, xs[-1]) for u in xs[:-1])


def _has_triangle(G: GraphDesc, xs: list[int]) -> bool:
    if len(xs) < 3:
        return False
    z = xs[-1]
    nz = [u for u in xs[:-1] if G.adj(u, z)]
    return any(G.adj(u, v) for i, u in enumerate(nz) for v in nz[i + 1:])


def has_triangle(G: GraphDesc, S: UPSet) -> bool:
    """Whether S contains a triangle of G; needs a band-0 certificate.

    With band 0, a triangle can be slid down vertex by vertex inside its
    residue classes, so one exists below base + 3 * period if at all.
    """
    if G.band:
        raise ValueError("triangle search needs a band-0 certificate")
    period = lcm(G.period, len(S.period))
    window = max(G.threshold, len(S.prefix)) + 3 * period + 1
    xs = S.members(window)
    return any(_has_triangle(G, xs[: i + 1]) for i in range(len(xs)))


def edge_probe(G: GraphDesc, S: UPSet) -> OracleValue:
    """p(n) = 0 iff two of the least n members of S are adjacent."""
    if not at_least(G, S, 1):
        return OracleValue.constant(1)
    n = first_index_with(S, lambda xs: _has_edge(G, xs))
    return OracleValue((1,) * n, 0)


def triangle_probe(G: GraphDesc, S: UPSet) -> OracleValue:
    """q(n) = 0 iff three of the least n members of S form a triangle."""
    if not has_triangle(G, S):
        return OracleValue.constant(1)
    n = first_index_with(S, lambda xs: _has_triangle(G, xs))
    return OracleValue((1,) * n, 0)


def _cached_nth(fn: Callable[[tuple, int], UPSet]) -> Callable[[tuple, int], UPSet]:
    return lru_cache(maxsize=4096)(fn)


# RAN <= RSg for locally finite graphs

def range_coding(f: InjectionDesc) -> GraphDesc:
    """Edges v < s with f(s) < f(v); finite, so the graph is highly recursive."""
    top = max(len(f.table), max(f.table, default=0) - f.shift + 1)
    edges = [(v, s) for s in range(top) for v in range(s) if f(s) < f(v)]
    return finite_edges(edges)


@dataclass(frozen=True)
class RangeMembership:
    """n is in ran(f) iff f(s) = n for some s up to the (n + slack)-th element of H."""

    f: InjectionDesc
    H: UPSet
    slack: int = 1

    def witness_bound(self, n: int) -> int:
        return nth_element(self.H, n + self.slack)

    def __call__(self, n: int) -> bool:
        return any(self.f(s) == n for s in range(self.witness_bound(n) + 1))

    def to_json(self) -> dict:
        return {"kind": "range_membership", "H": self.H.to_json(),
                "window": [int(self(n)) for n in range(len(self.f.table) + self.f.shift + 4)]}


def range_decode(f: InjectionDesc, G: GraphDesc, H: UPSet, slack: int = 1) -> RangeMembership:
    _require(Variant.RSG, G, H)
    return RangeMembership(f, H, slack)


# ADS and CADS through wRSg on the order graph

@register_graph_family("order_graph")
def _order_graph(params: dict) -> GraphDesc:
    return order_to_graph(order_from_json(params["order"]))


def order_to_graph(L: Tripartite) -> GraphDesc:
    """u < v are adjacent iff u precedes v in L as well."""
    if not isinstance(L, Tripartite):
        raise TypeError("order_to_graph needs a tripartite order")
    threshold = max(len(L.asc.prefix), len(L.desc.prefix), max(L.middle, default=-1) + 1)
    period = lcm(len(L.asc.period), len(L.desc.period))
    return GraphDesc(L.domain, lambda u, v: L.less(u, v), threshold, period, 0,
                     "order_graph", {"order": L.to_json()})


def graph_predecessors(G: GraphDesc, x: int) -> UPSet:
    """{y : y <_L x} read off an order graph: smaller and adjacent, or larger and not."""
    nb = G.neighbors(x)
    return (nb.below(x) | (G.vertices - nb).above(x))


def graph_successors(G: GraphDesc, x: int) -> UPSet:
    nb = G.neighbors(x)
    return (nb.above(x) | (G.vertices - nb).below(x)) - UPSet.finite([x])


def ads_decode(G: GraphDesc, H: UPSet, trace: Optional[list] = None,
               cut_below: bool = True) -> tuple[str, UPSet]:
    """An ascending or descending sequence inside a wRSg solution of the order graph."""
    _require(Variant.WRSG, G, H)
    I = heavy_vertices(G, H)
    period, base = _settle(G, H, I)
    if not I:
        # no vertex sees infinitely much of H: walk downward in the order
        S = pool_greedy(H, lambda pool, x: pool & graph_predecessors(G, x), period, base)
        case, tag = "no heavy vertex", "desc"
    else:
        light = NeighborCounts(G, I).where(I, lambda v, c: c != INF, depth=0)
        if light:
            x = light.min()
            nbrs = G.neighbors(x) & H
            inner = nbrs & I
            b = inner.max() if (inner and cut_below) else -1
            S = nbrs.above(b)
            case, tag = f"heavy vertex {x} with finitely many heavy neighbors, cut at {b}", "desc"
        else:
            S = pool_greedy(I, lambda pool, x: I & G.neighbors(x), period, base)
            case, tag = "every heavy vertex has infinitely many heavy neighbors", "asc"
    if trace is not None:
        trace.append({"heavy": I.to_json(), "case": case, "tag": tag})
    return tag, S


def triple_search_trace(G: GraphDesc, H: UPSet, count: int, clique: bool = False) -> list[int]:
    """The first picks of the triple-code search.

    x_0 is the least vertex with two H-neighbors; x_{n+1} is the y of the
    least code <y, w, z> with x_n < y, y adjacent to x_n (to every pick
    when ``clique`` is set), w != z and w, z in H & N(y).  The exact
    decodes pick the least such y instead, which keeps them periodic.
    """
    I = at_least(G, H, 2)
    xs = [I.min()]
    while len(xs) < count:
        best = None
        for y in I:
            if best is not None and pair(y, 0) > best[0]:
                break
            if y <= xs[-1] or not all(G.adj(x, y) for x in (xs if clique else xs[-1:])):
                continue
            a, b = (G.neighbors(y) & H).first(2)
            code = triple(y, b, a)  # pair(b, a) < pair(a, b) when a < b
            if best is None or code < best[0]:
                best = (code, y)
        xs.append(best[1])
    return xs


def cads_decode(G: GraphDesc, H: UPSet, trace: Optional[list] = None,
                budget: int = DEFAULT_BUDGET) -> UPSet:
    """A stable suborder: copy H until two vertices each see two others, then climb."""
    _require(Variant.WRSG, G, H)
    R = at_least(G, H, 2)
    if R.is_finite() and len(R) < 2:
        if trace is not None:
            trace.append({"switch": None})
        return H
    counts: dict[int, int] = {}
    seen: list[int] = []
    s0 = None
    for h in islice(iter(H), budget):
        for u in seen:
            if G.adj(u, h):
                counts[u] = counts.get(u, 0) + 1
                counts[h] = counts.get(h, 0) + 1
        seen.append(h)
        if sum(1 for c in counts.values() if c >= 2) >= 2:
            s0 = len(seen) - 1
            break
    if s0 is None:
        raise SearchBudgetExceeded("switch stage not found")
    prefix = seen[:s0]
    first = R.next_member(prefix[-1])
    if first is None:
        raise CertificateViolation("no vertex with two H-neighbors above the copied prefix", witness=prefix)
    period, base = _settle(G, H, R)
    C = pool_greedy(R & graph_successors(G, first), lambda pool, y: R & graph_successors(G, y),
                    period, base, seeds=prefix + [first], budget=budget)
    if trace is not None:
        trace.append({"switch": s0, "copied": prefix, "first": first})
    return C


# SRT22 through wRSg and wRSgr on the graph of color-1 pairs

@register_graph_family("stable_graph")
def _stable_graph(params: dict) -> GraphDesc:
    data = params["coloring"]
    return stable_to_graph(StableColoringDesc(UPSet.from_json(data["limit"]),
                                              tuple(tuple(o) for o in data.get("overrides", []))))


def stable_to_graph(c: StableColoringDesc) -> GraphDesc:
    threshold = max(c.support, len(c.limit.prefix))
    return GraphDesc(UPSet.full(), lambda u, v: c(u, v) == 1, threshold, len(c.limit.period), 0,
                     "stable_graph", {"coloring": c.to_json()})


def srt_decode(G: GraphDesc, H: UPSet, trace: Optional[list] = None) -> UPSet:
    """Independent set above the heavy vertices when they are finite, else a clique of them."""
    _require(Variant.WRSG, G, H)
    I = heavy_vertices(G, H)
    period, base = _settle(G, H, I)
    if I.is_finite():
        b = I.max() if I else -1
        K = pool_greedy(H.above(b), lambda pool, x: pool - G.neighbors(x), period, base)
        case = f"finitely many heavy vertices, independent above {b}"
    else:
        K = pool_greedy(I, lambda pool, x: pool & G.neighbors(x), period, base)
        case = "infinitely many heavy vertices, clique among them"
    if trace is not None:
        trace.append({"heavy": I.to_json(), "case": case})
    return K


def srt_lpo_decode(G: GraphDesc, H: UPSet, no_edge: int, trace: Optional[list] = None) -> UPSet:
    """With the answer to "H has no edge": H itself, or a clique grown greedily inside H."""
    _require(Variant.WRSGR, G, H)
    if no_edge == 1:
        return H
    x0 = at_least(G, H, 1).min()
    period, base = _settle(G, H)
    K = pool_greedy(H & G.neighbors(x0), lambda pool, x: pool & G.neighbors(x), period, base, seeds=[x0])
    if trace is not None:
        trace.append({"seed": x0})
    return K


def remove_bars(G: GraphDesc, H: UPSet) -> UPSet:
    """Scan H and drop each element that is the least H-neighbor of an element already kept."""
    period, base = _settle(G, H)

    def update(pool, x):
        nb = G.neighbors(x) & H
        if nb and nb.min() > x:
            pool = pool - UPSet.finite([nb.min()])
        return pool

    return pool_greedy(H, update, period, base)


def srt_2lpo_probes(G: GraphDesc, H: UPSet, bar_removal: bool = True) -> tuple[UPSet, OracleValue, OracleValue]:
    Hb = remove_bars(G, H) if bar_removal else H
    return Hb, edge_probe(G, Hb), triangle_probe(G, Hb)


def srt_2lpo_decode(G: GraphDesc, H: UPSet, answers: tuple[int, int], bar_removal: bool = True,
                    trace: Optional[list] = None) -> UPSet:
    """With answers to "no edge" and "no triangle" after bar removal, a homogeneous set."""
    _require(Variant.WRSG, G, H)
    Hb = remove_bars(G, H) if bar_removal else H
    no_edge, no_triangle = answers
    if trace is not None:
        trace.append({"bars_removed": Hb.to_json(), "answers": list(answers)})
    if (no_edge, no_triangle) == (1, 1):
        return Hb
    if (no_edge, no_triangle) == (0, 1):
        hubs = at_least(G, Hb, 2)
        if not hubs:
            raise CertificateViolation("no vertex with two neighbors after bar removal", witness=Hb.to_json())
        return Hb & G.neighbors(hubs.min())
    if (no_edge, no_triangle) == (0, 0):
        # picks must stay among vertices that see two others; the rest may be dead ends
        I = at_least(G, H, 2)
        period, base = _settle(G, H, I)
        return pool_greedy(I, lambda pool, x: pool & G.neighbors(x), period, base)
    raise CertificateViolation("a triangle without an edge is impossible", witness=answers)


# cRT1_3 <= ADC

def rt13_stages(c: Callable[[int], int], stages: int) -> list[dict]:
    """Run the stagewise construction; entry s holds the order on {0..s} as (A, M, D) lists."""
    out = []
    A, M, D = [0], [], []
    last = frozenset([c(0)])
    col_a, col_d = c(0), None
    out.append({"A": list(A), "M": list(M), "D": list(D), "last": sorted(last), "colors": (col_a, col_d)})
    for s in range(stages - 1):
        t = s + 1
        prev = next((u for u in range(s, -1, -1) if c(u) != c(t)), None)
        new_last = frozenset([c(t)] if prev is None else [c(prev), c(t)])
        if new_last == last:
            if c(t) == col_a:
                A.append(t)
            else:
                D.insert(0, t)
        else:
            M = A + M + D
            lo, hi = min(new_last), max(new_last)
            if c(t) == lo:
                A, D, col_a, col_d = [t], [], lo, hi
            else:
                A, D, col_a, col_d = [], [t], lo, hi
            last = new_last
        out.append({"A": list(A), "M": list(M), "D": list(D), "last": sorted(last), "colors": (col_a, col_d)})
    return out


def staged_order(c: ColoringDesc) -> Tripartite:
    """The settled order A + M + D of the stagewise construction, for any number of colors."""
    start = max(len(cls.prefix) for cls in c.classes)
    period = lcm(*(len(cls.period) for cls in c.classes))
    if len({c(n) for n in range(start, start + period)}) > 2:
        raise ValueError("three colors recur forever, so the construction never settles")
    settled = start + 2 * period + 2
    stage = rt13_stages(c, settled + 1)[-1]
    col_a, col_d = stage["colors"]
    tail = UPSet.interval(settled + 1)
    asc = UPSet.finite(stage["A"]) | (c.classes[col_a] & tail)
    desc = UPSet.finite(stage["D"])
    if col_d is not None:
        desc = desc | (c.classes[col_d] & tail)
    return Tripartite(asc, tuple(stage["M"]), desc)


def rt13_to_adc(c: ColoringDesc) -> Tripartite:
    if c.k != 3:
        raise ValueError("expects a 3-coloring")
    return staged_order(c)


def rt13_decode(c: ColoringDesc, L: Tripartite, S: UPSet) -> int:
    return c(S.min())


# CADS and COH

def _order_successors(params: tuple, i: int) -> UPSet:
    (L,) = params
    return L.successors(i) if i in L.domain else UPSet.empty()


def _order_horizon(params: tuple, probe) -> int:
    (L,) = params
    # past the middle, successor sets of A-elements agree up to finite sets; D-elements have finite ones
    threshold = max(len(L.asc.prefix), len(L.desc.prefix), max(L.middle, default=-1) + 1)
    return threshold + lcm(len(L.asc.period), len(L.desc.period)) + 1


_register_family(SequenceFamily("order_successors", _cached_nth(_order_successors), _order_horizon))


def cads_to_coh(L: Tripartite) -> Intensional:
    return Intensional("order_successors", (L,))


def coh_to_cads(seq: Extensional) -> LexOrder:
    return LexOrder(seq)


def identity_decode(source, image, solution):
    return solution


# INForONE and oCOH

def _later_membership(seq: Extensional, x: int, i: int) -> UPSet:
    """{k : no j in [i, k] has x in seq[j]}."""
    if seq.tail_full:
        raise ValueError("a full tail puts every number in infinitely many sets")
    js = [j for j in range(i, len(seq.head)) if x in seq.head[j]]
    return UPSet.interval(0, js[0]) if js else UPSet.full()


def _interleave2(params: tuple, k: int) -> UPSet:
    (seq,) = params
    if k % 2 == 0:
        return seq.nth(k // 2)
    x, i = unpair((k - 1) // 2)
    return _later_membership(seq, x, i)


def _interleave3(params: tuple, k: int) -> UPSet:
    seq, f = params
    if k % 3 == 0:
        return seq.nth(k // 3)
    if k % 3 == 1:
        x, i = unpair(k // 3)
        return _later_membership(seq, x, i)
    x = k // 3
    out = UPSet.full() if x in f.limit else UPSet.empty()
    for n, s, bit in f.overrides:
        if n == x:
            out = (out | UPSet.finite([s])) if bit else (out - UPSet.finite([s]))
    return out


_register_family(SequenceFamily("witness_interleave", _cached_nth(_interleave2)))
_register_family(SequenceFamily("witness_interleave_delta", _cached_nth(_interleave3)))


def inforone_to_ocoh(seq: Extensional) -> Intensional:
    if not isinstance(seq, Extensional) or seq.tail_full:
        raise ValueError("expects an extensional sequence with empty tail")
    return Intensional("witness_interleave", (seq,))


def _escape_index(r: Callable[[int], int], x: int, budget: int) -> int:
    """Least i with r(<x, i>) = 1."""
    for i in range(budget):
        if r(pair(x, i)) == 1:
            return i
    raise SearchBudgetExceeded(f"no escape index found for {x}")


def _greedy_from_branch(seq: Extensional, q: Callable[[int], int], r: Callable[[int], int],
                        within: UPSet, bounded: bool, budget: int = DEFAULT_BUDGET) -> UPSet:
    h = len(seq.head)
    chosen: list[int] = []
    escapes: dict[int, int] = {}
    for n in range(budget):
        m = n + 1 + (max((escapes[x] for x in chosen), default=0) if bounded else 0)
        pool = within & a_sigma(seq, "".join(str(q(i)) for i in range(m)))
        if m >= h:
            # from here on the pool no longer changes, so the rest of it is taken in order
            return UPSet.finite(chosen) | pool
        pool = pool - UPSet.finite(chosen)
        if not pool:
            raise CertificateViolation("branch pool is empty", witness=tuple(chosen))
        x = pool.min()
        chosen.append(x)
        escapes[x] = _escape_index(r, x, budget)
    raise SearchBudgetExceeded("greedy did not reach the head length")


def inforone_from_ocoh(seq: Extensional, p: Callable[[int], int], bounded: bool = True) -> UPSet:
    return _greedy_from_branch(seq, lambda i: p(2 * i), lambda k: p(2 * k + 1), UPSet.full(), bounded)


def _code_sets(params: tuple, k: int) -> UPSet:
    (seq,) = params
    return a_sigma(seq, string_decode(k)).above(k)


def _code_horizon(params: tuple, D: UPSet) -> int:
    (seq,) = params
    h = len(seq.head)
    top = 2 ** (h + 1) - 1
    for k in range(2 ** h):
        tau = format(k, f"0{h}b") if h else ""
        hit = D & a_sigma(seq, tau)
        if hit and hit.is_finite():
            top = max(top, hit.max() + 1)
    return top + 1


_register_family(SequenceFamily("branch_codes", _cached_nth(_code_sets), _code_horizon))


def ocoh_to_inforone(seq: Extensional) -> Intensional:
    if not isinstance(seq, Extensional):
        raise ValueError("expects an extensional sequence")
    return Intensional("branch_codes", (seq,))


class WitnessPath:
    """Bits of a branch read from D: at each node, the child whose code set meets D twice first."""

    def __init__(self, seq: SetSequenceDesc, D: UPSet):
        self.seq, self.D = seq, D
        self._bits: list[str] = []
        self._node = D  # D & A^rho for the current word rho

    def _second_hit(self, word: str, hits: UPSet) -> float:
        code = string_code(word)
        x1 = hits.next_member(code)
        x2 = None if x1 is None else hits.next_member(x1)
        return INF if x2 is None else x2

    def _extend(self, n: int) -> None:
        while len(self._bits) <= n:
            rho = "".join(self._bits)
            a = self.seq.nth(len(rho))
            inside, outside = self._node & a, self._node - a
            zero, one = self._second_hit(rho + "0", outside), self._second_hit(rho + "1", inside)
            if zero == one == INF:
                raise CertificateViolation(f"neither child of {rho!r} meets D twice", witness=rho)
            bit = "0" if zero < one else "1"
            self._bits.append(bit)
            self._node = outside if bit == "0" else inside

    def __call__(self, n: int) -> int:
        self._extend(n)
        return int(self._bits[n])

    def word(self, n: int) -> str:
        if n:
            self._extend(n - 1)
        return "".join(self._bits[:n])

    def __repr__(self) -> str:
        return f"WitnessPath({''.join(self._bits[:24])!r})"


def ocoh_from_inforone(seq: Extensional, D: UPSet) -> WitnessPath:
    return WitnessPath(seq, D)


# the same pair relative to a limit-computable set

def inforone_d_to_ocoh_d(instance: tuple[Delta02Desc, Extensional]) -> tuple[Delta02Desc, Intensional]:
    f, seq = instance
    if seq.tail_full:
        raise ValueError("expects an extensional sequence with empty tail")
    return f, Intensional("witness_interleave_delta", (seq, f))


def inforone_d_from_ocoh_d(instance, image, p) -> UPSet:
    f, seq = instance
    # the third interleaved strand spells out lim f; read it over a window of its own shape
    Z = UPSet.from_predicate(lambda x: p(3 * x + 2) == 1, len(f.limit.prefix), len(f.limit.period))
    return _greedy_from_branch(seq, lambda i: p(3 * i), lambda k: p(3 * k + 1), Z, bounded=True)


def ocoh_d_to_inforone_d_star(instance: tuple[Delta02Desc, Extensional]) -> tuple[Delta02Desc, Intensional]:
    f, seq = instance
    return f, ocoh_to_inforone(seq)


def ocoh_d_from_inforone_d_star(instance, image, D: UPSet) -> WitnessPath:
    f, seq = instance
    if not subset_star(D, f.limit):
        raise ValueError("D is not almost inside lim f")
    return WitnessPath(seq, D)


# DNR_2 relative to the double jump, through cohesion over string codes

@dataclass(frozen=True)
class StringApproximation:
    """Z: the stage approximations to the double jump of ``oracle``, as string codes.

    The sets are A_e = {sigma : program e on input e with oracle sigma halts
    within |sigma| steps with output 0}.  Z is not a UPSet, so the cohesion
    question is answered in closed form: membership of the long strings of
    Z in A_e settles once |sigma| passes e's certificate.
    """

    catalog: FunctionalCatalog
    oracle: OracleValue

    def first_jump(self) -> OracleValue:
        return OracleValue(tuple(int(halts_certified(self.catalog, e, self.oracle, e) is not None)
                                 for e in range(len(self.catalog))), 0)

    def double_jump(self) -> OracleValue:
        j1 = self.first_jump()
        return OracleValue(tuple(int(halts_certified(self.catalog, e, j1, e) is not None)
                                 for e in range(len(self.catalog))), 0)

    def approx(self, n: int) -> str:
        """The member of Z of length n."""
        return jump_string(self.catalog, self.first_jump(), n)

    def in_Z(self, code: int) -> bool:
        sigma = string_decode(code)
        return sigma == self.approx(len(sigma))

    def f(self, code: int, s: int) -> int:
        """Stage-s guess at membership in Z, using the stage-s guess at the first jump."""
        sigma = string_decode(code)
        tau = OracleValue.from_bits(jump_string(self.catalog, self.oracle, s))
        steps = min(len(sigma), s)
        for e, bit in enumerate(sigma):
            halted = e < len(self.catalog) and eval_steps(self.catalog, e, tau, e, steps) is not None
            if int(halted) != int(bit):
                return 0
        return 1

    def in_A(self, e: int, code: int) -> bool:
        sigma = string_decode(code)
        if e >= len(self.catalog):
            return False
        return eval_steps(self.catalog, e, OracleValue.from_bits(sigma), e, len(sigma)) == 0

    def eventual(self, e: int) -> int:
        """Whether almost every member of Z lies in A_e."""
        if e >= len(self.catalog):
            return 0
        return int(halts_certified(self.catalog, e, self.double_jump(), e) == 0)

    def node_infinite(self, sigma: str) -> bool:
        return all(int(b) == self.eventual(e) for e, b in enumerate(sigma))

    def to_json(self) -> dict:
        return {"kind": "string_approximation", "catalog": self.catalog.to_json(),
                "oracle": self.oracle.to_json()}


def dnr3_to_ocoh_d(instance: tuple[FunctionalCatalog, OracleValue]) -> StringApproximation:
    cat, oracle = instance
    return StringApproximation(cat, oracle)


def _bits_of(g) -> Callable[[int], int]:
    if isinstance(g, (list, tuple, str)):
        return lambda i: int(g[i]) if i < len(g) else 0
    return g


def string_ocoh_check(inst: StringApproximation, g, depth: Optional[int] = None) -> bool:
    bit = _bits_of(g)
    depth = len(inst.catalog) + 8 if depth is None else depth
    return inst.node_infinite("".join(str(bit(e)) for e in range(depth)))


def dnr3_check(instance: tuple[FunctionalCatalog, OracleValue], g) -> bool:
    cat, oracle = instance
    bit = _bits_of(g)
    return dnr_check(cat, StringApproximation(cat, oracle).double_jump(), [bit(e) for e in range(len(cat))], True)


# INForONE-D* <= RSg through the three-layer gadget

def gadget_to_rsg(instance: tuple[Delta02Desc, Extensional]) -> GraphDesc:
    """Vertices 3i (layer w), 3n+1 (layer x), 3i+2 (layer y).

    w_i ~ y_j for j < i, w_i ~ x_n for i < n, x_n ~ y_i for n in A_i, and
    x_n ~ x_s for n < s with f(n, s) = 0.
    """
    f, seq = instance
    if seq.tail_full:
        raise ValueError("expects an extensional sequence with empty tail")
    head = seq.head

    def layer(v):
        return v % 3, v // 3

    def adjacent(u, v):
        (a, i), (b, j) = layer(u), layer(v)
        if a == b:
            return a == 1 and f(i, j) == 0
        if (a, b) == (1, 0) or (a, b) == (0, 1):
            w, x = (i, j) if a == 0 else (j, i)
            return w < x
        if {a, b} == {0, 2}:
            w, y = (i, j) if a == 0 else (j, i)
            return y < w
        x, y = (i, j) if a == 1 else (j, i)
        return y < len(head) and x in head[y]

    scale = max([len(head), len(f.limit.prefix), f.settle_stage, f.touched]
                + [len(s.prefix) for s in head]) + 1
    period = 3 * lcm(len(f.limit.period), *(len(s.period) for s in head))
    return GraphDesc(UPSet.full(), adjacent, 3 * scale, period, 2, "gadget",
                     {"instance": instance_to_json(instance)})


@register_graph_family("gadget")
def _gadget(params: dict) -> GraphDesc:
    from .problems import instance_from_json
    return gadget_to_rsg(instance_from_json(params["instance"]))


def gadget_decode(source, G: GraphDesc, H: UPSet) -> UPSet:
    """D = {n : x_n in H}."""
    return UPSet.from_predicate(lambda n: 3 * n + 1 in H, len(H.prefix) // 3 + 1, len(H.period))


def gadget_decode_all_layers(source, G: GraphDesc, H: UPSet) -> UPSet:
    """Tampered: keeps n whenever any of w_n, x_n, y_n is in H."""
    return UPSet.from_predicate(lambda n: any(3 * n + j in H for j in range(3)),
                                len(H.prefix) // 3 + 1, len(H.period))


def gadget_claims(instance: tuple[Delta02Desc, Extensional], H: UPSet) -> dict:
    """At most one w-vertex in H, and at most one x_n with n outside lim f."""
    f, _ = instance
    w_layer = H & UPSet("", "100")
    outside = UPSet.from_predicate(lambda v: v % 3 == 1 and (v // 3) not in f.limit,
                                   3 * len(f.limit.prefix) + 3, 3 * len(f.limit.period))
    x_out = H & outside
    return {"w": INF if w_layer.is_infinite() else len(w_layer),
            "x_outside": INF if x_out.is_infinite() else len(x_out)}


# wRSgr <= wRSg

PAIRING_PREFIX = 12


def pairing_schedule(G: GraphDesc, I: UPSet, count: int) -> list[int]:
    """x_0 = min I; for n = <m, s>, x_{n+1} is the least y in I & N(x_m) above x_n."""
    xs = [I.min()]
    for n in range(count - 1):
        m, _ = unpair(n)
        y = (I & G.neighbors(xs[m])).next_member(xs[-1])
        if y is None:
            raise CertificateViolation(f"I & N({xs[m]}) is finite", witness=xs[m])
        xs.append(y)
    return xs


def wrsgr_from_wrsg(source, G: GraphDesc, H: UPSet, trace: Optional[list] = None) -> UPSet:
    _require(Variant.WRSG, G, H)
    I = heavy_vertices(G, H)
    if I.is_finite():
        case, out = "finitely many heavy vertices", independent_grow(G, H - I)
    else:
        light = NeighborCounts(G, I).where(I, lambda v, c: c != INF, depth=0)
        if light:
            v = light.min()
            case, out = f"heavy vertex {v} with finitely many heavy neighbors", \
                independent_grow(G, (H & G.neighbors(v)) - I)
        else:
            xs = pairing_schedule(G, I, PAIRING_PREFIX)
            # every heavy vertex sees infinitely many heavy ones, so the rest of I may follow
            case, out = "all heavy vertices see infinitely many heavy ones", \
                UPSet.finite(xs) | I.above(xs[-1])
    if trace is not None:
        trace.append({"heavy": I.to_json(), "case": case})
    return out


# RT1 <= wRSg

@register_graph_family("color_classes")
def _color_classes(params: dict) -> GraphDesc:
    return rt1_to_wrsg(ColoringDesc(tuple(UPSet.from_json(c) for c in params["coloring"]["classes"])))


def rt1_to_wrsg(c: ColoringDesc) -> GraphDesc:
    threshold = max(len(cls.prefix) for cls in c.classes)
    period = lcm(*(len(cls.period) for cls in c.classes))
    return GraphDesc(UPSet.full(), lambda u, v: c(u) == c(v), threshold, period, 0,
                     "color_classes", {"coloring": c.to_json()})


def rt1_decode(source, G: GraphDesc, H: UPSet, need: int = 2) -> UPSet:
    hubs = at_least(G, H, need)
    if not hubs:
        raise CertificateViolation(f"no vertex of H has {need} neighbors in H")
    return H & G.neighbors(hubs.min())


# cylinders: id x wRSg <= wRSg

@dataclass(frozen=True)
class CylinderGraph:
    """G transported onto the codes of the initial segments of p."""

    p: OracleValue
    G: GraphDesc

    def code(self, n: int) -> int:
        return string_code(self.p.bits(n))

    def length_of(self, code: int) -> Optional[int]:
        sigma = string_decode(code)
        return len(sigma) if sigma == self.p.bits(len(sigma)) else None

    def adj(self, a: int, b: int) -> bool:
        m, n = self.length_of(a), self.length_of(b)
        return m is not None and n is not None and self.G.adj(m, n)

    def to_json(self) -> dict:
        return {"kind": "cylinder", "p": self.p.to_json(), "graph": self.G.to_json()}


@dataclass(frozen=True)
class CodeSet:
    """The codes of p|n for n in ``lengths``."""

    p: OracleValue
    lengths: UPSet

    def __contains__(self, code: int) -> bool:
        sigma = string_decode(code)
        return len(sigma) in self.lengths and sigma == self.p.bits(len(sigma))

    def __iter__(self):
        for n in self.lengths:
            yield string_code(self.p.bits(n))

    def to_json(self) -> dict:
        return {"kind": "codes", "p": self.p.to_json(), "lengths": self.lengths.to_json()}


def cylindrify(instance: tuple[OracleValue, GraphDesc]) -> CylinderGraph:
    p, G = instance
    if G.vertices != UPSet.full():
        raise ValueError("cylinders are built over graphs on all of N")
    return CylinderGraph(p, G)


class CodeReadout:
    """q(n) read from the first code in the set whose string is longer than n."""

    def __init__(self, codes: CodeSet, budget: int = DEFAULT_BUDGET):
        self.codes, self.budget = codes, budget

    def __call__(self, n: int) -> int:
        for code in islice(iter(self.codes), self.budget):
            sigma = string_decode(code)
            if len(sigma) > n:
                return int(sigma[n])
        raise SearchBudgetExceeded(f"no code longer than {n}")

    def bits(self, n: int) -> str:
        return "".join(str(self(i)) for i in range(n))


def cylinder_decode(source, image: CylinderGraph, codes: CodeSet) -> tuple[CodeReadout, UPSet]:
    q = CodeReadout(codes)
    L = codes.lengths
    H = UPSet.from_predicate(lambda n: string_code(q.bits(n)) in codes, len(L.prefix), len(L.period))
    return q, H


def _oracle_window(p: OracleValue) -> int:
    extra = len(p.tail.prefix) + len(p.tail.period) if isinstance(p.tail, UPSet) else 0
    return len(p.table) + extra + 16


def cylinder_source_check(instance: tuple[OracleValue, GraphDesc], solution) -> bool:
    p, G = instance
    q, H = solution
    n = _oracle_window(p)
    return all(q(i) == p(i) for i in range(n)) and graph_solution_check(Variant.WRSG, G, H)


def cylinder_target_check(image: CylinderGraph, codes: CodeSet) -> bool:
    # under n -> code(p|n) the cylinder graph is G and the code set is its length set
    if codes.p != image.p:
        return False
    return graph_solution_check(Variant.WRSG, image.G, codes.lengths)


# extra problems for the sources and targets above

register_problem(Problem("cRT1", lambda c, i: c.classes[i].is_infinite(), "function",
                         summary="a color with infinitely many members"))
register_problem(Problem("DNR3", dnr3_check, "function",
                         summary="a 0-1 function avoiding the diagonal relative to the double jump"))
register_problem(Problem("oCOH-D-codes", lambda inst, g: string_ocoh_check(inst, g), "branch",
                         tree=lambda inst: inst.node_infinite,
                         summary="branch through the string-code sets inside Z"))
register_problem(Problem("id*wRSg", cylinder_source_check, "function",
                         summary="a copy of p together with a wRSg solution"))
register_problem(Problem("wRSg-codes", cylinder_target_check, "set",
                         domain=lambda cyl: UPSet.full(), wrap=lambda cyl, L: CodeSet(cyl.p, L),
                         summary="wRSg on a cylinder graph, given by the lengths of its codes"))


# the catalog

@dataclass(frozen=True)
class ReductionRecord:
    id: str
    source: str
    target: str
    forward: Callable
    backward: Callable
    strong: bool
    statement: str
    bounds: tuple[int, int] = (3, 2)


@dataclass(frozen=True)
class Mutant:
    """A deliberately broken decode that verification must reject."""

    id: str
    base: str
    backward: Callable
    note: str


def _srt_lpo(c, G, H):
    return srt_lpo_decode(G, H, lpo(edge_probe(G, H)))


def _srt_2lpo(c, G, H, bar_removal=True):
    Hb, p, q = srt_2lpo_probes(G, H, bar_removal)
    return srt_2lpo_decode(G, H, (lpo(p), lpo(q)), bar_removal)


REDUCTIONS: dict[str, ReductionRecord] = {}


def _add(record: ReductionRecord) -> None:
    if record.source not in PROBLEMS or record.target not in PROBLEMS:
        raise ValueError(f"{record.id}: unknown problem")
    REDUCTIONS[record.id] = record


_add(ReductionRecord("range_coding", "RAN", "RSg", range_coding,
                     lambda f, G, H: range_decode(f, G, H), False,
                     "RAN is Weihrauch reducible to RSg on highly recursive graphs"))
_add(ReductionRecord("ads_decode", "ADS", "wRSg", order_to_graph,
                     lambda L, G, H: ads_decode(G, H), False,
                     "ADS is Weihrauch reducible to wRSg"))
_add(ReductionRecord("cads_decode", "CADS", "wRSg", order_to_graph,
                     lambda L, G, H: cads_decode(G, H), True,
                     "CADS is strongly Weihrauch reducible to wRSg"))
_add(ReductionRecord("srt_decode", "SRT22", "wRSg", stable_to_graph,
                     lambda c, G, H: srt_decode(G, H), False,
                     "SRT22 is computably reducible to wRSg"))
_add(ReductionRecord("srt_lpo_decode", "SRT22", "wRSgr", stable_to_graph, _srt_lpo, False,
                     "SRT22 reduces to wRSgr with one LPO answer"))
_add(ReductionRecord("srt_2lpo_decode", "SRT22", "wRSg", stable_to_graph, _srt_2lpo, False,
                     "SRT22 reduces to wRSg with two LPO answers"))
_add(ReductionRecord("rt13_to_adc", "cRT1", "ADC", rt13_to_adc,
                     lambda c, L, S: rt13_decode(c, L, S), False,
                     "the color problem for 3-colorings is Weihrauch reducible to ADC"))
_add(ReductionRecord("cads_to_coh", "CADS", "COH", cads_to_coh, identity_decode, True,
                     "CADS is strongly Weihrauch reducible to COH"))
_add(ReductionRecord("coh_to_cads", "COH", "CADS", coh_to_cads, identity_decode, True,
                     "COH is strongly Weihrauch reducible to CADS"))
_add(ReductionRecord("inforone_to_ocoh", "INForONE", "oCOH", inforone_to_ocoh,
                     lambda seq, image, p: inforone_from_ocoh(seq, p), False,
                     "INForONE is Weihrauch reducible to oCOH"))
_add(ReductionRecord("ocoh_to_inforone", "oCOH", "INForONE", ocoh_to_inforone,
                     lambda seq, image, D: ocoh_from_inforone(seq, D), False,
                     "oCOH is Weihrauch reducible to INForONE"))
_add(ReductionRecord("inforoneD_to_ocohD", "INForONE-D", "oCOH-D", inforone_d_to_ocoh_d,
                     inforone_d_from_ocoh_d, False,
                     "INForONE relative to a limit set reduces to the ordered version"))
_add(ReductionRecord("ocohD_to_inforoneDstar", "oCOH-D", "INForONE-D*", ocoh_d_to_inforone_d_star,
                     ocoh_d_from_inforone_d_star, False,
                     "ordered cohesion relative to a limit set reduces to INForONE almost inside it"))
_add(ReductionRecord("dnr3_to_ocohD", "DNR3", "oCOH-D-codes", dnr3_to_ocoh_d, identity_decode, True,
                     "DNR_2 relative to the double jump strongly reduces to ordered cohesion inside Z"))
_add(ReductionRecord("gadget_to_rsg", "INForONE-D*", "RSg", gadget_to_rsg, gadget_decode, True,
                     "INForONE almost inside a limit set strongly reduces to RSg", bounds=(2, 6)))
_add(ReductionRecord("wrsg_to_wrsgr", "wRSgr", "wRSg", lambda G: G, wrsgr_from_wrsg, True,
                     "wRSgr is strongly Weihrauch reducible to wRSg"))
_add(ReductionRecord("rt1_to_wrsg", "RT1", "wRSg", rt1_to_wrsg, rt1_decode, True,
                     "RT1 is strongly Weihrauch reducible to wRSg"))
_add(ReductionRecord("cylindrify", "id*wRSg", "wRSg-codes", cylindrify, cylinder_decode, True,
                     "wRSg is a cylinder"))


MUTANTS: dict[str, Mutant] = {m.id: m for m in (
    Mutant("inforone_to_ocoh/no_escape_bound", "inforone_to_ocoh",
           lambda seq, image, p: inforone_from_ocoh(seq, p, bounded=False),
           "reads q only up to n + 1 instead of n + 1 + max b(x_i)"),
    Mutant("srt_2lpo_decode/no_bar_removal", "srt_2lpo_decode",
           lambda c, G, H: _srt_2lpo(c, G, H, bar_removal=False),
           "asks the triangle and edge questions about H itself"),
    Mutant("gadget_to_rsg/all_layers", "gadget_to_rsg", gadget_decode_all_layers,
           "stops restricting H to the x-layer, so D need not be almost inside lim f"),
    Mutant("range_coding/short_search", "range_coding",
           lambda f, G, H: range_decode(f, G, H, slack=0),
           "searches s only up to the n-th element of H"),
    Mutant("rt1_to_wrsg/one_neighbor", "rt1_to_wrsg",
           lambda c, G, H: rt1_decode(c, G, H, need=1),
           "takes the first vertex with one H-neighbor instead of two"),
)}
