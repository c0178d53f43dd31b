"""Instance types and exact solution predicates.

Graphs carry a periodicity certificate ``(threshold, period, band)`` that
makes every "is it infinite" question decidable:

* far pairs (v - u > band, v >= threshold): adjacency depends only on
  ``u`` when ``u < threshold``, and otherwise only on ``u mod period``,
  together with ``v mod period``;
* near pairs (threshold <= u < v <= u + band): adjacency is invariant
  under shifting both ends by the period.

Under these rules every neighborhood is a UPSet, and for a UPSet ``H`` the
count ``|H & N(v)|`` along each residue class of ``v`` grows by a constant,
so checking a few periods decides the predicate for all vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Optional, Sequence, Union

from .epsets import (
    Delta02Desc,
    Extensional,
    Intensional,
    SetSequenceDesc,
    UPSet,
    a_sigma,
    signed,
    subset_star,
)
from .machines import FunctionalCatalog, OracleValue, halts_certified

INF = float("inf")


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


# graphs

@dataclass(eq=False)
class GraphDesc:
    """A graph on a UPSet of vertices with a symmetric adjacency rule.

    ``adjacent(u, v)`` is only ever called with ``u < v``, both vertices.
    """

    vertices: UPSet
    adjacent: Callable[[int, int], bool]
    threshold: int
    period: int
    band: int
    family: str
    params: dict = field(default_factory=dict)
    highly_recursive: bool = False
    _nbrs: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.threshold = max(self.threshold, len(self.vertices.prefix))
        self.period = lcm(self.period, len(self.vertices.period))

    def adj(self, u: int, v: int) -> bool:
        if u == v or u not in self.vertices or v not in self.vertices:
            return False
        return self.adjacent(u, v) if u < v else self.adjacent(v, u)

    def neighbors(self, v: int) -> UPSet:
        """N(v) as an exact UPSet."""
        hit = self._nbrs.get(v)
        if hit is None:
            if v not in self.vertices:
                raise ValueError(f"{v} is not a vertex")
            start = max(self.threshold, v + self.band + 1)
            hit = UPSet.from_predicate(lambda u: self.adj(u, v), start, self.period)
            self._nbrs[v] = hit
        return hit

    def edges_below(self, n: int) -> list[tuple[int, int]]:
        verts = self.vertices.members(n)
        return [(u, v) for i, u in enumerate(verts) for v in verts[i + 1:] if self.adjacent(u, v)]

    def max_edge_length(self) -> Optional[int]:
        """Longest edge, or None when some neighborhood is infinite."""
        longest = 0
        for v in self.vertices.members(self.threshold + self.band + self.period + 1):
            nb = self.neighbors(v)
            if nb.is_infinite():
                return None
            if nb:
                longest = max(longest, abs(nb.max() - v), abs(v - nb.min()))
        return longest

    def is_locally_finite(self) -> bool:
        return self.max_edge_length() is not None

    def to_json(self) -> dict:
        return {"kind": "graph", "family": self.family, "params": self.params}

    def __repr__(self) -> str:
        return f"GraphDesc({self.family}, {self.params})"


GraphBuilder = Callable[[dict], GraphDesc]
GRAPH_FAMILIES: dict[str, GraphBuilder] = {}


def register_graph_family(name: str):
    def deco(fn: GraphBuilder) -> GraphBuilder:
        if name in GRAPH_FAMILIES:
            raise ValueError(f"graph family {name!r} already registered")
        GRAPH_FAMILIES[name] = fn
        return fn
    return deco


def graph_from_json(data: dict) -> GraphDesc:
    family = data.get("family")
    if family not in GRAPH_FAMILIES:
        raise ValueError(f"unknown graph family {family!r}; known: {sorted(GRAPH_FAMILIES)}")
    return GRAPH_FAMILIES[family](data.get("params", {}))


def _vertices_param(params: dict) -> UPSet:
    return UPSet.from_json(params["vertices"]) if "vertices" in params else UPSet.full()


@register_graph_family("edgeless")
def _edgeless(params: dict) -> GraphDesc:
    return edgeless(_vertices_param(params))


def edgeless(vertices: UPSet = UPSet.full()) -> GraphDesc:
    return GraphDesc(vertices, lambda u, v: False, 0, 1, 0, "edgeless",
                     {"vertices": vertices.to_json()}, highly_recursive=True)


@register_graph_family("complete")
def _complete(params: dict) -> GraphDesc:
    return complete(_vertices_param(params))


def complete(vertices: UPSet = UPSet.full()) -> GraphDesc:
    return GraphDesc(vertices, lambda u, v: True, 0, 1, 0, "complete", {"vertices": vertices.to_json()})


@register_graph_family("finite_edges")
def _finite_edges(params: dict) -> GraphDesc:
    return finite_edges(params.get("edges", []), _vertices_param(params), params.get("base", "edgeless"))


def finite_edges(edges: Iterable[Sequence[int]], vertices: UPSet = UPSet.full(),
                 base: str = "edgeless") -> GraphDesc:
    """The empty or complete graph on vertices with finitely many pairs toggled."""
    if base not in ("edgeless", "complete"):
        raise ValueError("base must be 'edgeless' or 'complete'")
    toggled = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if u not in vertices or v not in vertices:
            raise ValueError(f"edge {(u, v)} leaves the vertex set")
        toggled.add((min(u, v), max(u, v)))
    top = 1 + max((v for _, v in toggled), default=-1)
    dense = base == "complete"
    params = {"vertices": vertices.to_json(), "edges": sorted(map(list, toggled)), "base": base}
    return GraphDesc(vertices, lambda u, v: dense != ((u, v) in toggled), top, 1, 0,
                     "finite_edges", params, highly_recursive=not dense)


@register_graph_family("path")
def _path(params: dict) -> GraphDesc:
    return path()


def path() -> GraphDesc:
    return GraphDesc(UPSet.full(), lambda u, v: v - u == 1, 0, 1, 1, "path", {}, highly_recursive=True)


@register_graph_family("cycles")
def _cycles(params: dict) -> GraphDesc:
    return cycles(int(params.get("length", 5)))


def cycles(length: int = 5) -> GraphDesc:
    """Disjoint cycles on the blocks [length*i, length*(i+1))."""
    if length < 3:
        raise ValueError("cycles need length >= 3")

    def adjacent(u, v):
        return u // length == v // length and v - u in (1, length - 1)

    return GraphDesc(UPSet.full(), adjacent, 0, length, length - 1, "cycles",
                     {"length": length}, highly_recursive=True)


@register_graph_family("grid")
def _grid(params: dict) -> GraphDesc:
    return grid(int(params.get("width", 3)))


def grid(width: int = 3) -> GraphDesc:
    """The grid N x width; vertex width*i + j sits in row i, column j."""
    if width < 1:
        raise ValueError("width must be positive")

    def adjacent(u, v):
        return v - u == width or (v - u == 1 and v % width != 0)

    return GraphDesc(UPSet.full(), adjacent, 0, width, width, "grid",
                     {"width": width}, highly_recursive=True)


@register_graph_family("star")
def _star(params: dict) -> GraphDesc:
    return star(int(params.get("center", 0)))


def star(center: int = 0) -> GraphDesc:
    return GraphDesc(UPSet.full(), lambda u, v: center in (u, v), center + 1, 1, 0,
                     "star", {"center": center})


class NeighborCounts:
    """Exact neighbor counts |H & N(v)| with closed-form extrapolation."""

    def __init__(self, G: GraphDesc, H: UPSet):
        self.G, self.H = G, H
        self.period = lcm(G.period, len(H.period))
        self.base = max(G.threshold, len(H.prefix)) + G.band

    def count(self, v: int) -> float:
        hit = self.G.neighbors(v) & self.H
        return INF if hit.is_infinite() else len(hit)

    def neighbors_in(self, v: int) -> UPSet:
        return self.G.neighbors(v) & self.H

    def where(self, scope: UPSet, pred: Callable[[int, float], bool], depth: int = 2) -> UPSet:
        """Members v of scope with pred(v, count(v)).

        pred may depend on v only through membership in periodic sets of
        period dividing ``self.period`` past ``self.base``, and on the count
        only through min(count, depth) or whether it is infinite.
        """
        period = lcm(self.period, len(scope.period))
        start = max(self.base, len(scope.prefix)) + (depth + 1) * period
        return UPSet.from_predicate(lambda v: v in scope and pred(v, self.count(v)), start, period)


class Variant(enum.Enum):
    RSG = "RSg"
    RSGR = "RSgr"
    WRSG = "wRSg"
    WRSGR = "wRSgr"


def graph_solution_check(variant: Variant | str, G: GraphDesc, H: UPSet) -> bool:
    variant = Variant(variant)
    if not H <= G.vertices:
        raise ValueError("H is not a set of vertices")
    if H.is_finite():
        return False
    scope = G.vertices if variant in (Variant.RSG, Variant.RSGR) else H
    strict = variant in (Variant.RSGR, Variant.WRSGR)

    def bad(v, c):
        if c == INF:
            return False
        return c > (0 if strict and v in H else 1)

    return not NeighborCounts(G, H).where(scope, bad, depth=2)


def complement_graph(G: GraphDesc) -> GraphDesc:
    """Same vertices and certificate, adjacency negated."""
    return GraphDesc(G.vertices, lambda u, v: not G.adjacent(u, v), G.threshold, G.period, G.band,
                     f"complement({G.family})", {"of": G.to_json()})


def is_clique(G: GraphDesc, H: UPSet) -> bool:
    return H.is_infinite() and is_independent(complement_graph(G), H)


def is_independent(G: GraphDesc, H: UPSet) -> bool:
    return H.is_infinite() and not NeighborCounts(G, H).where(H, lambda v, c: c > 0, 1)


# linear orders

class ChainKind(enum.Enum):
    ASC_SEQ = "AscSeq"
    DESC_SEQ = "DescSeq"
    ASC_CHAIN = "AscChain"
    DESC_CHAIN = "DescChain"


@dataclass(frozen=True)
class FiniteOrder:
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("repeated element")

    @property
    def domain(self) -> UPSet:
        return UPSet.finite(self.elements)

    def less(self, x: int, y: int) -> bool:
        return self.elements.index(x) < self.elements.index(y)

    def to_json(self) -> dict:
        return {"kind": "order", "form": "finite", "elements": list(self.elements)}


@dataclass(frozen=True)
class Tripartite:
    """The order A + M + D: A ascending by <, then the chain M, then D descending by <."""

    asc: UPSet
    middle: tuple[int, ...] = ()
    desc: UPSet = UPSet.empty()

    def __post_init__(self):
        object.__setattr__(self, "middle", tuple(self.middle))
        mid = UPSet.finite(self.middle)
        if len(set(self.middle)) != len(self.middle):
            raise ValueError("repeated middle element")
        if self.asc & self.desc or self.asc & mid or self.desc & mid:
            raise ValueError("A, M and D must be pairwise disjoint")

    @property
    def domain(self) -> UPSet:
        return self.asc | UPSet.finite(self.middle) | self.desc

    def rank(self, x: int) -> tuple[int, int]:
        if x in self.asc:
            return (0, x)
        if x in self.desc:
            return (2, -x)
        if x in self.middle:
            return (1, self.middle.index(x))
        raise ValueError(f"{x} is not in the order")

    def less(self, x: int, y: int) -> bool:
        return self.rank(x) < self.rank(y)

    def stagewise(self, s: int) -> list[int]:
        """The elements below s listed in order."""
        return sorted(self.domain.members(s), key=self.rank)

    def predecessors(self, x: int) -> UPSet:
        """{y : y <_L x} as a UPSet."""
        part, key = self.rank(x)
        mid = UPSet.finite(self.middle)
        if part == 0:
            return self.asc.below(x)
        if part == 1:
            return self.asc | UPSet.finite(self.middle[:key])
        return self.asc | mid | self.desc.above(x)

    def successors(self, x: int) -> UPSet:
        """{y : x <_L y} as a UPSet."""
        return self.domain - self.predecessors(x) - UPSet.finite([x])

    def to_json(self) -> dict:
        return {"kind": "order", "form": "tripartite", "asc": self.asc.to_json(),
                "middle": list(self.middle), "desc": self.desc.to_json()}


@dataclass(frozen=True)
class LexOrder:
    """x precedes y when the column word of x is lexicographically smaller.

    The column word of x is (x in seq[i] : i <= x); on a tie over the
    common length the shorter word comes first.
    """

    seq: Extensional

    @property
    def domain(self) -> UPSet:
        return UPSet.full()

    def word(self, x: int) -> str:
        return "".join("1" if x in self.seq.nth(i) else "0" for i in range(x + 1))

    def less(self, x: int, y: int) -> bool:
        a, b = self.word(x), self.word(y)
        k = min(len(a), len(b))
        if a[:k] != b[:k]:
            return a[:k] < b[:k]
        return len(a) < len(b)

    def stagewise(self, s: int) -> list[int]:
        from functools import cmp_to_key
        return sorted(range(s), key=cmp_to_key(lambda x, y: -1 if self.less(x, y) else 1))

    def blocks(self) -> list[UPSet]:
        """For each signature word over the head, the elements past the head carrying it."""
        h = len(self.seq.head)
        tail = UPSet.interval(h)
        out = []
        for k in range(2 ** h):
            sigma = format(k, f"0{h}b") if h else ""
            out.append(a_sigma(self.seq, sigma) & tail)
        return out

    def to_json(self) -> dict:
        return {"kind": "order", "form": "lex", "sequence": self.seq.to_json()}


LinearOrderDesc = Union[FiniteOrder, Tripartite, LexOrder]


def order_from_json(data: dict) -> LinearOrderDesc:
    form = data.get("form")
    if form == "finite":
        return FiniteOrder(tuple(data["elements"]))
    if form == "tripartite":
        return Tripartite(UPSet.from_json(data["asc"]), tuple(data.get("middle", ())),
                          UPSet.from_json(data.get("desc", {"prefix": "", "period": "0"})))
    if form == "lex":
        return LexOrder(Extensional.from_json(data["sequence"]))
    raise ValueError(f"unknown order form {form!r}")


def chain_check(kind: ChainKind | str, L: LinearOrderDesc, S: UPSet) -> bool:
    """Exact sequence and chain predicates.

    For a Tripartite order an infinite S is an ascending sequence iff it
    is an ascending chain iff S lies inside A: any element of M or D in S
    has infinitely many S-predecessors or breaks the agreement of the two
    orders with some larger element.  Symmetrically for D.
    """
    kind = ChainKind(kind)
    if not S <= L.domain:
        raise ValueError("S is not a subset of the order's domain")
    if S.is_finite():
        return False
    if isinstance(L, FiniteOrder):
        return False
    if isinstance(L, Tripartite):
        part = L.asc if kind in (ChainKind.ASC_SEQ, ChainKind.ASC_CHAIN) else L.desc
        return S <= part
    raise TypeError(f"chain predicates are not implemented for {type(L).__name__}")


def stable_check(L: LinearOrderDesc, H: UPSet) -> bool:
    """Whether (H, <_L) is infinite and stable: each element has finitely many
    predecessors or finitely many successors in H."""
    if not H <= L.domain:
        raise ValueError("H is not a subset of the order's domain")
    if H.is_finite():
        return False
    if isinstance(L, Tripartite):
        both = (H & L.asc).is_infinite() and (H & L.desc).is_infinite()
        return not (both and any(m in H for m in L.middle))
    if isinstance(L, LexOrder):
        return sum((H & b).is_infinite() for b in L.blocks()) == 1
    return False


# colorings and injections

@dataclass(frozen=True)
class StableColoringDesc:
    """c(n, s) for n < s: the override bit when listed, else limit(n)."""

    limit: UPSet
    overrides: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        table = {}
        for n, s, bit in self.overrides:
            if not 0 <= n < s or bit not in (0, 1):
                raise ValueError(f"bad override {(n, s, bit)!r}")
            table[(n, s)] = bit
        object.__setattr__(self, "overrides", tuple(sorted((n, s, b) for (n, s), b in table.items())))

    def __call__(self, n: int, s: int) -> int:
        if n > s:
            n, s = s, n
        if n == s:
            raise ValueError("pairs need distinct elements")
        for m, t, bit in self.overrides:
            if (m, t) == (n, s):
                return bit
        return 1 if n in self.limit else 0

    @property
    def support(self) -> int:
        return 1 + max((s for _, s, _ in self.overrides), default=-1)

    def to_json(self) -> dict:
        return {"kind": "coloring2", "limit": self.limit.to_json(),
                "overrides": [list(o) for o in self.overrides]}


@dataclass(frozen=True)
class ColoringDesc:
    """A coloring N -> k given by k UPSet color classes partitioning N."""

    classes: tuple[UPSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("need at least one color")
        union = UPSet.empty()
        for cls in self.classes:
            if union & cls:
                raise ValueError("color classes overlap")
            union = union | cls
        if union != UPSet.full():
            raise ValueError("color classes do not cover N")

    @property
    def k(self) -> int:
        return len(self.classes)

    def __call__(self, n: int) -> int:
        for i, cls in enumerate(self.classes):
            if n in cls:
                return i
        raise AssertionError("classes partition N")

    @classmethod
    def from_word(cls, prefix: Sequence[int], tail: Sequence[int], k: int) -> "ColoringDesc":
        """Colors prefix[0], prefix[1], ... then the word tail repeated."""
        prefix, tail = list(prefix), list(tail)
        return cls(tuple(UPSet("".join("1" if c == i else "0" for c in prefix),
                               "".join("1" if c == i else "0" for c in tail)) for i in range(k)))

    def to_json(self) -> dict:
        return {"kind": "coloring1", "classes": [c.to_json() for c in self.classes]}


@dataclass(frozen=True)
class InjectionDesc:
    """f(n) = table[n] for n < len(table), f(n) = n + shift afterwards."""

    table: tuple[int, ...]
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        m = len(self.table)
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")
        if len(set(self.table)) != m or any(v < 0 or v >= m + self.shift for v in self.table):
            raise ValueError("table does not extend to an injection")

    def __call__(self, n: int) -> int:
        return self.table[n] if n < len(self.table) else n + self.shift

    def in_range(self, n: int) -> bool:
        return n in self.table or n >= len(self.table) + self.shift

    def to_json(self) -> dict:
        return {"kind": "injection", "table": list(self.table), "shift": self.shift}


def homogeneous_color(c: StableColoringDesc, H: UPSet) -> Optional[int]:
    """The color of H when H is infinite and homogeneous for c, else None."""
    if H.is_finite():
        return None
    if H <= c.limit:
        color = 1
    elif not (H & c.limit):
        color = 0
    else:
        return None
    for n, s, bit in c.overrides:
        if n in H and s in H and bit != color:
            return None
    return color


def homogeneous_check(c: StableColoringDesc, H: UPSet) -> bool:
    return homogeneous_color(c, H) is not None


def monochrome_color(c: ColoringDesc, H: UPSet) -> Optional[int]:
    if H.is_finite():
        return None
    for i, cls in enumerate(c.classes):
        if H <= cls:
            return i
    return None


def monochrome_check(c: ColoringDesc, H: UPSet) -> bool:
    return monochrome_color(c, H) is not None


# sequences of sets

def validate_inforone_instance(seq: SetSequenceDesc, within: Optional[UPSet] = None) -> None:
    """Each x (in ``within``, default N) must lie in only finitely many seq[i]."""
    if isinstance(seq, Extensional):
        if seq.tail_full and (within is None or within):
            raise ValueError("a full tail puts every number in infinitely many sets")
        return
    if not isinstance(seq, Intensional):
        raise TypeError(f"unsupported sequence {type(seq).__name__}")


def _horizon(seq: SetSequenceDesc, probe, horizon: Optional[int]) -> int:
    if isinstance(seq, Extensional):
        return len(seq.head)
    exact = seq.horizon(probe)
    if exact is not None:
        return exact
    if horizon is None:
        raise ValueError(f"family {seq.family!r} needs an explicit index horizon")
    return horizon


def cohesive_check(seq: SetSequenceDesc, C: UPSet, horizon: Optional[int] = None) -> bool:
    """C infinite and C is almost inside seq[i] or its complement for every i.

    Exact for extensional sequences (the tail is empty or full) and for
    families that report their own horizon; otherwise only i < horizon.
    """
    if C.is_finite():
        return False
    for i in range(_horizon(seq, C, horizon)):
        a = seq.nth(i)
        if not ((C & a).is_finite() or subset_star(C, a)):
            return False
    return True


def _as_bits(p) -> Callable[[int], int]:
    if isinstance(p, str):
        return lambda i: int(p[i])
    if isinstance(p, UPSet):
        return lambda i: 1 if i in p else 0
    if isinstance(p, OracleValue):
        return p
    return p


def ocoh_check(seq: SetSequenceDesc, p, depth: int, within: Optional[UPSet] = None) -> bool:
    """A^(p|n) (intersected with ``within``) is infinite for every n <= depth.

    ``p`` may be a bit word (checked up to its length), a UPSet read as a
    characteristic function, an oracle, or any callable on indices.
    """
    if isinstance(p, str):
        depth = min(depth, len(p))
    bit = _as_bits(p)
    current = within if within is not None else UPSet.full()
    if current.is_finite():
        return False
    for i in range(depth):
        current = current & signed(seq.nth(i), bit(i))
        if current.is_finite():
            return False
    return True


def ocoh_exact_depth(seq: SetSequenceDesc, p) -> Optional[int]:
    """A depth that makes ocoh_check exact, when one is known.

    For an extensional sequence with a UPSet p, every later conjunct is
    N or empty, so the check is exact once p agrees with the tail bit
    past the head.
    """
    if isinstance(seq, Extensional) and isinstance(p, UPSet):
        h = len(seq.head)
        past = UPSet.interval(h)
        agrees = (past <= p) if seq.tail_full else not (p & past)
        return h if agrees else h + len(p.prefix) + len(p.period) + 1
    return None


def inforone_check(seq: SetSequenceDesc, D: UPSet, horizon: Optional[int] = None) -> bool:
    """D infinite and every seq[i] meets D in infinitely many or at most one point."""
    validate_inforone_instance(seq)
    if D.is_finite():
        return False
    for i in range(_horizon(seq, D, horizon)):
        hit = D & seq.nth(i)
        if hit.is_finite() and len(hit) > 1:
            return False
    return True


def inforone_d_check(seq: SetSequenceDesc, f: Delta02Desc, D: UPSet, star: bool = False,
                     horizon: Optional[int] = None) -> bool:
    """The same with D inside lim f (or almost inside it when star is set)."""
    Z = f.limit
    if not (subset_star(D, Z) if star else D <= Z):
        return False
    return inforone_check(seq, D, horizon)


def ocoh_d_check(seq: SetSequenceDesc, f: Delta02Desc, p, depth: int) -> bool:
    if f.limit.is_finite():
        raise ValueError("the approximated set must be infinite")
    return ocoh_check(seq, p, depth, within=f.limit)


# functions

def lpo(p: OracleValue) -> int:
    """0 when some value of p is 0, else 1."""
    if not p.is_total():
        raise ValueError("lpo needs a total descriptor, not a finite stream")
    if 0 in p.table:
        return 0
    if isinstance(p.tail, UPSet):
        return 0 if not UPSet.interval(len(p.table)) <= p.tail else 1
    return 0 if p.tail == 0 else 1


def dnr_check(cat: FunctionalCatalog, oracle: OracleValue, f: Sequence[int], two_bounded: bool) -> bool:
    """f avoids the diagonal value of every catalog program that halts."""
    if len(f) < len(cat):
        raise ValueError("f must be defined on every catalog index")
    if two_bounded and any(v not in (0, 1) for v in f):
        return False
    for e in range(len(cat)):
        out = halts_certified(cat, e, oracle, e)
        if out is not None and f[e] == out:
            return False
    return True


# JSON instances

def sequence_from_json(data: dict) -> Extensional:
    if data.get("form", "extensional") != "extensional":
        raise ValueError("only extensional sequences can be read from files")
    return Extensional.from_json(data)


def instance_from_json(data: dict):
    kind = data.get("kind")
    if kind == "graph":
        return graph_from_json(data)
    if kind == "order":
        return order_from_json(data)
    if kind == "coloring1":
        return ColoringDesc(tuple(UPSet.from_json(c) for c in data["classes"]))
    if kind == "coloring2":
        return StableColoringDesc(UPSet.from_json(data["limit"]),
                                  tuple(tuple(o) for o in data.get("overrides", [])))
    if kind == "sequence":
        return sequence_from_json(data)
    if kind == "injection":
        return InjectionDesc(tuple(data["table"]), int(data.get("shift", 0)))
    if kind == "delta02":
        seq = sequence_from_json(data["sequence"]) if "sequence" in data else Extensional(())
        return (Delta02Desc.from_json(data), seq)
    raise ValueError(f"unknown instance kind {kind!r}")


def instance_to_json(instance) -> dict:
    if isinstance(instance, tuple) and len(instance) == 2 and isinstance(instance[0], Delta02Desc):
        f, seq = instance
        return {"kind": "delta02", **f.to_json(), "sequence": seq.to_json()}
    if isinstance(instance, Extensional):
        return {"kind": "sequence", **instance.to_json()}
    if hasattr(instance, "to_json"):
        return instance.to_json()
    raise TypeError(f"cannot serialize {type(instance).__name__}")


def sequence_tree(seq: SetSequenceDesc, within: Optional[UPSet] = None) -> Callable[[str], bool]:
    """Membership test for the tree of sigma with (within & A^sigma) infinite, memoized."""
    cache: dict[str, UPSet] = {"": within if within is not None else UPSet.full()}

    def node_set(sigma: str) -> UPSet:
        hit = cache.get(sigma)
        if hit is None:
            hit = node_set(sigma[:-1]) & signed(seq.nth(len(sigma) - 1), sigma[-1])
            cache[sigma] = hit
        return hit

    return lambda sigma: node_set(sigma).is_infinite()


# problem registry

LAZY_DEPTH = 48
RANGE_WINDOW = 8


@dataclass(frozen=True)
class Problem:
    """A problem: its solution predicate and the shape of its solutions.

    ``space`` is "set" (UPSets inside ``domain(instance)``), "tagged_set"
    (pairs of "asc"/"desc" and a set), "branch" (paths through
    ``tree(instance)``) or "function" (checked, never enumerated).  A
    "set" problem may ``wrap`` each enumerated UPSet into its own
    solution type.
    """

    id: str
    check: Callable[[object, object], bool]
    space: str
    domain: Optional[Callable[[object], UPSet]] = None
    tree: Optional[Callable[[object], Callable[[str], bool]]] = None
    summary: str = ""
    wrap: Optional[Callable[[object, UPSet], object]] = None


PROBLEMS: dict[str, Problem] = {}


def register_problem(problem: Problem) -> Problem:
    PROBLEMS[problem.id] = problem
    return problem


def _ocoh_depth(seq, p) -> int:
    exact = ocoh_exact_depth(seq, p)
    if exact is not None:
        return exact
    if isinstance(seq, Extensional):
        return len(seq.head) + LAZY_DEPTH
    return LAZY_DEPTH


def _delta_pair(instance):
    f, seq = instance
    return f, seq


def _range_check(f: InjectionDesc, decode) -> bool:
    window = max(RANGE_WINDOW, len(f.table) + f.shift + 2)
    return all(bool(decode(n)) == f.in_range(n) for n in range(window))


for _v in Variant:
    register_problem(Problem(
        _v.value, (lambda v: lambda G, H: graph_solution_check(v, G, H))(_v), "set",
        domain=lambda G: G.vertices, summary=f"{_v.value} on a certified graph"))

register_problem(Problem(
    "ADS", lambda L, sol: chain_check(ChainKind.ASC_SEQ if sol[0] == "asc" else ChainKind.DESC_SEQ, L, sol[1]),
    "tagged_set", domain=lambda L: L.domain, summary="ascending or descending sequence"))
register_problem(Problem(
    "ADC", lambda L, S: chain_check(ChainKind.ASC_CHAIN, L, S) or chain_check(ChainKind.DESC_CHAIN, L, S),
    "set", domain=lambda L: L.domain, summary="ascending or descending chain"))
register_problem(Problem("CADS", stable_check, "set", domain=lambda L: L.domain,
                         summary="infinite stable suborder"))
register_problem(Problem("SRT22", homogeneous_check, "set", domain=lambda c: UPSet.full(),
                         summary="homogeneous set for a stable 2-coloring of pairs"))
register_problem(Problem("RT1", monochrome_check, "set", domain=lambda c: UPSet.full(),
                         summary="infinite monochromatic set"))
register_problem(Problem("COH", cohesive_check, "set", domain=lambda seq: UPSet.full(),
                         summary="cohesive set"))
register_problem(Problem("INForONE", inforone_check, "set", domain=lambda seq: UPSet.full(),
                         summary="infinite set meeting each set in 0, 1 or infinitely many points"))
register_problem(Problem(
    "oCOH", lambda seq, p: ocoh_check(seq, p, _ocoh_depth(seq, p)), "branch",
    tree=lambda seq: sequence_tree(seq), summary="branch with every signed intersection infinite"))
register_problem(Problem(
    "oCOH-D", lambda inst, p: ocoh_d_check(inst[1], inst[0], p, _ocoh_depth(inst[1], p)), "branch",
    tree=lambda inst: sequence_tree(inst[1], inst[0].limit),
    summary="branch with every signed intersection meeting lim f infinitely"))
register_problem(Problem(
    "INForONE-D", lambda inst, D: inforone_d_check(inst[1], inst[0], D), "set",
    domain=lambda inst: UPSet.full(), summary="INForONE solution inside lim f"))
register_problem(Problem(
    "INForONE-D*", lambda inst, D: inforone_d_check(inst[1], inst[0], D, star=True), "set",
    domain=lambda inst: UPSet.full(), summary="INForONE solution almost inside lim f"))
register_problem(Problem("RAN", _range_check, "function", summary="characteristic function of ran(f)"))
