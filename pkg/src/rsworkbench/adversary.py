"""Diagonalization games against candidate reduction pairs.

A candidate pair is two prefix-monotone black boxes.  ``forward`` maps a
finite source prefix to a finite prefix of the target instance.
``backward`` maps a source prefix and a finite target-solution prefix to a
prefix of the source solution; an empty output means "no answer yet".

Streams are tuples of small naturals.  Orders and graphs on N are streamed
as relation bits over pairs i < j, listed by j and then by i, so the bit for
(i, j) sits at index j*(j-1)/2 + i.  For an order the bit is 1 iff i <_L j.
For a graph it is 1 iff i and j are adjacent.

Subprocess protocol, one request per line, one response line each::

    F <hex>           ->  <hex>       forward image of the source prefix
    B <hex>|<hex>     ->  <hex>       backward output; an empty line if none

Each hex digit is one stream symbol (0..15).  An empty prefix is written as
nothing at all, so ``F `` and ``B |`` are valid requests.  Lines end with a
single ``\\n``.  ``rsworkbench serve-pair NAME`` serves a shipped pair.
"""

from __future__ import annotations

import subprocess
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .epsets import UPSet
from .machines import FunctionalCatalog, OracleValue, halts_certified, string_decode
from .problems import PROBLEMS, ColoringDesc, GraphDesc, Tripartite, edgeless
from .reductions import rt13_stages, staged_order

Prefix = tuple[int, ...]

COLORS = 5
SOURCE_HORIZON = 32
SEARCH_LIMIT = 10_000
DNR_SEARCH = 1 << 12


class MonotonicityViolation(RuntimeError):
    """A black box produced an output that does not extend its earlier output."""


class CatalogTooSmall(LookupError):
    """No catalog index collides with the derived function."""


# prefix codings

def pair_index(i: int, j: int) -> int:
    """Position of the relation bit for i < j."""
    if not i < j:
        raise ValueError("need i < j")
    return j * (j - 1) // 2 + i


def relation_length(n: int) -> int:
    """Number of relation bits covering the elements below n."""
    return n * (n - 1) // 2


def order_prefix(L, n: int) -> Prefix:
    """Relation bits of an order on the elements below n."""
    return tuple(int(L.less(i, j)) for j in range(n) for i in range(j))


def graph_prefix(G: GraphDesc, n: int) -> Prefix:
    return tuple(int(G.adj(i, j)) for j in range(n) for i in range(j))


def characteristic(members, length: int) -> Prefix:
    members = set(members)
    return tuple(int(n in members) for n in range(length))


def encode_prefix(prefix: Sequence[int]) -> str:
    if any(not 0 <= v < 16 for v in prefix):
        raise ValueError("stream symbols must lie in 0..15")
    return "".join(format(v, "x") for v in prefix)


def decode_prefix(text: str) -> Prefix:
    return tuple(int(ch, 16) for ch in text.strip())


class Relation:
    """The partial knowledge of an order carried by a relation-bit prefix."""

    def __init__(self, bits: Sequence[int]):
        self.bits = tuple(bits)

    def less(self, x: int, y: int) -> Optional[bool]:
        if x == y:
            return False
        i, j = min(x, y), max(x, y)
        k = pair_index(i, j)
        if k >= len(self.bits):
            return None
        return bool(self.bits[k]) if x < y else not self.bits[k]

    def ascending(self, xs: Sequence[int]) -> bool:
        return all(self.less(x, y) for k, x in enumerate(xs) for y in xs[k + 1:])

    def descending(self, xs: Sequence[int]) -> bool:
        return all(self.less(y, x) for k, x in enumerate(xs) for y in xs[k + 1:])


# candidate pairs

@dataclass
class CandidatePair:
    """A hypothesized reduction given as two streaming black boxes.

    ``describe`` optionally maps a finitely described source instance to the
    exact descriptor of its forward image; games use it to re-check their
    refutations with the problem predicates.
    """

    name: str
    forward: Callable[[Prefix], Prefix]
    backward: Callable[[Prefix, Prefix], Prefix]
    describe: Optional[Callable[[object], object]] = None
    note: str = ""


class Monitor:
    """Wraps a pair and raises when an answer fails to extend an earlier one."""

    def __init__(self, pair: CandidatePair):
        self.pair = pair
        self._forward: dict[Prefix, Prefix] = {}
        self._backward: dict[Prefix, tuple[Prefix, Prefix]] = {}

    @staticmethod
    def _extends(new: Prefix, old: Prefix) -> bool:
        return new[: len(old)] == old

    def forward(self, source: Prefix) -> Prefix:
        out = tuple(self.pair.forward(tuple(source)))
        for old_src, old_out in self._forward.items():
            if self._extends(source, old_src) and not self._extends(out, old_out):
                raise MonotonicityViolation(
                    f"{self.pair.name}: forward on a longer prefix gave {out!r}, not extending {old_out!r}")
        self._forward = {tuple(source): out}
        return out

    def backward(self, source: Prefix, solution: Prefix) -> Prefix:
        out = tuple(self.pair.backward(tuple(source), tuple(solution)))
        for k in range(len(solution) + 1):
            seen = self._backward.get(tuple(solution[:k]))
            if seen is None:
                continue
            old_src, old_out = seen
            if self._extends(source, old_src) and not self._extends(out, old_out):
                raise MonotonicityViolation(
                    f"{self.pair.name}: backward on {solution!r} gave {out!r}, "
                    f"not extending {old_out!r} on {tuple(solution[:k])!r}")
        self._backward[tuple(solution)] = (tuple(source), out)
        return out

    def value(self, source: Prefix, solution: Prefix, index: int = 0) -> Optional[int]:
        out = self.backward(source, solution)
        return out[index] if len(out) > index else None


class SubprocessPair:
    """A candidate pair served by a child process over the line protocol."""

    def __init__(self, argv: Sequence[str], name: Optional[str] = None):
        self.argv = list(argv)
        self.name = name or " ".join(self.argv)
        self._proc = subprocess.Popen(self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                      text=True, bufsize=1)

    def _ask(self, line: str) -> Prefix:
        if self._proc.poll() is not None:
            raise RuntimeError(f"pair process {self.name!r} exited")
        self._proc.stdin.write(line + "\n")
        self._proc.stdin.flush()
        reply = self._proc.stdout.readline()
        if not reply:
            raise RuntimeError(f"pair process {self.name!r} closed its output")
        return decode_prefix(reply)

    def forward(self, source: Prefix) -> Prefix:
        return self._ask(f"F {encode_prefix(source)}")

    def backward(self, source: Prefix, solution: Prefix) -> Prefix:
        return self._ask(f"B {encode_prefix(source)}|{encode_prefix(solution)}")

    def pair(self, describe=None) -> CandidatePair:
        return CandidatePair(self.name, self.forward, self.backward, describe)

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)

    def __enter__(self) -> "SubprocessPair":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def serve(pair: CandidatePair, stdin=None, stdout=None) -> None:
    """Answer protocol requests for ``pair`` until end of input."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for raw in stdin:
        line = raw.rstrip("\n")
        if line.startswith("F "):
            out = pair.forward(decode_prefix(line[2:]))
        elif line.startswith("B "):
            src, _, sol = line[2:].partition("|")
            out = pair.backward(decode_prefix(src), decode_prefix(sol))
        else:
            raise ValueError(f"bad request {line!r}")
        stdout.write(encode_prefix(out) + "\n")
        stdout.flush()


# shipped pairs for the RT1_5 versus ADS game

def _elements(bits: int) -> int:
    """Largest n with n*(n-1)/2 <= bits."""
    n = 0
    while relation_length(n + 1) <= bits:
        n += 1
    return n


def _omega_forward(source: Prefix) -> Prefix:
    return order_prefix(Tripartite(UPSet.full()), len(source))


def _reverse_forward(source: Prefix) -> Prefix:
    return order_prefix(Tripartite(UPSet.empty(), (), UPSet.full()), len(source))


def _min_color(source: Prefix, solution: Prefix) -> Prefix:
    members = [n for n, bit in enumerate(solution) if bit]
    if not members or members[0] >= len(source):
        return ()
    return (source[members[0]],)


def _second_color(source: Prefix, solution: Prefix) -> Prefix:
    members = [n for n, bit in enumerate(solution) if bit]
    if len(members) < 2 or members[1] >= len(source):
        return ()
    return (source[members[1]],)


def _staged_forward(source: Prefix) -> Prefix:
    n = len(source)
    if n == 0:
        return ()
    order = rt13_stages(source.__getitem__, n)[-1]
    rank = {x: k for k, x in enumerate(order["A"] + order["M"] + order["D"])}
    return tuple(int(rank[i] < rank[j]) for j in range(n) for i in range(j))


def _staged_order_check() -> None:
    # the settled descriptor and the streamed stages must agree
    c = ColoringDesc.from_word([0, 1, 0], [1], COLORS)
    assert _staged_forward(tuple(c(n) for n in range(12))) == order_prefix(staged_order(c), 12)


SHIPPED_PAIRS: dict[str, CandidatePair] = {
    "constant_two": CandidatePair(
        "constant_two", _omega_forward, lambda source, solution: (2,),
        describe=lambda c: Tripartite(UPSet.full()), note="order omega, always answers color 2"),
    "omega_min_color": CandidatePair(
        "omega_min_color", _omega_forward, _min_color,
        describe=lambda c: Tripartite(UPSet.full()), note="order omega, answers the color of min S"),
    "omega_second_color": CandidatePair(
        "omega_second_color", _omega_forward, _second_color,
        describe=lambda c: Tripartite(UPSet.full()), note="order omega, answers the color of the second element"),
    "reverse_min_color": CandidatePair(
        "reverse_min_color", _reverse_forward, _min_color,
        describe=lambda c: Tripartite(UPSet.empty(), (), UPSet.full()),
        note="order omega*, answers the color of min S"),
    "stagewise_adc_5": CandidatePair(
        "stagewise_adc_5", _staged_forward, _min_color, describe=staged_order,
        note="the stagewise chain construction on five colors, answers the color of min S; "
             "the game chases it through infinitely many middle blocks, which no exact order descriptor covers"),
    "never": CandidatePair(
        "never", _omega_forward, lambda source, solution: (),
        describe=lambda c: Tripartite(UPSet.full()), note="backward never answers"),
}


# the RT1_5 versus ADS game

@dataclass(frozen=True)
class Entry:
    """One recorded sequence: its characteristic string, extreme element and color."""

    string: Prefix
    extreme: int
    color: int

    @property
    def members(self) -> list[int]:
        return [n for n, bit in enumerate(self.string) if bit]


@dataclass
class Refutation:
    coloring: Prefix
    tail_color: int
    kind: str
    solution: UPSet
    color: int
    stage: int
    verified: bool
    trace: list = field(default_factory=list)

    def full_coloring(self) -> ColoringDesc:
        return ColoringDesc.from_word(self.coloring, [self.tail_color], COLORS)

    def to_json(self) -> dict:
        return {"result": "refutation" if self.verified else "unverified_refutation", "coloring": list(self.coloring), "tail_color": self.tail_color,
                "kind": self.kind, "solution": self.solution.to_json(), "color": self.color,
                "stage": self.stage, "verified": self.verified, "trace": self.trace}


@dataclass
class BudgetExhausted:
    """No refutation within the budget; ``settled`` means later stages would only repeat."""

    stages: int
    trace: list = field(default_factory=list)
    settled: bool = False

    def to_json(self) -> dict:
        return {"result": "budget_exhausted", "stages": self.stages, "settled": self.settled,
                "trace": self.trace}


def chain_strings(rel: Relation, max_length: int, up_allowed: Optional[set[int]] = None,
                  down_allowed: Optional[set[int]] = None,
                  limit: int = SEARCH_LIMIT) -> Iterator[tuple[Prefix, bool, bool]]:
    """Strings of length below ``max_length`` whose support is a nonempty known chain.

    An ascending support must lie in ``up_allowed`` and a descending one in
    ``down_allowed`` (None allows everything).  Yields (string, ascending,
    descending) in string-code order, pruning partial strings that can no
    longer qualify, and stops after ``limit`` strings.
    """
    count = 0
    for n in range(1, max_length):
        stack = [((), [], True, True)]
        while stack:
            word, xs, asc, desc = stack.pop()
            if len(word) == n:
                if xs:
                    yield word, asc, desc
                    count += 1
                    if count >= limit:
                        return
                continue
            x = len(word)
            children = [(word + (0,), xs, asc, desc)]
            up = asc and (up_allowed is None or x in up_allowed) and all(rel.less(y, x) for y in xs)
            down = desc and (down_allowed is None or x in down_allowed) and all(rel.less(x, y) for y in xs)
            if up or down:
                children.append((word + (1,), xs + [x], up, down))
            stack.extend(reversed(children))


class _Game:
    def __init__(self, pair: CandidatePair, horizon: int, limit: int):
        self.mon = Monitor(pair)
        self.pair = pair
        self.horizon = horizon
        self.limit = limit
        self._image: tuple[Prefix, Prefix] = ((), ())
        self.c: list[int] = []
        self.sig: list[Entry] = []
        self.tau: list[Entry] = []
        self.star: Optional[dict] = None
        self.trace: list = []

    def forbidden(self) -> set[int]:
        out = set()
        if self.sig:
            out.add(self.sig[-1].color)
        if self.tau:
            out.add(self.tau[-1].color)
        if self.star is not None:
            out |= {self.star["asc"].color, self.star["desc"].color}
        return out

    def color(self) -> int:
        return min(set(range(COLORS)) - self.forbidden())

    def source(self) -> Prefix:
        return tuple(self.c[: self.horizon])

    def image(self, source: Prefix) -> Prefix:
        if self._image[0] != source:
            self._image = (source, self.mon.forward(source))
        return self._image[1]

    def search(self, rel: Relation, s: int, up_allowed, down_allowed) -> Optional[tuple[Prefix, int, str]]:
        source = self.source()
        length = min(s, self.horizon)
        for eta, asc, desc in chain_strings(rel, length, up_allowed, down_allowed, self.limit):
            value = self.mon.value(source, eta)
            if value is not None:
                return eta, value, "asc" if asc else "desc"
        return None

    def stage(self, s: int) -> None:
        forbidden = sorted(self.forbidden())
        self.c.append(self.color())
        rel = Relation(self.image(tuple(self.c[: min(s, self.horizon)])))
        event = {"stage": s + 1, "color": self.c[-1], "forbidden": forbidden}
        span = range(min(s, self.horizon))
        # every element of an ascending set lies L-below its top, and dually
        below = None if not self.sig else {x for x in span if rel.less(x, self.sig[-1].extreme)}
        above = None if not self.tau else {x for x in span if rel.less(self.tau[-1].extreme, x)}

        found = self.search(rel, s, below, above)
        if found is not None:
            eta, value, kind = found
            extreme = len(eta) - 1 - eta[::-1].index(1)  # the L-extreme of a sequence is its numeric top
            (self.sig if kind == "asc" else self.tau).append(Entry(eta, extreme, value))
            event["appended"] = {"kind": kind, "string": list(eta), "extreme": extreme, "color": value}

        if self.star is None:
            us = {e.extreme for e in self.sig}
            ds = {e.extreme for e in self.tau}
            hit = self.search(rel, s, ds, us)
            if hit is not None:
                theta, value, kind = hit
                xs = [n for n, bit in enumerate(theta) if bit]
                if kind == "desc":
                    m = xs[-1]  # L-minimum of a descending set is its numeric maximum
                    asc = next(e for e in self.sig if e.extreme == m)
                    desc = Entry(theta, m, value)
                else:
                    m = xs[-1]  # L-maximum of an ascending set is its numeric maximum
                    desc = next(e for e in self.tau if e.extreme == m)
                    asc = Entry(theta, m, value)
                self.star = {"asc": asc, "desc": desc, "m": m, "stage": s + 1}
                self.sig, self.tau = [asc], [desc]
                event["phase_two"] = {"m": m, "k_asc": asc.color, "k_desc": desc.color}
        self.trace.append(event)

    def witnesses(self) -> list[tuple[str, Entry]]:
        out = []
        if self.sig:
            out.append(("asc", self.sig[-1]))
        if self.tau:
            out.append(("desc", self.tau[-1]))
        if self.star is not None:
            out += [("asc", self.star["asc"]), ("desc", self.star["desc"])]
        out += [("asc", e) for e in reversed(self.sig)] + [("desc", e) for e in reversed(self.tau)]
        return out

    def verify(self) -> Optional[Refutation]:
        """Re-check a candidate witness against the exact forward image."""
        if self.pair.describe is None:
            return None
        tail = self.color()
        coloring = ColoringDesc.from_word(self.c, [tail], COLORS)
        L = self.pair.describe(coloring)
        streamed = self.image(self.source())
        checked = _elements(len(streamed))
        if order_prefix(L, checked) != streamed[: relation_length(checked)]:
            raise ValueError(f"{self.pair.name}: describe disagrees with the streamed forward image")
        for kind, entry in self.witnesses():
            if PROBLEMS["cRT1"].check(coloring, entry.color) if entry.color < COLORS else False:
                continue
            part = L.asc if kind == "asc" else L.desc
            S = UPSet.finite(entry.members) | part.above(len(entry.string) - 1)
            if not PROBLEMS["ADS"].check(L, (kind, S)):
                continue
            answer = self.mon.value(self.source(), characteristic(S.members(len(entry.string)),
                                                                   len(entry.string)))
            if answer != entry.color:
                continue
            return Refutation(tuple(self.c), tail, kind, S, entry.color, len(self.c), True, self.trace)
        return None


def rt15_vs_ads(pair: CandidatePair, budget: int = 10_000, horizon: int = SOURCE_HORIZON,
                limit: int = SEARCH_LIMIT, verify_every: int = 8):
    """Play the five-color game: build a coloring whose forward image defeats ``pair``.

    Strings searched at a stage have length below min(stage, horizon), at
    most ``limit`` of them per search, and both black boxes see the
    coloring only up to ``horizon``.  Past the
    horizon a stage without an event repeats forever, so the game stops
    there.  Returns a verified Refutation when the pair carries
    ``describe``, a Refutation assembled from the stage data otherwise, or
    BudgetExhausted.
    """
    game = _Game(pair, horizon, limit)
    settled = False
    for s in range(budget):
        game.stage(s)
        changed = "appended" in game.trace[-1] or "phase_two" in game.trace[-1]
        if pair.describe is not None and (changed or s % verify_every == 0):
            refutation = game.verify()
            if refutation is not None:
                return refutation
        if s > horizon and not changed:
            settled = True
            break
    if pair.describe is not None:
        refutation = game.verify()
        if refutation is not None:
            return refutation
        return BudgetExhausted(budget, game.trace[-32:], settled)
    for kind, entry in game.witnesses():
        return Refutation(tuple(game.c), game.color(), kind, UPSet.finite(entry.members),
                          entry.color, len(game.c), False, game.trace[-32:])
    return BudgetExhausted(budget, game.trace[-32:], settled)


# the DNR versus wRSgr refuter

@dataclass
class DnrCollision:
    table: tuple[Optional[int], ...]
    index: int
    independent: tuple[int, ...]
    note: str

    def to_json(self) -> dict:
        return {"table": list(self.table), "index": self.index,
                "independent": list(self.independent), "note": self.note}


def dnr_refuter(pair: CandidatePair, cat: FunctionalCatalog, p: OracleValue,
                search: int = DNR_SEARCH) -> DnrCollision:
    """Find e with g(e) equal to program e's diagonal value on p.

    g(e) is the answer at e of backward on the first finite independent set
    D of the forward image, in code order of D's characteristic string, on
    which that answer exists.
    """
    mon = Monitor(pair)
    table: list[Optional[int]] = []
    sets: list[tuple[int, ...]] = []
    for e in range(len(cat)):
        value, chosen = None, ()
        for code in range(search):
            word = string_decode(code)
            n = len(word)
            source = p.prefix(max(n, 1))
            graph = Relation(mon.forward(source))
            members = [k for k, bit in enumerate(word) if bit == "1"]
            if any(graph.less(x, y) is not False for k, x in enumerate(members) for y in members[k + 1:]):
                continue  # an edge, or an adjacency not yet determined
            value = mon.value(source, tuple(int(b) for b in word), e)
            if value is not None:
                chosen = tuple(members)
                break
        table.append(value)
        sets.append(chosen)
    for e in range(len(cat)):
        diagonal = halts_certified(cat, e, p, e)
        if table[e] is not None and diagonal is not None and diagonal == table[e]:
            note = f"program {cat.programs[e].name!r} outputs {diagonal} at {e}, matching the derived value"
            return DnrCollision(tuple(table), e, sets[e], note)
    raise CatalogTooSmall("catalog too small: no program's diagonal value matches the derived function")


def constant_output_pair(h: Callable[[int], int], length: int = 8, graph: Optional[GraphDesc] = None) -> CandidatePair:
    """A pair whose backward ignores the solution and emits h(0), ..., h(length-1)."""
    graph = graph or edgeless()

    def forward(source: Prefix) -> Prefix:
        return graph_prefix(graph, len(source))

    return CandidatePair("constant_output", forward, lambda source, solution: tuple(h(i) for i in range(length)),
                         describe=lambda p: graph, note="backward ignores the solution")


_staged_order_check()
