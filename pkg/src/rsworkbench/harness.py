"""Batch verification of the reduction catalog over deterministic instance families.

verify_reduction runs the round trip: every generated source instance is
sent forward, every target solution inside the brute-force bounds is sent
back, and the decoded value is re-checked with the source predicate.
Strong reductions decode without seeing the source instance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Optional

from .epsets import Delta02Desc, Extensional, UPSet, enumerate_upsets
from .machines import FunctionalCatalog, OracleValue, SEED_PROGRAMS
from .problems import (
    PROBLEMS,
    ColoringDesc,
    GraphDesc,
    InjectionDesc,
    StableColoringDesc,
    Tripartite,
    complete,
    cycles,
    edgeless,
    finite_edges,
    grid,
    instance_to_json,
    path,
    star,
)
from .reductions import MUTANTS, REDUCTIONS
from .solvers import brute_force_enumerate

MAX_FAILURES_KEPT = 20


@dataclass
class Failure:
    instance: object
    solution: str
    decoded: str
    clause: str

    def to_json(self) -> dict:
        return {"instance": self.instance, "solution": self.solution, "decoded": self.decoded,
                "clause": self.clause}


@dataclass
class VerificationReport:
    reduction: str
    family: str
    size: int
    bounds: tuple[int, int]
    instances: int = 0
    decoded: int = 0
    failure_count: int = 0
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    mutant: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_json(self) -> dict:
        return {"reduction": self.reduction, "mutant": self.mutant, "family": self.family,
                "size": self.size, "bounds": list(self.bounds), "instances": self.instances,
                "decoded": self.decoded, "failure_count": self.failure_count,
                "failures": [f.to_json() for f in self.failures], "notes": self.notes,
                "passed": self.passed, "wall_time": round(self.wall_time, 3)}

    def summary(self) -> str:
        name = self.mutant or self.reduction
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {name} [{self.family} size={self.size} bounds={self.bounds}] "
                f"instances={self.instances} decoded={self.decoded} failures={self.failure_count} "
                f"({self.wall_time:.2f}s)")


# instance families

def _describe(instance) -> object:
    try:
        return instance_to_json(instance)
    except TypeError:
        return repr(instance)


def injections(size: int) -> Iterator[InjectionDesc]:
    """Every permutation of {0..size-1}, extended by the identity."""
    for table in permutations(range(size)):
        yield InjectionDesc(table)


def _parts() -> list[UPSet]:
    return enumerate_upsets(2, 2)


def tripartite_orders(size: int) -> Iterator[Tripartite]:
    """A + M + D with A, D from the prefix-2 period-2 sets and M the rest, |M| <= size, in every order."""
    parts = _parts()
    for A in parts:
        for D in parts:
            if A & D:
                continue
            rest = UPSet.full() - A - D
            if rest.is_infinite() or len(rest) > size:
                continue
            for middle in permutations(list(rest)):
                yield Tripartite(A, middle, D)


def stable_colorings(size: int) -> Iterator[StableColoringDesc]:
    """Limits of prefix <= 3 and period <= 2, with up to ``size`` flipped pairs n < s <= 3."""
    pairs = [(n, s) for s in range(1, 4) for n in range(s)]
    for limit in enumerate_upsets(3, 2):
        for k in range(size + 1):
            for chosen in combinations(pairs, k):
                yield StableColoringDesc(limit, tuple((n, s, 0 if n in limit else 1) for n, s in chosen))


def colorings_prefix_then_constant(size: int, k: int = 3) -> Iterator[ColoringDesc]:
    """k-colorings given by a word of length ``size`` then a constant color."""
    for word in product(range(k), repeat=size):
        for tail in range(k):
            yield ColoringDesc.from_word(word, [tail], k)


def finite_colorings(size: int) -> Iterator[ColoringDesc]:
    """Colorings with k <= size colors: a prefix of length <= 2 then a repeated word of length <= 2."""
    seen = set()
    for k in range(1, size + 1):
        for plen in range(3):
            for qlen in (1, 2):
                for prefix in product(range(k), repeat=plen):
                    for tail in product(range(k), repeat=qlen):
                        c = ColoringDesc.from_word(prefix, tail, k)
                        if c not in seen:
                            seen.add(c)
                            yield c


def sequences(size: int) -> Iterator[Extensional]:
    """Extensional sequences of up to ``size`` head sets of prefix <= 2, period <= 2, empty tail."""
    sets = enumerate_upsets(2, 2)
    for k in range(size + 1):
        for head in product(sets, repeat=k):
            yield Extensional(head)


SMALL_SETS = (UPSet.empty(), UPSet.full(), UPSet("", "10"), UPSet("", "01"), UPSet.finite([0]), UPSet.finite([0, 1]))


def small_sequences(size: int) -> Iterator[Extensional]:
    """Extensional sequences of up to ``size`` head sets drawn from SMALL_SETS, empty tail."""
    for k in range(size + 1):
        for head in product(SMALL_SETS, repeat=k):
            yield Extensional(head)


def delta02_pairs(size: int) -> Iterator[tuple[Delta02Desc, Extensional]]:
    """Infinite limits of prefix <= 1, period <= 2, with at most one flipped stage below 3,
    paired with sequences of up to ``size`` head sets of prefix <= 1, period <= 2."""
    limits = [Z for Z in enumerate_upsets(1, 2) if Z.is_infinite()]
    flips = [(n, s) for n in range(2) for s in range(3)]
    for Z in limits:
        fs = [Delta02Desc(Z)] + [Delta02Desc(Z, ((n, s, 0 if n in Z else 1),)) for n, s in flips]
        for f in fs:
            for k in range(size + 1):
                for head in product(enumerate_upsets(1, 2), repeat=k):
                    yield f, Extensional(head)


def small_delta02_pairs(size: int) -> Iterator[tuple[Delta02Desc, Extensional]]:
    """Limits all, evens or odds, at most one override, and sequences of up to ``size`` sets
    drawn from empty, full, evens and {0}."""
    sets = [UPSet.empty(), UPSet.full(), UPSet("", "10"), UPSet.finite([0])]
    for Z in (UPSet.full(), UPSet("", "10"), UPSet("", "01")):
        for f in (Delta02Desc(Z), Delta02Desc(Z, ((0, 1, 0 if 0 in Z else 1),))):
            for k in range(size + 1):
                for head in product(sets, repeat=k):
                    yield f, Extensional(head)


def named_graphs(size: int) -> Iterator[GraphDesc]:
    """Edgeless, complete, star, path, cycles, grid and a few finite edge sets on N."""
    yield edgeless()
    yield complete()
    yield star()
    yield path()
    yield cycles(3)
    yield cycles(4)
    yield grid(2)
    for k in range(1, size + 1):
        yield finite_edges([(i, i + 1) for i in range(k)])
        yield finite_edges([(0, i) for i in range(1, k + 1)])


def cylinder_pairs(size: int) -> Iterator[tuple[OracleValue, GraphDesc]]:
    """Bit oracles (a table of length <= size, constant tail) with edgeless, complete and star graphs."""
    graphs = [edgeless(), complete(), star()]
    for n in range(size + 1):
        for table in product((0, 1), repeat=n):
            for tail in (0, 1):
                for G in graphs:
                    yield OracleValue(table, tail), G


def catalogs(size: int) -> Iterator[tuple[FunctionalCatalog, OracleValue]]:
    """Catalogs of up to ``size`` seed programs, with constant oracles 0 and 1."""
    names = sorted(SEED_PROGRAMS)
    for k in range(size + 1):
        for chosen in product(names, repeat=k):
            for bit in (0, 1):
                yield FunctionalCatalog.of(*chosen), OracleValue.constant(bit)


FAMILIES: dict[str, Callable[[int], Iterator]] = {
    "injections": injections,
    "tripartite": tripartite_orders,
    "stable_colorings": stable_colorings,
    "colorings3": colorings_prefix_then_constant,
    "colorings": finite_colorings,
    "sequences": sequences,
    "sequences_small": small_sequences,
    "delta02": delta02_pairs,
    "delta02_small": small_delta02_pairs,
    "graphs": named_graphs,
    "cylinders": cylinder_pairs,
    "catalogs": catalogs,
}

# which families feed which source problem
FAMILY_SOURCES: dict[str, set[str]] = {
    "injections": {"RAN"},
    "tripartite": {"ADS", "CADS"},
    "stable_colorings": {"SRT22"},
    "colorings3": {"cRT1"},
    "colorings": {"RT1"},
    "sequences": {"COH", "INForONE", "oCOH"},
    "sequences_small": {"COH", "INForONE", "oCOH"},
    "delta02": {"INForONE-D", "oCOH-D", "INForONE-D*"},
    "delta02_small": {"INForONE-D", "oCOH-D", "INForONE-D*"},
    "graphs": {"wRSgr"},
    "cylinders": {"id*wRSg"},
    "catalogs": {"DNR3"},
}


@dataclass(frozen=True)
class SuiteEntry:
    family: str
    size: int
    bounds: Optional[tuple[int, int]] = None


DEFAULT_SUITE: dict[str, SuiteEntry] = {
    "range_coding": SuiteEntry("injections", 6),
    "ads_decode": SuiteEntry("tripartite", 2),
    "cads_decode": SuiteEntry("tripartite", 2),
    "srt_decode": SuiteEntry("stable_colorings", 2),
    "srt_lpo_decode": SuiteEntry("stable_colorings", 2),
    "srt_2lpo_decode": SuiteEntry("stable_colorings", 2),
    "rt13_to_adc": SuiteEntry("colorings3", 4),
    "cads_to_coh": SuiteEntry("tripartite", 2),
    "coh_to_cads": SuiteEntry("sequences", 2),
    "inforone_to_ocoh": SuiteEntry("sequences", 2),
    "ocoh_to_inforone": SuiteEntry("sequences", 2),
    "inforoneD_to_ocohD": SuiteEntry("delta02", 1),
    "ocohD_to_inforoneDstar": SuiteEntry("delta02", 1),
    "dnr3_to_ocohD": SuiteEntry("catalogs", 2),
    "gadget_to_rsg": SuiteEntry("delta02_small", 1),
    "wrsg_to_wrsgr": SuiteEntry("graphs", 3),
    "rt1_to_wrsg": SuiteEntry("colorings", 4),
    "cylindrify": SuiteEntry("cylinders", 2),
}

# the instance each mutant is run against by default
MUTANT_SUITE: dict[str, SuiteEntry] = {
    "inforone_to_ocoh/no_escape_bound": SuiteEntry("sequences_small", 3),
    "srt_2lpo_decode/no_bar_removal": SuiteEntry("stable_colorings", 1),
    "gadget_to_rsg/all_layers": SuiteEntry("delta02_small", 0),
    "range_coding/short_search": SuiteEntry("injections", 3),
    "rt1_to_wrsg/one_neighbor": SuiteEntry("colorings", 2),
}


def generate(family: str, size: int) -> Iterator:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[family](size)


def verify_reduction(reduction_id: str, family: Optional[str] = None, size: Optional[int] = None,
                     bounds: Optional[tuple[int, int]] = None, mutant: Optional[str] = None) -> VerificationReport:
    """Run the round trip for one catalog entry (or one of its mutants) over a family."""
    if mutant is not None:
        if mutant not in MUTANTS:
            raise KeyError(f"unknown mutant {mutant!r}")
        reduction_id = MUTANTS[mutant].base
        default = MUTANT_SUITE.get(mutant, DEFAULT_SUITE[reduction_id])
    else:
        default = DEFAULT_SUITE.get(reduction_id)
    if reduction_id not in REDUCTIONS:
        raise KeyError(f"unknown reduction {reduction_id!r}")
    record = REDUCTIONS[reduction_id]
    family = family or default.family
    size = default.size if size is None else size
    bounds = tuple(bounds or (default.bounds if default and default.bounds else record.bounds))
    if record.source not in FAMILY_SOURCES.get(family, set()):
        raise ValueError(f"family {family!r} does not generate {record.source} instances")
    backward = MUTANTS[mutant].backward if mutant is not None else record.backward
    source = PROBLEMS[record.source]

    report = VerificationReport(reduction_id, family, size, bounds, mutant=mutant)
    start = time.perf_counter()
    vacuous = 0
    for x in generate(family, size):
        report.instances += 1
        image = record.forward(x)
        sols = brute_force_enumerate(record.target, image, bounds)
        if not sols:
            vacuous += 1
        for y in sols:
            report.decoded += 1
            clause = None
            decoded = None
            try:
                decoded = backward(None if record.strong else x, image, y)
                if not source.check(x, decoded):
                    clause = f"decoded value fails the {record.source} predicate"
            except Exception as exc:  # a decode that crashes is a failure, not a harness error
                clause = f"{type(exc).__name__}: {exc}"
            if clause is not None:
                report.failure_count += 1
                if len(report.failures) < MAX_FAILURES_KEPT:
                    report.failures.append(Failure(_describe(x), repr(y), repr(decoded), clause))
    report.wall_time = time.perf_counter() - start
    if record.strong:
        report.notes.append("strong: backward ran without the source instance")
    if vacuous:
        report.notes.append(f"{vacuous} instances had no target solution inside the bounds")
    report.notes.append(f"target {record.target} enumerated exactly within descriptor bounds {bounds}")
    return report


def verify_all(mutants: bool = False) -> list[VerificationReport]:
    reports = [verify_reduction(rid) for rid in DEFAULT_SUITE]
    if mutants:
        reports += [verify_reduction(MUTANTS[m].base, mutant=m) for m in MUTANT_SUITE]
    return reports
