"""The acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are
repeated in the terminal summary.
"""

import time

from acceptance_log import record
from oracles import raw_descriptors, raw_member, window
from rsworkbench.adversary import SHIPPED_PAIRS, Refutation, characteristic, constant_output_pair, dnr_refuter, rt15_vs_ads
from rsworkbench.epsets import make, subset_star
from rsworkbench.harness import DEFAULT_SUITE, MUTANT_SUITE, generate, verify_reduction
from rsworkbench.machines import (
    SEED_PROGRAMS,
    FunctionalCatalog,
    OracleValue,
    eval_steps,
    pair,
    seed_catalog,
    string_code,
    string_decode,
    unpair,
)
from rsworkbench.problems import PROBLEMS, Variant, cycles, edgeless, graph_solution_check, grid, path
from rsworkbench.reductions import (
    MUTANTS,
    REDUCTIONS,
    dnr3_to_ocoh_d,
    gadget_to_rsg,
    order_to_graph,
    range_coding,
    range_decode,
    rt1_to_wrsg,
    stable_to_graph,
)
from rsworkbench.solvers import brute_force_enumerate, greedy_highly_recursive_rsgr, rsgr_solve_described

TIME_LIMIT = 300.0


def test_criterion_1_round_trip_suite():
    start = time.perf_counter()
    reports = [verify_reduction(rid) for rid in DEFAULT_SUITE]
    elapsed = time.perf_counter() - start
    failed = [r.reduction for r in reports if not r.passed]
    empty = [r.reduction for r in reports if r.decoded == 0]
    counts = {r.reduction: r.instances for r in reports}
    ok = not failed and not empty and counts["range_coding"] == 720 and elapsed <= TIME_LIMIT
    record(1, ok, f"{len(reports)} suites, {sum(r.decoded for r in reports)} decoded solutions, "
                  f"{sum(r.failure_count for r in reports)} failures, {elapsed:.0f}s"
                  + (f"; failing {failed}" if failed else "") + (f"; nothing decoded in {empty}" if empty else ""))
    for r in reports:
        print("   ", r.summary())
    assert ok


def _in_range_directly(f, n):
    # f(m) >= m - len(table) for every m, so preimages of n lie below n + len(table) + 1
    return any(f(m) == n for m in range(n + len(f.table) + 1))


def test_criterion_2_range_decode_ground_truth():
    injections = solutions = mismatches = 0
    for f in generate("injections", 6):
        injections += 1
        G = range_coding(f)
        for H in brute_force_enumerate("RSg", G, REDUCTIONS["range_coding"].bounds):
            solutions += 1
            decode = range_decode(f, G, H)
            mismatches += sum(bool(decode(n)) != _in_range_directly(f, n) for n in range(8))
    ok = injections == 720 and solutions > 0 and mismatches == 0
    record(2, ok, f"{injections} injections, {solutions} RSg solutions, {mismatches} disagreements on n < 8")
    assert ok


def _window_count(H, keep, n):
    return sum(1 for v in range(n) if v in H and keep(v))


def test_criterion_3_gadget_claims():
    checked = violations = 0
    bounds = REDUCTIONS["gadget_to_rsg"].bounds
    for inst in generate("delta02_small", DEFAULT_SUITE["gadget_to_rsg"].size):
        f, _ = inst
        G = gadget_to_rsg(inst)
        for H in brute_force_enumerate("RSg", G, bounds):
            checked += 1
            n = len(H.prefix) + 6 * len(H.period) + 3 * len(f.limit.prefix) + 60
            w = _window_count(H, lambda v: v % 3 == 0, n)
            x_out = _window_count(H, lambda v: v % 3 == 1 and (v // 3) not in f.limit, n)
            violations += w > 1 or x_out > 1
    ok = checked > 0 and violations == 0
    record(3, ok, f"{checked} brute-forced RSg solutions, {violations} with |H & W| > 1 or two x_n outside Z")
    assert ok


def _certified_graphs():
    yield from generate("graphs", 3)
    yield from (order_to_graph(L) for L in generate("tripartite", 2))
    yield from (stable_to_graph(c) for c in generate("stable_colorings", 2))
    yield from (rt1_to_wrsg(c) for c in generate("colorings", 4))
    yield from (gadget_to_rsg(x) for x in generate("delta02_small", 1))
    yield from (range_coding(f) for f in generate("injections", 5))


def test_criterion_4_solver_self_checks():
    greedy = {name: greedy_highly_recursive_rsgr(G).solution
              for name, G in (("path", path()), ("cycle", cycles(5)), ("grid", grid(3)), ("edgeless", edgeless()))}
    greedy_ok = all(graph_solution_check(Variant.RSGR, G, greedy[name])
                    for name, G in (("path", path()), ("cycle", cycles(5)), ("grid", grid(3)), ("edgeless", edgeless())))
    thirds = greedy["path"].first(40) == [3 * i for i in range(40)] and greedy["path"] == make("", "100")
    graphs = bad = 0
    for G in _certified_graphs():
        graphs += 1
        H = rsgr_solve_described(G).solution
        bad += not all(graph_solution_check(v, G, H) for v in Variant)
    ok = greedy_ok and thirds and bad == 0
    record(4, ok, f"greedy RSgr on path/cycle/grid/edgeless {'ok' if greedy_ok else 'FAILED'}, "
                  f"path gives multiples of 3: {thirds}; described solver on {graphs} graphs, "
                  f"{bad} failing some variant")
    assert ok


def test_criterion_5_epsets_exhaustive():
    raw = raw_descriptors(3, 3)
    sets = {d: make(*d) for d in raw}
    idem = all(make(s.prefix, s.period) == s and all((n in s) == raw_member(*d, n) for n in range(window(d)))
               for d, s in sets.items())
    pointwise = de_morgan = True
    for a in raw:
        x = sets[a]
        for b in raw:
            y = sets[b]
            both, either = x & y, x | y
            for n in range(window(a, b)):
                ia, ib = raw_member(*a, n), raw_member(*b, n)
                if (n in both) != (ia and ib) or (n in either) != (ia or ib) or (n in ~x) != (not ia):
                    pointwise = False
            if ~both != (~x | ~y) or ~either != (~x & ~y):
                de_morgan = False
    canon = sorted(set(sets.values()), key=repr)
    star = {(i, j): subset_star(a, b) for i, a in enumerate(canon) for j, b in enumerate(canon)}
    oracle_ok = all(star[i, j] == (not any(n in a and n not in b
                                           for n in range(len(a.prefix) + len(b.prefix) + 36,
                                                          len(a.prefix) + len(b.prefix) + 72)))
                    for i, a in enumerate(canon) for j, b in enumerate(canon))
    k = range(len(canon))
    transitive = all(star[i, m] for i in k for j in k if star[i, j] for m in k if star[j, m])
    ok = idem and pointwise and de_morgan and oracle_ok and transitive
    record(5, ok, f"{len(raw)} descriptors ({len(canon)} distinct sets): idempotence {idem}, "
                  f"pointwise {pointwise}, De Morgan {de_morgan}, subset_star oracle {oracle_ok}, "
                  f"transitivity {transitive}")
    assert ok


ORACLES = [OracleValue.constant(v) for v in range(3)] + [
    OracleValue((0, 1, 2, 3), 1), OracleValue((5,), 0), OracleValue.from_bits("0110"),
    OracleValue.from_bits(""), OracleValue.from_upset(make("", "10")), OracleValue.from_upset(make("1", "0")),
]


def test_criterion_6_machines():
    cat = FunctionalCatalog.of(*SEED_PROGRAMS)
    violations = 0
    for e in range(len(cat)):
        for oracle in ORACLES:
            for x in range(6):
                outs = [eval_steps(cat, e, oracle, x, s) for s in range(65)]
                first = next((i for i, v in enumerate(outs) if v is not None), None)
                if first is not None and any(v != outs[first] for v in outs[first:]):
                    violations += 1
    pairs_ok = sorted(pair(*unpair(k)) for k in range(10_001)) == list(range(10_001))
    pairs_ok = pairs_ok and len({unpair(k) for k in range(10_001)}) == 10_001
    words = [string_decode(k) for k in range(10_001)]
    strings_ok = [string_code(w) for w in words] == list(range(10_001)) and len(set(words)) == 10_001
    ok = violations == 0 and pairs_ok and strings_ok
    record(6, ok, f"{len(cat)} programs x {len(ORACLES)} oracles x 6 inputs over budgets 0..64: "
                  f"{violations} monotonicity violations; pairing bijective {pairs_ok}, string code bijective {strings_ok}")
    assert ok


def test_criterion_7_dnr_forcing():
    Z = dnr3_to_ocoh_d((seed_catalog(), OracleValue.constant(0)))
    seen = set()
    total = 0
    for bounds in ((2, 2), (3, 2), (4, 1)):
        for g in brute_force_enumerate("oCOH-D-codes", Z, bounds):
            total += 1
            seen.add((g(0), g(1)))
    ok = total > 0 and seen == {(0, 1)}
    record(7, ok, f"{total} brute-forced solutions; values (g(0), g(1)) seen: {sorted(seen)}")
    assert ok


def test_criterion_8_adversary():
    verified = []
    for name, pair_ in SHIPPED_PAIRS.items():
        result = rt15_vs_ads(pair_, budget=10_000)
        if not isinstance(result, Refutation) or not result.verified:
            continue
        c = result.full_coloring()
        L = pair_.describe(c)
        n = len(result.solution.prefix) + 8
        answer = pair_.backward(result.coloring, characteristic(result.solution.members(n), n))
        if (PROBLEMS["ADS"].check(L, (result.kind, result.solution))
                and c.classes[result.color].is_finite() and answer[:1] == (result.color,)):
            verified.append(name)
    hit = dnr_refuter(constant_output_pair(lambda e: 0), seed_catalog(), OracleValue.constant(0))
    collision = eval_steps(seed_catalog(), hit.index, OracleValue.constant(0), hit.index, 10) == hit.table[hit.index]
    ok = len(verified) >= 3 and collision
    record(8, ok, f"re-verified refutations against {verified}; DNR collision at e={hit.index} {collision}")
    assert ok


def test_criterion_9_mutants():
    caught = {}
    for mid in MUTANT_SUITE:
        report = verify_reduction(MUTANTS[mid].base, mutant=mid)
        caught[mid] = report.failure_count
    ok = len(caught) == 5 and all(n > 0 for n in caught.values())
    record(9, ok, ", ".join(f"{m}: {n} failures" for m, n in caught.items()))
    assert ok


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
