import io
import sys

import pytest
from hypothesis import given, strategies as st

from rsworkbench.adversary import (
    COLORS,
    SHIPPED_PAIRS,
    BudgetExhausted,
    CandidatePair,
    CatalogTooSmall,
    Monitor,
    MonotonicityViolation,
    Refutation,
    Relation,
    SubprocessPair,
    chain_strings,
    characteristic,
    constant_output_pair,
    decode_prefix,
    dnr_refuter,
    encode_prefix,
    graph_prefix,
    order_prefix,
    pair_index,
    relation_length,
    rt15_vs_ads,
    serve,
)
from rsworkbench.epsets import EMPTY, NATURALS, UPSet
from rsworkbench.machines import FunctionalCatalog, OracleValue, seed_catalog
from rsworkbench.problems import PROBLEMS, Tripartite, path

REFUTED = ("constant_two", "omega_min_color", "omega_second_color", "reverse_min_color")


def _independently_refuted(pair: CandidatePair, result: Refutation) -> bool:
    c = result.full_coloring()
    L = pair.describe(c)
    if not PROBLEMS["ADS"].check(L, (result.kind, result.solution)):
        return False
    if not c.classes[result.color].is_finite():
        return False
    n = max(result.solution.prefix.__len__(), 1) + 8
    answer = pair.backward(tuple(result.coloring), characteristic(result.solution.members(n), n))
    return bool(answer) and answer[0] == result.color


# stream codings

def test_pair_index_is_a_bijection():
    seen = [pair_index(i, j) for j in range(40) for i in range(j)]
    assert sorted(seen) == list(range(relation_length(40)))


def test_order_prefix_of_omega_and_reverse():
    assert order_prefix(Tripartite(NATURALS), 4) == (1,) * 6
    assert order_prefix(Tripartite(EMPTY, (), NATURALS), 4) == (0,) * 6


def test_graph_prefix_of_path():
    bits = graph_prefix(path(), 4)
    assert [bits[pair_index(i, j)] for j in range(4) for i in range(j)] == [1, 0, 1, 0, 0, 1]


@given(st.lists(st.integers(0, 15), max_size=40))
def test_hex_encoding_round_trip(prefix):
    assert decode_prefix(encode_prefix(prefix)) == tuple(prefix)


def test_relation_unknown_pairs():
    rel = Relation((1,))
    assert rel.less(0, 1) is True and rel.less(1, 0) is False
    assert rel.less(0, 2) is None
    assert rel.ascending([0, 1]) and not rel.descending([0, 1])


def test_chain_strings_code_order_and_support():
    rel = Relation(order_prefix(Tripartite(NATURALS), 4))
    words = [w for w, _, _ in chain_strings(rel, 3)]
    assert words == [(1,), (0, 1), (1, 0), (1, 1)]
    assert all(any(w) for w in words)


# monitoring

def test_forward_monotonicity_enforced():
    grow = iter([(1, 1), (0,)])
    bad = CandidatePair("bad", lambda source: next(grow), lambda source, solution: ())
    mon = Monitor(bad)
    mon.forward((0,))
    with pytest.raises(MonotonicityViolation):
        mon.forward((0, 1))


def test_backward_monotonicity_enforced():
    answers = iter([(3,), (2,)])
    bad = CandidatePair("bad", lambda source: (), lambda source, solution: next(answers))
    mon = Monitor(bad)
    mon.backward((0,), (1,))
    with pytest.raises(MonotonicityViolation):
        mon.backward((0, 0), (1, 1))


# the five-color game

@pytest.mark.parametrize("name", REFUTED)
def test_shipped_pair_is_refuted_and_verified(name):
    pair = SHIPPED_PAIRS[name]
    result = rt15_vs_ads(pair, budget=10_000)
    assert isinstance(result, Refutation) and result.verified
    assert _independently_refuted(pair, result)


def test_constant_two_avoids_color_two():
    result = rt15_vs_ads(SHIPPED_PAIRS["constant_two"])
    assert result.color == 2
    assert 2 not in result.coloring[1:]


def test_reverse_order_refuted_by_descending_set():
    assert rt15_vs_ads(SHIPPED_PAIRS["reverse_min_color"]).kind == "desc"


@pytest.mark.parametrize("name", REFUTED + ("stagewise_adc_5",))
def test_coloring_avoids_forbidden_colors(name):
    result = rt15_vs_ads(SHIPPED_PAIRS[name], budget=400)
    for event in result.trace:
        assert event["color"] not in event["forbidden"]
        assert event["color"] == min(set(range(COLORS)) - set(event["forbidden"]))


def test_never_answering_pair_exhausts_budget():
    result = rt15_vs_ads(SHIPPED_PAIRS["never"], budget=200)
    assert isinstance(result, BudgetExhausted)


def test_stagewise_pair_is_not_refuted():
    result = rt15_vs_ads(SHIPPED_PAIRS["stagewise_adc_5"])
    assert isinstance(result, BudgetExhausted) and result.settled


def test_describe_must_match_stream():
    base = SHIPPED_PAIRS["omega_min_color"]
    liar = CandidatePair("liar", base.forward, base.backward,
                         describe=lambda c: Tripartite(EMPTY, (), NATURALS))
    with pytest.raises(ValueError):
        rt15_vs_ads(liar, budget=50)


def test_black_box_without_describe_is_unverified():
    base = SHIPPED_PAIRS["constant_two"]
    result = rt15_vs_ads(CandidatePair("bare", base.forward, base.backward), budget=100)
    assert isinstance(result, Refutation) and not result.verified
    assert result.to_json()["result"] == "unverified_refutation"


# the line protocol

def test_serve_answers_requests():
    out = io.StringIO()
    serve(SHIPPED_PAIRS["constant_two"], io.StringIO("F 01\nB 0|1\n"), out)
    lines = out.getvalue().splitlines()
    assert lines == ["1", "2"]


def test_serve_empty_answer_line():
    out = io.StringIO()
    serve(SHIPPED_PAIRS["never"], io.StringIO("B |\n"), out)
    assert out.getvalue() == "\n"


def test_subprocess_pair_plays_the_game():
    argv = [sys.executable, "-m", "rsworkbench", "serve-pair", "constant_two"]
    with SubprocessPair(argv, "sub") as box:
        assert box.forward((0, 1)) == (1,)
        result = rt15_vs_ads(box.pair(describe=SHIPPED_PAIRS["constant_two"].describe), budget=200)
    assert isinstance(result, Refutation) and result.verified


# the DNR refuter

def test_dnr_refuter_constant_zero():
    hit = dnr_refuter(constant_output_pair(lambda e: 0), seed_catalog(), OracleValue.constant(0))
    assert hit.index == 1 and hit.table == (0, 0) and hit.independent == ()


def test_dnr_refuter_constant_one_needs_e_one():
    cat = FunctionalCatalog.of("e_div", "e_zero", "e_one")
    hit = dnr_refuter(constant_output_pair(lambda e: 1), cat, OracleValue.constant(0))
    assert hit.index == 2


def test_dnr_refuter_reads_the_solution_first():
    def backward(source, solution):
        return (1,) * 4 if any(solution) else ()
    pair = CandidatePair("reads", lambda source: graph_prefix(path(), len(source)), backward)
    hit = dnr_refuter(pair, FunctionalCatalog.of("e_one"), OracleValue.constant(0))
    assert hit.index == 0 and hit.independent == (0,)


def test_dnr_refuter_catalog_too_small():
    with pytest.raises(CatalogTooSmall, match="catalog too small"):
        dnr_refuter(constant_output_pair(lambda e: 0), FunctionalCatalog.of("e_div"), OracleValue.constant(0))
