import pytest
from hypothesis import given, strategies as st

from oracles import finite_graph_check
from rsworkbench.epsets import EMPTY, EVENS, NATURALS, ODDS, Delta02Desc, Extensional, UPSet, enumerate_upsets
from rsworkbench.machines import FunctionalCatalog, OracleValue
from rsworkbench.problems import (
    PROBLEMS,
    ChainKind,
    ColoringDesc,
    InjectionDesc,
    LexOrder,
    StableColoringDesc,
    Tripartite,
    Variant,
    chain_check,
    cohesive_check,
    complete,
    cycles,
    dnr_check,
    edgeless,
    finite_edges,
    graph_solution_check,
    grid,
    homogeneous_check,
    homogeneous_color,
    inforone_check,
    instance_from_json,
    instance_to_json,
    is_clique,
    is_independent,
    lpo,
    monochrome_check,
    monochrome_color,
    ocoh_check,
    path,
    star,
    validate_inforone_instance,
)

SMALL = enumerate_upsets(2, 2)
OMEGA = Tripartite(NATURALS)
OMEGA_STAR = Tripartite(EMPTY, (), NATURALS)
ANY = OracleValue.constant(0)

edge_lists = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda e: e[0] != e[1]), max_size=5)


# graphs

def test_graph_examples():
    assert graph_solution_check("wRSgr", edgeless(), NATURALS)
    assert graph_solution_check("RSg", finite_edges([(0, 1)]), NATURALS)
    assert not graph_solution_check("wRSg", complete(), UPSet.finite([0, 1]))


def test_graph_check_rejects_non_vertices():
    with pytest.raises(ValueError):
        graph_solution_check("RSg", edgeless(EVENS), NATURALS)


def test_neighbors_of_named_graphs():
    assert list(path().neighbors(3)) == [2, 4]
    assert list(cycles(5).neighbors(5)) == [6, 9]
    assert list(grid(3).neighbors(4)) == [1, 3, 5, 7]
    assert star(0).neighbors(0) == UPSet("0", "1")
    assert complete().neighbors(2) == UPSet("110", "1")


def test_star_center_violates_rsg_but_not_weak_form():
    G = star(0)
    H = UPSet("0", "1")
    assert graph_solution_check("wRSgr", G, H)
    assert graph_solution_check("RSg", G, H)
    assert not graph_solution_check("RSg", finite_edges([(0, 1), (0, 2)]), NATURALS)


@given(edge_lists, st.sampled_from(SMALL))
def test_graph_check_matches_finite_oracle(edges, H):
    G = finite_edges(edges)
    for v in Variant:
        assert graph_solution_check(v, G, H) == finite_graph_check(v.value, edges, (H.prefix, H.period))


@given(edge_lists, st.sampled_from(SMALL), st.sampled_from(["edgeless", "complete"]))
def test_variant_implications(edges, H, base):
    G = finite_edges(edges, base=base)
    ok = {v: graph_solution_check(v, G, H) for v in Variant}
    assert not ok[Variant.RSGR] or ok[Variant.RSG]
    assert not ok[Variant.RSG] or ok[Variant.WRSG]
    assert not ok[Variant.RSGR] or ok[Variant.WRSGR]
    assert not ok[Variant.WRSGR] or ok[Variant.WRSG]


@given(edge_lists, st.sampled_from(SMALL), st.sampled_from(["edgeless", "complete"]))
def test_homogeneous_sets_pass_weak_strict_form(edges, H, base):
    G = finite_edges(edges, base=base)
    if is_clique(G, H) or is_independent(G, H):
        assert graph_solution_check(Variant.WRSGR, G, H)


# orders

def test_chain_examples():
    assert chain_check("AscSeq", OMEGA, EVENS)
    assert chain_check("DescChain", OMEGA_STAR, ODDS)
    assert not chain_check("AscSeq", OMEGA_STAR, EVENS)


def test_tripartite_ranks():
    L = Tripartite(EVENS, (1, 3), UPSet("0000", "01"))
    assert L.less(0, 2) and L.less(100, 1) and L.less(1, 3) and L.less(3, 7) and L.less(7, 5)
    assert chain_check(ChainKind.ASC_SEQ, L, EVENS)
    assert chain_check(ChainKind.DESC_SEQ, L, UPSet("0000", "01"))
    assert not chain_check(ChainKind.ASC_CHAIN, L, UPSet("0000", "01"))


def test_tripartite_rejects_overlap():
    with pytest.raises(ValueError):
        Tripartite(EVENS, (2,), ODDS)


def test_chain_subset_of_domain_required():
    with pytest.raises(ValueError):
        chain_check("AscSeq", Tripartite(EVENS), NATURALS)


@given(st.sampled_from(SMALL))
def test_infinite_part_of_asc_is_asc_seq(S):
    assert chain_check("AscSeq", OMEGA, S) == S.is_infinite()
    assert chain_check("DescSeq", OMEGA_STAR, S) == S.is_infinite()


def test_lex_order_from_single_set():
    L = LexOrder(Extensional((EVENS,)))
    assert L.stagewise(6) == [1, 3, 5, 0, 2, 4]


# colorings

def test_homogeneous_examples():
    assert homogeneous_color(StableColoringDesc(NATURALS), NATURALS) == 1
    assert monochrome_color(ColoringDesc((EVENS, ODDS)), EVENS) == 0
    assert homogeneous_color(StableColoringDesc(EVENS), ODDS) == 0


def test_overrides_break_homogeneity():
    c = StableColoringDesc(NATURALS, ((1, 3, 0),))
    assert not homogeneous_check(c, NATURALS)
    assert homogeneous_check(c, UPSet("10", "1"))  # drops 1, so the overridden pair is gone


def test_coloring_must_partition():
    with pytest.raises(ValueError):
        ColoringDesc((EVENS, EVENS))
    with pytest.raises(ValueError):
        ColoringDesc((EVENS,))


def test_monochrome_needs_infinite():
    c = ColoringDesc((EVENS, ODDS))
    assert not monochrome_check(c, UPSet.finite([0, 2]))
    assert not monochrome_check(c, NATURALS)


def test_coloring_from_word():
    c = ColoringDesc.from_word([2, 0], [1], 3)
    assert [c(n) for n in range(4)] == [2, 0, 1, 1]


# sequences

def test_cohesive_examples():
    assert cohesive_check(Extensional((EVENS,)), UPSet.residues(4, [0]))
    assert cohesive_check(Extensional((EVENS,), tail_full=True), ODDS)
    assert not cohesive_check(Extensional((EVENS,)), NATURALS)


@given(st.lists(st.sampled_from(SMALL), max_size=2), st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_cohesion_passes_to_infinite_subsets(head, C, sub):
    seq = Extensional(tuple(head))
    D = C & sub
    if C.is_infinite() and D.is_infinite() and cohesive_check(seq, C):
        assert cohesive_check(seq, D)


def test_ocoh_examples():
    seq = Extensional((EVENS,))
    assert ocoh_check(seq, "1000", 3)
    assert ocoh_check(seq, "", 0)
    assert not ocoh_check(seq, "01", 2)


def test_inforone_examples():
    seq = Extensional((EVENS,))
    assert inforone_check(seq, ODDS)
    assert inforone_check(seq, NATURALS)
    assert not inforone_check(Extensional((UPSet.finite([0, 2]),)), NATURALS)


def test_inforone_instance_validation():
    validate_inforone_instance(Extensional((EVENS,)))
    with pytest.raises(ValueError):
        validate_inforone_instance(Extensional((EVENS,), tail_full=True))


# LPO and DNR

def test_lpo_examples():
    assert lpo(OracleValue.constant(1)) == 1
    assert lpo(OracleValue((1, 1, 1, 0), 1)) == 0
    assert lpo(OracleValue.constant(0)) == 0


def test_lpo_rejects_partial_input():
    with pytest.raises(ValueError):
        lpo(OracleValue.from_bits("11"))


def test_dnr_examples():
    assert dnr_check(FunctionalCatalog.of("e_div"), ANY, [5], False)
    assert not dnr_check(FunctionalCatalog.of("e_zero"), ANY, [0], False)
    assert dnr_check(FunctionalCatalog.of("e_zero"), ANY, [1], False)


def test_dnr_two_bounded():
    assert not dnr_check(FunctionalCatalog.of("e_zero"), ANY, [2], True)


def test_range_problem_uses_the_table():
    f = InjectionDesc((1, 0, 4), shift=2)
    assert [n for n in range(8) if f.in_range(n)] == [0, 1, 4, 5, 6, 7]
    assert PROBLEMS["RAN"].check(f, f.in_range)
    assert not PROBLEMS["RAN"].check(f, lambda n: True)


def test_injection_validation():
    with pytest.raises(ValueError):
        InjectionDesc((0, 0))
    with pytest.raises(ValueError):
        InjectionDesc((5,), shift=1)


@pytest.mark.parametrize("instance", [
    InjectionDesc((2, 0, 1)),
    Tripartite(EVENS, (1,), UPSet("00", "01")),
    StableColoringDesc(EVENS, ((0, 3, 0),)),
    ColoringDesc((EVENS, ODDS)),
    Extensional((EVENS, UPSet.finite([1])), tail_full=False),
    (Delta02Desc(ODDS, ((1, 2, 0),)), Extensional((EVENS,))),
])
def test_instance_json_round_trip(instance):
    assert instance_from_json(instance_to_json(instance)) == instance


def test_graph_json_round_trip():
    G = finite_edges([(0, 3), (1, 2)])
    H = instance_from_json(instance_to_json(G))
    assert H.edges_below(6) == G.edges_below(6)
