import pytest
from hypothesis import given, strategies as st

from oracles import naive_members, raw_member, window
from rsworkbench.epsets import (
    EMPTY,
    EVENS,
    NATURALS,
    ODDS,
    Delta02Desc,
    Extensional,
    Intensional,
    SetOp,
    UPSet,
    a_sigma,
    combine,
    enumerate_upsets,
    is_finite,
    make,
    nth_element,
    subset_star,
)

bitword = st.text(alphabet="01", max_size=5)
periodword = st.text(alphabet="01", min_size=1, max_size=4)
descs = st.tuples(bitword, periodword)


def build(d):
    return make(*d)


# make and canonical form

def test_make_evens_is_canonical():
    assert make("", "10") == EVENS
    assert (EVENS.prefix, EVENS.period) == ("", "10")


def test_make_prefix_one_then_period_ten():
    s = make("1", "10")
    assert s.first(6) == [0, 1, 3, 5, 7, 9]
    assert (s.prefix, s.period) == ("1", "10")


def test_make_finite_descriptor():
    s = make("101", "0")
    assert s.is_finite() and list(s) == [0, 2]


def test_make_rejects_empty_period():
    with pytest.raises(ValueError):
        make("1", "")


def test_make_rejects_non_bits():
    with pytest.raises(ValueError):
        make("12", "1")


def test_period_reduced_to_primitive_root():
    s = make("", "1010")
    assert s.period == "10"


@given(descs)
def test_canonical_form_idempotent(d):
    s = build(d)
    assert make(s.prefix, s.period) == s
    assert make(s.prefix, s.period).prefix == s.prefix


@given(descs)
def test_canonical_form_preserves_membership(d):
    s = build(d)
    assert all((n in s) == raw_member(*d, n) for n in range(window(d)))


@given(descs)
def test_canonical_prefix_is_shortest(d):
    s = build(d)
    if s.prefix:
        assert s.prefix[-1] != s.period[-1]


# combine

def test_complement_of_evens():
    assert combine(SetOp.COMPLEMENT, EVENS) == ODDS


def test_intersect_evens_odds_empty():
    assert combine("intersect", EVENS, ODDS) == EMPTY


def test_union_singleton_and_odds():
    s = combine("union", make("1", "0"), make("", "01"))
    assert s.first(6) == [0, 1, 3, 5, 7, 9]
    assert s == make("1", "10")


def test_combine_arity_errors():
    with pytest.raises(ValueError):
        combine("complement", EVENS, ODDS)
    with pytest.raises(ValueError):
        combine("union", EVENS)


@given(descs, descs)
def test_combine_pointwise(a, b):
    x, y = build(a), build(b)
    n = window(a, b)
    for k in range(n):
        ia, ib = raw_member(*a, k), raw_member(*b, k)
        assert (k in (x & y)) == (ia and ib)
        assert (k in (x | y)) == (ia or ib)
        assert (k in ~x) == (not ia)


@given(descs, descs)
def test_de_morgan(a, b):
    x, y = build(a), build(b)
    assert ~(x & y) == (~x | ~y)
    assert ~(x | y) == (~x & ~y)


@given(descs)
def test_double_complement(d):
    assert ~~build(d) == build(d)


# is_finite

def test_is_finite_examples():
    assert not is_finite(EVENS)
    assert is_finite(make("101", "0"))
    assert is_finite(~make("0", "1"))


@given(descs)
def test_is_finite_matches_period(d):
    assert is_finite(build(d)) == ("1" not in d[1])


# nth_element

def test_nth_element_examples():
    assert nth_element(EVENS, 3) == 6
    assert nth_element(make("001", "0"), 0) == 2
    assert nth_element(ODDS & UPSet.residues(3, [0]), 1) == 9


def test_nth_element_out_of_range():
    with pytest.raises(IndexError):
        nth_element(make("101", "0"), 2)
    with pytest.raises(IndexError):
        nth_element(EVENS, -1)


@given(descs, st.integers(min_value=0, max_value=20))
def test_nth_element_matches_scan(d, i):
    scan = naive_members(*d, 200)
    s = build(d)
    if i < len(scan):
        assert nth_element(s, i) == scan[i]


# subset_star

def test_subset_star_examples():
    assert subset_star(EVENS, NATURALS)
    assert subset_star(UPSet.finite([0, 1, 2]), EMPTY)
    assert not subset_star(EVENS, ODDS)


@given(descs, descs, descs)
def test_subset_star_transitive(a, b, c):
    x, y, z = build(a), build(b), build(c)
    if subset_star(x, y) and subset_star(y, z):
        assert subset_star(x, z)


@given(descs, descs)
def test_subset_star_is_finite_difference(a, b):
    x, y = build(a), build(b)
    n = window(a, b)
    late = [k for k in range(n // 2, n) if raw_member(*a, k) and not raw_member(*b, k)]
    assert subset_star(x, y) == (not late)


# shift, above, below

@given(descs, st.integers(min_value=-3, max_value=6))
def test_shift_moves_members(d, k):
    s = build(d)
    t = s.shift(k)
    for n in range(30):
        expect = (n - k) >= 0 and (n - k) in s
        assert (n in t) == expect


@given(descs, st.integers(min_value=0, max_value=10))
def test_above_and_below_split(d, n):
    s = build(d)
    assert (s.above(n) | s.below(n) | (s & UPSet.finite([n]))) == s
    assert not (s.above(n) & s.below(n))


def test_enumerate_upsets_distinct_and_complete():
    sets = enumerate_upsets(2, 2)
    assert len(sets) == len(set(sets))
    raw = {make(p, q) for p in ("", "0", "1", "00", "01", "10", "11") for q in ("0", "1", "00", "01", "10", "11")}
    assert set(sets) == raw


def test_json_round_trip():
    s = make("011", "100")
    assert UPSet.from_json(s.to_json()) == s


# a_sigma and sequences

def test_a_sigma_empty_word_is_everything():
    assert a_sigma(Extensional((EVENS,)), "") == NATURALS


def test_a_sigma_examples():
    assert a_sigma(Extensional((EVENS,)), "1") == EVENS
    assert a_sigma(Extensional((EVENS, UPSet.residues(3, [0]))), "11") == UPSet.residues(6, [0])


@given(st.lists(descs, max_size=3), bitword, st.sampled_from("01"))
def test_a_sigma_extension(head, sigma, bit):
    seq = Extensional(tuple(build(d) for d in head))
    longer = a_sigma(seq, sigma + bit)
    assert longer <= a_sigma(seq, sigma)
    assert longer | a_sigma(seq, sigma + ("1" if bit == "0" else "0")) == a_sigma(seq, sigma)


def test_extensional_tail_rule():
    seq = Extensional((EVENS,), tail_full=True)
    assert seq[0] == EVENS and seq[5] == NATURALS
    assert Extensional((EVENS,))[3] == EMPTY
    assert Extensional.from_json(seq.to_json()) == seq


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        Intensional("no-such-family", ())


def test_delta02_limit_and_overrides():
    f = Delta02Desc(EVENS, ((1, 0, 1), (0, 2, 0)))
    assert f(1, 0) == 1 and f(1, 1) == 0
    assert f(0, 2) == 0 and f(0, 3) == 1
    assert f.settle_stage == 3
    assert Delta02Desc.from_json(f.to_json()) == f


def test_delta02_rejects_bad_override():
    with pytest.raises(ValueError):
        Delta02Desc(EVENS, ((0, 1, 2),))


@given(descs)
def test_iteration_matches_scan(d):
    s = build(d)
    assert s.members(40) == naive_members(*d, 40)
    scan = naive_members(*d, 400)
    assert s.first(min(len(scan), 12)) == scan[:12]
