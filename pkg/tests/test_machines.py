import pytest
from hypothesis import given, strategies as st

from rsworkbench.epsets import EVENS
from rsworkbench.machines import (
    SEED_PROGRAMS,
    FunctionalCatalog,
    OracleValue,
    Program,
    eval_steps,
    halts_certified,
    jump_string,
    pair,
    seed_catalog,
    string_code,
    string_decode,
    triple,
    unpair,
    untriple,
)

ANY = OracleValue.constant(3)

# counts a down to zero: SET, then (JZ, SUB, JMP) per unit, then JZ and HALT
COUNTDOWN = Program("countdown", (("SET", "a", "x"), ("JZ", "a", 4), ("SUB", "a", 1), ("JMP", 1), ("HALT", 5)))

oracles = st.builds(
    OracleValue,
    st.lists(st.integers(min_value=0, max_value=3), max_size=6).map(tuple),
    st.one_of(st.integers(min_value=0, max_value=2), st.none(), st.just(EVENS)),
)


def test_divergent_program_runs():
    assert eval_steps(FunctionalCatalog.of("e_div"), 0, ANY, 0, 1000) is None


def test_zero_program_halts_in_one_step():
    assert eval_steps(FunctionalCatalog.of("e_zero"), 0, ANY, 9, 1) == 0
    assert eval_steps(FunctionalCatalog.of("e_zero"), 0, ANY, 9, 0) is None


def test_echo_reads_oracle():
    cat = FunctionalCatalog.of("e_echo")
    assert eval_steps(cat, 0, OracleValue((7,)), 4, 2) == 7
    assert eval_steps(cat, 0, OracleValue((7,)), 4, 1) is None


def test_step_count_of_countdown():
    cat = FunctionalCatalog((COUNTDOWN,))
    assert eval_steps(cat, 0, ANY, 4, 15) == 5
    assert eval_steps(cat, 0, ANY, 4, 14) is None


def test_partial_oracle_stalls():
    cat = FunctionalCatalog.of("e_diag")
    assert eval_steps(cat, 0, OracleValue.from_bits("01"), 1, 10) == 1
    assert eval_steps(cat, 0, OracleValue.from_bits("01"), 2, 10) is None


def test_index_out_of_range():
    with pytest.raises(IndexError):
        eval_steps(seed_catalog(), 2, ANY, 0, 5)


def test_certificate_required():
    cat = FunctionalCatalog((COUNTDOWN,))
    with pytest.raises(ValueError):
        halts_certified(cat, 0, ANY, 0)


@pytest.mark.parametrize("code", [
    (),
    (("NOP",),),
    (("SET", "x", 1), ("HALT", 0)),
    (("JMP", 5),),
    (("SET", "a", 1),),
    (("HALT", -1),),
])
def test_bad_listings_rejected(code):
    with pytest.raises(ValueError):
        Program("bad", code)


def test_jump_string_examples():
    cat = seed_catalog()
    assert jump_string(cat, ANY, 2) == "01"
    assert jump_string(cat, ANY, 0) == ""
    assert jump_string(FunctionalCatalog.of("e_zero"), ANY, 5) == "10000"


@given(oracles, st.integers(min_value=0, max_value=5))
def test_monotone_convergence(oracle, x):
    cat = FunctionalCatalog.of(*SEED_PROGRAMS)
    for e in range(len(cat)):
        seen = None
        for s in range(0, 65):
            out = eval_steps(cat, e, oracle, x, s)
            if seen is not None:
                assert out == seen
            seen = out if out is not None else seen


@given(oracles)
def test_jump_string_bits_only_rise(oracle):
    cat = FunctionalCatalog.of(*SEED_PROGRAMS)
    words = [jump_string(cat, oracle, s) for s in range(12)]
    for a, b in zip(words, words[1:]):
        assert all(not (x == "1" and y == "0") for x, y in zip(a, b))


@given(oracles, st.integers(min_value=0, max_value=5))
def test_certificates_are_sound(oracle, x):
    cat = FunctionalCatalog.of(*SEED_PROGRAMS)
    for e, prog in enumerate(cat.programs):
        assert halts_certified(cat, e, oracle, x) == eval_steps(cat, e, oracle, x, prog.halt_bound + 50)


def test_pairing_examples():
    assert pair(0, 0) == 0
    assert pair(1, 0) == 1 and pair(0, 1) == 2
    assert string_code("") == 0
    assert string_code("10") == 5


def test_codings_are_bijections():
    seen_pairs = set()
    for k in range(10_001):
        m, n = unpair(k)
        assert pair(m, n) == k
        seen_pairs.add((m, n))
        assert string_code(string_decode(k)) == k
        assert untriple(triple(*untriple(k))) == untriple(k)
    assert len(seen_pairs) == 10_001


def test_string_code_orders_by_length_then_value():
    codes = [string_code(w) for w in ("", "0", "1", "00", "01", "10", "11")]
    assert codes == list(range(7))


def test_string_code_rejects_non_bits():
    with pytest.raises(ValueError):
        string_code("2")


def test_catalog_json_round_trip():
    cat = FunctionalCatalog.of(*SEED_PROGRAMS)
    assert FunctionalCatalog.from_json(cat.to_json()) == cat
    assert cat.index("e_echo") == 3


def test_oracle_value_json_round_trip():
    for o in (OracleValue((1, 2), 0), OracleValue.from_bits("0110"), OracleValue.from_upset(EVENS)):
        assert OracleValue.from_json(o.to_json()) == o
    assert OracleValue.from_upset(EVENS).prefix(4) == (1, 0, 1, 0)
