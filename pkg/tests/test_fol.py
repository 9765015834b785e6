"""Statement parsing, evidence sets, and the sign-pattern index codec."""

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semcomm.errors import ArityConflictError, StatementParseError
from semcomm.fol import (EvidenceSet, Vocabulary, parse_evidence,
                         parse_statement, parse_triple_list, q_index, q_swap,
                         q_unpack)

from conftest import random_evidence_text


def _parse(text: str) -> EvidenceSet:
    return parse_evidence(io.StringIO(text), source_id="test")


def test_monadic_and_dyadic():
    ev = _parse("Barks(Rex)\nChases(Rex, Tom)\n")
    assert [p.name for p in ev.predicates] == ["Barks", "Chases"]
    assert [e.name for e in ev.entities] == ["Rex", "Tom"]
    s1, s2 = ev.statements
    assert s1.positive and s1.obj is None
    assert s2.obj.name == "Tom"


def test_negation_prefix():
    ev = _parse("!Barks(Rex)\n")
    assert not ev.statements[0].positive


def test_comments_and_blank_lines():
    ev = _parse("# header\n\nBarks(Rex)\n  # trailing\n")
    assert len(ev.statements) == 1


def test_duplicates_kept_in_stream_once_in_distinct():
    ev = _parse("Barks(Rex)\nBarks(Rex)\nBarks(Rex)\n")
    assert len(ev.statements) == 3
    assert len(ev.distinct_statements) == 1


def test_first_appearance_order():
    ev = _parse("Naps(Zoe)\nBarks(Abe)\nNaps(Abe)\n")
    assert [e.name for e in ev.entities] == ["Zoe", "Abe"]
    assert [p.name for p in ev.predicates] == ["Naps", "Barks"]


def test_arity_conflict():
    with pytest.raises(ArityConflictError):
        _parse("Barks(Rex)\nBarks(Rex, Tom)\n")


@pytest.mark.parametrize("bad", [
    "Barks",
    "Barks(",
    "Barks()",
    "Barks(Rex,)",
    "Barks(Rex, Tom, Sid)",
    "!!Barks(Rex)",
    "Barks(Rex) extra",
])
def test_parse_errors_carry_line_number(bad):
    with pytest.raises(StatementParseError) as err:
        _parse("Hums(Ada)\n" + bad + "\n")
    assert "2" in str(err.value)


def test_parse_statement_direct():
    vocab = Vocabulary()
    st_ = parse_statement("Chases(Rex, Tom)", vocab)
    assert st_.predicate.name == "Chases"
    assert st_.subject.name == "Rex"


def test_normalized_text_round_trip():
    text = "Barks(Rex)\n!Chases(Rex, Tom)\nBarks(Rex)\n"
    ev = _parse(text)
    assert ev.normalized_text() == text
    again = _parse(ev.normalized_text())
    assert again.normalized_text() == text


def test_normalized_text_empty():
    assert _parse("# nothing\n").normalized_text() == ""


def test_observations_metadata():
    ev = parse_evidence(io.StringIO("Barks(Rex)\n"), observations=5812)
    assert ev.observations == 5812


def test_parse_triple_list():
    ev = parse_triple_list(["Barks(Rex)", "!Naps(Tom)"], source_id="triples")
    assert len(ev.statements) == 2
    assert ev.source_id == "triples"
    assert not ev.statements[1].positive


def test_random_evidence_reparses(rng):
    for _ in range(25):
        text = random_evidence_text(rng)
        ev = _parse(text)
        again = _parse(ev.normalized_text())
        assert again.normalized_text() == ev.normalized_text()


@given(st.integers(min_value=1, max_value=6), st.data())
@settings(max_examples=100)
def test_q_index_bijection(m, data):
    bits = data.draw(st.lists(st.booleans(), min_size=m, max_size=m))
    bits2 = data.draw(st.lists(st.booleans(), min_size=m, max_size=m))
    idx = q_index(bits, bits2)
    back_xy, back_yx = q_unpack(idx, m)
    assert list(back_xy) == bits
    assert list(back_yx) == bits2


@given(st.integers(min_value=1, max_value=6), st.data())
@settings(max_examples=100)
def test_q_swap_involution(m, data):
    idx = data.draw(st.integers(min_value=0, max_value=4 ** m - 1))
    assert q_swap(q_swap(idx, m), m) == idx
    xy, yx = q_unpack(idx, m)
    sxy, syx = q_unpack(q_swap(idx, m), m)
    assert sxy == yx and syx == xy
