import pytest

from conftest import load_model, model_path

from ramsplit.modelfile import (
    FormatError,
    parse_datum,
    parse_model,
    serialize_datum,
    serialize_model,
)
from ramsplit.splitdrv import construct_splitting, resolve_model

ALL_MODELS = ("chilly_path", "cold_pair", "mixed", "hot_node", "cool_node", "triangle_loop")


@pytest.mark.parametrize("name", ALL_MODELS)
def test_roundtrip_is_identity(name):
    model = load_model(name)
    once = serialize_model(model)
    again = serialize_model(parse_model(once, name))
    assert once == again


@pytest.mark.parametrize("name", ("cool_node", "triangle_loop"))
def test_resolved_models_roundtrip(name):
    # resolved models contain exceptional curves and tower fields
    model = load_model(name)
    resolve_model(model)
    model.validate()
    once = serialize_model(model)
    re_model = parse_model(once, name)
    re_model.validate()
    assert serialize_model(re_model) == once


def test_parse_errors_carry_line_numbers():
    with pytest.raises(FormatError) as ei:
        parse_model("[model]\nq = 3\n[curve C1]\nkind = sideways\n")
    assert "line" in str(ei.value)
    with pytest.raises(FormatError):
        parse_model("q = 3\n")
    with pytest.raises(FormatError):
        parse_model("[model]\nname = x\n")  # missing q


def test_parse_rejects_bad_tail():
    text = model_path("chilly_path").read_text().replace("tail = I u=3 v=2", "tail = I u=3")
    with pytest.raises(FormatError):
        parse_model(text)


def test_parse_rejects_reducible_place():
    text = model_path("chilly_path").read_text().replace("place C1 = 5,0,0,1", "place C1 = 6,0,1")
    with pytest.raises(FormatError):
        parse_model(text)


def test_datum_roundtrip():
    model = load_model("mixed")
    datum = construct_splitting(model)
    text = serialize_datum(model, datum)
    back = parse_datum(text, model)
    assert back.s == datum.s
    assert {k: v % 3 for k, v in back.e.items() if v % 3} == {
        k: v % 3 for k, v in datum.e.items() if v % 3
    }
    assert back.v == datum.v
    assert back.node_units == datum.node_units
    assert serialize_datum(model, back) == text


def test_datum_q_mismatch():
    model = load_model("mixed")
    with pytest.raises(FormatError):
        parse_datum("[datum]\nq = 5\n", model)
