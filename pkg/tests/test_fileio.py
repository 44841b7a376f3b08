import json

import pytest
from hypothesis import given, strategies as st

from invariant_forge import catalog
from invariant_forge.errors import FieldError, ParseError, SchemaError
from invariant_forge.fileio import (
    dump_structure,
    parse_structure_file,
    parse_structure_text,
    read_json,
    write_structure,
)
from invariant_forge.scalars import QQ, cyclotomic_field, rational_function_field
from invariant_forge.tensors import Structure, Tensor

STRUCTURES = ["pairing", "sqrt2", "m2", "m3", "comm2", "empty2", "diag_zeta8", "c3c3_twisted", "c2c2_twisted", "taft2", "taft3"]


def doc(**over):
    base = {
        "schema_version": 1,
        "field": {"kind": "rational"},
        "dim": 2,
        "tensors": [{"name": "T", "p": 1, "q": 1, "entries": [{"up": [0], "down": [1], "value": "1/2"}]}],
    }
    base.update(over)
    return json.dumps(base)


@pytest.mark.parametrize("name", STRUCTURES)
def test_shipped_files_roundtrip_byte_identical(name, data_dir):
    path = data_dir / f"{name}.json"
    text = path.read_text(encoding="utf-8")
    s = parse_structure_file(path)
    assert dump_structure(s) == text
    assert dump_structure(parse_structure_text(dump_structure(s))) == text


def test_pairing_file_contents(data_dir):
    s = parse_structure_file(data_dir / "pairing.json")
    assert s.dim == 3 and str(s.field) == "Q(t)"
    assert s == catalog.nilpotent_pairing_algebra()
    assert len(list(s["m"].items())) == 4


def test_write_and_reload(tmp_path):
    s = catalog.sqrt2_operator()
    write_structure(s, tmp_path / "x.json")
    assert parse_structure_file(tmp_path / "x.json") == s


scalars = st.sampled_from(["0", "1", "-1", "2/3", "z", "z^3 - 1/2", "-z^5 + 7"])


@given(st.integers(1, 3), st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), scalars), max_size=6))
def test_roundtrip_property(dim, entries):
    F = cyclotomic_field(8)
    T = Tensor.zeros(1, 1, dim, F)
    for i, j, v in entries:
        if i < dim and j < dim:
            T.arr[i, j] = F.parse(v)
    s = Structure(dim, F, {"T": T, "c": Tensor.scalar(F.parse("z"), dim, F)})
    text = dump_structure(s)
    back = parse_structure_text(text)
    assert back == s and dump_structure(back) == text


@pytest.mark.parametrize("field", [QQ, cyclotomic_field(5), rational_function_field("t")])
def test_field_descriptors_roundtrip(field):
    s = Structure(2, field, {})
    assert parse_structure_text(dump_structure(s)).field.descriptor() == field.descriptor()


def test_empty_structure_is_valid():
    s = parse_structure_text(doc(tensors=[]))
    assert s.dim == 2 and s.tensors == {}


def test_division_by_zero_is_a_field_error():
    bad = doc(tensors=[{"name": "T", "p": 0, "q": 0, "entries": [{"up": [], "down": [], "value": "1/0"}]}])
    with pytest.raises(FieldError):
        parse_structure_text(bad)


def test_symbol_outside_field_is_a_field_error():
    bad = doc(tensors=[{"name": "T", "p": 0, "q": 0, "entries": [{"up": [], "down": [], "value": "z"}]}])
    with pytest.raises(FieldError):
        parse_structure_text(bad)


@pytest.mark.parametrize(
    "text",
    [
        doc(schema_version=2),
        doc(dim=0),
        doc(dim="2"),
        doc(field={"kind": "quaternion"}),
        doc(tensors=[{"name": "T", "p": 1, "q": 1, "entries": []}, {"name": "T", "p": 0, "q": 0, "entries": []}]),
        doc(tensors=[{"name": "T", "p": 1, "q": 0, "entries": [{"up": [0], "down": [], "value": "1"}, {"up": [0], "down": [], "value": "2"}]}]),
        doc(tensors=[{"name": "T", "p": 1, "q": 0, "entries": [{"up": [5], "down": [], "value": "1"}]}]),
        doc(tensors=[{"name": "T", "p": 1, "q": 0, "entries": [{"up": [0, 1], "down": [], "value": "1"}]}]),
        doc(tensors=[{"name": "T", "p": -1, "q": 0, "entries": []}]),
        doc(tensors=[{"name": "T", "p": 1, "q": 0, "entries": [{"up": [0], "down": []}]}]),
        "[1, 2]",
    ],
)
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        parse_structure_text(text)


def test_parse_error_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dim": 2,\n  oops\n}\n')
    with pytest.raises(ParseError, match=r"broken\.json:3:3"):
        parse_structure_file(path)
    with pytest.raises(ParseError):
        read_json(path)
