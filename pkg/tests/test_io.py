"""JSON documents and workspace name resolution."""

import json
from pathlib import Path

import pytest

from weakmaps import samples
from weakmaps.errors import ButterflyAxiomFails, MalformedTable, NoIdentity
from weakmaps.io import SchemaError, Workspace, kind_of, to_json

EX = Path(__file__).resolve().parent.parent / "cli_examples"


@pytest.mark.parametrize("name,kind", [("z2", "group"), ("aut_z3", "xmod"), ("p_split", "butterfly"),
                                       ("c_0_z2", "complex"), ("m_v4_z2", "module"),
                                       ("ext_z4", "extension")])
def test_example_kinds(name, kind):
    doc = json.loads((EX / f"{name}.json").read_text())
    assert kind_of(doc) == kind
    obj = Workspace().load(doc)
    # encoding and decoding again gives an equal document
    assert to_json(Workspace().load(to_json(obj), kind)) == to_json(obj)


def test_round_trip_corpus():
    for name, P in samples.butterfly_corpus()[:20]:
        Q = Workspace().load(to_json(P), "butterfly")
        assert Q.E == P.E and Q.H == P.H and Q.G == P.G, name


def test_names_resolve_in_workspace_first():
    ws = Workspace({"Z2": {"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}})
    assert ws.load("Z2", "group").order == 3
    assert Workspace().load("Z2", "group").order == 2
    assert Workspace().load("AUT(Z3)", "xmod").g1.order == 2
    assert Workspace().load("S3", "xmod").g2.order == 1


def test_circular_reference():
    ws = Workspace({"a": "b", "b": "a"})
    with pytest.raises(SchemaError, match="circular"):
        ws.load("a", "group")


def test_check_names():
    Workspace({"x": {"xm1": "Z2", "x0": "1"}}).check_names()
    with pytest.raises(SchemaError, match="unresolved"):
        Workspace({"x": {"xm1": "Z2", "x0": "Z7"}}).check_names()


def test_schema_errors():
    with pytest.raises(SchemaError):
        kind_of([1, 2])
    with pytest.raises(SchemaError):
        kind_of({"foo": 1})
    with pytest.raises(SchemaError):
        kind_of({"kind": "widget"})
    with pytest.raises(SchemaError, match="lacks 'boundary'"):
        Workspace().load({"g2": "Z2", "g1": "Z2", "action": [[0, 0], [1, 1]]}, "xmod")
    with pytest.raises(SchemaError, match="expected a butterfly"):
        Workspace().load({"order": 1, "table": [[0]]}, "butterfly")
    with pytest.raises(SchemaError):
        Workspace().load({"order": 2, "table": [["a", 0], [0, 1]]})


def test_table_errors():
    with pytest.raises(MalformedTable):
        Workspace().load({"order": 3, "table": [[0, 1], [1, 0]]})
    with pytest.raises(NoIdentity):
        Workspace().load({"order": 2, "table": [[1, 0], [0, 1]]})


def test_bad_butterfly_leg():
    doc = json.loads((EX / "p_split.json").read_text())
    doc["rho"] = {"image": [0, 1, 1, 1]}
    with pytest.raises(ButterflyAxiomFails):
        Workspace().load(doc)


def test_from_files_names(tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"name": "G", "order": 1, "table": [[0]]}))
    (tmp_path / "b.json").write_text(json.dumps({"name": "G", "order": 1, "table": [[0]]}))
    ws, names = Workspace.from_files([tmp_path / "a.json", tmp_path / "b.json"])
    assert names[0] == "G" and names[1] != "G"
    with pytest.raises(SchemaError, match="cannot read"):
        Workspace.from_files([tmp_path / "missing.json"])


def test_module_default_action():
    M = Workspace().load({"gamma": "Z2", "a": "Z3"})
    assert M.action.is_trivial
