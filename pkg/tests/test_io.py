import copy
import json

import pytest

from nilcover import corpus
from nilcover.io import SchemaError, bundle_from_dict, load_bundle, load_json, surface_from_dict, triple_from_dict

TORUS = {
    "vertices": [{"id": 0, "rotation": [0, 2, 1, 3]}],
    "edges": [{"id": 0, "darts": [0, 1]}, {"id": 1, "darts": [2, 3]}],
    "faces": [{"walk": [0, 2, 1, 3]}],
}


def expect_error(data, path, fragment):
    with pytest.raises(SchemaError) as exc:
        surface_from_dict(data)
    assert exc.value.path == path
    assert fragment in exc.value.message


def test_torus_parses():
    s, dmap, vids, notes = surface_from_dict(TORUS)
    assert s.genus() == 1 and s.is_closed and notes == []


def test_arbitrary_dart_labels_are_renumbered():
    data = {
        "vertices": [{"id": 7, "rotation": [10, 20, 11, 21]}],
        "edges": [{"id": 5, "darts": [20, 21]}, {"id": 3, "darts": [10, 11]}],
        "faces": [{"walk": [10, 20, 11, 21]}],
    }
    s, dmap, vids, _ = surface_from_dict(data)
    assert dmap == {10: 0, 11: 1, 20: 2, 21: 3}
    assert vids == [7] and s.genus() == 1


def test_face_with_genus_becomes_handles():
    sphere = {
        "vertices": [{"id": 0, "rotation": [0]}, {"id": 1, "rotation": [1]}],
        "edges": [{"id": 0, "darts": [0, 1]}],
        "faces": [{"walk": [0, 1], "genus": 2}],
    }
    s, _, _, notes = surface_from_dict(sphere)
    assert s.genus() == 2 and len(notes) == 1


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_round_trip(name):
    data = json.loads(corpus.load_text(name))
    t = triple_from_dict(data)
    again = triple_from_dict(json.loads(json.dumps(t.to_dict())))
    assert again.to_dict() == t.to_dict()
    assert t.to_dict() == {k: v for k, v in data.items() if k != "name"}


def test_missing_fields():
    for key in ("vertices", "edges", "faces"):
        data = copy.deepcopy(TORUS)
        del data[key]
        expect_error(data, "$", f"missing field '{key}'")


def test_duplicate_ids():
    data = copy.deepcopy(TORUS)
    data["edges"][1]["id"] = 0
    expect_error(data, "$.edges[1].id", "duplicate edge id")
    data = copy.deepcopy(TORUS)
    data["vertices"].append({"id": 0, "rotation": [2]})
    expect_error(data, "$.vertices[1].id", "duplicate vertex id")


def test_unknown_and_missing_darts():
    data = copy.deepcopy(TORUS)
    data["vertices"][0]["rotation"] = [0, 2, 1, 9]
    expect_error(data, "$.vertices[0].rotation[3]", "not on any edge")
    data = copy.deepcopy(TORUS)
    data["vertices"][0]["rotation"] = [0, 2, 1]
    expect_error(data, "$.vertices", "dart 3 leaves no vertex")
    data = copy.deepcopy(TORUS)
    data["faces"][0]["walk"] = [0, 2, 1]
    expect_error(data, "$.faces", "dart 3 bounds no face")


def test_bad_edge_darts():
    data = copy.deepcopy(TORUS)
    data["edges"][0]["darts"] = [0, 0]
    expect_error(data, "$.edges[0].darts", "two distinct darts")
    data = copy.deepcopy(TORUS)
    data["edges"][1]["darts"] = [1, 3]
    expect_error(data, "$.edges[1].darts[0]", "belongs to two edges")


def test_non_orientable_gluing():
    # Klein bottle word a b a b^-1: edge a is traversed twice in the same direction
    data = copy.deepcopy(TORUS)
    data["faces"][0]["walk"] = [0, 2, 0, 3]
    expect_error(data, "$.faces[0].walk[2]", "non-orientable")
    # a face listed against the orientation of the rotation
    data = copy.deepcopy(TORUS)
    data["faces"][0]["walk"] = [2, 0, 3, 1]
    expect_error(data, "$.faces[0].walk", "non-orientable")


def test_non_surface_gluing():
    data = copy.deepcopy(TORUS)
    data["faces"] = [{"walk": [0, 2, 1, 3]}, {"walk": [0]}]
    expect_error(data, "$.faces[1].walk[0]", "non-surface gluing")


def test_face_not_matching_rotation():
    data = copy.deepcopy(TORUS)
    data["faces"][0]["walk"] = [0, 1, 2, 3]
    expect_error(data, "$.faces[0].walk", "does not match the rotation")


def test_type_errors():
    data = copy.deepcopy(TORUS)
    data["faces"][0]["genus"] = -1
    expect_error(data, "$.faces[0].genus", "non-negative")
    data = copy.deepcopy(TORUS)
    data["vertices"][0]["rotation"] = "0 2 1 3"
    expect_error(data, "$.vertices[0].rotation", "list of integers")


def test_curve_errors():
    data = json.loads(corpus.load_text("g2-N2"))
    data["curves"]["alpha"] = [999]
    with pytest.raises(SchemaError) as exc:
        bundle_from_dict(data)
    assert exc.value.path == "$.curves.alpha[0]"
    data = json.loads(corpus.load_text("g2-N2"))
    data["basepoints"]["v"] = 999
    with pytest.raises(SchemaError) as exc:
        bundle_from_dict(data)
    assert exc.value.path == "$.basepoints.v"
    data = json.loads(corpus.load_text("g2-N2"))
    data["curves"]["alpha"] = data["curves"]["alpha"][:-1]
    with pytest.raises(SchemaError) as exc:
        bundle_from_dict(data)
    assert exc.value.path == "$.curves"


def test_json_syntax_error_reports_line(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "vertices": [\n}\n')
    with pytest.raises(SchemaError) as exc:
        load_json(p)
    assert exc.value.path == f"{p}:3:1"


def test_load_bundle_uses_file_stem(tmp_path):
    p = tmp_path / "torus.json"
    p.write_text(json.dumps(TORUS))
    b = load_bundle(p)
    assert b.name == "torus" and b.triple is None and b.surface.genus() == 1
