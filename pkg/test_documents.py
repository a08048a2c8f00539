import json

import pytest

from ips import documents
from ips.bounds import bounds_report
from ips.constructions import construction1, prime_set
from ips.dmatrix import from_points
from ips.errors import DocumentError
from ips.packing import Packing
from ips.search import min_diameter


def test_planar_document_round_trip(tmp_path):
    cs = construction1(2)
    payload = documents.planar_to_doc(cs.points, cs.provenance())
    path = tmp_path / "k2.json"
    documents.write_document(path, payload)
    text = path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    doc = documents.read_document(path)
    assert isinstance(doc, documents.PlanarDoc)
    assert documents.doc_to_planar(doc) == cs.points
    assert documents.dumps(documents.to_payload(doc)) == text
    assert json.loads(text)["points"][0] == {"x": "-7/2", "y": "0"}


def test_planar_document_is_canonicalised():
    text = json.dumps({"format": "ips-planar/1", "q": 3, "points": [{"x": "-2/4", "y": "0"}, {"x": "1/2", "y": "0"}, {"x": "0", "y": "1/2"}]})
    payload = documents.to_payload(documents.loads(text))
    assert payload["points"][0] == {"x": "-1/2", "y": "0"}
    assert payload["provenance"] == {}


def test_dm_document_round_trip(tmp_path):
    ps = prime_set(3, 5, 2, unique_min=True)
    payload = documents.dm_to_doc(ps.matrix, ps.provenance)
    path = tmp_path / "prime.json"
    documents.write_document(path, payload)
    doc = documents.read_document(path)
    assert documents.doc_to_dm(doc) == ps.matrix
    assert doc.provenance["unique_min"] is True


@pytest.mark.parametrize(
    "payload",
    [
        {"format": "ips-planar/1", "q": 1, "points": [{"x": "0", "y": "0"}, {"x": "0", "y": "0"}]},
        {"format": "ips-planar/1", "q": 12, "points": [{"x": "0", "y": "0"}, {"x": "1", "y": "0"}]},
        {"format": "ips-dm/1", "n": 2, "entries": [[0, 1], [2, 0]]},
    ],
)
def test_invalid_objects_are_rejected(payload):
    doc = documents.validate(payload)
    with pytest.raises(DocumentError):
        documents.to_payload(doc)


@pytest.mark.parametrize(
    "payload",
    [
        [],
        {"format": "ips-planar/2", "q": 1, "points": []},
        {"format": "ips-planar/1", "q": 1, "points": [{"x": "1.5", "y": "0"}]},
        {"format": "ips-planar/1", "q": 1, "points": [], "colour": "red"},
        {"format": "ips-dm/1", "n": 3, "entries": [[0, 1], [1, 0]]},
        {"format": "ips-dm/1", "n": 3, "entries": [[False, True, True], [True, False, True], [True, True, False]]},
        {"format": "ips-dm/1", "n": 3, "entries": [[0, 1, 1], [1, 0, 1], [1.0, 1, 0]]},
        {"format": "ips-dm/1", "n": 3, "entries": [[0, 1, 1], [1, 0, 1], [1, "1", 0]]},
        {"format": "ips-dm/1", "n": 2.0, "entries": [[0, 1], [1, 0]]},
        {"format": "ips-planar/1", "q": "1", "points": []},
        {"format": "ips-planar/1", "q": True, "points": []},
        {"format": "ips-planar/1", "q": 1, "points": [{"x": 0, "y": "0"}]},
    ],
)
def test_invalid_documents(payload):
    with pytest.raises(DocumentError):
        documents.validate(payload)


def test_bad_json_and_missing_file(tmp_path):
    with pytest.raises(DocumentError):
        documents.loads("{not json")
    with pytest.raises(DocumentError):
        documents.read_document(tmp_path / "missing.json")


def test_write_validates_first(tmp_path):
    path = tmp_path / "bad.json"
    with pytest.raises(DocumentError):
        documents.write_document(path, {"format": "ips-dm/1", "n": 1, "entries": []})
    assert not path.exists()


def test_packing_document():
    p = Packing(2, ((0.0, 0.0), (1.0, 1.0)), 2 ** 0.5, {"seed": 0})
    doc = documents.loads(documents.dumps(documents.packing_to_doc(p)))
    assert documents.doc_to_packing(doc) == p


def test_search_document():
    outcome = min_diameter(4, 5)
    payload = documents.search_to_doc(outcome)
    doc = documents.validate(payload)
    assert doc.found and doc.min_diameter == 4
    assert doc.witness == outcome.result.witness.to_lists()
    missing = documents.validate(documents.search_to_doc(min_diameter(4, 2)))
    assert not missing.found and missing.witness is None


def test_bounds_document():
    doc = documents.validate(bounds_report([2]))
    assert isinstance(doc, documents.BoundsDoc)
    assert doc.checks["quadratic_root_certified"]


def test_matrix_from_points_document():
    dm = from_points(construction1(1).points)
    doc = documents.validate(documents.dm_to_doc(dm))
    assert doc.n == 3 and doc.entries == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_write_to_missing_directory(tmp_path):
    payload = documents.dm_to_doc(from_points(construction1(1).points))
    with pytest.raises(DocumentError):
        documents.write_document(tmp_path / "no_such_dir" / "x.json", payload)
