import json

import numpy as np
import pytest

from src.analysis.synthesizer import SynthesisPlan, synth_cnu, synth_cnu_multi
from src.analysis.folding import ControlledBlock
from src.data import families
from src.data.circuit_io import (
    load_block, load_circuit, load_matrix, render_text, save_circuit, to_document
)
from src.models.schemas import DimensionPurpose
from src.simulation.oracles import Oracle, oracle_from_tags
from src.simulation.verifier import verify
from src.utils.errors import TopologyFileError
from tests.helpers import rooted


@pytest.fixture
def cnu_circuit():
    U = np.array([[0, 1j], [1j, 0]]) * np.exp(0.2j)
    return synth_cnu(SynthesisPlan.minimal(rooted(families.line(4))), U, 3)


def test_structured_file_round_trip(tmp_path, cnu_circuit):
    path = save_circuit(cnu_circuit, tmp_path / "c.json")
    loaded = load_circuit(path)
    assert loaded == cnu_circuit
    assert loaded.tags['gate'] == 'cnu'
    assert verify(loaded, oracle_from_tags(loaded)).passed


def test_block_circuit_round_trip(tmp_path):
    block = ControlledBlock(np.diag([1, -1]), (2,), cost=1, name="Z")
    circuit = synth_cnu_multi(
        SynthesisPlan.minimal(rooted(families.star(4)), DimensionPurpose.MULTI_TARGET), block)
    loaded = load_circuit(save_circuit(circuit, tmp_path / "multi.json"))
    assert loaded == circuit
    assert oracle_from_tags(loaded) == Oracle.cnu_multi(4, np.diag([1, -1]), (2,))


def test_text_rendering(tmp_path, cnu_circuit):
    text = render_text(cnu_circuit)
    lines = text.splitlines()
    assert lines[0] == "# C^3U"
    assert lines[1] == "# register [2, 3, 3, 2]"
    assert lines[2] == "# labels q0=1 q1=2 q2=3 q3=4"
    assert any(line.startswith("X_2 q") for line in lines)
    assert any(line.startswith("CZθ(") for line in lines)
    path = save_circuit(cnu_circuit, tmp_path / "c.txt", fmt="text")
    assert path.read_text(encoding="utf-8") == text


def test_document_records_gate_parameters(cnu_circuit):
    document = to_document(cnu_circuit)
    assert document.register == [2, 3, 3, 2]
    kinds = {record.kind.value for record in document.gates}
    assert {"XM", "CX", "CZTHETA", "LOCAL2"} <= kinds
    local = next(r for r in document.gates if r.kind.value == "LOCAL2")
    assert set(local.params) >= {"name", "matrix"}


def test_invalid_gate_in_file_is_located(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "register": [2, 2],
        "gates": [{"kind": "XM", "qudits": [0], "params": {"m": 3}}],
    }), encoding="utf-8")
    with pytest.raises(TopologyFileError) as info:
        load_circuit(path)
    assert info.value.field == "gates"


def test_unknown_gate_kind_is_a_schema_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"register": [2], "gates": [{"kind": "SWAP", "qudits": [0]}]}),
                    encoding="utf-8")
    with pytest.raises(TopologyFileError) as info:
        load_circuit(path)
    assert info.value.field == "gates.0.kind"


def test_matrix_file(tmp_path):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}), encoding="utf-8")
    np.testing.assert_allclose(load_matrix(path), [[0, 1], [1, 0]])

    path.write_text(json.dumps({"matrix": [[[1, 0]], [[0, 0]]]}), encoding="utf-8")
    with pytest.raises(TopologyFileError, match="square"):
        load_matrix(path)


def test_block_file(tmp_path):
    path = tmp_path / "block.json"
    path.write_text(json.dumps({
        "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
        "target_dims": [3],
        "cost": 1,
        "name": "Z",
    }), encoding="utf-8")
    block = load_block(path)
    assert block.target_dims == (3,)
    assert not block.full_space

    path.write_text(json.dumps({
        "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "target_dims": [2, 2], "cost": 1,
    }), encoding="utf-8")
    with pytest.raises(TopologyFileError, match="does not fit"):
        load_block(path)
