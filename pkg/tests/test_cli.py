import json
import math

import numpy as np
import pytest

from conetheta.cli import main
from conetheta.serialize import (
    basis_to_json,
    json_to_basis,
    json_to_chain,
    chain_to_json,
    json_to_modular,
    modular_to_json,
    parse_instance,
)
from conetheta.koszul import GroupRingElement, KoszulChain
from conetheta.lattice import ModularElement, SplitBasis


def cm(M):
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in np.asarray(M, complex)]


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_eval_classical(tmp_path, capsys):
    inst = write(tmp_path, "i.json", {"n": 1, "k": 0, "omega": cm([[1j]])})
    assert main(["eval", "--instance", inst, "--z", "0,0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["value"]["re"] - 1.086434811213308) < 1e-9
    assert out["tail"] <= 1e-10
    assert out["radius_used"] >= 4.0


def test_eval_point_cone(tmp_path, capsys):
    inst = write(tmp_path, "i.json", {"n": 1, "k": 1, "omega": cm([[-1j]])})
    assert main(["eval", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == {"re": 1.0, "im": 0.0} and out["tail"] == 0.0


def test_eval_validation_failure(tmp_path):
    # non-symmetric omega
    bad = {"n": 2, "k": 0, "omega": cm([[1j, 0.5], [0.2, 1j]])}
    inst = write(tmp_path, "i.json", bad)
    assert main(["eval", "--instance", inst]) == 2


def test_eval_radius_overflow(tmp_path):
    inst = write(tmp_path, "i.json", {"n": 1, "k": 0, "omega": cm([[1j]])})
    assert main(["eval", "--instance", inst, "--tol", "1e-30", "--radius-max", "4"]) == 3


def test_eval_characteristic(tmp_path, capsys):
    payload = {
        "n": 1,
        "k": 0,
        "omega": cm([[1j]]),
        "characteristic": {"a": ["1/2"], "delta": [2]},
    }
    inst = write(tmp_path, "i.json", payload)
    assert main(["eval", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    oracle = sum(math.exp(-math.pi * (m + 0.5) ** 2) for m in range(-10, 11))
    assert abs(out["value"]["re"] - oracle) < 1e-9


def test_transform_identity(tmp_path, capsys):
    payload = {
        "n": 1,
        "k": 0,
        "omega": cm([[1j]]),
        "g": {"A": [[1]], "B": [[0]], "C": [[0]], "D": [[1]]},
    }
    inst = write(tmp_path, "i.json", payload)
    assert main(["transform", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["omega_g"] == cm([[1j]])
    assert out["zeta"] == {"re": 1.0, "im": 0.0}


def test_transform_translation(tmp_path, capsys):
    payload = {
        "n": 2,
        "k": 1,
        "omega": cm(np.diag([-1j, 1j])),
        "g": {
            "A": [[1, 0], [0, 1]],
            "B": [[2, 1], [1, 0]],
            "C": [[0, 0], [0, 0]],
            "D": [[1, 0], [0, 1]],
        },
    }
    inst = write(tmp_path, "i.json", payload)
    assert main(["transform", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    got = np.array([[c["re"] + 1j * c["im"] for c in row] for row in out["omega_g"]])
    assert np.max(np.abs(got - (np.diag([-1j, 1j]) - np.array([[2, 1], [1, 0]])))) == 0.0


def test_transform_inversion(tmp_path, capsys):
    payload = {
        "n": 1,
        "k": 0,
        "omega": cm([[1j]]),
        "g": {"A": [[0]], "B": [[-1]], "C": [[1]], "D": [[0]]},
    }
    inst = write(tmp_path, "i.json", payload)
    assert main(["transform", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["omega_g"][0][0]["im"] - 1.0) < 1e-12  # -1/i = i
    assert out["zeta"] is None  # no reference identity at positive index zero


def test_split_basis_swap(tmp_path, capsys):
    # Im(omega) = diag(1, -1) with k = 1 forces the column swap
    payload = {"n": 2, "k": 1, "omega": cm(np.diag([1j, -1j]))}
    inst = write(tmp_path, "i.json", payload)
    assert main(["split-basis", "--instance", inst]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["N"] == [[0, 1], [1, 0]]


def test_split_basis_identity(tmp_path, capsys):
    payload = {"n": 2, "k": 0, "omega": cm(np.diag([1j, 1j]))}
    inst = write(tmp_path, "i.json", payload)
    assert main(["split-basis", "--instance", inst]) == 0
    assert json.loads(capsys.readouterr().out)["N"] == [[1, 0], [0, 1]]


def test_split_basis_not_found(tmp_path):
    payload = {"n": 2, "k": 1, "omega": cm(np.diag([1j, -1j]))}
    inst = write(tmp_path, "i.json", payload)
    assert main(["split-basis", "--instance", inst, "--bound", "0"]) == 4


def test_eval_explicit_cone(tmp_path, capsys):
    payload = {
        "n": 2,
        "k": 1,
        "omega": cm(np.diag([-1j, 1j])),
        "cone": {"generators": [[0, 1]], "shift": ["0", "0"]},
    }
    inst = write(tmp_path, "i.json", payload)
    assert main(["eval", "--instance", inst, "--z", "0,0;0,0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["value"]["re"] - math.pi**0.25 / math.gamma(0.75)) < 1e-9


def test_verify_exit_codes(tmp_path):
    inst = write(tmp_path, "i.json", {"n": 2, "k": 1, "omega": cm(np.diag([-1j, 1j]))})
    assert main(["verify", "--instance", inst, "--suite", "cocycle"]) == 0
    assert main(["verify", "--instance", inst, "--suite", "heat"]) == 0
    assert main(["verify", "--instance", inst, "--suite", "koszul"]) == 0
    assert main(["verify", "--instance", inst, "--suite", "nope"]) == 2
    # wedge preconditions fail on this instance: validation exit
    assert main(["verify", "--instance", inst, "--suite", "wedge"]) == 2


def test_verify_reports_byte_identical(tmp_path, capsys):
    inst = write(
        tmp_path,
        "i.json",
        {"n": 2, "k": 1, "omega": cm(np.diag([-1j, 1j])), "seed": 99},
    )
    assert main(["verify", "--instance", inst, "--suite", "cocycle"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", "--instance", inst, "--suite", "cocycle"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_verify_json_out(tmp_path, capsys):
    inst = write(tmp_path, "i.json", {"n": 1, "k": 1, "omega": cm([[-1j]])})
    out_file = tmp_path / "report.json"
    assert (
        main(
            [
                "verify",
                "--instance",
                inst,
                "--suite",
                "modular-case3-1d",
                "--json-out",
                str(out_file),
            ]
        )
        == 0
    )
    capsys.readouterr()
    data = json.loads(out_file.read_text())
    assert data["suite"] == "modular-case3-1d" and data["pass"]


def test_theta_threads_validation(monkeypatch, tmp_path):
    inst = write(tmp_path, "i.json", {"n": 1, "k": 1, "omega": cm([[-1j]])})
    monkeypatch.setenv("THETA_THREADS", "junk")
    assert main(["eval", "--instance", inst]) == 2
    monkeypatch.setenv("THETA_THREADS", "4")
    assert main(["eval", "--instance", inst]) == 0


def test_instance_signature_mismatch():
    with pytest.raises(Exception):
        parse_instance({"n": 1, "k": 0, "omega": cm([[-1j]])})


def test_basis_round_trip():
    b = SplitBasis(np.array([[0, 1], [1, 0]]), np.array([[0, 1], [1, 0]]), 1)
    assert json_to_basis(basis_to_json(b)).N.tolist() == b.N.tolist()


def test_modular_round_trip():
    g = ModularElement.identity(2)
    assert json_to_modular(modular_to_json(g)).matrix().tolist() == g.matrix().tolist()


def test_chain_round_trip():
    chain = KoszulChain(
        4, 2, {(0, 2): GroupRingElement(4, {(1, 0, -2, 0): 3, (0, 0, 0, 0): -1})}
    )
    back = json_to_chain(chain_to_json(chain), 4)
    assert back == chain
