import json

import numpy as np
import pytest

from freespec.cli import main
from freespec.errors import TupleFormatError
from freespec.fixtures import fixture_names, load_fixture
from freespec.linalg import HermitianTuple
from freespec.tupleio import read_tuple, write_tuple


def test_round_trip_bit_identical(tmp_path):
    tup, comment = load_fixture("freeex4")
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    write_tuple(p1, tup, comment=comment)
    loaded, payload = read_tuple(p1)
    assert isinstance(loaded, HermitianTuple)
    assert np.abs(loaded.mats - tup.mats).max() == 0.0
    write_tuple(p2, loaded, comment=payload.get("comment"))
    assert p1.read_bytes() == p2.read_bytes()


def test_every_fixture_round_trips(tmp_path):
    for name in fixture_names():
        tup, comment = load_fixture(name)
        path = tmp_path / f"{name}.json"
        write_tuple(path, tup, comment=comment)
        loaded, _ = read_tuple(path)
        assert np.abs(loaded.mats - tup.mats).max() == 0.0


def test_read_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(TupleFormatError):
        read_tuple(path)
    path.write_text(json.dumps({"format_version": "2"}))
    with pytest.raises(TupleFormatError):
        read_tuple(path)
    payload = {"format_version": "1", "size": 2, "length": 1, "hermitian": True,
               "matrices": [[[[0.0, 0.0]]]]}  # wrong row count
    path.write_text(json.dumps(payload))
    with pytest.raises(TupleFormatError):
        read_tuple(path)


def test_general_tuple_round_trip(tmp_path):
    # hermitian=false files parse to a plain array tuple, not a HermitianTuple.
    E12 = np.zeros((2, 2), complex)
    E12[0, 1] = 1.0
    path = tmp_path / "general.json"
    write_tuple(path, [E12, E12.T], hermitian=False)
    loaded, payload = read_tuple(path)
    assert not payload["hermitian"]
    assert not isinstance(loaded, HermitianTuple)
    assert np.abs(np.asarray(loaded) - np.array([E12, E12.T])).max() == 0.0


def test_read_rejects_nonfinite_tokens(tmp_path):
    path = tmp_path / "nan.json"
    path.write_text('{"format_version": "1", "size": 1, "length": 1, '
                    '"hermitian": true, "matrices": [[[[NaN, 0.0]]]]}')
    with pytest.raises(TupleFormatError):
        read_tuple(path)


def test_cli_membership_exit_codes(capsys):
    assert main(["membership", "--pencil", "pauli", "--point", "pauli-conj"]) == 1
    assert main(["membership", "--pencil", "spin-g3", "--point", "zeros"]) == 0
    capsys.readouterr()


def test_cli_extreme_free_exit(capsys):
    assert main(["extreme", "--pencil", "spin-g3", "--point", "freeex4"]) == 0
    out = capsys.readouterr().out
    assert "free" in out
    assert main(["extreme", "--pencil", "spin-g3", "--point", "zeros"]) == 1
    capsys.readouterr()


def test_cli_usage_and_data_errors(tmp_path, capsys):
    assert main(["membership", "--pencil", "pauli"]) == 64  # missing --point
    assert main(["no-such-command"]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["membership", "--pencil", str(bad), "--point", "zeros"]) == 65
    assert main(["membership", "--pencil", "no-such-fixture", "--point", "zeros"]) == 65
    capsys.readouterr()


def test_cli_fixture_writes_file(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["fixture", "pauli", "--out", str(out)]) == 0
    loaded, payload = read_tuple(out)
    assert payload["comment"]
    assert np.abs(loaded.mats - load_fixture("pauli")[0].mats).max() == 0.0
    capsys.readouterr()


def test_cli_json_report_deterministic(capsys):
    argv = ["membership", "--pencil", "pauli", "--point", "pauli-conj",
            "--json", "--seed", "5"]
    main(argv)
    first = json.loads(capsys.readouterr().out)
    main(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("wall_time")
    second.pop("wall_time")
    assert first == second
    assert first["seed"] == 5


def test_cli_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("FREESPEC_SEED", "17")
    main(["membership", "--pencil", "pauli", "--point", "zeros", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 17


def test_cli_tolerance_flags_threaded(capsys):
    # A huge psd band turns the refutation into a (nonsensical) membership;
    # the point is that the flag reaches the verdict.
    code = main(["membership", "--pencil", "pauli", "--point", "pauli-conj",
                 "--tol-psd", "10.0"])
    assert code == 0
    capsys.readouterr()


def test_cli_ball_and_drop_exit_codes(capsys):
    assert main(["ball", "--set", "matrix", "--point", "spin-g3"]) == 1
    assert main(["ball", "--set", "wmax", "--point", "pauli"]) == 2  # heuristic accept
    assert main(["drop", "--pencil", "spin-g4", "--keep", "3",
                 "--point", "freeex4"]) == 0
    capsys.readouterr()


def test_cli_hull_and_chain(tmp_path, capsys):
    code = main(["hull", "--generator", "simplex-remark-pencil",
                 "--point", "0.0,0.0"])
    assert code == 0
    assert main(["chain", "--g", "2", "--samples", "30"]) == 0
    capsys.readouterr()


def test_cli_dual_then_membership(tmp_path, capsys):
    out = tmp_path / "dual.json"
    assert main(["dual", "--basis", "pauli", "--out", str(out)]) == 0
    assert main(["membership", "--pencil", str(out), "--point", "pauli"]) == 0
    capsys.readouterr()


def test_cli_dilate_writes_output(tmp_path, capsys):
    out = tmp_path / "dilated.json"
    assert main(["dilate", "--pencil", "spin-g2", "--point", "zeros",
                 "--out", str(out)]) == 0
    loaded, _ = read_tuple(out)
    assert loaded.n >= 2
    capsys.readouterr()


def test_cli_spin_report(capsys):
    assert main(["spin", "--g", "4", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts.size"] == 8
    assert report["residuals.anticommutation_residual"] <= 1e-12
