import json
from importlib import resources

import numpy as np
import pytest

from bregmat.cli import main
from bregmat.errors import HermiticityError, SchemaError, StateValidationError
from bregmat.io import load_density, load_matrix, matrix_from_json, save_matrix
from bregmat.linalg import random_hermitian, random_pd
from bregmat.states import saturating_state


@pytest.fixture
def pd_files(tmp_path):
    rng = np.random.default_rng(0)
    x_path, y_path = tmp_path / "x.json", tmp_path / "y.json"
    save_matrix(x_path, random_pd(3, rng))
    save_matrix(y_path, random_pd(3, rng))
    return str(x_path), str(y_path)


def run(argv):
    return main(argv)


def body_of(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)["body"]


class TestExitCodes:
    def test_verify_identities_passes(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = run(
            [
                "verify-identities",
                "--dim", "3", "--trials", "10", "--seed", "7",
                "--out", str(out),
            ]
        )
        assert code == 0
        body = body_of(out)
        assert body["passed"] is True
        assert body["config"]["seed"] == 7

    def test_malformed_family_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["divergence", "--f", "tsallis:q=", "--x", "a", "--y", "b"])
        assert exc.value.code == 2

    def test_missing_file_is_usage_error(self, capsys):
        code = run(["divergence", "--f", "entropy", "--x", "u.json", "--y", "v.json"])
        assert code == 2

    def test_violation_exits_three(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = run(
            [
                "entropy-class",
                "--f", "tsallis:q=3", "--dim", "3",
                "--trials", "20", "--seed", "1",
                "--criterion", "concavity",
                "--out", str(out),
            ]
        )
        assert code == 3
        body = body_of(out)
        assert body["records"][0]["values"]["verdict"] == "violated"

    def test_held_family_exits_zero(self, tmp_path, capsys):
        code = run(
            [
                "entropy-class",
                "--f", "tsallis:q=1.5", "--dim", "3",
                "--trials", "20", "--seed", "1",
                "--out", str(tmp_path / "r.json"),
            ]
        )
        assert code == 0


class TestDivergenceCommand:
    def test_all_methods(self, pd_files, tmp_path, capsys):
        x, y = pd_files
        out = tmp_path / "d.json"
        code = run(
            ["divergence", "--f", "entropy", "--x", x, "--y", y,
             "--all-methods", "--out", str(out)]
        )
        assert code == 0
        body = body_of(out)
        assert len(body["records"]) == 4
        for record in body["records"]:
            assert record["passed"] is True

    def test_singular_input_routes_to_extension(self, tmp_path, capsys):
        xs, ys = tmp_path / "xs.json", tmp_path / "ys.json"
        save_matrix(xs, np.diag([1.0, 0.0]))
        save_matrix(ys, np.diag([0.5, 0.5]))
        out = tmp_path / "d.json"
        code = run(
            ["divergence", "--f", "tsallis:q=2", "--x", str(xs), "--y", str(ys),
             "--method", "eigen", "--out", str(out)]
        )
        assert code == 0
        assert body_of(out)["records"][0]["values"]["value"] == pytest.approx(0.5)

    def test_singular_input_with_closed_method_is_usage_error(self, tmp_path, capsys):
        xs, ys = tmp_path / "xs.json", tmp_path / "ys.json"
        save_matrix(xs, np.diag([1.0, 0.0]))
        save_matrix(ys, np.diag([0.5, 0.5]))
        code = run(
            ["divergence", "--f", "tsallis:q=2", "--x", str(xs), "--y", str(ys),
             "--method", "closed"]
        )
        assert code == 2

    def test_infinite_value_serialized(self, tmp_path, capsys):
        xs, ys = tmp_path / "xs.json", tmp_path / "ys.json"
        save_matrix(xs, np.diag([1.0, 0.0]))
        save_matrix(ys, np.diag([0.0, 1.0]))
        out = tmp_path / "d.json"
        code = run(
            ["divergence", "--f", "entropy", "--x", str(xs), "--y", str(ys),
             "--method", "eigen", "--out", str(out)]
        )
        assert code == 0
        assert body_of(out)["records"][0]["values"]["value"] == "inf"


class TestSuiteCommands:
    def test_saturating_state_record(self, tmp_path, capsys):
        out = tmp_path / "s.json"
        code = run(["tsallis-ssa", "--saturating", "--q", "2", "--out", str(out)])
        assert code == 0
        record = body_of(out)["records"][0]
        assert abs(record["values"]["value"]) <= 1e-10
        assert record["values"]["lhs"] == pytest.approx(0.625, abs=1e-10)
        assert record["values"]["rhs"] == pytest.approx(0.625, abs=1e-10)

    def test_random_states_all_q(self, tmp_path, capsys):
        out = tmp_path / "s.json"
        code = run(
            ["tsallis-ssa", "--random", "20", "--seed", "3",
             "--q", "1,1.25,1.5,2", "--out", str(out)]
        )
        assert code == 0
        body = body_of(out)
        assert len(body["records"]) == 4
        assert {r["check"] for r in body["records"]} == {
            "ssa-von-neumann",
            "weighted-tsallis-ssa",
        }

    def test_monotonicity_demo(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        code = run(["monotonicity-demo", "--q", "1.5,2", "--out", str(out)])
        assert code == 0
        records = body_of(out)["records"]
        assert records[0]["values"]["ratio"] == pytest.approx(2.0**0.5, abs=1e-8)
        assert records[1]["values"]["ratio"] == pytest.approx(2.0, abs=1e-8)

    def test_contraction(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        code = run(
            ["contraction", "--f", "tsallis:q=1.5", "--dim", "3",
             "--trials", "25", "--seed", "2", "--out", str(out)]
        )
        assert code == 0
        checks = {r["check"] for r in body_of(out)["records"]}
        assert checks == {"contraction-monotonicity", "contraction-unitary-invariance"}

    def test_counterexample_search_exit_codes(self, tmp_path, capsys):
        found = run(
            ["counterexample-search", "--f", "tsallis:q=3", "--dim", "3",
             "--trials", "20", "--seed", "1", "--criterion", "concavity",
             "--out", str(tmp_path / "a.json")]
        )
        assert found == 3
        record = body_of(tmp_path / "a.json")["records"][0]
        assert record["values"]["search_outcome"] == "found"
        none = run(
            ["counterexample-search", "--f", "tsallis:q=1.5", "--dim", "3",
             "--trials", "10", "--seed", "1",
             "--out", str(tmp_path / "b.json")]
        )
        assert none == 0
        for record in body_of(tmp_path / "b.json")["records"]:
            assert record["values"]["search_outcome"] == "inconclusive"

    def test_csv_projection(self, pd_files, capsys):
        x, y = pd_files
        code = run(
            ["divergence", "--f", "entropy", "--x", x, "--y", y,
             "--all-methods", "--format", "csv"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "name,check,value,slack,passed"
        assert len(lines) == 5


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["tsallis-ssa", "--random", "5", "--seed", "3", "--q", "1,2"],
            ["entropy-class", "--f", "entropy", "--dim", "3", "--trials", "15", "--seed", "4"],
            ["verify-identities", "--dim", "3", "--trials", "5", "--seed", "9"],
            ["contraction", "--f", "tsallis:q=1.5", "--trials", "10", "--seed", "2"],
            ["counterexample-search", "--f", "tsallis:q=3", "--trials", "5", "--seed", "2"],
            ["monotonicity-demo", "--q", "1.5,2"],
        ],
    )
    def test_identical_config_gives_byte_identical_body(self, argv, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(argv + ["--out", str(a)]) == run(argv + ["--out", str(b)])
        raw_a = json.dumps(body_of(a), sort_keys=True).encode()
        raw_b = json.dumps(body_of(b), sort_keys=True).encode()
        assert raw_a == raw_b

    def test_worker_count_does_not_change_results(self, tmp_path, capsys, monkeypatch):
        argv = ["entropy-class", "--f", "entropy", "--dim", "3", "--trials", "12", "--seed", "8"]
        monkeypatch.setenv("BREGMAT_THREADS", "1")
        serial = tmp_path / "serial.json"
        assert run(argv + ["--out", str(serial)]) == 0
        monkeypatch.setenv("BREGMAT_THREADS", "4")
        threaded = tmp_path / "threaded.json"
        assert run(argv + ["--out", str(threaded)]) == 0
        assert body_of(serial) == body_of(threaded)

    def test_worker_count_env_parsing(self, monkeypatch):
        from bregmat.workers import worker_count

        monkeypatch.delenv("BREGMAT_THREADS", raising=False)
        assert worker_count() == 1
        monkeypatch.setenv("BREGMAT_THREADS", "3")
        assert worker_count() == 3
        monkeypatch.setenv("BREGMAT_THREADS", "0")
        assert worker_count() >= 1


class TestMatrixFiles:
    def test_round_trip_is_lossless(self, tmp_path):
        a = random_hermitian(4, np.random.default_rng(5))
        path = tmp_path / "m.json"
        save_matrix(path, a, dims=(2, 2))
        loaded, dims = load_matrix(path)
        assert np.array_equal(loaded, a)
        assert dims == (2, 2)

    def test_shipped_state_matches_generated(self):
        with resources.as_file(
            resources.files("bregmat").joinpath("data/saturating_state.json")
        ) as path:
            loaded = load_density(path)
        generated = saturating_state()
        assert np.array_equal(loaded.entries, generated.entries)
        assert loaded.dims == generated.dims

    def test_schema_errors(self):
        with pytest.raises(SchemaError, match="missing field"):
            matrix_from_json({"dim": 2, "re": [[0, 0], [0, 0]]})
        with pytest.raises(SchemaError, match="positive integer"):
            matrix_from_json({"dim": -1, "re": [], "im": []})
        with pytest.raises(SchemaError, match="2x2"):
            matrix_from_json({"dim": 2, "re": [[0.0]], "im": [[0.0]]})

    def test_hermiticity_error_names_entry(self, tmp_path):
        path = tmp_path / "bad.json"
        save_matrix(path, np.zeros((2, 2)))
        raw = json.loads(path.read_text())
        raw["re"][0][1] = 1.0  # symmetric partner stays 0
        path.write_text(json.dumps(raw))
        with pytest.raises(HermiticityError, match=r"A\[0,1\]"):
            load_matrix(path)

    def test_density_validation_error(self, tmp_path):
        path = tmp_path / "not_a_state.json"
        save_matrix(path, np.eye(2))  # trace 2
        with pytest.raises(StateValidationError):
            load_density(path)
