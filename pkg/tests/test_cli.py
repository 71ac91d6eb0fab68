"""End-to-end tests for the command line interface and job config format."""

from __future__ import annotations

import json

import pytest

from sosdw.cli import ConfigError, DEFAULT_TOLERANCES, load_job_config, main
from sosdw.contour import ContourSpec


def cfg_dict(**overrides):
    base = {
        "L": 2,
        "gamma": {"re": 0.31, "im": 0.0},
        "theta": {"re": 0.57, "im": 0.0},
        "mu": [{"re": 0.13, "im": 0.0}, {"re": -0.22, "im": 0.0}],
        "lambda": [{"re": 0.41, "im": 0.0}, {"re": 0.18, "im": 0.0}],
        "routes": ["face", "algebra", "permutation", "residue"],
        "seed": 0,
    }
    base.update(overrides)
    return base


def write_cfg(tmp_path, name="job.json", **overrides):
    path = tmp_path / name
    path.write_text(json.dumps(cfg_dict(**overrides)))
    return str(path)


class TestLoadJobConfig:
    def test_valid_config_parses(self, tmp_path):
        cfg = load_job_config(write_cfg(tmp_path))
        assert cfg.params.L == 2
        assert cfg.params.gamma == 0.31 + 0j
        assert cfg.params.mu == (0.13 + 0j, -0.22 + 0j)
        assert cfg.lambdas == (0.41 + 0j, 0.18 + 0j)
        assert cfg.routes == ("face", "algebra", "permutation", "residue")
        assert cfg.seed == 0
        assert cfg.tolerances == DEFAULT_TOLERANCES
        assert cfg.contour is None

    def test_unknown_top_level_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="bogus_key"):
            load_job_config(write_cfg(tmp_path, bogus_key=1))

    def test_missing_key_rejected(self, tmp_path):
        raw = cfg_dict()
        del raw["theta"]
        path = tmp_path / "job.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="theta"):
            load_job_config(str(path))

    def test_bare_number_not_accepted_for_complex(self, tmp_path):
        with pytest.raises(ConfigError):
            load_job_config(write_cfg(tmp_path, gamma=0.31))

    def test_extra_complex_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_job_config(
                write_cfg(tmp_path, gamma={"re": 0.3, "im": 0.0, "x": 1}))

    def test_wrong_length_arrays_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="mu"):
            load_job_config(
                write_cfg(tmp_path, mu=[{"re": 0.1, "im": 0.0}]))
        with pytest.raises(ConfigError, match="lambda"):
            load_job_config(
                write_cfg(tmp_path, **{"lambda": [{"re": 0.1, "im": 0.0}]}))

    def test_bad_routes_rejected(self, tmp_path):
        for routes in ([], ["warp"], ["face", "face"]):
            with pytest.raises(ConfigError):
                load_job_config(write_cfg(tmp_path, routes=routes))

    def test_bad_seed_rejected(self, tmp_path):
        for seed in (-1, 1.5, True):
            with pytest.raises(ConfigError):
                load_job_config(write_cfg(tmp_path, seed=seed))

    def test_unknown_tolerance_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="route_agremnt"):
            load_job_config(
                write_cfg(tmp_path, tolerances={"route_agremnt": 1e-9}))

    def test_tolerance_override_applied(self, tmp_path):
        cfg = load_job_config(
            write_cfg(tmp_path, tolerances={"route_agreement": 1e-6}))
        assert cfg.tolerances["route_agreement"] == 1e-6

    def test_contour_key_parsed(self, tmp_path):
        cfg = load_job_config(write_cfg(
            tmp_path,
            contour={"center": {"re": 0.3, "im": 0.0}, "radius": 0.9,
                     "nodes": 32}))
        assert isinstance(cfg.contour, ContourSpec)
        assert cfg.contour.center == 0.3 + 0j
        assert cfg.contour.radius == 0.9
        assert cfg.contour.nodes == 32

    def test_contour_rejects_unknown_or_missing_fields(self, tmp_path):
        with pytest.raises(ConfigError):
            load_job_config(write_cfg(
                tmp_path,
                contour={"center": {"re": 0.3, "im": 0.0}, "radius": 0.9,
                         "wobble": 2}))
        with pytest.raises(ConfigError):
            load_job_config(
                write_cfg(tmp_path, contour={"radius": 0.9}))


class TestComputeCommand:
    def test_compute_json_success(self, tmp_path, capsys):
        path = write_cfg(tmp_path)
        code = main(["compute", "--config", path, "--json", "--no-timings"])
        out = capsys.readouterr().out
        assert code == 0
        report = json.loads(out)
        assert report["L"] == 2
        assert set(report["routes"]) == {"face", "algebra", "permutation",
                                         "residue"}
        assert len(report["deviations"]) == 6
        assert all(d["within_tolerance"] for d in report["deviations"])
        assert report["tolerances"]["route_agreement"] == 1e-9
        ratio = report["reconciliation_ratio"]
        assert abs(complex(ratio["re"], ratio["im"]) - 1) < 1e-10

    def test_compute_json_deterministic_without_timings(self, tmp_path,
                                                        capsys):
        path = write_cfg(tmp_path)
        main(["compute", "--config", path, "--json", "--no-timings"])
        first = capsys.readouterr().out
        main(["compute", "--config", path, "--json", "--no-timings"])
        second = capsys.readouterr().out
        assert first == second

    def test_compute_human_table(self, tmp_path, capsys):
        path = write_cfg(tmp_path, routes=["face", "permutation"])
        code = main(["compute", "--config", path])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "partition function report  L=2"
        assert lines[1].startswith("route")
        assert "wall_ms" in lines[1]
        assert any(line.startswith("face") for line in lines)
        assert any("face|permutation" in line and line.rstrip().endswith(
            "PASS") for line in lines)

    def test_compute_exit_1_when_tolerance_not_met(self, tmp_path, capsys):
        path = write_cfg(tmp_path,
                         tolerances={"route_agreement": 1e-18})
        code = main(["compute", "--config", path, "--json", "--no-timings"])
        capsys.readouterr()
        assert code == 1

    def test_compute_exit_2_on_unknown_config_key(self, tmp_path, capsys):
        path = write_cfg(tmp_path, whatever=3)
        code = main(["compute", "--config", path, "--json"])
        err = capsys.readouterr().err
        assert code == 2
        payload = json.loads(err)
        assert payload["error"]["type"] == "ConfigError"
        assert "whatever" in payload["error"]["message"]

    def test_compute_exit_2_on_degenerate_anisotropy(self, tmp_path, capsys):
        path = write_cfg(tmp_path, gamma={"re": 0.0, "im": 0.0})
        code = main(["compute", "--config", path, "--json"])
        err = capsys.readouterr().err
        assert code == 2
        assert json.loads(err)["error"]["type"] == "DegenerateGamma"

    def test_compute_exit_2_on_oversized_face_request(self, tmp_path,
                                                      capsys):
        mu = [{"re": 0.05 * k, "im": 0.0} for k in range(6)]
        lam = [{"re": 0.4 + 0.11 * k, "im": 0.0} for k in range(6)]
        path = write_cfg(tmp_path, L=6, mu=mu, **{"lambda": lam},
                         routes=["face"])
        code = main(["compute", "--config", path, "--json"])
        err = capsys.readouterr().err
        assert code == 2
        assert json.loads(err)["error"]["type"] == "TooLarge"


class TestVerifyCommand:
    def test_verify_passes_and_is_deterministic(self, capsys):
        code = main(["verify", "--suite", "dybe", "--seed", "3",
                     "--draws", "4"])
        first = capsys.readouterr().out
        assert code == 0
        assert first.splitlines()[0] == "suite dybe  seed 3  draws 4"
        assert first.rstrip().endswith("suite dybe: 4/4 passed -> PASS")
        main(["verify", "--suite", "dybe", "--seed", "3", "--draws", "4"])
        second = capsys.readouterr().out
        assert first == second

    def test_verify_unknown_suite_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify", "--suite", "nonsense"])
        capsys.readouterr()


class TestBenchCommand:
    def test_bench_csv_output(self, tmp_path, capsys):
        out_path = tmp_path / "bench.csv"
        code = main(["bench", "--lmin", "1", "--lmax", "3",
                     "--routes", "face,permutation",
                     "--csv", str(out_path)])
        capsys.readouterr()
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "route,L,nodes_or_terms,wall_ms,value_re,value_im"
        rows = [line.split(",") for line in lines[1:]]
        face_rows = [r for r in rows if r[0] == "face"]
        perm_rows = [r for r in rows if r[0] == "permutation"]
        assert [int(r[1]) for r in face_rows] == [1, 2, 3]
        assert [int(r[2]) for r in face_rows] == [1, 2, 7]
        assert [int(r[2]) for r in perm_rows] == [1, 2, 6]
        for r in rows:
            assert complex(float(r[4]), float(r[5])) != 0

    def test_bench_workload_column_monotone_within_route(self, tmp_path,
                                                         capsys):
        out_path = tmp_path / "bench.csv"
        main(["bench", "--lmin", "1", "--lmax", "4",
              "--routes", "permutation", "--csv", str(out_path)])
        capsys.readouterr()
        counts = [int(line.split(",")[2])
                  for line in out_path.read_text().splitlines()[1:]]
        assert counts == sorted(counts)
        assert len(set(counts)) == len(counts)

    def test_bench_silently_skips_sizes_past_route_cap(self, tmp_path,
                                                       capsys):
        out_path = tmp_path / "bench.csv"
        code = main(["bench", "--lmin", "5", "--lmax", "6",
                     "--routes", "face", "--csv", str(out_path)])
        capsys.readouterr()
        assert code == 0
        rows = out_path.read_text().splitlines()[1:]
        assert [r.split(",")[:2] for r in rows] == [["face", "5"]]

    def test_bench_stdout_when_no_csv(self, capsys):
        code = main(["bench", "--lmin", "1", "--lmax", "1",
                     "--routes", "residue"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0] == (
            "route,L,nodes_or_terms,wall_ms,value_re,value_im")
        assert out.splitlines()[1].startswith("residue,1,1,")

    def test_bench_bad_flags_rejected(self, capsys):
        code = main(["bench", "--lmin", "2", "--lmax", "1",
                     "--routes", "face"])
        err = capsys.readouterr().err
        assert code == 2
        assert json.loads(err)["error"]["type"] == "ConfigError"
        code = main(["bench", "--lmin", "1", "--lmax", "1",
                     "--routes", "face,warp"])
        err = capsys.readouterr().err
        assert code == 2

    def test_missing_required_flags_exit_nonzero(self, capsys):
        with pytest.raises(SystemExit):
            main(["bench"])
        capsys.readouterr()
        with pytest.raises(SystemExit):
            main(["compute"])
        capsys.readouterr()
