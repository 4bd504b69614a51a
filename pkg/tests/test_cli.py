import json

import numpy as np
import pytest

from cartpend.cli import (
    INITIAL_CONDITIONS,
    RunConfig,
    ConfigError,
    format_pole,
    main,
    parse_initial,
    parse_period_list,
    parse_pole,
    parse_pole_list,
)
from refsys import A_4DP, B_4DP

SUMMARY_KEYS = {"config", "system", "gains", "metrics", "residuals"}


def run(tmp_path, *argv):
    """Invoke the CLI writing the summary to a temp file; return (code, summary)."""
    out = tmp_path / "summary.json"
    code = main([*argv, "--json", str(out)])
    summary = json.loads(out.read_text()) if out.exists() else None
    return code, summary


class TestParsing:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("-2", -2 + 0j),
            ("-3+0.5i", -3 + 0.5j),
            ("-3-0.5i", -3 - 0.5j),
            ("0.5i", 0.5j),
            ("4", 4 + 0j),
        ],
    )
    def test_parse_pole(self, text, value):
        assert parse_pole(text) == value

    def test_parse_pole_rejects_garbage(self):
        with pytest.raises(ConfigError):
            parse_pole("two")

    def test_format_parse_round_trip(self):
        for z in (-2 + 0j, -3 + 0.5j, -3 - 0.5j, 0.1234567890123j, 7.25 + 0j):
            assert parse_pole(format_pole(z)) == z

    def test_parse_pole_list(self):
        got = parse_pole_list("-2,-3+0.5i,-3-0.5i,-4")
        assert got == (-2 + 0j, -3 + 0.5j, -3 - 0.5j, -4 + 0j)

    def test_parse_period_range_inclusive(self):
        got = parse_period_list("0.05:0.5:0.05")
        np.testing.assert_allclose(got, np.arange(1, 11) * 0.05, atol=1e-12)

    def test_parse_period_commas(self):
        assert parse_period_list("0.1,0.2,0.5") == (0.1, 0.2, 0.5)

    def test_parse_initial_named_and_explicit(self):
        assert parse_initial("x_s") == "x_s"
        assert parse_initial("1,-2,0.5,0") == (1.0, -2.0, 0.5, 0.0)
        with pytest.raises(ConfigError):
            parse_initial("1,2,3")

    def test_named_initial_conditions_are_reference_values(self):
        np.testing.assert_allclose(INITIAL_CONDITIONS["x_u"], [7, 0, np.pi / 2, 0])
        np.testing.assert_allclose(INITIAL_CONDITIONS["x_c"], [5, -1, np.pi / 5, 0.2])
        np.testing.assert_allclose(INITIAL_CONDITIONS["x_s"], [0.5, 0, 0.3, 0])


class TestRunConfigRoundTrip:
    def test_default_round_trip(self):
        cfg = RunConfig()
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    def test_custom_round_trip(self):
        cfg = RunConfig(
            poles=(-1 + 0j, -2 + 0.25j, -2 - 0.25j, -5 + 0j),
            initial=(1.0, 0.0, -0.2, 0.3),
            T=0.125,
            Ts=(0.1, 0.2),
            plant="linearized",
            redesign=False,
            t_final=4.0,
            h=0.0005,
            csv="out.csv",
            json_out="out.json",
        )
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"Mass": 2.0})


class TestLinearizeCommand:
    def test_default_reproduces_reference_matrices(self, tmp_path):
        code, summary = run(tmp_path, "linearize")
        assert code == 0
        assert set(summary) == SUMMARY_KEYS
        np.testing.assert_allclose(summary["system"]["A"], A_4DP, atol=5e-5)
        np.testing.assert_allclose(summary["system"]["B"], B_4DP, atol=5e-5)
        assert summary["system"]["dt"] is None

    def test_frictionless_override(self, tmp_path):
        code, summary = run(tmp_path, "linearize", "--F", "0")
        assert code == 0
        assert summary["system"]["A"][1][1] == 0.0

    def test_missing_config_file(self, tmp_path, capsys):
        code, _ = run(tmp_path, "linearize", "--config", str(tmp_path / "nope.json"))
        assert code == 2
        assert "configuration error" in capsys.readouterr().err

    def test_invalid_params_rejected(self, tmp_path):
        code, _ = run(tmp_path, "linearize", "--M", "-1")
        assert code == 2


class TestCheckCommand:
    def test_default_holds(self, tmp_path):
        code, summary = run(tmp_path, "check")
        assert code == 0
        ctrl = summary["metrics"]["controllability"]
        obs = summary["metrics"]["observability"]
        assert ctrl["rank"] == ctrl["required"] == 4 and ctrl["holds"]
        assert obs["rank"] == obs["required"] == 4 and obs["holds"]
        assert ctrl["tol"] == 1e-9

    def test_tol_override_echoed_and_can_fail(self, tmp_path):
        # an absurdly coarse tolerance wipes out the pivots: rank drops
        code, summary = run(tmp_path, "check", "--tol", "0.9")
        assert code == 1
        assert summary["config"]["tol"] == 0.9
        assert summary["metrics"]["controllability"]["tol"] == 0.9
        assert not summary["metrics"]["controllability"]["holds"]


class TestPlaceCommand:
    def test_reference_pole_set(self, tmp_path):
        code, summary = run(tmp_path, "place", "--poles", "-2,-3+0.5i,-3-0.5i,-4")
        assert code == 0
        assert summary["residuals"]["placement"] < 1e-6
        K = np.asarray(summary["gains"]["K"])
        assert K.shape == (1, 4)
        # canonical order: by real part, then imaginary part
        assert summary["gains"]["desired_poles"] == ["-4.0", "-3.0-0.5i", "-3.0+0.5i", "-2.0"]

    def test_bad_pole_string(self, tmp_path):
        code, _ = run(tmp_path, "place", "--poles", "banana")
        assert code == 2

    def test_unpaired_poles_fail_verification_path(self, tmp_path, capsys):
        code, _ = run(tmp_path, "place", "--poles", "-1,-2,-3,-4+1i")
        assert code == 1
        assert "place:" in capsys.readouterr().err


class TestDiscretizeCommand:
    def test_single_period(self, tmp_path):
        code, summary = run(tmp_path, "discretize", "--T", "0.1")
        assert code == 0
        (entry,) = summary["system"]["discrete"]
        assert entry["dt"] == 0.1
        assert np.asarray(entry["A"]).shape == (4, 4)

    def test_period_list(self, tmp_path):
        code, summary = run(tmp_path, "discretize", "--Ts", "0.1,0.2,0.5")
        assert code == 0
        assert [e["dt"] for e in summary["system"]["discrete"]] == [0.1, 0.2, 0.5]

    def test_needs_some_period(self, tmp_path):
        code, _ = run(tmp_path, "discretize")
        assert code == 2


class TestSimulateCommand:
    def test_sampled_stable_run_writes_csv(self, tmp_path):
        csv_path = tmp_path / "traj.csv"
        code, summary = run(
            tmp_path, "simulate", "--initial", "x_s", "--T", "0.1", "--csv", str(csv_path)
        )
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "t,x1,x2,x3,x4,u,y1,y2"
        last = [float(v) for v in lines[-1].split(",")]
        assert last[0] == pytest.approx(10.0)
        assert max(abs(v) for v in last[1:5]) < 1e-2
        assert summary["metrics"]["stable"] is True
        assert summary["config"]["initial"] == "x_s"
        assert "discrete" in summary["system"]

    def test_continuous_run_when_no_period_given(self, tmp_path):
        code, summary = run(tmp_path, "simulate", "--t-final", "2", "--initial", "x_s")
        assert code == 0
        assert summary["gains"]["dt"] is None
        assert "discrete" not in summary["system"]

    def test_csv_values_have_9_significant_digits(self, tmp_path):
        csv_path = tmp_path / "traj.csv"
        code, _ = run(
            tmp_path, "simulate", "--initial", "x_s", "--t-final", "1",
            "--csv", str(csv_path),
        )
        assert code == 0
        row = csv_path.read_text().splitlines()[5].split(",")
        # 9 significant digits survive the %.9g formatting
        assert any(len(v.replace("-", "").replace(".", "").lstrip("0")) >= 8 for v in row)

    def test_step_must_divide_period(self, tmp_path):
        code, _ = run(tmp_path, "simulate", "--T", "0.1", "--h", "0.03")
        assert code == 2

    def test_explicit_initial_state(self, tmp_path):
        code, summary = run(
            tmp_path, "simulate", "--initial", "0.1,0,0.05,0", "--t-final", "1"
        )
        assert code == 0
        assert summary["config"]["initial"] == [0.1, 0.0, 0.05, 0.0]

    def test_config_file_with_flag_override(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"t_final": 1.0, "initial": "x_s", "T": 0.5}))
        code, summary = run(
            tmp_path, "simulate", "--config", str(cfg_file), "--T", "0.1"
        )
        assert code == 0
        assert summary["config"]["T"] == 0.1  # flag wins
        assert summary["config"]["t_final"] == 1.0

    def test_summary_config_round_trips(self, tmp_path):
        code, summary = run(
            tmp_path, "simulate", "--initial", "x_c", "--T", "0.2",
            "--plant", "nonlinear", "--t-final", "2",
        )
        assert code == 0
        reloaded = RunConfig.from_dict(summary["config"])
        assert reloaded.initial == "x_c"
        assert reloaded.T == 0.2
        assert reloaded.t_final == 2.0
        # feeding the emitted config back reproduces the same resolved config
        cfg_file = tmp_path / "replay.json"
        cfg_file.write_text(json.dumps(summary["config"]))
        code2, summary2 = run(tmp_path, "simulate", "--config", str(cfg_file))
        assert code2 == 0
        config2 = dict(summary2["config"])
        config1 = dict(summary["config"])
        # the json output path differs between invocations by construction
        config1.pop("json"), config2.pop("json")
        assert config2 == config1


class TestSweepCommand:
    def test_table_preserves_order_and_schema(self, tmp_path):
        code, summary = run(
            tmp_path, "sweep", "--Ts", "0.2,0.1", "--t-final", "2", "--redesign"
        )
        assert code == 0
        table = summary["metrics"]["sweep"]
        assert [row["T"] for row in table] == [0.2, 0.1]
        for row in table:
            assert {"T", "peak_y1", "overshoot_y1", "settling_time", "stable"} <= set(row)

    def test_needs_periods(self, tmp_path):
        code, _ = run(tmp_path, "sweep")
        assert code == 2

    def test_unstable_settling_serializes_as_null(self, tmp_path):
        # without redesign T=0.5 destabilizes; settling time is null in JSON
        code, summary = run(
            tmp_path, "sweep", "--Ts", "0.5", "--no-redesign", "--t-final", "3"
        )
        assert code == 0
        row = summary["metrics"]["sweep"][0]
        assert row["stable"] is False
        assert row["settling_time"] is None
