"""Command-line front end: model setup, analysis, design, simulation, sweeps.

Configuration comes from an optional JSON file plus flag overrides (flags
win).  Every JSON summary carries the fully resolved configuration under
``"config"`` so any output can be fed back in as a config file.  Exit codes:
0 success, 1 verification or property failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .discretize import sweep_discretize, zoh_discretize
from .linalg import DEFAULT_RANK_TOL
from .model import LinearSystem, PendulumParams, linearize
from .placement import GainSpec, map_poles_s_to_z, place
from .properties import PropertyReport, check
from .simulate import (
    ContinuousController,
    SampledController,
    SimConfig,
    Trajectory,
    evaluate,
    simulate_continuous,
    simulate_sampled,
    sweep_sampling,
)

__all__ = ["main", "RunConfig", "ConfigError", "INITIAL_CONDITIONS"]

CSV_COLUMNS = ("t", "x1", "x2", "x3", "x4", "u", "y1", "y2")

# Named initial conditions: unstable, critical, stable regimes.
INITIAL_CONDITIONS = {
    "x_u": (7.0, 0.0, np.pi / 2, 0.0),
    "x_c": (5.0, -1.0, np.pi / 5, 0.2),
    "x_s": (0.5, 0.0, 0.3, 0.0),
}

DEFAULT_POLES = (-2.0 + 0.0j, -3.0 + 0.5j, -3.0 - 0.5j, -4.0 + 0.0j)


class ConfigError(ValueError):
    """Configuration file or flag cannot be interpreted."""


def parse_pole(text: str) -> complex:
    t = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ConfigError(f"cannot parse pole {text!r}") from exc


def format_pole(z: complex) -> str:
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_pole_list(text: str) -> tuple[complex, ...]:
    items = [s for s in str(text).split(",") if s.strip()]
    if not items:
        raise ConfigError("empty pole list")
    return tuple(parse_pole(s) for s in items)


def parse_period_list(text: str) -> tuple[float, ...]:
    """Sampling periods as ``a,b,c`` or an inclusive range ``start:stop:step``."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"cannot parse range {text!r}") from exc
        if step <= 0 or stop < start:
            raise ConfigError(f"bad range {text!r}")
        count = int(round((stop - start) / step))
        return tuple(start + k * step for k in range(count + 1))
    try:
        values = tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse period list {text!r}") from exc
    if not values:
        raise ConfigError("empty period list")
    return values


def parse_initial(value) -> str | tuple[float, ...]:
    if isinstance(value, str) and value in INITIAL_CONDITIONS:
        return value
    if isinstance(value, str):
        try:
            parts = tuple(float(s) for s in value.split(","))
        except ValueError as exc:
            raise ConfigError(f"cannot parse initial state {value!r}") from exc
    else:
        try:
            parts = tuple(float(v) for v in value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"cannot parse initial state {value!r}") from exc
    if len(parts) != 4:
        raise ConfigError("explicit initial state needs 4 components")
    return parts


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration; serializes losslessly to JSON."""

    params: PendulumParams = PendulumParams()
    poles: tuple[complex, ...] = DEFAULT_POLES
    initial: str | tuple[float, ...] = "x_s"
    T: float | None = None
    Ts: tuple[float, ...] | None = None
    plant: str = "nonlinear"
    redesign: bool = True
    t_final: float = 10.0
    h: float = 1e-3
    divergence_bound: float = 1e3
    tol: float = DEFAULT_RANK_TOL
    csv: str | None = None
    json_out: str | None = None

    def initial_state(self) -> np.ndarray:
        if isinstance(self.initial, str):
            return np.array(INITIAL_CONDITIONS[self.initial])
        return np.array(self.initial)

    def to_dict(self) -> dict:
        return {
            "params": {
                "M": self.params.M,
                "L": self.params.L,
                "F": self.params.F,
                "g": self.params.g,
            },
            "poles": [format_pole(p) for p in self.poles],
            "initial": self.initial if isinstance(self.initial, str) else list(self.initial),
            "T": self.T,
            "Ts": None if self.Ts is None else list(self.Ts),
            "plant": self.plant,
            "redesign": self.redesign,
            "t_final": self.t_final,
            "h": self.h,
            "divergence_bound": self.divergence_bound,
            "tol": self.tol,
            "csv": self.csv,
            "json": self.json_out,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        known = {
            "params", "poles", "initial", "T", "Ts", "plant", "redesign",
            "t_final", "h", "divergence_bound", "tol", "csv", "json",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs: dict = {}
        if "params" in data:
            p = data["params"]
            if not isinstance(p, dict) or set(p) - {"M", "L", "F", "g"}:
                raise ConfigError("params must be an object with keys M, L, F, g")
            try:
                kwargs["params"] = PendulumParams(**{k: float(v) for k, v in p.items()})
            except ValueError as exc:
                raise ConfigError(f"bad params: {exc}") from exc
        if "poles" in data:
            kwargs["poles"] = tuple(parse_pole(s) for s in data["poles"])
        if "initial" in data:
            kwargs["initial"] = parse_initial(data["initial"])
        if "T" in data and data["T"] is not None:
            kwargs["T"] = float(data["T"])
        if "Ts" in data and data["Ts"] is not None:
            kwargs["Ts"] = tuple(float(v) for v in data["Ts"])
        for key in ("plant", "csv"):
            if key in data and data[key] is not None:
                kwargs[key] = str(data[key])
        if "json" in data and data["json"] is not None:
            kwargs["json_out"] = str(data["json"])
        if "redesign" in data:
            kwargs["redesign"] = bool(data["redesign"])
        for key in ("t_final", "h", "divergence_bound", "tol"):
            if key in data:
                kwargs[key] = float(data[key])
        cfg = cls(**kwargs)
        if cfg.plant not in ("nonlinear", "linearized"):
            raise ConfigError(f"unknown plant {cfg.plant!r}")
        return cfg


def _jsonable(value):
    """Map to JSON-safe values: arrays to lists, non-finite floats to null."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if np.isfinite(f) else None
    return value


def _system_dict(sys: LinearSystem) -> dict:
    return {"A": sys.A, "B": sys.B, "C": sys.C, "dt": sys.dt}


def _gain_dict(gain: GainSpec) -> dict:
    return {
        "desired_poles": [format_pole(p) for p in gain.desired_poles],
        "achieved_poles": [format_pole(p) for p in gain.achieved_poles],
        "K": gain.K,
        "psi": gain.psi,
        "dt": gain.dt,
    }


def _report_dict(report: PropertyReport) -> dict:
    return {
        "matrix": report.matrix,
        "rank": report.rank,
        "required": report.required,
        "holds": report.holds,
        "tol": report.tol,
    }


def _metrics_dict(m) -> dict:
    return {
        "peak_y1": m.peak_y1,
        "overshoot_y1": m.overshoot_y1,
        "settling_time": m.settling_time,
        "stable": m.stable,
    }


def write_trajectory_csv(path: str, traj: Trajectory) -> None:
    """Fixed schema: t,x1,x2,x3,x4,u,y1,y2 at 9 significant digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for t, x, u, y in zip(traj.times, traj.states, traj.inputs, traj.outputs):
            row = (t, x[0], x[1], x[2], x[3], u, y[0], y[1])
            f.write(",".join(f"{v:.9g}" for v in row) + "\n")


def _summary(cfg: RunConfig, system=None, gains=None, metrics=None, residuals=None) -> dict:
    return {
        "config": cfg.to_dict(),
        "system": system,
        "gains": gains,
        "metrics": metrics,
        "residuals": residuals,
    }


def _check_h_divides(cfg: RunConfig, T: float) -> None:
    n_sub = int(round(T / cfg.h))
    if n_sub < 1 or abs(n_sub * cfg.h - T) > 1e-9 * T:
        raise ConfigError(f"h={cfg.h:g} does not divide T={T:g}")


def _design_gains(cfg: RunConfig, T: float | None):
    """Continuous gain from the configured poles; discrete redesign at T."""
    sys_c = linearize(cfg.params)
    gain_c = place(sys_c, cfg.poles, tol=cfg.tol)
    if T is None:
        return sys_c, gain_c, None, gain_c
    sys_d = zoh_discretize(sys_c, T)
    if cfg.redesign:
        gain_used = place(sys_d, map_poles_s_to_z(cfg.poles, T), tol=cfg.tol)
    else:
        gain_used = gain_c
    return sys_c, gain_c, sys_d, gain_used


def cmd_linearize(cfg: RunConfig) -> tuple[dict, int]:
    sys_c = linearize(cfg.params)
    return _summary(cfg, system=_system_dict(sys_c)), 0


def cmd_check(cfg: RunConfig) -> tuple[dict, int]:
    sys_c = linearize(cfg.params)
    ctrl, obs = check(sys_c, tol=cfg.tol)
    summary = _summary(
        cfg,
        system=_system_dict(sys_c),
        metrics={
            "controllability": _report_dict(ctrl),
            "observability": _report_dict(obs),
        },
    )
    return summary, 0 if (ctrl.holds and obs.holds) else 1


def cmd_place(cfg: RunConfig) -> tuple[dict, int]:
    sys_c = linearize(cfg.params)
    gain = place(sys_c, cfg.poles, tol=cfg.tol)
    summary = _summary(
        cfg,
        system=_system_dict(sys_c),
        gains=_gain_dict(gain),
        residuals={"placement": gain.residual},
    )
    return summary, 0


def cmd_discretize(cfg: RunConfig) -> tuple[dict, int]:
    periods = list(cfg.Ts or ())
    if cfg.T is not None:
        periods = [cfg.T] + periods
    if not periods:
        raise ConfigError("discretize needs --T or --Ts")
    sys_c = linearize(cfg.params)
    discrete = sweep_discretize(sys_c, periods)
    summary = _summary(
        cfg,
        system={
            "continuous": _system_dict(sys_c),
            "discrete": [_system_dict(d) for d in discrete],
        },
    )
    return summary, 0


def cmd_simulate(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.T is not None:
        _check_h_divides(cfg, cfg.T)
    sys_c, gain_c, sys_d, gain_used = _design_gains(cfg, cfg.T)
    if cfg.T is None:
        controller = ContinuousController(K=gain_used.K)
    else:
        controller = SampledController(K=gain_used.K, T=cfg.T)
    sim_cfg = SimConfig(
        params=cfg.params,
        controller=controller,
        x0=cfg.initial_state(),
        plant=cfg.plant,
        t_final=cfg.t_final,
        h=cfg.h,
        divergence_bound=cfg.divergence_bound,
    )
    if cfg.T is None:
        traj = simulate_continuous(sim_cfg)
    else:
        traj = simulate_sampled(sim_cfg)
    if cfg.csv:
        write_trajectory_csv(cfg.csv, traj)
    system = {"continuous": _system_dict(sys_c)}
    if sys_d is not None:
        system["discrete"] = _system_dict(sys_d)
    summary = _summary(
        cfg,
        system=system,
        gains=_gain_dict(gain_used),
        metrics={
            **_metrics_dict(evaluate(traj)),
            "terminated_early": traj.terminated_early,
            "reason": traj.reason,
        },
        residuals={"placement": gain_used.residual},
    )
    return summary, 0


def cmd_sweep(cfg: RunConfig) -> tuple[dict, int]:
    if not cfg.Ts:
        raise ConfigError("sweep needs --Ts")
    for T in cfg.Ts:
        _check_h_divides(cfg, T)
    rows = sweep_sampling(
        cfg.params,
        cfg.poles,
        cfg.initial_state(),
        cfg.Ts,
        redesign=cfg.redesign,
        plant=cfg.plant,
        t_final=cfg.t_final,
        h=cfg.h,
        divergence_bound=cfg.divergence_bound,
    )
    table = [{"T": T, **_metrics_dict(m)} for T, m in rows]
    summary = _summary(
        cfg,
        system=_system_dict(linearize(cfg.params)),
        metrics={"redesign": cfg.redesign, "sweep": table},
    )
    return summary, 0


COMMANDS = {
    "linearize": cmd_linearize,
    "check": cmd_check,
    "place": cmd_place,
    "discretize": cmd_discretize,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--json", dest="json_out", help="write the JSON summary here")
    common.add_argument("--M", type=float, help="cart mass (kg)")
    common.add_argument("--L", type=float, help="pendulum length (m)")
    common.add_argument("--F", type=float, help="friction coefficient (kg/s)")
    common.add_argument("--g", type=float, help="gravitational acceleration (m/s^2)")
    common.add_argument("--tol", type=float, help="rank/pivot tolerance")

    design = argparse.ArgumentParser(add_help=False)
    design.add_argument("--poles", help="comma-separated poles, e.g. -2,-3+0.5i,-3-0.5i,-4")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--initial", help="x_u | x_c | x_s or four comma-separated numbers")
    run.add_argument("--plant", choices=["nonlinear", "linearized"])
    run.add_argument("--redesign", action=argparse.BooleanOptionalAction, default=None,
                     help="re-synthesize the gain per sampling period")
    run.add_argument("--t-final", dest="t_final", type=float, help="simulation horizon (s)")
    run.add_argument("--h", type=float, help="integrator step (s)")
    run.add_argument("--divergence-bound", dest="divergence_bound", type=float)

    parser = argparse.ArgumentParser(
        prog="cartpend",
        description="Inverted-pendulum state-feedback design and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("linearize", parents=[common], help="emit the A, B, C matrices")
    sub.add_parser("check", parents=[common], help="controllability/observability ranks")
    sub.add_parser("place", parents=[common, design], help="synthesize the feedback gain")
    disc = sub.add_parser("discretize", parents=[common], help="ZOH discrete equivalents")
    disc.add_argument("--T", type=float, help="sampling period (s)")
    disc.add_argument("--Ts", help="periods: a,b,c or start:stop:step")
    sim = sub.add_parser("simulate", parents=[common, design, run],
                         help="one closed-loop run, CSV trajectory output")
    sim.add_argument("--T", type=float, help="sampling period; omit for continuous control")
    sim.add_argument("--csv", help="write the trajectory CSV here")
    swp = sub.add_parser("sweep", parents=[common, design, run],
                         help="metrics across sampling periods")
    swp.add_argument("--Ts", help="periods: a,b,c or start:stop:step")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {args.config}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    cfg = RunConfig.from_dict(data)

    updates: dict = {}
    params = {"M": cfg.params.M, "L": cfg.params.L, "F": cfg.params.F, "g": cfg.params.g}
    params_changed = False
    for key in params:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
            params_changed = True
    if params_changed:
        try:
            updates["params"] = PendulumParams(**params)
        except ValueError as exc:
            raise ConfigError(f"bad params: {exc}") from exc
    if getattr(args, "poles", None):
        updates["poles"] = parse_pole_list(args.poles)
    if getattr(args, "initial", None):
        updates["initial"] = parse_initial(args.initial)
    if getattr(args, "T", None) is not None:
        updates["T"] = args.T
    if getattr(args, "Ts", None):
        updates["Ts"] = parse_period_list(args.Ts)
    if getattr(args, "plant", None):
        updates["plant"] = args.plant
    if getattr(args, "redesign", None) is not None:
        updates["redesign"] = args.redesign
    for key in ("t_final", "h", "divergence_bound", "tol"):
        value = getattr(args, key, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "csv", None):
        updates["csv"] = args.csv
    if getattr(args, "json_out", None):
        updates["json_out"] = args.json_out

    from dataclasses import replace

    cfg = replace(cfg, **updates)
    if cfg.h <= 0 or cfg.t_final <= 0 or cfg.h > cfg.t_final:
        raise ConfigError("need 0 < h <= t_final")
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive")
    return cfg


def _emit(summary: dict, cfg: RunConfig) -> None:
    payload = _jsonable(summary)
    text = json.dumps(payload, indent=2, allow_nan=False)
    if cfg.json_out:
        with open(cfg.json_out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def _preprocess_argv(argv: list[str]) -> list[str]:
    """Join flags with values that start with a minus (e.g. --poles -2,-4).

    argparse would otherwise read the value as an unknown option.
    """
    joinable = {"--poles", "--initial", "--Ts"}
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok in joinable
            and nxt is not None
            and len(nxt) >= 2
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_preprocess_argv(list(argv)))
    try:
        cfg = resolve_config(args)
        summary, code = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"{args.command}: configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    _emit(summary, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
