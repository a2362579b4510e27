"""Command-line runner that regenerates figure data and single protocol runs.

Usage::

    remote-coherence fig1 --steps 101 --out fig1.csv
    remote-coherence fig2 --p-steps 51 --gamma-steps 51 --format json --out fig2.json
    remote-coherence fig3 --gamma-steps 21 --delta-steps 21 --p 0.25 --out fig3.csv
    remote-coherence fig4 --p-steps 41 --q-steps 41 --out fig4.csv
    remote-coherence run --scenario C --p 0.5 --q 0.5 --alpha 0.6 --beta 0.8

Every flag may also be given in a ``key=value`` file passed with
``--config``; flags on the command line win. Output goes to stdout unless
``--out`` is given. Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from . import measures as ms
from . import protocols as pr
from .linalg import TOL

log = logging.getLogger("remote_coherence")

CONVENTION = "registers ordered Alice (x) Bob (x) control, leftmost most significant; SWITCH W_ij = X_i Y_j (x) |0><0| + Y_j X_i (x) |1><1|"

DEFAULTS: dict[str, dict[str, Any]] = {
    "fig1": {"steps": 101},
    "fig2": {"p_steps": 51, "gamma_steps": 51},
    "fig3": {"gamma_steps": 21, "delta_steps": 21, "p": 0.25},
    "fig4": {"p_steps": 41, "q_steps": 41},
    "run": {},
}

CONFIG_KEYS = {
    "steps": int, "p_steps": int, "q_steps": int, "gamma_steps": int, "delta_steps": int,
    "p": float, "q": float, "gamma": float, "delta": float,
    "alpha": complex, "beta": complex, "scenario": str, "out": str, "format": str,
}


class UsageError(Exception):
    pass


@dataclass
class FigureDataset:
    columns: list[str]
    rows: list[tuple[float, ...]]
    header: dict[str, Any] = field(default_factory=dict)

    def validate(self, expected_rows: int) -> None:
        if len(self.rows) != expected_rows:
            raise RuntimeError(f"dataset has {len(self.rows)} rows, expected {expected_rows}")
        arr = np.asarray(self.rows, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise RuntimeError("dataset contains NaN or Inf")

    def to_csv(self) -> str:
        lines = [f"# {k}: {v}" for k, v in self.header.items()]
        lines.append(",".join(self.columns))
        lines += [",".join(_fmt(x) for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "header": self.header,
            "columns": self.columns,
            "rows": [[float(_fmt(x)) for x in row] for row in self.rows],
        }
        return json.dumps(payload, indent=1) + "\n"


def _fmt(x: float) -> str:
    # 12 significant digits; adding 0.0 turns -0.0 into 0.0
    return f"{float(x) + 0.0:.11e}"


def _base_header(command: str, params: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool": f"remote-coherence {__version__}",
        "command": command,
        "parameters": json.dumps(params, sort_keys=True),
        "convention": CONVENTION,
        "tolerances": f"state/hermiticity {TOL:g}; PPT threshold {TOL:g}; log base 2",
    }


def cmd_fig1(steps: int) -> FigureDataset:
    """Discord of the ``+``-conditioned shared state vs control weight (two complete depolarizers)."""
    ps = np.linspace(0, 1, steps)
    rows = [(p, ms.discord_scenario_A(p)) for p in ps]
    target = pr.TargetQubit(1.0, 0.0)
    checks = []
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        _, rho = pr.shared_state_plus(pr.ScenarioParams("A", target, p=p))
        checks.append(abs(ms.discord_scenario_A(p) - ms.discord_bruteforce(rho).discord))
    header = _base_header("fig1", {"steps": steps})
    header["crosscheck"] = "closed form vs brute-force discord at p = 0.1, 0.3, 0.5, 0.7, 0.9"
    header["max_crosscheck_deviation"] = _fmt(max(checks))
    ds = FigureDataset(["p", "discord"], rows, header)
    ds.validate(steps)
    return ds


def cmd_fig2(p_steps: int, gamma_steps: int) -> FigureDataset:
    """Second partial-transpose eigenvalue of the unitary-scenario shared state."""
    rows = []
    for p in np.linspace(0, 1, p_steps):
        for g in np.linspace(0, np.pi, gamma_steps):
            rows.append((p, g, ms.pt_eigs_scenario_B(p, g)[1]))
    header = _base_header("fig2", {"p_steps": p_steps, "gamma_steps": gamma_steps})
    header["axes"] = "p in [0, 1] x gamma in [0, pi] (axis choice fixed by this tool)"
    ds = FigureDataset(["p", "gamma", "eig2"], rows, header)
    ds.validate(p_steps * gamma_steps)
    return ds


def cmd_fig3(gamma_steps: int, delta_steps: int, p: float = 0.25) -> FigureDataset:
    """Closed-form scenario-B discord against the brute-force oracle on a (gamma, delta) grid."""
    rows = []
    for g in np.linspace(0, np.pi, gamma_steps):
        for d in np.linspace(0, np.pi / 2, delta_steps):
            rep = pr.scenario_B_discord_report(p, g, d)
            rows.append((g, d, rep["discord_analytic"], rep["discord_bruteforce"], rep["deviation"]))
    header = _base_header("fig3", {"gamma_steps": gamma_steps, "delta_steps": delta_steps, "p": p})
    header["axes"] = "gamma in [0, pi] x delta in [0, pi/2]"
    header["deviation"] = "discord_analytic - discord_bruteforce"
    header["max_abs_deviation"] = _fmt(max(abs(r[4]) for r in rows))
    ds = FigureDataset(["gamma", "delta", "discord_analytic", "discord_bruteforce", "deviation"], rows, header)
    ds.validate(gamma_steps * delta_steps)
    return ds


def cmd_fig4(p_steps: int, q_steps: int) -> FigureDataset:
    """Coherence fraction with the SWITCH vs sequential use of two partial depolarizers."""
    rows = []
    for p in np.linspace(0, 1, p_steps):
        for q in np.linspace(0, 1, q_steps):
            r_c = pr.coherence_fraction_C(p, q)
            base = (1 - q) ** 2
            rows.append((p, q, r_c, base, r_c - base))
    header = _base_header("fig4", {"p_steps": p_steps, "q_steps": q_steps})
    header["axes"] = "p in [0, 1] x q in [0, 1] (axis choice fixed by this tool)"
    header["baseline"] = "coherence fraction for sequential use, (1 - q)^2"
    ds = FigureDataset(["p", "q", "R_c", "baseline", "advantage"], rows, header)
    ds.validate(p_steps * q_steps)
    return ds


def cmd_run(params: pr.ScenarioParams) -> dict[str, Any]:
    return pr.run(params).to_dict()


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _report_csv(report: dict[str, Any]) -> str:
    lines = ["field,value"]
    for key, value in report.items():
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            lines.append(f"{key},{_fmt(value)}")
        elif value is None:
            lines.append(f"{key},")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="remote-coherence", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], help="output format")
    common.add_argument("--config", help="key=value file; command-line flags override its entries")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("fig1", parents=[common], help="discord vs p, two complete depolarizers")
    p1.add_argument("--steps", type=int)
    p2 = sub.add_parser("fig2", parents=[common], help="second PT eigenvalue, unitary scenario")
    p2.add_argument("--p-steps", type=int)
    p2.add_argument("--gamma-steps", type=int)
    p3 = sub.add_parser("fig3", parents=[common], help="scenario-B discord vs brute force")
    p3.add_argument("--gamma-steps", type=int)
    p3.add_argument("--delta-steps", type=int)
    p3.add_argument("--p", type=float)
    p4 = sub.add_parser("fig4", parents=[common], help="SWITCH advantage, two partial depolarizers")
    p4.add_argument("--p-steps", type=int)
    p4.add_argument("--q-steps", type=int)
    pr_ = sub.add_parser("run", parents=[common], help="one protocol run as a structured report")
    pr_.add_argument("--scenario", choices=list(pr.SCENARIOS))
    pr_.add_argument("--p", type=float)
    pr_.add_argument("--q", type=float)
    pr_.add_argument("--gamma", type=float)
    pr_.add_argument("--delta", type=float)
    pr_.add_argument("--alpha", type=complex, help="target amplitude of |0> (complex allowed, e.g. 0.6+0.1j)")
    pr_.add_argument("--beta", type=complex, help="target amplitude of |1>")
    return parser


def read_config(path: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return out


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults < config file < flags, and validate before any computation."""
    cmd = args.command
    settings = dict(DEFAULTS[cmd])
    settings["format"] = "json" if cmd == "run" else "csv"
    settings["out"] = None
    if args.config:
        settings.update(read_config(args.config))
    for key, value in vars(args).items():
        if key in CONFIG_KEYS and value is not None:
            settings[key] = value

    allowed = set(DEFAULTS[cmd]) | {"format", "out"}
    if cmd == "run":
        allowed |= {"scenario", "p", "q", "gamma", "delta", "alpha", "beta"}
    extra = sorted(k for k in settings if k not in allowed and settings[k] is not None)
    if extra:
        raise UsageError(f"{cmd} does not accept: {', '.join(extra)}")
    if settings["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {settings['format']!r}")

    for key in ("steps", "p_steps", "q_steps", "gamma_steps", "delta_steps"):
        if key in settings and settings[key] < 2:
            raise UsageError(f"--{key.replace('_', '-')} must be at least 2")
    if cmd == "fig3" and not 0 <= settings["p"] <= 1:
        raise UsageError("--p must lie in [0, 1]")
    if cmd == "run":
        settings["params"] = _scenario_params(settings)
    _check_writable(settings["out"])
    return settings


def _scenario_params(settings: dict[str, Any]) -> pr.ScenarioParams:
    scenario = settings.get("scenario")
    if scenario is None:
        raise UsageError("run requires --scenario")
    alpha, beta = settings.get("alpha"), settings.get("beta")
    if alpha is None or beta is None:
        raise UsageError("run requires --alpha and --beta")
    try:
        target = pr.TargetQubit.normalized(alpha, beta)
        return pr.ScenarioParams(
            scenario,
            target,
            p=settings.get("p"),
            gamma=settings.get("gamma"),
            delta=settings.get("delta"),
            q=settings.get("q"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_writable(out: Optional[str]) -> None:
    if out is None:
        return
    path = Path(out)
    parent = path.parent if str(path.parent) else Path(".")
    if path.is_dir():
        raise OSError(f"output path {out} is a directory")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"output directory {parent} is not writable")
    if path.exists() and not os.access(path, os.W_OK):
        raise OSError(f"output file {out} is not writable")


def execute(settings: dict[str, Any], command: str) -> str:
    fmt = settings["format"]
    if command == "run":
        report = cmd_run(settings["params"])
        if fmt == "json":
            return json.dumps(report, indent=1, default=_jsonable) + "\n"
        return _report_csv(report)
    if command == "fig1":
        ds = cmd_fig1(settings["steps"])
    elif command == "fig2":
        ds = cmd_fig2(settings["p_steps"], settings["gamma_steps"])
    elif command == "fig3":
        ds = cmd_fig3(settings["gamma_steps"], settings["delta_steps"], settings["p"])
    else:
        ds = cmd_fig4(settings["p_steps"], settings["q_steps"])
    return ds.to_csv() if fmt == "csv" else ds.to_json()


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        settings = resolve(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"remote-coherence: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"remote-coherence: error: {exc}", file=sys.stderr)
        return 1
    try:
        text = execute(settings, args.command)
        if settings["out"] is None:
            sys.stdout.write(text)
        else:
            with open(settings["out"], "w", newline="\n") as fh:
                fh.write(text)
            log.info("wrote %s", settings["out"])
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"remote-coherence: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
