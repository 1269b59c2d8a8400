"""Command-line front end.

Rates are in 1/s and times in s. Each subcommand accepts ``--config FILE``
holding a JSON object with the same keys as its flags (dashes or
underscores); explicit flags override the file, which overrides defaults.

Exit codes: 0 success, 2 validation error, 3 infeasible resources,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings

from . import allocator, bounds, montecarlo, verification
from .channel import MAX_QUBITS, ChannelParams
from .probes import FAMILIES, ProbeSpec

log = logging.getLogger("qubit_metrology")

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4

DEFAULTS = {
    "bound": dict(family="product", form="strong", n=1, nu=1, T=None, gamma1=0.0, gamma2=0.0, mu=0.0, R=None),
    "optimize": dict(family="cat", R=None, tau=None, gamma2=0.0, nu_min=allocator.DEFAULT_NU_MIN, gamma1=0.0, mu=0.0),
    "figure": dict(which="3", grid_min=1e-4, grid_max=100.0, grid_num=200, nu_min=allocator.DEFAULT_NU_MIN,
                   sqrt_r_over_gamma2=list(allocator.FIG3_SQRT_R_OVER_GAMMA2)),
    "simulate": dict(family="product", n=1, T=1.0, g=0.0, gT_sweet=False, gamma1=0.0, gamma2=0.0, mu=0.0,
                     nu=10_000, seed=None, repetitions=30, batch=200),
    "verify": dict(n_max=4, tol=1e-8),
}


class UsageError(Exception):
    pass


# ---- record <-> configuration ---------------------------------------------

def _params(d) -> ChannelParams:
    return ChannelParams(gamma1=float(d["gamma1"]), gamma2=float(d["gamma2"]), mu=float(d["mu"]))


def bound_query_from_dict(d: dict) -> bounds.BoundQuery:
    if d.get("T") is None:
        raise UsageError("--T is required")
    return bounds.BoundQuery(d["family"], d["form"], int(d["n"]), int(d["nu"]), float(d["T"]), _params(d))


def bound_query_to_dict(q: bounds.BoundQuery, R=None) -> dict:
    return dict(family=q.family, form=q.form, n=q.n, nu=q.nu, T=q.T, gamma1=q.params.gamma1,
                gamma2=q.params.gamma2, mu=q.params.mu, R=R)


def resources_from_dict(d: dict) -> allocator.Resources:
    for key in ("R", "tau"):
        if d.get(key) is None:
            raise UsageError(f"--{key} is required")
    return allocator.Resources(R=float(d["R"]), tau=float(d["tau"]), gamma2=float(d["gamma2"]),
                               nu_min=int(d["nu_min"]), gamma1=float(d["gamma1"]), mu=float(d["mu"]))


def resources_to_dict(res: allocator.Resources) -> dict:
    return dict(R=res.R, tau=res.tau, gamma2=res.gamma2, nu_min=res.nu_min, gamma1=res.gamma1, mu=res.mu)


def trial_config_from_dict(d: dict) -> montecarlo.TrialConfig:
    spec = ProbeSpec(d["family"], int(d["n"]), float(d["T"]), float(d["g"]))
    cfg = montecarlo.TrialConfig(spec, _params(d), int(d["nu"]), int(d["seed"]),
                                 int(d["repetitions"]), int(d["batch"]))
    return montecarlo.at_sweet_spot(cfg) if d.get("gT_sweet") else cfg


def trial_config_to_dict(cfg: montecarlo.TrialConfig) -> dict:
    s, p = cfg.spec, cfg.params
    return dict(family=s.family, n=s.n, T=s.T, g=s.g, gT_sweet=False, gamma1=p.gamma1, gamma2=p.gamma2,
                mu=p.mu, nu=cfg.nu, seed=cfg.seed, repetitions=cfg.repetitions, batch=cfg.batch)


# ---- output ------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(record: dict, fmt: str) -> str:
    if fmt == "csv":
        flat = {k: v for k, v in record.items() if not isinstance(v, dict)}
        for k, v in record.items():
            if isinstance(v, dict):
                flat.update({f"{k}.{kk}": vv for kk, vv in v.items()})
        return to_csv([flat])
    return json.dumps(_clean(record), indent=2, sort_keys=False) + "\n"


# ---- commands ----------------------------------------------------------------

def cmd_bound(cfg: dict) -> tuple[int, str]:
    q = bound_query_from_dict(cfg)
    R = None if cfg.get("R") is None else float(cfg["R"])
    res = bounds.bound(q, R=R)
    rec = {"delta_g": res.delta_g}
    if res.dimensionless is not None:
        rec["dimensionless"] = res.dimensionless
    rec["inputs"] = bound_query_to_dict(q, R)
    return EXIT_OK, _render(rec, cfg["format"])


def cmd_optimize(cfg: dict) -> tuple[int, str]:
    res = resources_from_dict(cfg)
    alloc = allocator.optimize(cfg["family"], res)
    rec = alloc.to_dict()
    rec["inputs"] = resources_to_dict(res)
    return EXIT_OK, _render(rec, cfg["format"])


def cmd_figure(cfg: dict) -> tuple[int, str]:
    which = str(cfg["which"]).removeprefix("fig")
    if which not in ("2", "3"):
        raise UsageError(f"--which must be 2 or 3, got {cfg['which']!r}")
    grid = allocator.log_grid(float(cfg["grid_min"]), float(cfg["grid_max"]), int(cfg["grid_num"]))
    rows = allocator.figure_curves(f"fig{which}", grid, [float(s) for s in cfg["sqrt_r_over_gamma2"]],
                                   int(cfg["nu_min"]))
    return EXIT_OK, to_csv([r._asdict() for r in rows])


def cmd_simulate(cfg: dict) -> tuple[int, str]:
    if cfg.get("seed") is None:
        log.warning("no --seed given; using seed 0")
        cfg = {**cfg, "seed": 0}
    tc = trial_config_from_dict(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = montecarlo.run_trials(tc)
    for w in caught:
        log.warning("%s", w.message)
    rec = report.to_dict()
    rec["inputs"] = trial_config_to_dict(tc)
    return EXIT_OK, _render(rec, cfg["format"])


def cmd_verify(cfg: dict) -> tuple[int, str]:
    n_max = int(cfg["n_max"])
    if not 1 <= n_max <= MAX_QUBITS:
        raise UsageError(f"--n-max {n_max} exceeds the explicit-matrix cap of {MAX_QUBITS} qubits")
    checks = verification.run_all(n_max=n_max, tol=float(cfg["tol"]))
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.suite}/{c.name}: {c.detail}" for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return (EXIT_OK if failed == 0 else EXIT_VERIFY), "\n".join(lines) + "\n"


COMMANDS = {
    "bound": cmd_bound,
    "optimize": cmd_optimize,
    "figure": cmd_figure,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


# ---- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _channel_flags(p):
    p.add_argument("--gamma1", type=float, help="longitudinal decay rate 1/T1 [1/s] (default 0)")
    p.add_argument("--gamma2", type=float, help="transverse dephasing rate 1/T2 [1/s] (default 0)")
    p.add_argument("--mu", type=float, help="Bloch z of the channel fixed point, in [-1, 1] (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qubit-metrology", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file with default values for this command")
        p.add_argument("--output", help="write to this path instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
        return p

    p = add("bound", "evaluate a closed-form bound on delta g [1/s]")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--form", choices=bounds.FORMS)
    p.add_argument("--n", type=int, help="qubits per probe")
    p.add_argument("--nu", type=int, help="number of probes")
    p.add_argument("--T", type=float, help="interaction time [s]")
    p.add_argument("--R", type=float, help="qubit rate [1/s]; adds the dimensionless value")
    _channel_flags(p)

    p = add("optimize", "optimal (T, n, nu) for a qubit rate R over a window tau")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--R", type=float, help="qubit supply rate [1/s]")
    p.add_argument("--tau", type=float, help="total measurement window [s]")
    p.add_argument("--nu-min", dest="nu_min", type=int, help="minimum number of probes (default 50)")
    _channel_flags(p)

    p = add("figure", "CSV data for the optimal-time / optimal-bound curves")
    p.add_argument("--which", choices=("2", "3", "fig2", "fig3"))
    p.add_argument("--grid-min", dest="grid_min", type=float, help="smallest gamma2*tau")
    p.add_argument("--grid-max", dest="grid_max", type=float, help="largest gamma2*tau")
    p.add_argument("--grid-num", dest="grid_num", type=int, help="number of log-spaced points")
    p.add_argument("--nu-min", dest="nu_min", type=int)
    p.add_argument("--sqrt-r-over-gamma2", dest="sqrt_r_over_gamma2", type=float, nargs="+",
                   help="curves for these values of sqrt(R/gamma2) (fig 3)")

    p = add("simulate", "Monte-Carlo run of the arccos estimator")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--T", type=float, help="interaction time [s]")
    p.add_argument("--g", type=float, help="true coupling [1/s]")
    p.add_argument("--gT-sweet", dest="gT_sweet", action="store_true",
                   help="move g to the nearest point with |sin(n g T)| = 1")
    p.add_argument("--nu", type=int, help="probes per estimate")
    p.add_argument("--seed", type=int)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--batch", type=int, help="estimates per repetition")
    _channel_flags(p)

    p = add("verify", "run the brute-force oracle suites")
    p.add_argument("--n-max", dest="n_max", type=int, help=f"largest probe size checked (<= {MAX_QUBITS})")
    p.add_argument("--tol", type=float, help="relative tolerance for QFI checks")
    return parser


def _load_config(path: str, allowed: set[str]) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def resolve(command: str, flags: dict) -> dict:
    """Merge defaults, an optional config file and explicit flags, in that order."""
    base = dict(DEFAULTS[command], format="json", output=None)
    allowed = set(base)
    cfg = dict(base)
    if flags.get("config"):
        cfg.update(_load_config(flags["config"], allowed))
    cfg.update({k: v for k, v in flags.items() if k not in ("config", "command", "verbose")})
    return cfg


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        ns = build_parser().parse_args(argv)
        if ns.verbose:
            log.setLevel(logging.INFO)
        cfg = resolve(ns.command, vars(ns))
        code, text = COMMANDS[ns.command](cfg)
    except allocator.InfeasibleResources as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except bounds.DivergentBoundError as exc:
        print(f"divergent: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(text, cfg.get("output"))
    return code


if __name__ == "__main__":
    sys.exit(main())
