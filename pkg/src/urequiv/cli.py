"""Command-line front end.

    urequiv check --relations all --n 10000 --seed 7
    urequiv region --theta 90 --n 100000 --alpha 1 --out fig1a.csv
    urequiv minimize --dim 3 --restarts 64 --seed 7
    urequiv convert --direction v2h --alpha 2 --value 0.75
    urequiv reconstruct --dim 4 --n 100 --seed 1

Exit codes: 0 all checks satisfied, 1 a violation (or equality residual
beyond tolerance) was found, 2 usage or configuration error.  Data goes to
stdout unless --out is given; diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .entropy import qubit_entropy_from_variance, qubit_variance_from_entropy
from .errors import UncertaintyError
from .explorer import (
    map_region,
    minimize_over_pure,
    scan_violations,
    variance_sum_objective,
    worker_count,
)
from .observables import Observable, axis_in_xz, born_probabilities, pauli_operator, spin_operator
from .reconstruction import probs_from_covariances, probs_from_variances
from .relations import RELATIONS
from .states import DensityMatrix, random_mixed_batch, rng_from_seed

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
COMMANDS = ("check", "region", "minimize", "convert", "reconstruct")
SEED_MAX = 2**64 - 1
RECONSTRUCT_ATOL = 1e-7


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    n: int = 1000
    dim: int = 3
    theta_deg: float = 90.0
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    relations: list = field(default_factory=lambda: ["all"])
    value: float | None = None
    direction: str = "v2h"
    restarts: int = 64
    output_path: str | None = None
    format: str | None = None
    timing: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {COMMANDS}")
        if not 0 <= self.seed <= SEED_MAX:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.n < 0:
            raise ConfigError("n must be >= 0")
        if not 2 <= self.dim <= 8:
            raise ConfigError("dim must be between 2 and 8")
        if not 0.0 <= self.theta_deg <= 180.0:
            raise ConfigError("theta must lie in [0, 180] degrees")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive Renyi index")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.direction not in ("v2h", "h2v"):
            raise ConfigError("direction must be v2h or h2v")
        if self.format not in (None, "csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.command == "convert" and self.value is None:
            raise ConfigError("convert needs --value")
        ids = self.relation_ids()
        bad = [r for r in ids if r not in RELATIONS]
        if bad:
            raise ConfigError(f"unknown relation ids: {', '.join(bad)}")

    def relation_ids(self) -> list[str]:
        if "all" in self.relations:
            return list(RELATIONS)
        return list(self.relations)

    def resolved_format(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.command == "region" else "json"


# -- serialisation -------------------------------------------------------------


def format_number(x) -> str:
    """17 significant digits, enough to round-trip any double."""
    if x is None:
        return "null"
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written by :func:`format_number`."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return _json_string(obj)
    if isinstance(obj, (bool, np.bool_, int, float, np.integer, np.floating)):
        return format_number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_string(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _json_string(s: str) -> str:
    return json.dumps(s)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(format_number(v) for v in row) + "\n")
    return buf.getvalue()


def emit_report(results: dict, format: str, path: str | None) -> None:
    """Write ``results`` as JSON or CSV to ``path`` (stdout when None).

    For CSV, ``results`` must carry ``columns`` and ``rows``; everything else
    goes into a ``<path>.meta.json`` sidecar so the file stays plain.
    """
    if format == "json":
        body = {k: v for k, v in results.items() if k not in ("columns", "rows")}
        text = to_json(body) + "\n"
    elif format == "csv":
        text = rows_to_csv(results.get("columns", []), results.get("rows", []))
    else:
        raise ConfigError(f"unknown format {format!r}")
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text)
    if format == "csv":
        meta = {k: v for k, v in results.items() if k not in ("columns", "rows")}
        Path(str(path) + ".meta.json").write_text(to_json(meta) + "\n")


# -- commands ------------------------------------------------------------------


def _base_report(cfg: RunConfig) -> dict:
    conf = dataclasses.asdict(cfg)
    conf.pop("timing")
    return {
        "tool_version": __version__,
        "seed": cfg.seed,
        "command": cfg.command,
        "config": conf,
        "relations": [],
    }


def _run_check(cfg: RunConfig):
    alphas = None
    if any(v is not None for v in (cfg.alpha, cfg.beta, cfg.gamma)):
        alphas = tuple(1.0 if v is None else v for v in (cfg.alpha, cfg.beta, cfg.gamma))
    summary = scan_violations(cfg.relation_ids(), cfg.n, cfg.seed, alphas=alphas)
    rep = _base_report(cfg)
    rep["relations"] = summary.relations
    rep["columns"] = ["id", "n", "worst_slack", "violations"]
    rep["rows"] = [[r["id"], r["n"], r["worst_slack"], r["violations"]] for r in summary.relations]
    return rep, summary.total_violations == 0


def _run_region(cfg: RunConfig):
    a = pauli_operator([0.0, 0.0, 1.0])
    b = pauli_operator(axis_in_xz(cfg.theta_deg))
    alpha = 1.0 if cfg.alpha is None else cfg.alpha
    sample = map_region(a, b, cfg.n, cfg.seed, alpha)
    rep = _base_report(cfg)
    rep["theta_ab"] = sample.theta_ab
    rep["relations"] = [
        {
            "id": "qubit_simple",
            "n": cfg.n,
            "worst_slack": sample.worst_slack if cfg.n else None,
            "violations": sample.violations,
        }
    ]
    rep["columns"] = ["h_a", "h_b", "purity"]
    rep["rows"] = sample.points
    return rep, sample.violations == 0


def _run_minimize(cfg: RunConfig):
    j2 = cfg.dim - 1
    if j2 == 1:
        obs = (pauli_operator([1, 0, 0]), pauli_operator([0, 0, 1]))
    else:
        obs = (spin_operator(j2, [1, 0, 0]), spin_operator(j2, [0, 0, 1]))
    res = minimize_over_pure(variance_sum_objective(*obs), cfg.dim, cfg.restarts, cfg.seed)
    psi = res.best_state.amplitudes
    rep = _base_report(cfg)
    rep["objective"] = "Var(X) + Var(Z)"
    rep["minimum"] = res.best_value
    rep["restarts"] = res.restarts
    rep["evaluations"] = res.evaluations
    rep["converged"] = res.converged
    rep["state_re"] = psi.real
    rep["state_im"] = psi.imag
    rep["columns"] = ["minimum", "evaluations"]
    rep["rows"] = [[res.best_value, res.evaluations]]
    return rep, True


def _run_convert(cfg: RunConfig):
    alpha = 1.0 if cfg.alpha is None else cfg.alpha
    if cfg.direction == "v2h":
        out = qubit_entropy_from_variance(cfg.value, alpha)
    else:
        out = qubit_variance_from_entropy(cfg.value, alpha)
    rep = _base_report(cfg)
    rep.update(direction=cfg.direction, alpha=alpha, value=cfg.value, result=out)
    rep["columns"] = ["result"]
    rep["rows"] = [[out]]
    return rep, True


def _random_observable(rng, dim) -> Observable:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable.from_matrix((g + g.conj().T) / 2)


def _run_reconstruct(cfg: RunConfig):
    rng = rng_from_seed(cfg.seed)
    rhos = random_mixed_batch(cfg.dim, cfg.n, rng)
    worst = {"variance_path": 0.0, "covariance_path": 0.0}
    rows = []
    for r in rhos:
        rho = DensityMatrix(r)
        a = _random_observable(rng, cfg.dim)
        born = np.asarray(born_probabilities(rho, a))
        ev = float(np.max(np.abs(np.asarray(probs_from_variances(rho, a)) - born)))
        ec = float(np.max(np.abs(np.asarray(probs_from_covariances(rho, a)) - born)))
        worst["variance_path"] = max(worst["variance_path"], ev)
        worst["covariance_path"] = max(worst["covariance_path"], ec)
        rows.append([ev, ec])
    rep = _base_report(cfg)
    # slack here is tolerance minus the worst probability error
    rep["relations"] = [
        {
            "id": key,
            "n": cfg.n,
            "worst_slack": RECONSTRUCT_ATOL - worst[key] if cfg.n else None,
            "violations": sum(row[k] > RECONSTRUCT_ATOL for row in rows),
        }
        for k, key in enumerate(worst)
    ]
    rep["columns"] = ["err_variance_path", "err_covariance_path"]
    rep["rows"] = rows
    return rep, all(e["violations"] == 0 for e in rep["relations"])


_HANDLERS = {
    "check": _run_check,
    "region": _run_region,
    "minimize": _run_minimize,
    "convert": _run_convert,
    "reconstruct": _run_reconstruct,
}


def run(config: RunConfig) -> int:
    """Execute one configured command and write its report; returns the exit code."""
    try:
        config.validate()
        worker_count()
    except (ConfigError, ValueError) as exc:
        print(f"urequiv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        rep, ok = _HANDLERS[config.command](config)
    except UncertaintyError as exc:
        print(f"urequiv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep["wall_ms"] = (time.perf_counter() - t0) * 1e3 if config.timing else None
    fmt = config.resolved_format()
    if config.command == "convert" and config.format is None and config.output_path is None:
        print(format_number(rep["result"]))
    else:
        try:
            emit_report(rep, fmt, config.output_path)
        except OSError as exc:
            print(f"urequiv: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE
    for entry in rep["relations"]:
        if entry["violations"]:
            print(f"urequiv: {entry['id']}: {entry['violations']} violation(s)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="urequiv", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--relations", default="all", help="comma-separated relation ids, or 'all'")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--theta", type=float, default=90.0, help="angle between the Bloch axes, degrees")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--value", type=float)
    p.add_argument("--direction", choices=("v2h", "h2v"), default="v2h")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as null (byte-stable reports)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        seed=args.seed,
        n=args.n,
        dim=args.dim,
        theta_deg=args.theta,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        relations=[r.strip() for r in args.relations.split(",") if r.strip()],
        value=args.value,
        direction=args.direction,
        restarts=args.restarts,
        output_path=args.out,
        format=args.format,
        timing=not args.no_timing,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
