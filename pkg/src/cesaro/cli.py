"""Command-line front end: reproducible reports, scan grids, trace files.

Four subcommands cover the library surface: ``analyze`` bundles every
criterion verdict for one weight into a JSON report, ``spectrum`` scans a
grid and writes CSV plus a JSON summary, ``iterate`` writes trace CSVs,
and ``catalog`` lists the built-in weight families.  Outputs carry a
schema version and are byte-identical across runs for a fixed config.

Exit codes: 0 success, 2 parse error, 3 budget exceeded, 4 internal
consistency diagnostic (conflicting certificates).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .weights import WeightError, catalog_families, parse_weight
from .criteria import (
    DEFAULT_HORIZON,
    compactness_criterion,
    continuity_criterion,
    ratio_limsup_test,
    s1_estimate,
    t0_estimate,
    uw_quantity,
)
from . import spectral
from . import ergodic

__all__ = [
    "SCHEMA_VERSION",
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_BUDGET",
    "EXIT_CONFLICT",
    "RunConfig",
    "cmd_analyze",
    "cmd_spectrum",
    "cmd_iterate",
    "cmd_catalog",
    "main",
]

SCHEMA_VERSION = "1.0"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_CONFLICT = 4

DEFAULT_SECTION_N = 2000
DEFAULT_ITERATES_M = 2000
DEFAULT_GRID = (-0.2, 1.2, -0.7, 0.7, 200, 200)
DEFAULT_EPS = 1e-9
DEFAULT_POINT_M_MAX = 20


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved invocation; round-trips through its JSON form."""

    command: str
    weight: Optional[str] = None
    horizon: int = DEFAULT_HORIZON
    N: int = DEFAULT_SECTION_N
    M: int = DEFAULT_ITERATES_M
    grid: Optional[tuple] = None
    mode: str = "float"
    out: Optional[str] = None
    seed: int = 0
    probe: str = "e1"
    m_max: int = DEFAULT_POINT_M_MAX
    eps: float = DEFAULT_EPS
    averages: bool = False
    family: Optional[str] = None

    def __post_init__(self):
        if self.horizon < 1 or self.N < 1 or self.M < 1 or self.m_max < 1:
            raise WeightError("horizons must be positive")
        if self.mode not in ("rational", "float"):
            raise WeightError(f"unknown arithmetic mode {self.mode!r}")
        if self.grid is not None:
            if len(self.grid) != 6:
                raise WeightError("grid needs re0,re1,im0,im1,nx,ny")
            nx, ny = int(self.grid[4]), int(self.grid[5])
            if nx < 1 or ny < 1:
                raise WeightError("grid resolution must be positive")

    def to_json_dict(self) -> dict:
        data = asdict(self)
        data["grid"] = list(self.grid) if self.grid is not None else None
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "RunConfig":
        grid = data.get("grid")
        kwargs = dict(data)
        kwargs["grid"] = tuple(grid) if grid is not None else None
        return cls(**kwargs)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_grid(raw: str) -> tuple:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 6:
        raise WeightError("grid needs exactly re0,re1,im0,im1,nx,ny")
    try:
        vals = [float(p) for p in parts[:4]] + [int(p) for p in parts[4:]]
    except ValueError as exc:
        raise WeightError(f"bad grid value in {raw!r}") from exc
    return tuple(vals)


def _build_probe(probe: str, N: int, seed: int) -> tuple:
    """Probe grammar: e<k>, ones, or random (seeded, support 16)."""
    probe = probe.strip().lower()
    if probe == "ones":
        return probe, np.ones(N)
    if probe == "random":
        rng = np.random.default_rng(seed)
        return f"random:seed={seed}", rng.standard_normal(min(16, N))
    if probe.startswith("e"):
        try:
            r = int(probe[1:])
        except ValueError:
            r = 0
        if 1 <= r <= N:
            vec = np.zeros(r)
            vec[r - 1] = 1.0
            return probe, vec
    raise WeightError(
        f"unknown probe {probe!r} (expected e<k> with k <= N, ones, random)")


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(config: RunConfig) -> int:
    """All criterion verdicts for one weight, with cross-consistency checks."""
    w = parse_weight(config.weight)
    horizon = config.horizon
    cont = continuity_criterion(w, horizon=horizon)
    comp = compactness_criterion(w, horizon=horizon)
    ratio = ratio_limsup_test(w, horizon=horizon)
    uw = uw_quantity(w, horizon=horizon)
    t0 = t0_estimate(w)
    s1 = s1_estimate(w)
    points = spectral.point_spectrum(w, m_max=config.m_max, horizon=horizon)
    checks = []
    if t0.kind == "bracket" and s1.kind == "bracket":
        ok = t0.lo <= s1.hi + 1e-9
        checks.append({
            "name": "t0 <= s1",
            "ok": ok,
            "detail": f"t0 in [{t0.lo!r}, {t0.hi!r}], "
                      f"s1 in [{s1.lo!r}, {s1.hi!r}]",
        })
    if comp.verdict.is_holds and s1.point is not None:
        checks.append({
            "name": "compactness excludes a certified boundary disk",
            "ok": False,
            "detail": "compactness Holds while a boundary exponent is "
                      "certified; certificates conflict",
        })
    if comp.verdict.is_holds and not cont.verdict.is_holds:
        checks.append({
            "name": "compactness implies continuity",
            "ok": cont.verdict.kind != "Fails",
            "detail": f"compactness {comp.verdict.kind}, "
                      f"continuity {cont.verdict.kind}",
        })
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "weight": config.weight,
        "weight_id": w.id,
        "config": config.to_json_dict(),
        "results": {
            "continuity": cont.to_json_dict(),
            "compactness": comp.to_json_dict(),
            "ratio_limsup": ratio.to_json_dict(),
            "uw": uw.to_json_dict(),
            "t0": t0.to_json_dict(),
            "s1": s1.to_json_dict(),
            "point_spectrum": [
                {"lambda": lam, "verdict": v.to_json_dict()}
                for lam, v in points
            ],
        },
        "consistency": checks,
    }
    _emit(_dump_json(report), config.out)
    if any(not c["ok"] for c in checks):
        sys.stderr.write("consistency diagnostic: conflicting certificates\n")
        return EXIT_CONFLICT
    return EXIT_OK


def cmd_spectrum(config: RunConfig) -> int:
    """Classify a grid of complex points; CSV rows plus a JSON summary."""
    w = parse_weight(config.weight)
    grid_vals = config.grid if config.grid is not None else DEFAULT_GRID
    grid = spectral.GridSpec(*grid_vals)
    if grid.nx * grid.ny > spectral.MAX_GRID_POINTS:
        raise ergodic.BudgetError(
            f"grid has {grid.nx * grid.ny} nodes; "
            f"budget is {spectral.MAX_GRID_POINTS}")
    context = spectral.build_context(w, horizon=config.horizon,
                                     m_max=config.m_max, eps=config.eps)
    rows = spectral.region_scan(w, grid, context=context)
    csv_text = spectral.scan_to_csv(rows)
    counts: dict = {}
    conflicts = 0
    for row in rows:
        counts[row.label] = counts.get(row.label, 0) + 1
        if row.rule_id == spectral.RULE_CONFLICT:
            conflicts += 1
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectrum",
        "weight": config.weight,
        "weight_id": w.id,
        "config": config.to_json_dict(),
        "grid": list(grid_vals),
        "labels": dict(sorted(counts.items())),
        "conflicts": conflicts,
        "context": {
            "continuity": context.continuity.to_json_dict(),
            "compactness": context.compactness.to_json_dict(),
            "s1": context.s1.to_json_dict(),
        },
    }
    if config.out is None:
        sys.stdout.write(csv_text)
        sys.stdout.write(_dump_json(summary))
    else:
        out = Path(config.out)
        out.write_text(csv_text)
        out.with_suffix(".json").write_text(_dump_json(summary))
    if conflicts:
        sys.stderr.write("consistency diagnostic: conflicting certificates\n")
        return EXIT_CONFLICT
    return EXIT_OK


def cmd_iterate(config: RunConfig) -> int:
    """Trace norms and residuals of iterates (or running averages)."""
    w = parse_weight(config.weight)
    probe_id, vec = _build_probe(config.probe, config.N, config.seed)
    tracer = ergodic.cesaro_averages_trace if config.averages \
        else ergodic.iterate_trace
    trace = tracer(w, vec, config.M, config.N, probe_id=probe_id,
                   mode=config.mode)
    _emit(ergodic.trace_to_csv(trace), config.out)
    if config.out is not None:
        Path(config.out).with_suffix(".json").write_text(
            _dump_json({
                "schema_version": SCHEMA_VERSION,
                "command": "iterate",
                "weight": config.weight,
                "config": config.to_json_dict(),
                "trace": trace.to_json_dict(),
            }))
    return EXIT_OK


def cmd_catalog(config: RunConfig) -> int:
    """List built-in weight families, optionally filtered by name."""
    families = catalog_families()
    if config.family is not None:
        families = [f for f in families if f["family"] == config.family]
        if not families:
            sys.stderr.write(f"unknown weight family {config.family!r}\n")
            return EXIT_PARSE
    listing = {
        "schema_version": SCHEMA_VERSION,
        "command": "catalog",
        "families": families,
    }
    _emit(_dump_json(listing), config.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesaro",
        description="Certified criteria, spectra, and iterate traces for "
                    "the averaging operator on weighted summable sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, weight=True):
        if weight:
            p.add_argument("-w", "--weight", required=True,
                           help="weight grammar, e.g. poly:alpha=2 or "
                                "custom:path=FILE")
        p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON,
                       help="criteria scan horizon (default 10^6)")
        p.add_argument("--out", default=None, help="output path")

    p = sub.add_parser("analyze", help="all criterion verdicts, one JSON")
    add_common(p)
    p.add_argument("--m-max", type=int, default=DEFAULT_POINT_M_MAX,
                   help="largest reciprocal index probed for eigenvalues")

    p = sub.add_parser("spectrum", help="classify a complex grid")
    add_common(p)
    p.add_argument("--grid", default=None,
                   help="re0,re1,im0,im1,nx,ny "
                        "(default -0.2,1.2,-0.7,0.7,200,200)")
    p.add_argument("--m-max", type=int, default=DEFAULT_POINT_M_MAX)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS,
                   help="exclusion radius around the limit set")

    p = sub.add_parser("iterate", help="trace iterates of a probe vector")
    add_common(p)
    p.add_argument("--N", type=int, default=DEFAULT_SECTION_N,
                   help="section size (default 2000)")
    p.add_argument("--M", type=int, default=DEFAULT_ITERATES_M,
                   help="number of iterates (default 2000)")
    p.add_argument("--probe", default="e1",
                   help="probe vector: e<k>, ones, or random")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the random probe")
    p.add_argument("--averages", action="store_true",
                   help="trace running averages instead of raw iterates")
    p.add_argument("--mode", choices=("rational", "float"), default="float")

    p = sub.add_parser("catalog", help="list built-in weight families")
    p.add_argument("--family", default=None, help="filter to one family")
    p.add_argument("--out", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        "command": args.command,
        "weight": getattr(args, "weight", None),
        "horizon": getattr(args, "horizon", DEFAULT_HORIZON),
        "N": getattr(args, "N", DEFAULT_SECTION_N),
        "M": getattr(args, "M", DEFAULT_ITERATES_M),
        "mode": getattr(args, "mode", "float"),
        "out": getattr(args, "out", None),
        "seed": getattr(args, "seed", 0),
        "probe": getattr(args, "probe", "e1"),
        "m_max": getattr(args, "m_max", DEFAULT_POINT_M_MAX),
        "eps": getattr(args, "eps", DEFAULT_EPS),
        "averages": getattr(args, "averages", False),
        "family": getattr(args, "family", None),
    }
    raw_grid = getattr(args, "grid", None)
    fields["grid"] = _parse_grid(raw_grid) if raw_grid is not None else None
    return RunConfig(**fields)


_HANDLERS = {
    "analyze": cmd_analyze,
    "spectrum": cmd_spectrum,
    "iterate": cmd_iterate,
    "catalog": cmd_catalog,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _HANDLERS[args.command](config)
    except ergodic.BudgetError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (WeightError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
