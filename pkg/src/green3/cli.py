"""Batch verification harness: every check suite behind one ``green3`` binary.

Each subcommand assembles a list of independent check tasks, runs them on a
small thread pool (capped by ``GREEN3_THREADS``), and emits a single report in
JSON (versioned schema) or flat CSV.  Exit status is the verdict: 0 all pass,
1 at least one residual above tolerance, 2 for unusable input.  Reports are
deterministic for a fixed config and seed once timing fields are omitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import coupling, interval_model
from .errors import (
    AccuracyRegionError,
    AnsatzResonanceError,
    ArgumentRangeError,
    BracketingError,
    ConfigurationError,
    EvaluationError,
    SingularityError,
    SpectralPoleError,
)
from .geometry import curve_from_spec
from .potentials import jump_relation_residuals
from .reports import ResidualReport, timed_check
from .weyl import dtn_map, mode_eigenvalue

_USAGE_ERRORS = (
    AccuracyRegionError, AnsatzResonanceError, ArgumentRangeError, BracketingError,
    ConfigurationError, EvaluationError, SingularityError, SpectralPoleError,
)

_SUBCOMMANDS = ("jumps", "dtn", "green-identity", "krein", "indicator", "rellich", "interval")


def _parse_z(text: str):
    """'RE,IM' -> (re, im); anything else is a usage error before any work runs."""
    try:
        re_str, im_str = text.split(",")
        return (float(re_str), float(im_str))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def _parse_zgrid(text: str):
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError(f"expected re0:re1:count[:im], got {text!r}")
    try:
        re0, re1 = float(parts[0]), float(parts[1])
        count = int(parts[2])
        imag = float(parts[3]) if len(parts) == 4 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re0:re1:count[:im], got {text!r}")
    if count < 1:
        raise argparse.ArgumentTypeError(f"zgrid count must be >= 1, got {count}")
    return (re0, re1, count, imag)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, in JSON-stable form (z values as [re, im] pairs).

    The round-trip ``RunConfig.from_json(cfg.to_json()).to_json() == cfg.to_json()``
    holds byte-for-byte; reports echo the config so results are reproducible."""

    subcommand: str
    curve: str = "disk"
    nodes: int = 256
    zs: tuple = ()
    modes: int = 8
    mode_list: tuple = ()
    side: str = "interior"
    check: str = "suite"
    ks: tuple = ()
    zgrid: tuple | None = None
    c_plus: float | None = None
    c_minus: float | None = None
    c_shift: float = 1.0
    out: str | None = None
    fmt: str = "json"
    seed: int = 0
    tol_scale: float = 1.0
    omit_timing: bool = False

    def __post_init__(self):
        if self.subcommand not in _SUBCOMMANDS:
            raise ConfigurationError(f"unknown subcommand {self.subcommand!r}")
        if self.fmt not in ("json", "csv"):
            raise ConfigurationError(f"format must be 'json' or 'csv', got {self.fmt!r}")
        object.__setattr__(self, "zs", tuple(tuple(z) for z in self.zs))
        object.__setattr__(self, "mode_list", tuple(int(m) for m in self.mode_list))
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if self.zgrid is not None:
            object.__setattr__(self, "zgrid", tuple(self.zgrid))

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["zs"] = [list(z) for z in self.zs]
        doc["mode_list"] = list(self.mode_list)
        doc["ks"] = list(self.ks)
        doc["zgrid"] = list(self.zgrid) if self.zgrid is not None else None
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def z_values(self, default=()):
        pairs = self.zs if self.zs else tuple((complex(z).real, complex(z).imag) for z in default)
        return [complex(re, im) for re, im in pairs]


# ------------------------------------------------------------------ subcommands


def _jump_tasks(cfg: RunConfig) -> list:
    curve, grid = curve_from_spec(cfg.curve, cfg.nodes)
    base = 1e-6 if curve.shape == "disk" else 1e-5
    tasks = []
    for z in cfg.z_values(default=(-1.0,)):
        tasks.append(lambda z=z: jump_relation_residuals(
            curve, grid, z, modes=cfg.modes, tolerance=base * cfg.tol_scale).checks)
    return tasks


def _dtn_tasks(cfg: RunConfig) -> list:
    """Mode-eigenvalue tables with a self-convergence residual per entry.

    The reference is the same map reassembled at 2N nodes, which is meaningful
    on every supported curve; on the disk both agree to rounding."""
    curve, grid = curve_from_spec(cfg.curve, cfg.nodes)
    _, grid_fine = curve_from_spec(cfg.curve, 2 * cfg.nodes)
    tol = 1e-6 * cfg.tol_scale

    def one_z(z):
        coarse = dtn_map(cfg.side, curve, grid, z)
        fine = dtn_map(cfg.side, curve, grid_fine, z)
        rows = []
        for m in range(cfg.modes + 1):
            def entry(m=m):
                lam = mode_eigenvalue(coarse, m)
                ref = mode_eigenvalue(fine, m)
                return abs(lam - ref) / (1.0 + abs(ref)), {"eigenvalue": ref}

            rows.append(timed_check(
                "weyl.dtn.mode",
                {"side": cfg.side, "curve": curve.shape, "n": cfg.nodes,
                 "z": [complex(z).real, complex(z).imag], "m": m},
                tol, entry,
            ))
        return rows

    return [lambda z=z: one_z(z) for z in cfg.z_values(default=(-1.0,))]


def _green_identity_tasks(cfg: RunConfig) -> list:
    curve, grid = curve_from_spec(cfg.curve, cfg.nodes)
    radii = np.linalg.norm(grid.points, axis=1)
    r_min, r_max = float(radii.min()), float(radii.max())
    interior = coupling.probe_ring(0.55 * r_min, 20)
    exterior = coupling.probe_ring(1.45 * r_max, 20)
    source_out = (2.1 * r_max * np.cos(0.4), 2.1 * r_max * np.sin(0.4))
    source_in = (0.3 * r_min * np.cos(-1.1), 0.3 * r_min * np.sin(-1.1))
    tol = 1e-7 * cfg.tol_scale

    def one_z(z):
        field = coupling.transmission_point_sources(z, source_out, source_in)
        return coupling.third_green_identity_residual(
            field, z, curve, grid, (interior, exterior), tolerance=tol).checks

    return [lambda z=z: one_z(z) for z in cfg.z_values(default=(-1.0,))]


def _krein_tasks(cfg: RunConfig) -> list:
    modes = cfg.mode_list if cfg.mode_list else tuple(range(cfg.modes + 1))
    tol = 1e-10 * cfg.tol_scale
    tasks = []
    for z in cfg.z_values(default=(-1.0,)):
        def one_z(z=z):
            rows = []
            for m in modes:
                params = {"z": [z.real, z.imag], "m": m, "c": cfg.c_shift}
                rows.append(timed_check(
                    "coupling.krein.mode", params, tol,
                    lambda m=m: coupling.krein_resolvent_disk_mode(z, m, c=cfg.c_shift)))
                rows.append(timed_check(
                    "coupling.mixed.mode", params, tol,
                    lambda m=m: coupling.mixed_resolvent_disk_mode(z, m, c=cfg.c_shift)))
            return rows

        tasks.append(one_z)
    return tasks


def _indicator_tasks(cfg: RunConfig) -> list:
    """Scan the coupled-eigenvalue indicator; a row fails where it collapses.

    The indicator is the smallest singular value of the coupling pencil, so a
    failing row marks a candidate eigenvalue rather than a broken identity."""
    curve, grid = curve_from_spec(cfg.curve, cfg.nodes)
    floor = 1e-6 * cfg.tol_scale
    shift = cfg.c_plus if cfg.c_plus is not None else 0.0
    zs = cfg.z_values()
    if cfg.zgrid is not None:
        re0, re1, count, imag = cfg.zgrid
        zs.extend(complex(re, imag) for re in np.linspace(re0, re1, count))
    if not zs:
        zs = [complex(-1.0, 0.0)]

    def one_z(z):
        def entry():
            value = coupling.eigenvalue_indicator(z, curve, grid, c=shift)
            return max(0.0, floor - value), {"indicator": value, "floor": floor}

        return [timed_check(
            "coupling.indicator",
            {"z": [z.real, z.imag], "c": shift, "curve": curve.shape, "n": cfg.nodes},
            0.0, entry)]

    return [lambda z=z: one_z(z) for z in zs]


def _rellich_tasks(cfg: RunConfig) -> list:
    ks = cfg.ks if cfg.ks else (1, 2)
    tol = 1e-10 * cfg.tol_scale

    def one_k(k):
        def entry():
            lam, want = coupling.rellich_quotient(k)
            return abs(lam / want - 1.0), {"eigenvalue": lam, "reference": want}

        return [timed_check("coupling.rellich", {"k": k}, tol, entry)]

    return [lambda k=k: one_k(k) for k in ks]


def _interval_tasks(cfg: RunConfig) -> list:
    if cfg.check not in ("krein", "mixed", "green3", "suite"):
        raise ConfigurationError(f"interval check must be krein|mixed|green3|suite, got {cfg.check!r}")
    cp = cfg.c_plus if cfg.c_plus is not None else (1.0 if cfg.check == "green3" else 0.0)
    cm = cfg.c_minus if cfg.c_minus is not None else cp

    if cfg.check == "krein":
        zs = cfg.z_values(default=(-1.0,))
        return [lambda z=z: interval_model.krein_formula_check(z, cp, cm).checks for z in zs]
    if cfg.check == "mixed":
        zs = cfg.z_values(default=(-1.0,))
        return [lambda z=z: interval_model.mixed_formula_check(z, cp, cm).checks for z in zs]
    if cfg.check == "green3":
        return [lambda: _interval_green3_rows(cp)]
    zs = cfg.z_values(default=(1j, 2j))
    return [lambda: interval_model.abstract_identity_suite(zs, cp, cm, seed=cfg.seed).checks]


def _interval_green3_rows(c: float) -> list:
    """The three reference jump families for the 1D third Green identity."""
    arr = lambda v: (lambda x: np.full(np.asarray(x, dtype=float).shape, v, dtype=float))
    smooth = interval_model.IntervalField(
        lambda x: np.asarray(x) ** 2 * (2.0 - np.asarray(x)) ** 2,
        lambda x: np.asarray(x) ** 2 * (2.0 - np.asarray(x)) ** 2,
        lambda x: 2.0 * np.asarray(x) * (2.0 - np.asarray(x)) ** 2
        - 2.0 * np.asarray(x) ** 2 * (2.0 - np.asarray(x)),
        lambda x: 2.0 * np.asarray(x) * (2.0 - np.asarray(x)) ** 2
        - 2.0 * np.asarray(x) ** 2 * (2.0 - np.asarray(x)),
        lambda x: 2.0 * (2.0 - np.asarray(x)) ** 2 - 8.0 * np.asarray(x) * (2.0 - np.asarray(x))
        + 2.0 * np.asarray(x) ** 2,
        lambda x: 2.0 * (2.0 - np.asarray(x)) ** 2 - 8.0 * np.asarray(x) * (2.0 - np.asarray(x))
        + 2.0 * np.asarray(x) ** 2,
    )
    jumpy = interval_model.IntervalField(
        lambda x: np.asarray(x, dtype=float), arr(0.0), arr(1.0), arr(0.0), arr(0.0), arr(0.0))
    zero = interval_model.IntervalField(arr(0.0), arr(0.0), arr(0.0), arr(0.0), arr(0.0), arr(0.0))
    rows = []
    for label, fld in (("smooth", smooth), ("jump", jumpy), ("zero", zero)):
        for row in interval_model.third_green_identity_1d(fld, c=c).checks:
            rows.append(replace(row, params={**row.params, "family": label}))
    return rows


_TASK_BUILDERS = {
    "jumps": _jump_tasks,
    "dtn": _dtn_tasks,
    "green-identity": _green_identity_tasks,
    "krein": _krein_tasks,
    "indicator": _indicator_tasks,
    "rellich": _rellich_tasks,
    "interval": _interval_tasks,
}


def _worker_count(n_tasks: int) -> int:
    cap = os.environ.get("GREEN3_THREADS")
    if cap is not None:
        return max(1, min(int(cap), max(1, n_tasks)))
    return max(1, min(4, n_tasks))


def run(config: RunConfig) -> int:
    """Execute the configured check suite and write its report; returns exit status."""
    tic = time.perf_counter()
    try:
        tasks = _TASK_BUILDERS[config.subcommand](config)
        rows = []
        with ThreadPoolExecutor(max_workers=_worker_count(len(tasks))) as pool:
            for chunk in pool.map(lambda task: task(), tasks):
                rows.extend(chunk)
    except _USAGE_ERRORS as exc:
        print(f"green3: {exc}", file=sys.stderr)
        return 2
    report = ResidualReport(rows).sorted()
    if config.omit_timing:
        report = report.without_timing()
    elapsed = 0.0 if config.omit_timing else time.perf_counter() - tic
    if config.fmt == "json":
        text = report.to_json(command=config.subcommand, config=config.to_dict(),
                              wall_time_s=elapsed)
    else:
        text = report.to_csv()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", default="disk", help="disk | ellipse:a,b | kite")
    common.add_argument("--nodes", type=int, default=256)
    common.add_argument("--z", action="append", type=_parse_z, default=None, metavar="RE,IM")
    common.add_argument("--modes", type=int, default=8)
    common.add_argument("--c+", dest="c_plus", type=float, default=None)
    common.add_argument("--c-", dest="c_minus", type=float, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-scale", type=float, default=1.0)
    common.add_argument("--omit-timing", action="store_true",
                        help="zero the wall-time fields for byte-identical reruns")

    parser = argparse.ArgumentParser(
        prog="green3", description="Residual checks for coupled Helmholtz boundary triples.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("jumps", parents=[common], help="layer-potential trace/jump relations")
    dtn = sub.add_parser("dtn", parents=[common], help="Dirichlet-to-Neumann eigenvalue tables")
    dtn.add_argument("--side", choices=("interior", "exterior"), default="interior")
    sub.add_parser("green-identity", parents=[common],
                   help="transmission third Green identity at point-source fields")
    krein = sub.add_parser("krein", parents=[common], help="per-mode resolvent formulas on the disk")
    krein.add_argument("--mode", action="append", type=int, default=None, dest="mode_list")
    krein.add_argument("--c", dest="c_shift", type=float, default=1.0)
    indicator = sub.add_parser("indicator", parents=[common],
                               help="coupled-eigenvalue indicator scan")
    indicator.add_argument("--zgrid", type=_parse_zgrid, default=None, metavar="RE0:RE1:COUNT[:IM]")
    rellich = sub.add_parser("rellich", parents=[common], help="Rellich eigenvalue quotients")
    rellich.add_argument("--k", action="append", type=int, default=None)
    interval = sub.add_parser("interval", parents=[common], help="closed-form 1D model checks")
    interval.add_argument("--check", choices=("krein", "mixed", "green3", "suite"),
                          default="suite")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=ns.subcommand,
        curve=ns.curve,
        nodes=ns.nodes,
        zs=tuple(ns.z) if ns.z else (),
        modes=ns.modes,
        mode_list=tuple(ns.mode_list) if getattr(ns, "mode_list", None) else (),
        side=getattr(ns, "side", "interior"),
        check=getattr(ns, "check", "suite"),
        ks=tuple(ns.k) if getattr(ns, "k", None) else (),
        zgrid=getattr(ns, "zgrid", None),
        c_plus=ns.c_plus,
        c_minus=ns.c_minus,
        c_shift=getattr(ns, "c_shift", 1.0),
        out=ns.out,
        fmt=ns.fmt,
        seed=ns.seed,
        tol_scale=ns.tol_scale,
        omit_timing=ns.omit_timing,
    )


_NEGATIVE_VALUE_FLAGS = ("--z", "--c+", "--c-", "--zgrid")


def _absorb_negative_values(argv) -> list:
    """Join '--z -1,0' into '--z=-1,0' so argparse can't mistake the value for a flag."""
    merged = []
    it = iter(argv)
    for token in it:
        if token in _NEGATIVE_VALUE_FLAGS:
            value = next(it, None)
            if value is None:
                merged.append(token)
            else:
                merged.append(f"{token}={value}")
        else:
            merged.append(token)
    return merged


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_absorb_negative_values(argv))
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
