"""End-to-end run: ground state -> grid -> fields -> operators -> spectra -> reports.

Command line::

    python -m virialspec --operator M --n 48 --out runs/
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import field2d, operators
from .certify import (CertificationError, SpectralReport, certify_coercivity,
                      constrained_rayleigh_min)
from .eigen import EigenPair, eig_below, scale_pairs
from .field2d import TensorField
from .ground_state import (RadialProfile, load_profile,
                           save_profile, solve_radial)
from .spectral_grid import make_grid

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE, EXIT_NOT_CERTIFIED = 0, 2, 3, 4
OPERATOR_CHOICES = ("M", "B2", "L_op", "P2bar", "all")
VALIDATED_N = (32, 64)


@dataclass
class RunConfig:
    L: float = 20.0
    a: float = 4.0
    N: int = 48
    radial_nodes: int = 2000
    operator: str = "M"
    tol_eig: float = 1e-8
    tol_radial: float = 1e-10
    out: Path | None = None
    cache_dir: Path | None = None
    use_cache: bool = True
    emit_slices: bool = False
    require_positive: bool = False

    def validate(self) -> None:
        if self.operator not in OPERATOR_CHOICES:
            raise ValueError(f"operator must be one of {OPERATOR_CHOICES}")
        if self.N < 4 or self.N % 2:
            raise ValueError(f"N must be even and >= 4, got {self.N}")
        if self.L < 10 or self.a <= 0:
            raise ValueError("need L >= 10 and a > 0")
        if self.radial_nodes < 200:
            raise ValueError("radial_nodes must be >= 200")
        if self.tol_eig <= 0 or self.tol_radial <= 0:
            raise ValueError("tolerances must be positive")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, exc: Exception, exit_code: int):
        super().__init__(f"[{stage}] {exc}")
        self.stage = stage
        self.exit_code = exit_code


@dataclass
class RunResult:
    status: int
    reports: dict[str, SpectralReport]
    profile: RadialProfile | None = None
    fields: dict[str, TensorField] = field(default_factory=dict)
    pairs: dict[str, list[EigenPair]] = field(default_factory=dict)


def _cache_path(cfg: RunConfig) -> Path:
    return Path(cfg.cache_dir) / f"radial_L{cfg.L:g}_n{cfg.radial_nodes}.txt"


def ground_state(cfg: RunConfig) -> RadialProfile:
    """Radial profile, read from the cache when it matches ``cfg``."""
    path = _cache_path(cfg) if cfg.cache_dir and cfg.use_cache else None
    if path is not None and path.exists():
        try:
            prof = load_profile(path)
            if (np.isclose(prof.L, cfg.L) and len(prof.nodes) - 1 == cfg.radial_nodes
                    and prof.method == "renormalization"
                    and prof.residual <= cfg.tol_radial):
                return prof
            log.info("cached profile %s does not match config; recomputing", path)
        except (OSError, KeyError, ValueError, IndexError):
            log.info("unreadable cache %s; recomputing", path)
    prof = solve_radial(cfg.L, cfg.radial_nodes, cfg.tol_radial)
    if path is not None:
        save_profile(prof, path)
    return prof


def _stage(name, exit_code, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:  # surfaced with stage attribution
        raise PipelineError(name, exc, exit_code) from exc


def _build_operator(label: str, Q, Qx, grid):
    if label == "M":
        return operators.assemble_M(Q, grid, Qx)
    if label == "B2":
        return operators.assemble_B2(Q, Qx)
    if label == "L_op":
        return operators.assemble_L(Q)
    return operators.assemble_M_bar(Q, grid, Qx)


def _report(label: str, op, pairs, Q, Qx, c1_min: float, cfg: RunConfig) -> SpectralReport:
    if label == "L_op":
        report = certify_coercivity(Q, Qx, pairs, op.ess_min, operator=label)
        report.certificate = "constrained_rayleigh"
        report.bounds["constrained_min"] = c1_min
        report.verdict = "positive" if c1_min > 0 else "not-certified"
    else:
        # angle-lemma arithmetic is done for B + P, i.e. half the assembled operator
        half = scale_pairs(pairs, 0.5)
        report = certify_coercivity(Q, Qx, half, 0.5 * op.ess_min, operator=label)
        report.value_scale = 0.5
        report.eigenvalues = [p.value for p in pairs]
        report.residuals = [p.residual for p in pairs]
        report.cutoff = op.ess_min
        if not op.symmetric_in_form:
            report.flags.append("operator not self-adjoint in form; angle lemma not applicable")
            report.verdict = "not-certified"
    report.c1_estimate = 1.0 / c1_min if c1_min > 0 else None
    for p in pairs:
        if p.residual > cfg.tol_eig * (abs(p.value) + 1):
            report.flags.append(f"eigenpair {p.value:.6f} residual {p.residual:.2e} above tolerance")
    if not VALIDATED_N[0] <= cfg.N <= VALIDATED_N[1]:
        report.flags.append("resolution below validated range" if cfg.N < VALIDATED_N[0]
                            else "resolution above validated range")
    report.tolerances = {"eig_residual": cfg.tol_eig, "radial_residual": cfg.tol_radial}
    return report


def run_pipeline(cfg: RunConfig) -> RunResult:
    """Run every stage for ``cfg`` and write reports if ``cfg.out`` is set.

    Raises :class:`PipelineError` carrying the failing stage and exit code.
    """
    _stage("config", EXIT_CONFIG, cfg.validate)
    prof = _stage("ground_state", EXIT_NONCONVERGENCE, ground_state, cfg)
    grid = _stage("grid", EXIT_CONFIG, make_grid, cfg.N, cfg.L, cfg.a)
    Q = _stage("fields", EXIT_CONFIG, field2d.radial_to_field, prof, grid)
    Qx, Qy = field2d.dx(Q), field2d.dy(Q)
    refs = [Q.vec(), Qx.vec()]

    L_op = _stage("operators", EXIT_CONFIG, operators.assemble_L, Q)
    c1_min = _stage("certify", EXIT_NONCONVERGENCE, constrained_rayleigh_min,
                    L_op, [Q**3, Qx, Qy])

    labels = ("M", "B2", "L_op", "P2bar") if cfg.operator == "all" else (cfg.operator,)
    result = RunResult(EXIT_OK, {}, prof, {"Q": Q, "Qx": Qx, "Qy": Qy})
    for label in labels:
        t0 = time.perf_counter()
        op = L_op if label == "L_op" else _stage("operators", EXIT_CONFIG, _build_operator,
                                                 label, Q, Qx, grid)
        pairs = _stage("eigen", EXIT_NONCONVERGENCE, eig_below, op, op.ess_min, 20, refs)
        try:
            report = _report(label, op, pairs, Q, Qx, c1_min, cfg)
        except CertificationError as exc:
            raise PipelineError("certify", exc, EXIT_NOT_CERTIFIED) from exc
        report.wall_time_s = round(time.perf_counter() - t0, 3)
        result.reports[label] = report
        result.pairs[label] = pairs
        for i, p in enumerate(pairs, 1):
            result.fields[f"{label}_phi{i}"] = TensorField(grid, field2d.unvec(p.vector, grid))

    if cfg.out is not None:
        out = Path(cfg.out)
        for label, report in result.reports.items():
            _stage("output", EXIT_CONFIG, report.write, out / f"report_{label}.json")
        if cfg.emit_slices:
            for label, report in result.reports.items():
                sub = {k: v for k, v in result.fields.items()
                       if k in ("Q", "Qx") or k.startswith(label + "_phi")}
                _stage("output", EXIT_CONFIG, emit_slices, report, sub, out / label, prof)

    if cfg.require_positive and any(
            r.verdict != "positive" for r in result.reports.values()
            if "angle lemma not applicable" not in " ".join(r.flags)):
        result.status = EXIT_NOT_CERTIFIED
    return result


def emit_slices(report: SpectralReport, fields_: dict[str, TensorField], out_dir: str | Path,
                profile: RadialProfile | None = None) -> list[Path]:
    """Plot data: full fields, their ``y = 0`` slices, the radial profile,
    the angle table and a one-row summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, f in fields_.items():
        p = out_dir / f"field_{name}.csv"
        field2d.write_csv(f, p)
        written.append(p)

    grid = next(iter(fields_.values())).grid
    mid = grid.N // 2
    names = list(fields_)
    p = out_dir / "slices_y0.csv"
    with p.open("w") as fh:
        fh.write(",".join(["x"] + names) + "\n")
        for i, x in enumerate(grid.x):
            fh.write(",".join(repr(float(v)) for v in
                              [x] + [fields_[n].values[i, mid] for n in names]) + "\n")
    written.append(p)

    if profile is not None:
        p = out_dir / "radial_profile.csv"
        with p.open("w") as fh:
            fh.write("r,R,dR\n")
            for row in zip(profile.nodes, profile.values, profile.deriv):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        written.append(p)

    p = out_dir / "angles.csv"
    with p.open("w") as fh:
        fh.write("eigenvalue,parity,abs_Q,abs_Qx\n")
        for lam, par, aq, ax in zip(report.eigenvalues, report.parities,
                                     report.angles["Q"], report.angles["Qx"]):
            fh.write(f"{lam!r},{par},{aq!r},{ax!r}\n")
    written.append(p)

    p = out_dir / "summary.csv"
    with p.open("w") as fh:
        fh.write("operator,N,L,a,n_eigs,bound_odd,bound_even,bound_overall,verdict\n")
        g = report.grid
        b = report.bounds
        fh.write(f"{report.operator},{g['N']},{g['L']!r},{g['a']!r},{len(report.eigenvalues)},"
                 f"{b['odd']!r},{b['even']!r},{b['overall']!r},{report.verdict}\n")
    written.append(p)
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="virialspec",
                                 description="Spectrum and coercivity of the linearized virial operator.")
    ap.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags win")
    ap.add_argument("--L", type=float)
    ap.add_argument("--a", type=float)
    ap.add_argument("--n", dest="N", type=int)
    ap.add_argument("--radial-nodes", dest="radial_nodes", type=int)
    ap.add_argument("--operator", choices=OPERATOR_CHOICES)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--cache-dir", dest="cache_dir", type=Path)
    ap.add_argument("--no-cache", dest="use_cache", action="store_false", default=None)
    ap.add_argument("--emit-slices", dest="emit_slices", action="store_true", default=None)
    ap.add_argument("--tol-eig", dest="tol_eig", type=float)
    ap.add_argument("--tol-radial", dest="tol_radial", type=float)
    ap.add_argument("--require-positive", dest="require_positive", action="store_true",
                    default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **data)
    overrides = {k: v for k, v in vars(args).items() if k in known and v is not None}
    cfg = replace(cfg, **overrides)
    for key in ("out", "cache_dir"):
        if getattr(cfg, key) is not None:
            setattr(cfg, key, Path(getattr(cfg, key)))
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"virialspec: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_pipeline(cfg)
    except PipelineError as exc:
        print(f"virialspec: {exc}", file=sys.stderr)
        return exc.exit_code
    for label, r in result.reports.items():
        vals = ", ".join(f"{v:.4f}" for v in r.eigenvalues)
        print(f"{label}: eigenvalues [{vals}] bounds odd={r.bounds['odd']:.4f} "
              f"even={r.bounds['even']:.4f} verdict={r.verdict}"
              + (f" flags={r.flags}" if r.flags else ""))
    return result.status


if __name__ == "__main__":
    sys.exit(main())
