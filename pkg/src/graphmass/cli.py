"""Batch front-end.

Reads a JSON problem config, runs one of four analyses and writes
machine-readable reports:

* mass     three-route mass computation plus inequality checks
* verify   residuals of the curvature and divergence identities over a
           sampled point cloud
* penrose  mass against the area term, total mean curvature against the
           area term
* decay    asymptotic decay exponents of |Df| and |S + S_perp|

Exit codes: 0 success, 1 config error, 2 numeric non-convergence,
3 precondition violation.  Reports embed the resolved config, its
sha256 and the tool version, and rerunning a config reproduces the
output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ConfigError, ConvergenceError, DomainError,
                     GraphMassError, ParseError, PreconditionError)
from .geometry import check_identities, divergence_residual
from .jets import DomainSpec, FunctionSpec, domain_from_dict, spec_from_dict
from .mass import decay_estimate, mass_report
from .quadrature import sphere_rule
from .reporting import config_sha256, dump_json, write_csv

__all__ = ["main", "load_config", "RunConfig"]

DEFAULT_RADII = [1e2, 1e3, 1e4]


@dataclass
class RunConfig:
    n: int
    m: int
    spec: FunctionSpec
    domain: DomainSpec
    radii: list
    degree: int
    fd_step: float
    radial_nodes: int
    points: int
    seed: int
    sample_r_min: float
    sample_r_max: float
    decay_radii: list

    def resolved(self, command: str) -> dict:
        """Config dict as actually used, for embedding and hashing."""
        return {
            "command": command,
            "n": self.n,
            "m": self.m,
            "function": self.spec.to_dict(),
            "domain": self.domain.to_dict(),
            "radii": list(self.radii),
            "degree": self.degree,
            "fd_step": self.fd_step,
            "radial_nodes": self.radial_nodes,
            "points": self.points,
            "seed": self.seed,
            "sample_r_min": self.sample_r_min,
            "sample_r_max": self.sample_r_max,
            "decay_radii": list(self.decay_radii),
        }


def load_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config is not valid JSON at byte {exc.pos}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise ConfigError("config root must be a JSON object")
    return obj


def _float_list(value, path) -> list:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{path}: expected a non-empty list of numbers")
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError(f"{path}: must be sorted strictly ascending")
    if out[0] <= 0:
        raise ConfigError(f"{path}: entries must be positive")
    return out


def resolve_config(raw: dict, args) -> RunConfig:
    """Validate the raw config and fold in command-line overrides."""
    if "n" not in raw:
        raise ConfigError("n: required")
    try:
        n = int(raw["n"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"n: {exc}") from exc
    if n < 2:
        raise ConfigError("n: must be at least 2")
    if "function" not in raw:
        raise ConfigError("function: required")
    spec = spec_from_dict(raw["function"], n, "function")
    if spec.n != n:
        raise ConfigError(f"function: built for n={spec.n}, config says {n}")
    if "m" in raw and int(raw["m"]) != spec.m:
        raise ConfigError(f"m: function has {spec.m} components, "
                          f"config says {raw['m']}")
    domain = domain_from_dict(raw.get("domain"), n, "domain")

    radii = _float_list(raw.get("radii", DEFAULT_RADII), "radii")
    if args.radii is not None:
        radii = _float_list(args.radii, "--radii")

    degree = int(args.degree if args.degree is not None
                 else raw.get("degree", 8))
    fd_step = float(args.fd_step if args.fd_step is not None
                    else raw.get("fd_step", 1e-4))
    if not fd_step > 0:
        raise ConfigError("fd_step: must be positive")

    r_anchor = max(1.0, domain.max_rho())
    default_decay = [10.0 * r_anchor, 100.0 * r_anchor,
                     1000.0 * r_anchor, 10000.0 * r_anchor]
    decay_radii = _float_list(raw.get("decay_radii", default_decay),
                              "decay_radii")
    if args.radii is not None:
        decay_radii = _float_list(args.radii, "--radii")

    sample_r_min = float(raw.get("sample_r_min", 1.25 * r_anchor))
    sample_r_max = float(raw.get("sample_r_max", 4.0 * sample_r_min))
    if not 0 < sample_r_min < sample_r_max:
        raise ConfigError("sample_r_min/sample_r_max: need "
                          "0 < r_min < r_max")

    return RunConfig(
        n=n, m=spec.m, spec=spec, domain=domain, radii=radii,
        degree=degree, fd_step=fd_step,
        radial_nodes=int(raw.get("radial_nodes", 24)),
        points=int(raw.get("points", 64)),
        seed=int(raw.get("seed", 20240901)),
        sample_r_min=sample_r_min, sample_r_max=sample_r_max,
        decay_radii=decay_radii,
    )


def _report_envelope(cfg: RunConfig, command: str, body: dict) -> dict:
    resolved = cfg.resolved(command)
    return {
        "version": __version__,
        "command": command,
        "config": resolved,
        "config_sha256": config_sha256(resolved),
        "report": body,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_mass(cfg: RunConfig, out_dir: Path) -> int:
    rep = mass_report(cfg.spec, cfg.domain, cfg.radii, cfg.degree,
                      cfg.radial_nodes)
    dump_json(_report_envelope(cfg, "mass", rep),
              out_dir / "mass_report.json")
    write_csv(out_dir / "mass_series.csv",
              ["radius", "surface_estimate"],
              list(zip(rep.radii, rep.surface_estimates)))
    print(f"surface mass (extrapolated): {rep.extrapolated_surface_mass:.12g}")
    print(f"bulk + boundary:             {rep.total_bulk_boundary:.12g}")
    if not rep.bulk_converged:
        print("warning: bulk integral did not converge", file=sys.stderr)
        return 2
    return 0


def _identity_table(cfg: RunConfig) -> dict:
    """Residual statistics for every identity over a sampled point cloud.

    Points that fall outside a spec's domain (inside a horizon, say) are
    recorded and skipped; the run keeps going.
    """
    rng = np.random.default_rng(cfg.seed)
    names = ["frame_duality", "contraction_trace", "contraction_mixed",
             "contraction_weighted", "contraction_double", "sym_antisym",
             "commutator_remainder", "gauss_vs_intrinsic",
             "normal_scalar_routes", "divergence"]
    rows: dict = {name: [] for name in names}
    errors = []
    valid_points = []
    for _ in range(cfg.points):
        theta = rng.normal(size=cfg.n)
        theta /= np.linalg.norm(theta)
        x = rng.uniform(cfg.sample_r_min, cfg.sample_r_max) * theta
        try:
            res = check_identities(cfg.spec, x, cfg.fd_step)
            div = divergence_residual(cfg.spec, x, cfg.fd_step)
        except DomainError as exc:
            errors.append({"point": [float(c) for c in x],
                           "message": str(exc)})
            continue
        valid_points.append(x)
        rows["frame_duality"].append(float(np.max(res.duality)))
        rows["contraction_trace"].append(float(res.contractions[0]))
        rows["contraction_mixed"].append(float(res.contractions[1]))
        rows["contraction_weighted"].append(float(res.contractions[2]))
        rows["contraction_double"].append(float(res.contractions[3]))
        rows["sym_antisym"].append(res.sym_antisym)
        rows["commutator_remainder"].append(res.commutator_remainder)
        rows["gauss_vs_intrinsic"].append(res.gauss_vs_intrinsic)
        rows["normal_scalar_routes"].append(res.ricci_vs_commutator)
        rows["divergence"].append(div)

    table = {}
    for name in names:
        vals = rows[name]
        table[name] = {
            "max": max(vals) if vals else None,
            "median": statistics.median(vals) if vals else None,
        }

    orders = []
    for x in valid_points[:5]:
        try:
            r1 = divergence_residual(cfg.spec, x, cfg.fd_step)
            r2 = divergence_residual(cfg.spec, x, cfg.fd_step / 2.0)
        except DomainError:
            continue
        if r1 > 1e-13 and r2 > 1e-15:
            orders.append(math.log2(r1 / r2))
    return {
        "identities": table,
        "fd_order": statistics.median(orders) if orders else None,
        "fd_step": cfg.fd_step,
        "points_requested": cfg.points,
        "points_used": len(valid_points),
        "domain_errors": errors,
    }


def cmd_verify(cfg: RunConfig, out_dir: Path) -> int:
    body = _identity_table(cfg)
    dump_json(_report_envelope(cfg, "verify", body),
              out_dir / "verify_report.json")
    worst = max((v["max"] for v in body["identities"].values()
                 if v["max"] is not None), default=None)
    print(f"points used: {body['points_used']}/{body['points_requested']}")
    if worst is not None:
        print(f"worst residual: {worst:.3e}")
    if body["fd_order"] is not None:
        print(f"fd convergence order: {body['fd_order']:.2f}")
    return 0


def cmd_penrose(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.domain.boundary is None:
        raise ConfigError("domain: the inequality checks need a boundary")
    rep = mass_report(cfg.spec, cfg.domain, cfg.radii, cfg.degree,
                      cfg.radial_nodes)
    verdicts = rep.inequality_verdicts
    ratio = (rep.penrose_lhs / rep.penrose_rhs
             if rep.penrose_rhs else math.inf)
    body = {
        "mass": rep.mass_value,
        "penrose": {
            "lhs": rep.penrose_lhs,
            "rhs": rep.penrose_rhs,
            "ratio": ratio,
            "gap": rep.penrose_lhs - rep.penrose_rhs,
            "label": verdicts["penrose_label"],
        },
        "alexandrov_fenchel": {
            "lhs": rep.boundary_term_full,
            "rhs": rep.penrose_rhs,
            "gap": verdicts["alexandrov_fenchel_gap"],
            "label": verdicts["alexandrov_fenchel_label"],
        },
        "mass_report": rep,
    }
    dump_json(_report_envelope(cfg, "penrose", body),
              out_dir / "penrose_report.json")
    print(f"penrose: lhs {rep.penrose_lhs:.12g} rhs {rep.penrose_rhs:.12g} "
          f"({verdicts['penrose_label']})")
    print(f"mean-curvature bound: gap {verdicts['alexandrov_fenchel_gap']:.3e} "
          f"({verdicts['alexandrov_fenchel_label']})")
    return 0 if rep.bulk_converged else 2


def cmd_decay(cfg: RunConfig, out_dir: Path) -> int:
    est = decay_estimate(cfg.spec, cfg.decay_radii, 16)
    body = {
        "p_est": est.p_est,
        "q_est": est.q_est,
        "flat_verdict": est.flat_verdict,
        "thresholds": {"p": (cfg.n - 2) / 2.0, "q": float(cfg.n)},
        "radii": list(cfg.decay_radii),
    }
    dump_json(_report_envelope(cfg, "decay", body),
              out_dir / "decay_report.json")
    print(f"p_est {est.p_est:.4g}  q_est {est.q_est:.4g}  "
          f"asymptotically flat: {est.flat_verdict}")
    return 0


COMMANDS = {
    "mass": cmd_mass,
    "verify": cmd_verify,
    "penrose": cmd_penrose,
    "decay": cmd_decay,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmass",
        description="Mass and curvature analysis of graphical "
                    "asymptotically flat manifolds.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("mass", "compute the mass by all three routes"),
            ("verify", "check the curvature identities at random points"),
            ("penrose", "run the geometric inequality checks"),
            ("decay", "estimate asymptotic decay rates")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON problem config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--degree", type=int, default=None,
                       help="quadrature degree override")
        p.add_argument("--fd-step", type=float, default=None, dest="fd_step",
                       help="finite-difference step override")
        p.add_argument("--radii", default=None,
                       type=lambda s: [float(v) for v in s.split(",")],
                       help="comma-separated radii override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = load_config(args.config)
        cfg = resolve_config(raw, args)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out_dir)
    except (ConfigError, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"failed to converge: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except GraphMassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
