"""Mass estimators and inequality checks for asymptotically flat graphs.

Three routes to the same number:

* surface: the classical flux integral over large coordinate spheres,
  extrapolated in the radius;
* bulk: the integral of S + S_perp over the exterior domain;
* bulk + boundary: for graphs over the exterior of a star-shaped
  region, the weighted mean-curvature integral over the boundary
  restores what the bulk integral misses.

The prefactor 1/(2(n-1) omega_(n-1)) is shared by all three.  The
module also houses the geometric inequality checks (mass versus the
area term, total mean curvature versus the area term, superadditivity
of x -> x^beta) and the asymptotic-decay diagnostics that gate the
bulk integral's integrability precondition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, DomainError, PreconditionError
from .geometry import (adm_integrand_graph, normal_scalar, scalar_curvature)
from .jets import DomainSpec, FunctionSpec, eval_jet
from .quadrature import (SphereRule, hypersurface_samples, integrate_exterior,
                         integrate_sphere, sphere_rule, surface_area,
                         total_mean_curvature, unit_sphere_area)

__all__ = [
    "mass_prefactor", "surface_estimates", "PowerFit",
    "extrapolate_power_fit", "adm_mass_surface", "adm_mass_bulk",
    "boundary_term_weighted", "boundary_term_full", "penrose_check",
    "alexandrov_fenchel_check", "superadditivity_check", "DecayEstimate",
    "decay_estimate", "MassReport", "mass_report",
]

BOUNDARY_CONSTANCY_TOL = 1e-8


def mass_prefactor(n: int) -> float:
    return 1.0 / (2.0 * (n - 1) * unit_sphere_area(n))


# ---------------------------------------------------------------------------
# surface route


def surface_estimates(spec: FunctionSpec, radii, rule: SphereRule) -> list:
    """Mass estimate at each radius from the flux integral over S_r.

    Integrand: (f_i^a f_kk^a - f_k^a f_ik^a) x_i / |x|, the graph form
    of the ADM surface integrand.
    """
    out = []
    for r in radii:
        def integrand(x, _r=float(r)):
            jet = eval_jet(spec, x)
            return float(adm_integrand_graph(jet) @ x) / _r

        out.append(mass_prefactor(spec.n)
                   * integrate_sphere(integrand, float(r), rule))
    return out


@dataclass
class PowerFit:
    """Fit of c0 + c1 r^(-s) through the last three estimates."""

    c0: float
    c1: float
    s: float
    residual: float
    used_fallback: bool


def extrapolate_power_fit(radii, estimates) -> PowerFit:
    """Extrapolate the large-r limit of a power-law-converging sequence.

    Solves for the decay exponent from the last three (r, estimate)
    pairs; when the differences do not behave like a decaying power law
    (non-monotone, or flat to rounding) the last estimate is returned
    unchanged with the fallback flag set.
    """
    radii = [float(r) for r in radii]
    estimates = [float(e) for e in estimates]
    if len(radii) != len(estimates) or len(radii) < 3:
        raise ConfigError("power fit needs at least three radii")
    if any(r2 <= r1 for r1, r2 in zip(radii, radii[1:])):
        raise ConfigError("radii must be strictly increasing")
    r1, r2, r3 = radii[-3:]
    e1, e2, e3 = estimates[-3:]
    d12, d23 = e1 - e2, e2 - e3
    scale = max(1.0, abs(e1), abs(e2), abs(e3))
    if abs(d12) <= 1e-13 * scale or abs(d23) <= 1e-13 * scale:
        return PowerFit(e3, 0.0, math.nan, abs(d23), True)
    u = d23 / d12
    if not 0.0 < u < 1.0:
        return PowerFit(e3, 0.0, math.nan, abs(d23), True)

    def mismatch(s):
        return (d12 * (r2 ** -s - r3 ** -s)
                - d23 * (r1 ** -s - r2 ** -s))

    lo, hi = 1e-3, 50.0
    if mismatch(lo) * mismatch(hi) > 0:
        return PowerFit(e3, 0.0, math.nan, abs(d23), True)
    s = brentq(mismatch, lo, hi, xtol=1e-13, rtol=1e-13)
    c1 = d23 / (r2 ** -s - r3 ** -s)
    c0 = e3 - c1 * r3 ** -s
    residual = max(abs(c0 + c1 * r ** -s - e)
                   for r, e in zip(radii, estimates))
    return PowerFit(c0, c1, s, residual, False)


def adm_mass_surface(spec: FunctionSpec, radii, rule: SphereRule,
                     domain: DomainSpec | None = None) -> tuple:
    """Per-radius estimates plus the extrapolated limit."""
    radii = sorted(float(r) for r in radii)
    if domain is not None and domain.boundary is not None:
        rho_max = domain.max_rho()
        for r in radii:
            if r <= rho_max:
                raise DomainError(
                    f"sphere radius {r} does not enclose the boundary "
                    f"(max rho = {rho_max})")
    estimates = surface_estimates(spec, radii, rule)
    return estimates, extrapolate_power_fit(radii, estimates)


# ---------------------------------------------------------------------------
# bulk route


def _curvature_density(spec: FunctionSpec):
    def g(x):
        jet = eval_jet(spec, x)
        return scalar_curvature(jet) + normal_scalar(jet)
    return g


def adm_mass_bulk(spec: FunctionSpec, domain: DomainSpec, rule: SphereRule,
                  radial_nodes: int = 24, decay: "DecayEstimate | None" = None
                  ):
    """Bulk mass: prefactored exterior integral of S + S_perp.

    The integrability precondition (decay exponent q > n) is taken from
    the supplied decay estimate, or measured here when none is given.
    Returns the prefactored ExteriorResult.
    """
    if decay is None:
        r0 = max(domain.max_rho(), 1.0)
        decay = decay_estimate(spec, [8.0 * r0, 40.0 * r0, 200.0 * r0,
                                      1000.0 * r0], 8)
    if not decay.q_est > spec.n:
        raise PreconditionError(
            f"S + S_perp decays like r^(-{decay.q_est:.3g}); needs faster "
            f"than r^(-{spec.n}) to be integrable")
    result = integrate_exterior(_curvature_density(spec), domain, rule,
                                radial_nodes)
    pref = mass_prefactor(spec.n)
    result.value *= pref
    result.coarse_value *= pref
    result.tail_bound *= pref
    return result


# ---------------------------------------------------------------------------
# boundary terms


def boundary_term_weighted(spec: FunctionSpec, domain: DomainSpec,
                           rule: SphereRule) -> float:
    """Boundary correction: prefactored integral over Sigma of
    |Df|^2/(1+|Df|^2) H, with |Df|^2 summed over all components.

    Precondition: every component of f is constant on Sigma (each
    level-set component of the graph boundary), checked by sampling.
    """
    samples = hypersurface_samples(domain, rule)
    values = np.array([spec.value(s.point) for s in samples])
    spread = float(np.max(np.ptp(values, axis=0))) if len(values) else 0.0
    if spread > BOUNDARY_CONSTANCY_TOL:
        raise PreconditionError(
            f"f varies by {spread:.3e} over the boundary; the boundary "
            f"term requires constant components (tolerance "
            f"{BOUNDARY_CONSTANCY_TOL})")
    total = 0.0
    terms = []
    for w, s in zip(rule.weights, samples):
        d1 = eval_jet(spec, s.point).d1
        df2 = float(np.sum(d1 * d1))
        weight = df2 / (1.0 + df2)
        terms.append(w * s.area_weight * weight * s.mean_curvature)
    total = math.fsum(terms)
    return mass_prefactor(spec.n) * total


def boundary_term_full(domain: DomainSpec, n: int, rule: SphereRule) -> float:
    """Prefactored total mean curvature of Sigma (no graph weight)."""
    if domain.n != n:
        raise ConfigError("domain dimension mismatch")
    return mass_prefactor(n) * total_mean_curvature(domain, rule)


# ---------------------------------------------------------------------------
# inequality checks


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    gap: float
    label: str


def _area_term(domain: DomainSpec, n: int, rule: SphereRule) -> float:
    area = surface_area(domain, rule)
    return float(0.5 * (area / unit_sphere_area(n)) ** ((n - 2) / (n - 1)))


def penrose_check(mass: float, domain: DomainSpec, n: int,
                  rule: SphereRule) -> InequalityCheck:
    """mass >= (1/2)(|Sigma|/omega_(n-1))^((n-2)/(n-1)).

    Conditional on the supplied boundary actually being an outermost
    minimal surface; the label records how the numbers came out, it
    does not certify the hypotheses.
    """
    rhs = _area_term(domain, n, rule)
    mass = float(mass)
    ratio = mass / rhs if rhs != 0.0 else math.inf
    if abs(ratio - 1.0) <= 1e-3:
        label = "equality case"
    elif ratio >= 1.0:
        label = "satisfied"
    else:
        label = "hypotheses violated"
    return InequalityCheck(mass, rhs, mass - rhs, label)


def alexandrov_fenchel_check(domain: DomainSpec, n: int,
                             rule: SphereRule) -> InequalityCheck:
    """Total-mean-curvature term >= area term, equality for spheres."""
    lhs = float(boundary_term_full(domain, n, rule))
    rhs = _area_term(domain, n, rule)
    gap = lhs - rhs
    if abs(gap) <= 1e-8 * max(1.0, abs(lhs)):
        label = "sphere (equality)"
    elif gap > 0:
        label = "satisfied"
    else:
        label = "violated"
    return InequalityCheck(lhs, rhs, gap, label)


def superadditivity_check(a, beta: float) -> tuple:
    """sum(a_i^beta) >= (sum a_i)^beta for a_i >= 0, 0 <= beta <= 1."""
    a = [float(v) for v in a]
    if any(v < 0 for v in a):
        raise ValueError("entries must be nonnegative")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("exponent must lie in [0, 1]")
    lhs = math.fsum(v ** beta for v in a)
    rhs = math.fsum(a) ** beta
    return lhs, rhs, lhs >= rhs - 1e-12


# ---------------------------------------------------------------------------
# decay diagnostics


@dataclass
class DecayEstimate:
    """Observed asymptotic decay rates.

    p_est: |Df| ~ r^(-p/2); q_est: |S + S_perp| ~ r^(-q).  Rates are
    capped at 99 when the sampled quantity underflows to zero
    (super-polynomial decay).
    """

    p_est: float
    q_est: float
    flat_verdict: bool
    n: int


DECAY_CAP = 99.0


def _direction_set(n: int, directions) -> np.ndarray:
    if directions is None:
        directions = 16
    if isinstance(directions, int):
        rng = np.random.default_rng(20230311)
        dirs = rng.normal(size=(directions, n))
        return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs = np.asarray(directions, dtype=float)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


DECAY_FLOOR = 1e-13    # samples below this are rounding noise, not decay


def _loglog_slope(radii, values) -> float:
    """Least-squares slope of log(value) against log(r); capped when the
    values vanish (faster than any power).  Values that sit below the
    noise floor everywhere are treated as identically zero: fitting a
    rate to cancellation residue would report garbage exponents."""
    r = np.asarray(radii, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if np.all(v <= DECAY_FLOOR):
        return -DECAY_CAP
    v = np.maximum(v, 1e-300)
    slope = np.polyfit(np.log(r), np.log(v), 1)[0]
    return float(max(slope, -DECAY_CAP))


def decay_estimate(spec: FunctionSpec, sample_radii, directions=None
                   ) -> DecayEstimate:
    """Fit decay exponents of |Df| and |S + S_perp| over sample radii."""
    radii = sorted(float(r) for r in sample_radii)
    if len(radii) < 3:
        raise ConfigError("decay estimate needs at least three radii")
    if radii[-1] < 100.0 * radii[0]:
        raise ConfigError("decay radii must span at least two decades")
    dirs = _direction_set(spec.n, directions)
    density = _curvature_density(spec)
    d1_max = []
    curv_max = []
    for r in radii:
        d1_r = 0.0
        c_r = 0.0
        for th in dirs:
            x = r * th
            jet = eval_jet(spec, x)
            d1_r = max(d1_r, float(np.max(np.abs(jet.d1))))
            c_r = max(c_r, abs(scalar_curvature(jet) + normal_scalar(jet)))
        d1_max.append(d1_r)
        curv_max.append(c_r)
    p_est = min(-2.0 * _loglog_slope(radii, d1_max), DECAY_CAP)
    q_est = -_loglog_slope(radii, curv_max)
    flat = p_est > (spec.n - 2) / 2.0 and q_est > spec.n
    return DecayEstimate(p_est, q_est, flat, spec.n)


# ---------------------------------------------------------------------------
# combined report


@dataclass
class MassReport:
    radii: list
    surface_estimates: list
    extrapolated_surface_mass: float
    bulk_mass: float
    boundary_term: float
    total_bulk_boundary: float
    tail_bound: float
    penrose_lhs: float
    penrose_rhs: float
    inequality_verdicts: dict
    fit: PowerFit
    bulk_converged: bool
    boundary_term_full: float
    decay: DecayEstimate
    mass_value: float
    limit_diagnostics: dict = field(default_factory=dict)


def _boundary_limit_diagnostics(spec: FunctionSpec, domain: DomainSpec
                                ) -> dict:
    """Observed limits along approach sequences x -> Sigma.

    Reports |S_perp| and the graph weight |Df|^2/(1+|Df|^2) at shrinking
    offsets from the boundary; diagnostics only, never a gate.  A weight
    tending to 1 signals the graph turning cylinder-tangent at Sigma.
    """
    dirs = _direction_set(spec.n, 6)
    offsets = [1e-2, 1e-3, 1e-4]
    s_perp_max = []
    weight_max = []
    for eps in offsets:
        sp = 0.0
        wt = 0.0
        for th in dirs:
            x = domain.rho(th) * (1.0 + eps) * th
            try:
                jet = eval_jet(spec, x)
            except DomainError:
                continue
            sp = max(sp, abs(normal_scalar(jet)))
            d1 = jet.d1
            df2 = float(np.sum(d1 * d1))
            wt = max(wt, df2 / (1.0 + df2))
        s_perp_max.append(sp)
        weight_max.append(wt)
    return {"offsets": offsets, "s_perp_max": s_perp_max,
            "weight_max": weight_max}


def mass_report(spec: FunctionSpec, domain: DomainSpec, radii,
                degree: int = 8, radial_nodes: int = 24) -> MassReport:
    """Run all three mass routes and the inequality checks."""
    rule = sphere_rule(spec.n, degree)
    radii = sorted(float(r) for r in radii)

    r_far = max(radii[-1], 100.0 * max(domain.max_rho(), 1.0))
    decay_radii = [r_far / 125.0, r_far / 25.0, r_far / 5.0, r_far]
    decay = decay_estimate(spec, decay_radii, 8)

    estimates, fit = adm_mass_surface(spec, radii, rule, domain)
    bulk = adm_mass_bulk(spec, domain, rule, radial_nodes, decay)

    if domain.boundary is not None:
        boundary = boundary_term_weighted(spec, domain, rule)
        boundary_full = boundary_term_full(domain, spec.n, rule)
        limits = _boundary_limit_diagnostics(spec, domain)
    else:
        boundary = 0.0
        boundary_full = 0.0
        limits = {}
    total = bulk.value + boundary

    # the mass the inequalities are tested against: the bulk+boundary
    # route when a boundary exists, the surface extrapolation otherwise
    mass_value = total if domain.boundary is not None else fit.c0

    verdicts: dict = {}
    penrose_lhs = mass_value
    penrose_rhs = math.nan
    if domain.boundary is not None:
        pen = penrose_check(mass_value, domain, spec.n, rule)
        af = alexandrov_fenchel_check(domain, spec.n, rule)
        penrose_lhs, penrose_rhs = pen.lhs, pen.rhs
        verdicts = {
            "penrose_holds": bool(pen.gap >= -1e-10),
            "penrose_label": pen.label,
            "alexandrov_fenchel_holds": bool(af.gap >= -1e-10),
            "alexandrov_fenchel_label": af.label,
            "alexandrov_fenchel_gap": float(af.gap),
        }

    return MassReport(
        radii=radii,
        surface_estimates=estimates,
        extrapolated_surface_mass=fit.c0,
        bulk_mass=bulk.value,
        boundary_term=boundary,
        total_bulk_boundary=total,
        tail_bound=bulk.tail_bound,
        penrose_lhs=penrose_lhs,
        penrose_rhs=penrose_rhs,
        inequality_verdicts=verdicts,
        fit=fit,
        bulk_converged=bulk.converged,
        boundary_term_full=boundary_full,
        decay=decay,
        mass_value=mass_value,
        limit_diagnostics=limits,
    )
