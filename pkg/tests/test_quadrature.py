"""Sphere rules, exterior integrals and hypersurface geometry.

Closed forms do the heavy lifting: Gamma-function values for sphere
monomials, exact areas for spheres and spheroids, and the divergence
theorem connecting the two independent integration code paths.
"""

import math

import numpy as np
import pytest
from scipy.special import gamma

from graphmass import (BallBoundary, DomainSpec, EllipsoidBoundary,
                       RadialExpressionBoundary, hypersurface_geometry,
                       hypersurface_samples, integrate_exterior,
                       integrate_sphere, sphere_rule, surface_area,
                       total_mean_curvature, unit_sphere_area)
from graphmass.errors import ConfigError, DomainError


def sphere_monomial(exponents):
    """Exact unit-sphere integral of prod x_i^a_i (0 if any a_i odd)."""
    if any(a % 2 for a in exponents):
        return 0.0
    b = [(a + 1) / 2 for a in exponents]
    return 2.0 * np.prod([gamma(v) for v in b]) / gamma(sum(b))


def test_unit_sphere_area_closed_forms():
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert unit_sphere_area(4) == pytest.approx(2 * math.pi ** 2, rel=1e-15)
    assert unit_sphere_area(5) == pytest.approx(8 * math.pi ** 2 / 3, rel=1e-15)


def test_rule_weights_sum_to_area():
    for n in range(2, 9):
        rule = sphere_rule(n, 8)
        assert math.fsum(rule.weights) == pytest.approx(
            unit_sphere_area(n), rel=2e-14), n
        assert rule.count == rule.nodes.shape[0] == rule.weights.shape[0]
        # nodes actually sit on the sphere
        assert np.max(np.abs(np.linalg.norm(rule.nodes, axis=1) - 1)) < 1e-14


def test_rule_integrates_monomials_exactly():
    rng = np.random.default_rng(2)
    for n in (2, 3, 5, 7):
        rule = sphere_rule(n, 8)
        for _ in range(20):
            exps = rng.integers(0, 5, size=n)
            while sum(exps) > 8:
                exps = rng.integers(0, 5, size=n)
            got = math.fsum(w * float(np.prod(node ** exps))
                            for w, node in zip(rule.weights, rule.nodes))
            assert got == pytest.approx(sphere_monomial(exps), abs=1e-13), \
                (n, exps)


def test_sphere_rule_guards():
    with pytest.raises(ConfigError):
        sphere_rule(1, 8)
    with pytest.raises(ConfigError):
        sphere_rule(9, 8)
    with pytest.raises(ConfigError):
        sphere_rule(3, 1)


def test_integrate_sphere_scales_with_radius():
    rule = sphere_rule(3, 6)
    got = integrate_sphere(lambda x: 1.0, 2.5, rule)
    assert got == pytest.approx(4 * math.pi * 2.5 ** 2, rel=1e-14)
    # |x|^2 on S_r is r^2 everywhere
    got2 = integrate_sphere(lambda x: float(x @ x), 2.0, rule)
    assert got2 == pytest.approx(4 * math.pi * 2.0 ** 4, rel=1e-14)


def test_integrate_exterior_closed_forms():
    dom = DomainSpec.exterior(BallBoundary(3, 1.0))
    rule = sphere_rule(3, 6)
    res = integrate_exterior(lambda x: float(x @ x) ** -2, dom, rule)
    assert res.value == pytest.approx(4 * math.pi, rel=1e-12)
    assert res.converged
    # the outermost compactified panel covers r > 8 R_split = 80; for
    # this integrand that region holds exactly 4 pi / 80 of the mass
    assert res.tail_bound == pytest.approx(4 * math.pi / 80.0, rel=0.1)

    whole = DomainSpec.all_of_rn(3)
    res2 = integrate_exterior(lambda x: math.exp(-float(x @ x)), whole, rule)
    assert res2.value == pytest.approx(math.pi ** 1.5, rel=1e-12)
    assert res2.converged
    assert res2.tail_bound < 1e-15    # gaussian: nothing lives out there


def test_integrate_exterior_flags_non_convergence():
    """A violently oscillatory integrand at 4 radial nodes per panel
    cannot match its refinement; the flag must say so."""
    dom = DomainSpec.exterior(BallBoundary(3, 1.0))
    rule = sphere_rule(3, 4)
    res = integrate_exterior(
        lambda x: math.sin(60.0 * float(np.linalg.norm(x)))
        / float(x @ x) ** 2,
        dom, rule, radial_nodes=4)
    assert not res.converged


def test_integrate_exterior_deterministic_and_thread_invariant(monkeypatch):
    dom = DomainSpec.exterior(BallBoundary(3, 1.0))
    rule = sphere_rule(3, 8)

    def g(x):
        r2 = float(x @ x)
        return math.exp(-0.5 * r2) * (1.0 + x[0] ** 2 / r2)

    monkeypatch.setenv("GRAPHMASS_THREADS", "1")
    a = integrate_exterior(g, dom, rule)
    b = integrate_exterior(g, dom, rule)
    assert a.value == b.value    # bitwise reproducible
    monkeypatch.setenv("GRAPHMASS_THREADS", "4")
    c = integrate_exterior(g, dom, rule)
    assert c.value == a.value    # thread count cannot change the sum


# ---------------------------------------------------------------------------
# hypersurface geometry


def test_ball_hypersurface_geometry():
    for n, radius in ((3, 2.0), (4, 0.5), (5, 1.0)):
        dom = DomainSpec.exterior(BallBoundary(n, radius))
        theta = np.zeros(n)
        theta[0] = 1.0
        s = hypersurface_geometry(dom, theta)
        assert np.allclose(s.point, radius * theta, atol=1e-15)
        assert np.allclose(s.normal, theta, atol=1e-14)
        assert s.mean_curvature == pytest.approx((n - 1) / radius, rel=1e-13)
        assert s.area_weight == pytest.approx(radius ** (n - 1), rel=1e-13)


def test_sphere_area_and_total_mean_curvature():
    for n, radius in ((3, 1.5), (4, 2.0)):
        dom = DomainSpec.exterior(BallBoundary(n, radius))
        rule = sphere_rule(n, 8)
        area = surface_area(dom, rule)
        assert area == pytest.approx(
            unit_sphere_area(n) * radius ** (n - 1), rel=1e-13)
        assert total_mean_curvature(dom, rule) == pytest.approx(
            (n - 1) / radius * area, rel=1e-13)


def test_spheroid_areas_match_closed_forms():
    """Oblate and prolate spheroid areas against the classical formulas.

    Convergence in the degree is spectral but slows with aspect ratio;
    degree 48 puts these shapes well below the stated tolerance.
    """
    rule = sphere_rule(3, 48)
    # oblate: a = b = 1, c = 0.6
    c = 0.6
    e = math.sqrt(1 - c * c)
    oblate = 2 * math.pi * (1 + (1 - e * e) / e * math.atanh(e))
    dom = DomainSpec.exterior(EllipsoidBoundary([1.0, 1.0, c]))
    assert surface_area(dom, rule) == pytest.approx(oblate, rel=1e-7)
    # prolate: a = b = 1, c = 1.8
    c = 1.8
    e = math.sqrt(1 - 1 / (c * c))
    prolate = 2 * math.pi * (1 + c / e * math.asin(e))
    dom = DomainSpec.exterior(EllipsoidBoundary([1.0, 1.0, c]))
    assert surface_area(dom, rule) == pytest.approx(prolate, rel=1e-7)


def implicit_mean_curvature(semi_axes, point, h=1e-5):
    """Independent H: divergence of the unit normal of the level set
    F = sum x_i^2/a_i^2, by central differences."""
    a2 = np.asarray(semi_axes, dtype=float) ** 2

    def unit_normal(y):
        g = 2.0 * y / a2
        return g / np.linalg.norm(g)

    n = len(point)
    div = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        div += (unit_normal(point + e)[i] - unit_normal(point - e)[i]) / (2 * h)
    return div


def test_ellipsoid_mean_curvature_vs_implicit_oracle():
    axes = [1.0, 1.4, 0.7]
    dom = DomainSpec.exterior(EllipsoidBoundary(axes))
    rng = np.random.default_rng(6)
    for _ in range(10):
        theta = rng.standard_normal(3)
        theta /= np.linalg.norm(theta)
        s = hypersurface_geometry(dom, theta)
        h_ref = implicit_mean_curvature(axes, s.point)
        assert s.mean_curvature == pytest.approx(h_ref, abs=5e-9)
        # the normal of the level set is the same unit vector
        a2 = np.asarray(axes) ** 2
        grad = 2.0 * s.point / a2
        assert np.max(np.abs(s.normal - grad / np.linalg.norm(grad))) < 1e-12


def test_star_shaped_expression_boundary_geometry():
    """A gently bumpy radial boundary: normal and area weight against
    closed forms from the radial graph parametrization."""
    dom = DomainSpec.exterior(
        RadialExpressionBoundary(3, "1 + 0.1*x1^2"))
    theta = np.array([0.6, 0.8, 0.0])
    s = hypersurface_geometry(dom, theta)
    rho = 1 + 0.1 * 0.36
    assert np.linalg.norm(s.point) == pytest.approx(rho, abs=1e-14)
    assert np.linalg.norm(s.normal) == pytest.approx(1.0, abs=1e-14)
    assert s.normal @ theta > 0.9    # outward


def test_divergence_theorem_links_the_two_code_paths():
    """integral over the exterior of div F equals the inward boundary
    flux of F, for F = x exp(-|x|^2) (no contribution from infinity)."""
    axes = [1.0, 1.2, 0.9]
    dom = DomainSpec.exterior(EllipsoidBoundary(axes))
    rule = sphere_rule(3, 24)

    def div_f(x):
        r2 = float(x @ x)
        return (3.0 - 2.0 * r2) * math.exp(-r2)

    bulk = integrate_exterior(div_f, dom, rule)
    samples = hypersurface_samples(dom, rule)
    flux = math.fsum(
        w * s.area_weight * float(s.point @ s.normal)
        * math.exp(-float(s.point @ s.point))
        for w, s in zip(rule.weights, samples))
    assert bulk.converged
    assert bulk.value == pytest.approx(-flux, abs=2e-7)


def test_boundary_flux_of_position_field():
    """div x = n: boundary flux of x equals n * enclosed volume."""
    axes = [1.0, 1.3, 0.8]
    dom = DomainSpec.exterior(EllipsoidBoundary(axes))
    rule = sphere_rule(3, 24)
    samples = hypersurface_samples(dom, rule)
    flux = math.fsum(w * s.area_weight * float(s.point @ s.normal)
                     for w, s in zip(rule.weights, samples))
    vol = 4.0 / 3.0 * math.pi * float(np.prod(axes))
    assert flux == pytest.approx(3.0 * vol, rel=2e-6)


def test_hypersurface_needs_boundary():
    with pytest.raises(ConfigError):
        hypersurface_geometry(DomainSpec.all_of_rn(3),
                              np.array([1.0, 0.0, 0.0]))
