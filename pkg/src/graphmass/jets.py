"""Second-order jets of maps f: R^n -> R^m and their specifications.

A :class:`Jet2` is the pointwise data (f, Df, D^2 f) that all of the
graph geometry consumes.  Maps are described by small declarative
specifications (:class:`FunctionSpec` subclasses) that know how to
produce exact jets: closed forms for the built-in catalog, dual-number
forward propagation for parsed expressions.  ``fd_jet`` recomputes the
same jet from function values alone by central differences and serves
as the independent cross-check.

Domains of integration are described by :class:`DomainSpec`: either all
of R^n or the exterior of a star-shaped region whose boundary is the
radial graph ``{rho(theta) theta}`` over the unit sphere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import exprparse
from .duals import Dual2, dual_sqrt, variables
from .errors import ConfigError, DomainError

__all__ = [
    "Jet2", "FunctionSpec", "ZeroSpec", "LinearSpec", "SchwarzschildSpec",
    "GaussianBumpSpec", "RadialProfileSpec", "ExpressionSpec", "SumSpec",
    "VectorSpec", "RotatedSpec", "eval_jet", "fd_jet", "parse_expression",
    "rotate_target", "spec_from_dict", "DomainSpec", "BallBoundary",
    "EllipsoidBoundary", "RadialExpressionBoundary", "domain_from_dict",
]

# relative safety margin kept between evaluation points and the
# coordinate sphere where the Schwarzschild graph ceases to be defined
HORIZON_GUARD = 1e-9

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


# ---------------------------------------------------------------------------
# jets


@dataclass
class Jet2:
    """Value, first and second derivatives of a map at one point.

    ``value[a]`` is f^a, ``d1[a, i]`` is df^a/dx_i and ``d2[a, i, j]``
    the symmetric second derivative d^2 f^a / dx_i dx_j.
    """

    n: int
    m: int
    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def __post_init__(self):
        self.value = np.asarray(self.value, dtype=float).reshape(self.m)
        self.d1 = np.asarray(self.d1, dtype=float).reshape(self.m, self.n)
        self.d2 = np.asarray(self.d2, dtype=float).reshape(
            self.m, self.n, self.n)
        if not (np.isfinite(self.value).all() and np.isfinite(self.d1).all()
                and np.isfinite(self.d2).all()):
            raise DomainError("jet contains non-finite entries")
        asym = np.max(np.abs(self.d2 - self.d2.swapaxes(1, 2)))
        scale = max(1.0, float(np.max(np.abs(self.d2))))
        if asym > 1e-12 * scale:
            raise ValueError("second derivatives are not symmetric")

    @classmethod
    def zero(cls, n: int, m: int) -> "Jet2":
        return cls(n, m, np.zeros(m), np.zeros((m, n)), np.zeros((m, n, n)))


def _radial_jet(n: int, x: np.ndarray, r: float, val: float, d: float,
                dd: float) -> Jet2:
    """Jet of f(x) = phi(|x|) from the profile derivatives at r = |x|."""
    if r == 0.0:
        if d != 0.0:
            raise DomainError("radial profile has a corner at the origin")
        return Jet2(n, 1, np.array([val]), np.zeros((1, n)),
                    dd * np.eye(n)[None, :, :])
    u = x / r
    uu = np.outer(u, u)
    d2 = dd * uu + (d / r) * (np.eye(n) - uu)
    return Jet2(n, 1, np.array([val]), (d * u)[None, :], d2[None, :, :])


# ---------------------------------------------------------------------------
# function specifications


class FunctionSpec:
    """Base class: a declarative description of a map R^n -> R^m."""

    kind = "abstract"
    n: int
    m: int

    def jet(self, x: np.ndarray) -> Jet2:
        raise NotImplementedError

    def value(self, x: np.ndarray) -> np.ndarray:
        # subclasses with a cheaper value-only path override this
        return self.jet(x).value

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()!r})"


class ZeroSpec(FunctionSpec):
    kind = "zero"

    def __init__(self, n: int, m: int = 1):
        self.n, self.m = int(n), int(m)

    def jet(self, x):
        return Jet2.zero(self.n, self.m)

    def value(self, x):
        return np.zeros(self.m)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "m": self.m}


class LinearSpec(FunctionSpec):
    """f(x) = L x for a constant m-by-n coefficient matrix L."""

    kind = "linear"

    def __init__(self, matrix):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        self.m, self.n = self.matrix.shape

    def jet(self, x):
        return Jet2(self.n, self.m, self.matrix @ x, self.matrix.copy(),
                    np.zeros((self.m, self.n, self.n)))

    def value(self, x):
        return self.matrix @ x

    def to_dict(self):
        return {"kind": self.kind, "matrix": self.matrix.tolist()}


class SchwarzschildSpec(FunctionSpec):
    """Radial graph whose induced metric is the spatial Schwarzschild
    metric of the given mass: 1 + phi'(r)^2 = (1 - 2 m r^(2-n))^(-1).

    Defined for r >= r0 (1 + guard) with r0 = (2m)^(1/(n-2)).  The
    profile value is the integral of phi' from r0, evaluated lazily by
    adaptive quadrature with the endpoint square-root singularity
    removed by substitution.
    """

    kind = "schwarzschild_radial"

    def __init__(self, n: int, mass: float):
        if n < 3:
            raise ConfigError("schwarzschild_radial needs n >= 3")
        if not mass > 0:
            raise ConfigError("schwarzschild_radial needs mass > 0")
        self.n, self.m = int(n), 1
        self.mass = float(mass)
        self.r0 = (2.0 * self.mass) ** (1.0 / (self.n - 2))
        self._value_cache: dict[float, float] = {}

    def _w(self, r: float) -> float:
        return 2.0 * self.mass * r ** (2 - self.n)

    def _pfac(self, r: float) -> float:
        # r^(n-2) - r0^(n-2) = (r - r0) * pfac(r), stable near r0
        return math.fsum(r ** k * self.r0 ** (self.n - 3 - k)
                         for k in range(self.n - 2))

    def dprofile(self, r: float) -> float:
        return math.sqrt(2.0 * self.mass / ((r - self.r0) * self._pfac(r)))

    def _check_radius(self, r: float) -> None:
        if r < self.r0 * (1.0 + HORIZON_GUARD):
            raise DomainError(
                f"point at radius {r!r} is inside the graph's inner "
                f"boundary r0 = {self.r0!r}")

    def profile(self, r: float) -> float:
        self._check_radius(r)
        cached = self._value_cache.get(r)
        if cached is not None:
            return cached
        # substitute s = r0 + u^2; the integrand 2 u phi'(r0 + u^2) is
        # analytic on [0, T].  Fixed-node Gauss-Legendre panels keep the
        # value a smooth function of r, which finite differencing of
        # the profile relies on; adaptive quadrature would not.
        top = math.sqrt(r - self.r0)
        cuts = [0.0]
        step = min(1.0, top)
        while cuts[-1] + step < top:
            cuts.append(cuts[-1] + step)
            step *= 2.0
        cuts.append(top)
        # with s = r0 + u^2 the u's cancel: integrand 2 sqrt(2m / P(s))
        # where s^(n-2) - r0^(n-2) = (s - r0) P(s); smooth everywhere
        val = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
            u = mid + half * _GL_NODES
            s = self.r0 + u * u
            p = sum(s ** k * self.r0 ** (self.n - 3 - k)
                    for k in range(self.n - 2))
            val += half * float(np.sum(
                _GL_WEIGHTS * 2.0 * np.sqrt(2.0 * self.mass / p)))
        self._value_cache[r] = val
        return val

    def jet(self, x):
        r = float(np.linalg.norm(x))
        self._check_radius(r)
        d = self.dprofile(r)
        dd = ((2 - self.n) * math.sqrt(self.mass / 2.0) * r ** (self.n - 3)
              / ((r - self.r0) * self._pfac(r)) ** 1.5)
        return _radial_jet(self.n, np.asarray(x, float), r, self.profile(r),
                           d, dd)

    def value(self, x):
        return np.array([self.profile(float(np.linalg.norm(x)))])

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "mass": self.mass}


class GaussianBumpSpec(FunctionSpec):
    """f(x) = amplitude * exp(-width |x - center|^2)."""

    kind = "gaussian_bump"

    def __init__(self, n: int, amplitude: float = 1.0, width: float = 1.0,
                 center=None):
        self.n, self.m = int(n), 1
        self.amplitude = float(amplitude)
        self.width = float(width)
        if not self.width > 0:
            raise ConfigError("gaussian_bump needs width > 0")
        self.center = (np.zeros(self.n) if center is None
                       else np.asarray(center, dtype=float).reshape(self.n))

    def jet(self, x):
        y = np.asarray(x, float) - self.center
        f = self.amplitude * math.exp(-self.width * float(y @ y))
        d1 = (-2.0 * self.width * f) * y
        d2 = f * (4.0 * self.width ** 2 * np.outer(y, y)
                  - 2.0 * self.width * np.eye(self.n))
        return Jet2(self.n, 1, np.array([f]), d1[None, :], d2[None, :, :])

    def value(self, x):
        y = np.asarray(x, float) - self.center
        return np.array([self.amplitude * math.exp(-self.width * float(y @ y))])

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "amplitude": self.amplitude,
                "width": self.width, "center": self.center.tolist()}


class RadialProfileSpec(FunctionSpec):
    """f(x) = phi(|x|) for a one-variable profile expression in ``r``.

    The profile must be twice differentiable where it is evaluated; at
    the origin this requires phi'(0) = 0.  ``r_min > 0`` restricts the
    domain to the exterior of that radius.
    """

    kind = "radial_profile"

    def __init__(self, n: int, profile: str, r_min: float = 0.0):
        self.n, self.m = int(n), 1
        self.profile_text = profile
        self.r_min = float(r_min)
        # the parser speaks x1..xN; accept r as the documented alias
        normalized = re.sub(r"\br\b", "x1", profile)
        self._tree, _ = exprparse.parse_tree(normalized, 1)

    def _profile_jet(self, r: float) -> Dual2:
        return exprparse.eval_tree(self._tree, [Dual2.variable(r, 0, 1)])

    def jet(self, x):
        x = np.asarray(x, float)
        r = float(np.linalg.norm(x))
        if r < self.r_min:
            raise DomainError(f"radius {r!r} is below r_min = {self.r_min!r}")
        p = self._profile_jet(r)
        return _radial_jet(self.n, x, r, p.val, float(p.grad[0]),
                           float(p.hess[0, 0]))

    def value(self, x):
        r = float(np.linalg.norm(np.asarray(x, float)))
        if r < self.r_min:
            raise DomainError(f"radius {r!r} is below r_min = {self.r_min!r}")
        out = exprparse.eval_tree(self._tree, [r])
        return np.array([float(out)])

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "profile": self.profile_text,
                "r_min": self.r_min}


class ExpressionSpec(FunctionSpec):
    """Scalar map given by a coordinate expression in x1..xN."""

    kind = "expression"

    def __init__(self, text: str, n: int | None = None):
        self.text = text
        tree, n_used = exprparse.parse_tree(text, n)
        self._tree = tree
        self.n = int(n) if n is not None else max(n_used, 1)
        self.m = 1

    def jet(self, x):
        x = np.asarray(x, float)
        out = exprparse.eval_tree(self._tree, variables(x))
        if not isinstance(out, Dual2):            # constant expression
            out = Dual2.constant(float(out), self.n)
        return Jet2(self.n, 1, np.array([out.val]), out.grad[None, :],
                    out.hess[None, :, :])

    def value(self, x):
        out = exprparse.eval_tree(self._tree, [float(c) for c in x])
        return np.array([float(out)])

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "text": self.text}


class SumSpec(FunctionSpec):
    """Pointwise sum of maps with identical source and target."""

    kind = "sum"

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            raise ConfigError("sum needs at least one part")
        self.n, self.m = parts[0].n, parts[0].m
        for p in parts:
            if (p.n, p.m) != (self.n, self.m):
                raise ConfigError("sum parts must share n and m")
        self.parts = parts

    def jet(self, x):
        jets = [p.jet(x) for p in self.parts]
        return Jet2(self.n, self.m,
                    sum(j.value for j in jets),
                    sum(j.d1 for j in jets),
                    sum(j.d2 for j in jets))

    def value(self, x):
        return sum(p.value(x) for p in self.parts)

    def to_dict(self):
        return {"kind": self.kind, "parts": [p.to_dict() for p in self.parts]}


class VectorSpec(FunctionSpec):
    """Vector-valued map assembled from scalar component specs."""

    kind = "vector"

    def __init__(self, components):
        components = list(components)
        if not components:
            raise ConfigError("vector map needs at least one component")
        self.n = components[0].n
        for c in components:
            if c.m != 1:
                raise ConfigError("vector components must be scalar maps")
            if c.n != self.n:
                raise ConfigError("vector components must share n")
        self.m = len(components)
        self.components = components

    def jet(self, x):
        jets = [c.jet(x) for c in self.components]
        return Jet2(self.n, self.m,
                    np.concatenate([j.value for j in jets]),
                    np.concatenate([j.d1 for j in jets], axis=0),
                    np.concatenate([j.d2 for j in jets], axis=0))

    def value(self, x):
        return np.concatenate([c.value(x) for c in self.components])

    def to_dict(self):
        return [c.to_dict() for c in self.components]


class RotatedSpec(FunctionSpec):
    """Composition Q o f with an orthogonal matrix acting on the target.

    Used to exercise invariance of the geometry under isometries of the
    ambient normal directions.
    """

    kind = "rotated"

    def __init__(self, base: FunctionSpec, q):
        q = np.asarray(q, dtype=float)
        if q.shape != (base.m, base.m):
            raise ConfigError("rotation must be m-by-m")
        if np.max(np.abs(q @ q.T - np.eye(base.m))) > 1e-10:
            raise ConfigError("rotation matrix is not orthogonal")
        self.base = base
        self.q = q
        self.n, self.m = base.n, base.m

    def jet(self, x):
        j = self.base.jet(x)
        return Jet2(self.n, self.m, self.q @ j.value, self.q @ j.d1,
                    np.einsum("ab,bij->aij", self.q, j.d2))

    def value(self, x):
        return self.q @ self.base.value(x)

    def to_dict(self):
        return {"kind": self.kind, "q": self.q.tolist(),
                "base": self.base.to_dict()}


def rotate_target(spec: FunctionSpec, q) -> FunctionSpec:
    return RotatedSpec(spec, q)


# ---------------------------------------------------------------------------
# entry points


def eval_jet(spec: FunctionSpec, x) -> Jet2:
    """Exact jet of the specified map at ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.n,):
        raise ConfigError(f"point has shape {x.shape}, expected ({spec.n},)")
    return spec.jet(x)


def fd_jet(spec: FunctionSpec, x, h: float | None = None) -> Jet2:
    """Jet recomputed from function values by central differences.

    Default step ``max(1e-5, 1e-5 |x|)``.  Truncation is O(h^2); the
    second-derivative entries additionally carry the usual eps/h^2
    rounding floor, so very small steps do not help them.
    """
    x = np.asarray(x, dtype=float)
    n, m = spec.n, spec.m
    if h is None:
        h = max(1e-5, 1e-5 * float(np.linalg.norm(x)))
    f0 = spec.value(x)
    plus = np.empty((n, m))
    minus = np.empty((n, m))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        plus[i] = spec.value(x + e)
        minus[i] = spec.value(x - e)
    d1 = (plus - minus).T / (2.0 * h)
    d2 = np.empty((m, n, n))
    for i in range(n):
        d2[:, i, i] = (plus[i] - 2.0 * f0 + minus[i]) / (h * h)
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            cross = (spec.value(x + ei + ej) - spec.value(x + ei - ej)
                     - spec.value(x - ei + ej) + spec.value(x - ei - ej))
            d2[:, i, j] = d2[:, j, i] = cross / (4.0 * h * h)
    return Jet2(n, m, f0, d1, d2)


def parse_expression(text: str, n: int | None = None) -> ExpressionSpec:
    """Parse a scalar coordinate expression into a function spec."""
    return ExpressionSpec(text, n)


def spec_from_dict(obj, n: int | None = None, path: str = "function"
                   ) -> FunctionSpec:
    """Build a FunctionSpec from its JSON form.

    A JSON list denotes a vector-valued map whose entries are scalar
    specs (typically expressions); a dict is a single catalog entry.
    """
    if isinstance(obj, str):
        obj = {"kind": "expression", "text": obj}
    if isinstance(obj, list):
        return VectorSpec([
            spec_from_dict(o, n, f"{path}[{i}]") for i, o in enumerate(obj)])
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object, list or string")
    kind = obj.get("kind")
    try:
        if kind == "zero":
            return ZeroSpec(_geti(obj, "n", path, n), int(obj.get("m", 1)))
        if kind == "linear":
            return LinearSpec(obj["matrix"])
        if kind == "schwarzschild_radial":
            return SchwarzschildSpec(_geti(obj, "n", path, n),
                                     float(obj["mass"]))
        if kind == "gaussian_bump":
            return GaussianBumpSpec(_geti(obj, "n", path, n),
                                    float(obj.get("amplitude", 1.0)),
                                    float(obj.get("width", 1.0)),
                                    obj.get("center"))
        if kind == "radial_profile":
            return RadialProfileSpec(_geti(obj, "n", path, n),
                                     str(obj["profile"]),
                                     float(obj.get("r_min", 0.0)))
        if kind == "expression":
            return ExpressionSpec(str(obj["text"]),
                                  obj.get("n", n))
        if kind == "sum":
            return SumSpec([spec_from_dict(o, n, f"{path}.parts[{i}]")
                            for i, o in enumerate(obj["parts"])])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing field {exc.args[0]!r} for "
                          f"kind {kind!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}: unknown function kind {kind!r}")


def _geti(obj, key, path, fallback):
    value = obj.get(key, fallback)
    if value is None:
        raise ConfigError(f"{path}: field {key!r} is required")
    return int(value)


# ---------------------------------------------------------------------------
# domains


class _Boundary:
    """Star-shaped boundary, the radial graph rho over the unit sphere.

    ``rho_hat_jet`` evaluates the degree-0 homogeneous extension
    rho(x/|x|) together with its exact gradient and Hessian, which is
    all the hypersurface geometry needs.
    """

    shape = "abstract"

    def _dual_rho(self, u):
        raise NotImplementedError

    def rho_hat_jet(self, x) -> Dual2:
        x = np.asarray(x, dtype=float)
        r2 = float(x @ x)
        if r2 == 0.0:
            raise DomainError("boundary radius is undefined at the origin")
        xs = variables(x)
        rinv = dual_sqrt(sum(c * c for c in xs))._reciprocal()
        u = [c * rinv for c in xs]
        return self._dual_rho(u)

    def rho(self, theta) -> float:
        return self.rho_hat_jet(theta).val

    def max_rho(self) -> float:
        rng = np.random.default_rng(20240817)
        dirs = rng.normal(size=(256, self.n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return max(self.rho(d) for d in dirs)

    def validate(self) -> None:
        rng = np.random.default_rng(11)
        dirs = rng.normal(size=(64, self.n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for d in dirs:
            if not self.rho(d) > 0.0:
                raise ConfigError("boundary radius must be positive")


class BallBoundary(_Boundary):
    shape = "ball"

    def __init__(self, n: int, radius: float):
        if not radius > 0:
            raise ConfigError("ball radius must be positive")
        self.n = int(n)
        self.radius = float(radius)

    def _dual_rho(self, u):
        return Dual2.constant(self.radius, self.n)

    def rho(self, theta):
        return self.radius

    def max_rho(self):
        return self.radius

    def validate(self):
        pass

    def to_dict(self):
        return {"shape": self.shape, "radius": self.radius}


class EllipsoidBoundary(_Boundary):
    """Boundary sum(x_i^2 / a_i^2) = 1 with semi-axes a_i."""

    shape = "ellipsoid"

    def __init__(self, semi_axes):
        self.semi_axes = np.asarray(semi_axes, dtype=float)
        if self.semi_axes.ndim != 1 or not np.all(self.semi_axes > 0):
            raise ConfigError("semi_axes must be a vector of positive reals")
        self.n = self.semi_axes.shape[0]

    def _dual_rho(self, u):
        s = sum((c * c) * float(1.0 / a ** 2)
                for c, a in zip(u, self.semi_axes))
        return dual_sqrt(s)._reciprocal()

    def max_rho(self):
        return float(np.max(self.semi_axes))

    def to_dict(self):
        return {"shape": self.shape, "semi_axes": self.semi_axes.tolist()}


class RadialExpressionBoundary(_Boundary):
    """rho given as an expression in the direction components x1..xN.

    The expression is evaluated on the unit vector x/|x|, so it may be
    written without worrying about homogeneity; sampled radius tables
    can be realised by fitting any smooth positive interpolant and
    supplying it here.
    """

    shape = "radial_expression"

    def __init__(self, n: int, text: str):
        self.n = int(n)
        self.text = text
        self._tree, _ = exprparse.parse_tree(text, self.n)
        self.validate()

    def _dual_rho(self, u):
        out = exprparse.eval_tree(self._tree, u)
        if not isinstance(out, Dual2):
            out = Dual2.constant(float(out), self.n)
        return out

    def to_dict(self):
        return {"shape": self.shape, "text": self.text}


@dataclass
class DomainSpec:
    """Region of integration: all of R^n or the exterior of a star set."""

    kind: str
    n: int
    boundary: _Boundary | None = None

    @classmethod
    def all_of_rn(cls, n: int) -> "DomainSpec":
        return cls("all_of_Rn", int(n), None)

    @classmethod
    def exterior(cls, boundary: _Boundary) -> "DomainSpec":
        return cls("exterior_of_star_shaped", boundary.n, boundary)

    def rho(self, theta) -> float:
        if self.boundary is None:
            return 0.0
        return self.boundary.rho(theta)

    def max_rho(self) -> float:
        if self.boundary is None:
            return 0.0
        return self.boundary.max_rho()

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.boundary is not None:
            out["boundary"] = self.boundary.to_dict()
        return out


def domain_from_dict(obj, n: int, path: str = "domain") -> DomainSpec:
    if obj is None:
        return DomainSpec.all_of_rn(n)
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    kind = obj.get("kind", "all_of_Rn")
    if kind == "all_of_Rn":
        return DomainSpec.all_of_rn(n)
    if kind != "exterior_of_star_shaped":
        raise ConfigError(f"{path}: unknown domain kind {kind!r}")
    b = obj.get("boundary")
    if not isinstance(b, dict):
        raise ConfigError(f"{path}.boundary: required for exterior domains")
    shape = b.get("shape")
    try:
        if shape == "ball":
            boundary = BallBoundary(n, float(b["radius"]))
        elif shape == "ellipsoid":
            boundary = EllipsoidBoundary(b["semi_axes"])
            if boundary.n != n:
                raise ConfigError(
                    f"{path}.boundary: semi_axes has length {boundary.n}, "
                    f"expected {n}")
        elif shape == "radial_expression":
            boundary = RadialExpressionBoundary(n, str(b["text"]))
        else:
            raise ConfigError(f"{path}.boundary: unknown shape {shape!r}")
    except KeyError as exc:
        raise ConfigError(f"{path}.boundary: missing field "
                          f"{exc.args[0]!r}") from exc
    boundary.validate()
    return DomainSpec.exterior(boundary)
