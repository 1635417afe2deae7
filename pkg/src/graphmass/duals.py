"""Second-order forward-mode dual numbers.

A :class:`Dual2` carries a value, a gradient vector and a Hessian matrix
through arithmetic, i.e. it is a degree-2 truncated Taylor expansion in
``n`` variables.  Propagation is the exact chain rule, so derivatives of
parsed expressions are analytic up to rounding, with no symbolic pass
and no truncation error.

The Hessian stays exactly symmetric: every rule below builds it from
symmetric inputs plus ``outer(u, v) + outer(v, u)`` combinations, whose
floating-point evaluation is symmetric entry by entry.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = ["Dual2", "variables", "lift", "DUAL_FUNCTIONS"]


class Dual2:
    """Value, gradient and Hessian of a scalar quantity in n variables."""

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = float(val)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, c, n: int) -> "Dual2":
        return cls(c, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, value, index: int, n: int) -> "Dual2":
        g = np.zeros(n)
        g[index] = 1.0
        return cls(value, g, np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.val + other.val, self.grad + other.grad,
                         self.hess + other.hess)
        return Dual2(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.val - other.val, self.grad - other.grad,
                         self.hess - other.hess)
        return Dual2(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Dual2(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Dual2):
            cross = np.outer(self.grad, other.grad)
            return Dual2(
                self.val * other.val,
                self.val * other.grad + other.val * self.grad,
                self.val * other.hess + other.val * self.hess
                + cross + cross.T,
            )
        return Dual2(self.val * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def _reciprocal(self) -> "Dual2":
        if self.val == 0.0:
            raise DomainError("division by zero in expression")
        v = 1.0 / self.val
        gg = np.outer(self.grad, self.grad)
        return Dual2(v, -v * v * self.grad,
                     -v * v * self.hess + 2.0 * v ** 3 * gg)

    def __truediv__(self, other):
        if isinstance(other, Dual2):
            return self * other._reciprocal()
        return Dual2(self.val / other, self.grad / other, self.hess / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Dual2):
            # variable exponent: a^b = exp(b log a), needs a > 0
            return dual_exp(p * dual_log(self))
        p = float(p)
        if p == 0.0:
            return Dual2.constant(1.0, self.n)
        v = self.val
        if v < 0.0 and p != round(p):
            raise DomainError("fractional power of a negative base")
        if v == 0.0:
            if p < 0.0:
                raise DomainError("negative power of zero in expression")
            if p == 1.0:
                return Dual2(0.0, self.grad.copy(), self.hess.copy())
            if p < 2.0:
                raise DomainError(
                    f"x^{p} is not twice differentiable at zero")
            ddf = 2.0 if p == 2.0 else 0.0
            return self._chain(0.0, 0.0, ddf)
        return self._chain(v ** p, p * v ** (p - 1.0),
                           p * (p - 1.0) * v ** (p - 2.0))

    def __rpow__(self, base):
        return lift(base, self.n) ** self

    # -- chain rule -----------------------------------------------------

    def _chain(self, f, df, ddf) -> "Dual2":
        """Compose with a scalar function given f, f', f'' at self.val."""
        gg = np.outer(self.grad, self.grad)
        return Dual2(f, df * self.grad, df * self.hess + ddf * gg)

    def __repr__(self):
        return f"Dual2({self.val!r}, grad={self.grad!r})"


def lift(value, n: int) -> Dual2:
    """Coerce a plain number into a constant Dual2 of dimension n."""
    if isinstance(value, Dual2):
        return value
    return Dual2.constant(float(value), n)


def variables(x) -> list[Dual2]:
    """Seed one Dual2 per coordinate of the point ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    return [Dual2.variable(x[i], i, n) for i in range(n)]


def dual_sin(a: Dual2) -> Dual2:
    s, c = math.sin(a.val), math.cos(a.val)
    return a._chain(s, c, -s)


def dual_cos(a: Dual2) -> Dual2:
    s, c = math.sin(a.val), math.cos(a.val)
    return a._chain(c, -s, -c)


def dual_exp(a: Dual2) -> Dual2:
    e = math.exp(a.val)
    return a._chain(e, e, e)


def dual_log(a: Dual2) -> Dual2:
    v = a.val
    if v <= 0.0:
        raise DomainError(f"log applied outside its domain (argument {v!r})")
    return a._chain(math.log(v), 1.0 / v, -1.0 / (v * v))


def dual_sqrt(a: Dual2) -> Dual2:
    v = a.val
    if v <= 0.0:
        raise DomainError(f"sqrt applied outside its domain (argument {v!r})")
    s = math.sqrt(v)
    return a._chain(s, 0.5 / s, -0.25 / (s * v))


def dual_tanh(a: Dual2) -> Dual2:
    t = math.tanh(a.val)
    sech2 = 1.0 - t * t
    return a._chain(t, sech2, -2.0 * t * sech2)


DUAL_FUNCTIONS = {
    "sin": dual_sin,
    "cos": dual_cos,
    "exp": dual_exp,
    "log": dual_log,
    "sqrt": dual_sqrt,
    "tanh": dual_tanh,
}
