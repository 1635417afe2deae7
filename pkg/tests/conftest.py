"""Shared fixtures: catalog maps and random-jet generators.

The m=2 catalog maps are chosen so the normal bundle genuinely curves
(S_perp != 0 away from symmetry points); they exercise every
codimension-specific term.  Randomised checks use seeded generators so
failures reproduce.
"""

import numpy as np
import pytest

from graphmass import Jet2, spec_from_dict


def catalog_m2_specs():
    """Three n=3, m=2 maps with non-flat normal bundle."""
    a = spec_from_dict(["exp(-(x1^2 + x2^2 + x3^2))",
                        "x1 * exp(-(x1^2 + x2^2 + x3^2))"], 3)
    b = spec_from_dict(["x2 * exp(-(x1^2 + x2^2 + x3^2))",
                        "x1 * x3 * exp(-(x1^2 + x2^2 + x3^2))"], 3)
    c = spec_from_dict(["exp(-((x1 - 0.3)^2 + x2^2 + (x3 + 0.2)^2))",
                        "x1 * x2 * exp(-(x1^2 + x2^2 + x3^2))"], 3)
    return [a, b, c]


@pytest.fixture(scope="session")
def m2_catalog():
    return catalog_m2_specs()


def random_jet(rng, n, m, scale=1.0) -> Jet2:
    """Random 2-jet with exactly symmetric second derivatives."""
    d1 = scale * rng.standard_normal((m, n))
    d2 = scale * rng.standard_normal((m, n, n))
    d2 = 0.5 * (d2 + d2.transpose(0, 2, 1))
    return Jet2(n, m, rng.standard_normal(m), d1, d2)


def random_d3(rng, n, m, scale=1.0) -> np.ndarray:
    """Random third derivatives, fully symmetric in the spatial slots."""
    t = scale * rng.standard_normal((m, n, n, n))
    out = np.zeros_like(t)
    for perm in [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3),
                 (0, 2, 3, 1), (0, 3, 1, 2), (0, 3, 2, 1)]:
        out += t.transpose(perm)
    return out / 6.0


def random_points(rng, count, n, r_min, r_max) -> np.ndarray:
    """Points with radii uniform in [r_min, r_max], random directions."""
    dirs = rng.standard_normal((count, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(r_min, r_max, size=count)
    return dirs * radii[:, None]
