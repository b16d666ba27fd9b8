"""Piecewise-linear membership functions and their centroids."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptyFuzzySetError(ValueError):
    """Raised when a fuzzy set has no area to take a centroid over."""


@dataclass(frozen=True)
class MembershipFunction:
    """Trapezoid ``(a, b, c, d)`` or triangle ``(a, b, c)`` over a scalar universe.

    A triangle is stored as the trapezoid ``(a, b, b, c)`` so that evaluation
    has a single code path; ``points`` keeps the breakpoints as given.
    """

    shape: str
    points: tuple

    def __post_init__(self):
        expected = {"trapezoid": 4, "triangle": 3}
        if self.shape not in expected:
            raise ValueError(f"unknown membership shape {self.shape!r}")
        pts = tuple(float(p) for p in self.points)
        if len(pts) != expected[self.shape]:
            raise ValueError(
                f"{self.shape} needs {expected[self.shape]} breakpoints, got {len(pts)}"
            )
        if not all(math.isfinite(p) for p in pts):
            raise ValueError(f"breakpoints must be finite: {pts}")
        if any(p > q for p, q in zip(pts, pts[1:])):
            raise ValueError(f"breakpoints must be non-decreasing: {pts}")
        object.__setattr__(self, "points", pts)

    @property
    def abcd(self):
        if self.shape == "triangle":
            a, b, c = self.points
            return a, b, b, c
        return self.points

    @property
    def support(self):
        a, _, _, d = self.abcd
        return a, d

    @property
    def core(self):
        """The plateau ``[b, c]`` where the degree is exactly 1."""
        _, b, c, _ = self.abcd
        return b, c

    @property
    def prototype(self):
        """Midpoint of the plateau (the apex for a triangle)."""
        b, c = self.core
        return 0.5 * (b + c)

    def __call__(self, x):
        return membership(self, x)

    def to_dict(self):
        return {"shape": self.shape, "points": list(self.points)}


def trapezoid(a, b, c, d):
    return MembershipFunction("trapezoid", (a, b, c, d))


def triangle(a, b, c):
    return MembershipFunction("triangle", (a, b, c))


def membership(mf, x):
    """Degree of ``x`` in ``mf``; scalar in, float out, array in, array out."""
    a, b, c, d = mf.abcd
    xs = np.asarray(x, dtype=float)
    mu = np.zeros_like(xs)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if b > a:
            rising = (xs > a) & (xs < b)
            mu = np.where(rising, (xs - a) / (b - a), mu)
        if d > c:
            falling = (xs > c) & (xs < d)
            mu = np.where(falling, (d - xs) / (d - c), mu)
    mu = np.where((xs >= b) & (xs <= c), 1.0, mu)
    if mu.ndim == 0:
        return float(mu)
    return mu


def centroid(mf, resolution=1001):
    """Discrete centroid ``sum(x * mu) / sum(mu)`` over the support.

    The support is cut into ``resolution`` equal cells and sampled at the
    cell midpoints, which keeps the estimate within ~1e-5 of the exact area
    centroid even for shoulder sets whose degree is 1 at an endpoint.
    """
    if int(resolution) != resolution or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    lo, hi = mf.support
    if hi <= lo:
        raise EmptyFuzzySetError(f"{mf.shape}{mf.points} has zero area")
    h = (hi - lo) / resolution
    xs = lo + h * (np.arange(resolution) + 0.5)
    mu = membership(mf, xs)
    total = mu.sum()
    if total <= 0.0:
        raise EmptyFuzzySetError(f"{mf.shape}{mf.points} has zero area")
    return float(np.dot(xs, mu) / total)


def uniform_partition(lo, hi, n_labels):
    """Evenly spaced Ruspini partition: shoulder trapezoids at the edges,
    triangles in between.

    The universe is cut into ``n_labels + 1`` equal units. The two edge
    labels own one unit of plateau each and every neighbouring pair crosses
    over one unit, so the degrees sum to 1 everywhere on ``[lo, hi]``.
    """
    if n_labels < 2:
        raise ValueError("a partition needs at least two labels")
    if not hi > lo:
        raise ValueError(f"empty universe [{lo}, {hi}]")
    u = (hi - lo) / (n_labels + 1)
    knots = [lo + u * k for k in range(n_labels + 2)]
    knots[-1] = hi
    mfs = [trapezoid(lo, lo, knots[1], knots[2])]
    for k in range(2, n_labels):
        mfs.append(triangle(knots[k - 1], knots[k], knots[k + 1]))
    mfs.append(trapezoid(knots[-3], knots[-2], hi, hi))
    return mfs
