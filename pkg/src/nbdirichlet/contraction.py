"""The algebra of piecewise-linear 1-Lipschitz functions on the real line.

A ``PLFunction`` is stored canonically as strictly increasing breakpoints, one
slope per interval with no two adjacent slopes equal, and the value at 0. The
module builds the alternating-slope family F_k (slopes +1, -1, ... starting at
+1, anchored to 0 at 0), composes piecewise-linear functions exactly, factors
any F_k element into two-breakpoint pieces, and approximates arbitrary
contractions through lower Lipschitz envelopes of sampled values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InconsistentSamples, NotAlternating, NotIncreasing

_MERGE_TOL = 1e-12  # breakpoints closer than this (relative) are one kink
_SLOPE_TOL = 1e-9   # slack allowed before |slope| <= 1 is declared violated


def _snap_slope(s: float) -> float:
    for target in (-1.0, 0.0, 1.0):
        if s != target and abs(s - target) <= 1e-12:
            return target
    return s


@dataclass(frozen=True)
class PLFunction:
    """Canonical piecewise-linear function with slopes in [-1, 1].

    ``slopes[i]`` applies on (breakpoints[i-1], breakpoints[i]) with the
    conventions breakpoints[-1] = -inf, breakpoints[len] = +inf; ``anchor`` is
    the value at x = 0. Construction merges adjacent equal slopes and rejects
    non-increasing breakpoints or slopes beyond magnitude 1.
    """

    breakpoints: tuple[float, ...]
    slopes: tuple[float, ...]
    anchor: float = 0.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        slopes = tuple(float(s) for s in self.slopes)
        if any(not np.isfinite(b) for b in bps):
            raise NotIncreasing("breakpoints must be finite")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise NotIncreasing("breakpoints must be strictly increasing")
        if len(slopes) != len(bps) + 1:
            raise ValueError("need exactly one slope per interval")
        if any(abs(s) > 1.0 + _SLOPE_TOL for s in slopes):
            raise ValueError("slope magnitude exceeds 1: not a contraction carrier")
        slopes = tuple(min(1.0, max(-1.0, s)) for s in slopes)
        if not np.isfinite(self.anchor):
            raise ValueError("anchor value must be finite")
        # canonical form: drop breakpoints between equal adjacent slopes
        keep_bps: list[float] = []
        keep_slopes: list[float] = [slopes[0]]
        for b, s in zip(bps, slopes[1:]):
            if s == keep_slopes[-1]:
                continue
            keep_bps.append(b)
            keep_slopes.append(s)
        object.__setattr__(self, "breakpoints", tuple(keep_bps))
        object.__setattr__(self, "slopes", tuple(keep_slopes))
        object.__setattr__(self, "anchor", float(self.anchor))

    @cached_property
    def _bp_arr(self) -> np.ndarray:
        return np.asarray(self.breakpoints, dtype=float)

    @cached_property
    def _slope_arr(self) -> np.ndarray:
        return np.asarray(self.slopes, dtype=float)

    @cached_property
    def _rel(self) -> np.ndarray:
        """Values at breakpoints relative to the first breakpoint."""
        bps = self._bp_arr
        if bps.size == 0:
            return np.zeros(0)
        rel = np.empty(bps.size)
        rel[0] = 0.0
        if bps.size > 1:
            rel[1:] = np.cumsum(self._slope_arr[1:-1] * np.diff(bps))
        return rel

    @cached_property
    def _rel0(self) -> float:
        return float(self._rel_at(np.zeros(1))[0])

    def _rel_at(self, x: np.ndarray) -> np.ndarray:
        bps = self._bp_arr
        if bps.size == 0:
            return self.slopes[0] * x
        idx = np.searchsorted(bps, x, side="right")
        j = np.clip(idx - 1, 0, bps.size - 1)
        return self._rel[j] + self._slope_arr[idx] * (x - bps[j])

    def __call__(self, x):
        """Evaluate at a scalar or an array of points."""
        arr = np.asarray(x, dtype=float)
        out = self.anchor + (self._rel_at(np.atleast_1d(arr)) - self._rel0)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def slope_at(self, x: float) -> float:
        """Slope on the interval containing x (right interval at a kink)."""
        return self.slopes[int(np.searchsorted(self._bp_arr, x, side="right"))]

    def approx_equal(self, other: "PLFunction", tol: float = 1e-12) -> bool:
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        return (
            abs(self.anchor - other.anchor) <= tol
            and all(
                abs(a - b) <= tol * (1.0 + abs(a))
                for a, b in zip(self.breakpoints, other.breakpoints)
            )
            and all(abs(a - b) <= tol for a, b in zip(self.slopes, other.slopes))
        )


@dataclass(frozen=True)
class ContractionClass:
    """Classification tag: F(k), G, GeneralNormal or NotNormal."""

    kind: str  # "F" | "G" | "GeneralNormal" | "NotNormal"
    k: int | None = None

    def __str__(self) -> str:
        return f"F({self.k})" if self.kind == "F" else self.kind


def identity_pl() -> PLFunction:
    return PLFunction((), (1.0,), 0.0)


def negate(phi: PLFunction) -> PLFunction:
    """-phi; used to realize G = {id, -id} o (F0 u F1 u F2)."""
    return PLFunction(phi.breakpoints, tuple(-s for s in phi.slopes), -phi.anchor)


def make_phi(breakpoints) -> PLFunction:
    """The alternating contraction with the given kinks: slope (-1)^i on the
    i-th interval, value 0 at 0. make_phi([]) is the identity."""
    bps = [float(b) for b in breakpoints]
    if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
        raise NotIncreasing("breakpoints must be strictly increasing")
    slopes = tuple(1.0 if i % 2 == 0 else -1.0 for i in range(len(bps) + 1))
    return PLFunction(tuple(bps), slopes, 0.0)


def eval_pl(phi: PLFunction, x):
    """Functional form of PLFunction.__call__."""
    return phi(x)


def is_normal_contraction(phi: PLFunction) -> bool:
    """True iff every |slope| <= 1 (guaranteed by the carrier) and phi(0) = 0."""
    return phi.anchor == 0.0 and all(abs(s) <= 1.0 for s in phi.slopes)


def classify(phi: PLFunction) -> ContractionClass:
    """F(k) for exact alternating +1/-1 slopes starting at +1; G for unit
    slopes with at most two kinks; GeneralNormal for other contractions."""
    if not is_normal_contraction(phi):
        return ContractionClass("NotNormal")
    slopes = phi.slopes
    if all(s == (1.0 if i % 2 == 0 else -1.0) for i, s in enumerate(slopes)):
        return ContractionClass("F", len(phi.breakpoints))
    if all(abs(s) == 1.0 for s in slopes) and len(phi.breakpoints) <= 2:
        return ContractionClass("G")
    return ContractionClass("GeneralNormal")


def _dedupe_sorted(xs: list[float]) -> list[float]:
    out: list[float] = []
    for x in xs:
        if not out or x - out[-1] > _MERGE_TOL * (1.0 + abs(x)):
            out.append(x)
    return out


def compose(outer: PLFunction, inner: PLFunction) -> PLFunction:
    """Exact pointwise composition outer(inner(x)) in canonical form.

    Breakpoints are inner's kinks plus, on every strictly monotone affine
    piece of inner, the preimages of outer's kinks; zero-slope pieces of
    inner map whole intervals to one value and produce no preimages.
    """
    in_bps = list(inner.breakpoints)
    candidates = list(in_bps)
    out_bps = outer.breakpoints
    if out_bps:
        bounds = [-np.inf, *in_bps, np.inf]
        for p in range(len(inner.slopes)):
            s = inner.slopes[p]
            if s == 0.0:
                continue
            lo_x, hi_x = bounds[p], bounds[p + 1]
            ref = hi_x if np.isinf(lo_x) else lo_x
            if np.isinf(ref):  # no breakpoints at all: single affine piece
                ref = 0.0
            v_ref = inner(ref)
            v_lo = -np.inf * s if np.isinf(lo_x) else inner(lo_x)
            v_hi = np.inf * s if np.isinf(hi_x) else inner(hi_x)
            v_min, v_max = min(v_lo, v_hi), max(v_lo, v_hi)
            for b in out_bps:
                if v_min < b < v_max:
                    x = ref + (b - v_ref) / s
                    if lo_x < x < hi_x:
                        candidates.append(x)
    candidates = _dedupe_sorted(sorted(candidates))
    # slopes from representative interior points of each interval
    if candidates:
        reps = (
            [candidates[0] - 1.0]
            + [0.5 * (a + b) for a, b in zip(candidates, candidates[1:])]
            + [candidates[-1] + 1.0]
        )
    else:
        reps = [0.0]
    slopes = tuple(
        _snap_slope(outer.slope_at(inner(r)) * inner.slope_at(r)) for r in reps
    )
    return PLFunction(tuple(candidates), slopes, outer(inner(0.0)))


def recompose(factors: list[PLFunction], residual: PLFunction) -> PLFunction:
    """Rebuild residual o factors[0] o ... o factors[-1] (factors[-1] first)."""
    result = residual
    for fac in factors:
        result = compose(result, fac)
    return result


def _peel(bps: list[float]) -> tuple[tuple[float, float], list[float]]:
    """One reduction step: split off the minimal-gap pair (smallest index on
    ties) and return it with the breakpoints of the outer remainder."""
    gaps = [b2 - b1 for b1, b2 in zip(bps, bps[1:])]
    j = min(range(len(gaps)), key=lambda i: (gaps[i], i))
    xi, xi1 = bps[j], bps[j + 1]
    d = xi1 - xi
    lower = bps[:j]
    upper = bps[j + 2 :]
    if xi1 <= 0.0:
        new = [b + 2.0 * d for b in lower] + upper
    elif xi >= 0.0:
        new = lower + [b - 2.0 * d for b in upper]
    else:
        # inner factor is y-2*xi below xi and y-2*xi1 above xi1
        new = [b - 2.0 * xi for b in lower] + [b - 2.0 * xi1 for b in upper]
    return (xi, xi1), new


def decompose(
    phi: PLFunction, validate: bool = True
) -> tuple[list[PLFunction], PLFunction]:
    """Factor an F_k element into floor(k/2) pieces of F_2 and a residual.

    Returns (factors, residual) with residual in F_0 u F_1 and
    phi = residual o factors[0] o ... o factors[-1] pointwise; factors[-1]
    (the first factor the recursion emits, the minimal-gap pair) is applied
    first. With validate=True the factorisation is checked against the
    composition oracle on a dense grid.
    """
    tag = classify(phi)
    if tag.kind != "F":
        raise NotAlternating(f"decompose needs an F_k input, got {tag}")
    bps = list(phi.breakpoints)
    emitted: list[PLFunction] = []
    while len(bps) >= 3:
        pair, bps = _peel(bps)
        emitted.append(make_phi(pair))
    if len(bps) == 2:
        emitted.append(make_phi(bps))
        residual = identity_pl()
    elif len(bps) == 1:
        residual = make_phi(bps)
    else:
        residual = identity_pl()
    factors = emitted[::-1]
    if validate:
        rebuilt = recompose(factors, residual)
        if phi.breakpoints:
            span = max(phi.breakpoints[-1] - phi.breakpoints[0], 1.0)
            lo, hi = phi.breakpoints[0] - span, phi.breakpoints[-1] + span
        else:
            lo, hi = -1.0, 1.0
        grid = np.linspace(lo, hi, 257)
        err = float(np.max(np.abs(rebuilt(grid) - phi(grid))))
        if err > 1e-9 * (1.0 + max(abs(lo), abs(hi))):
            raise NotAlternating(
                f"factorisation failed oracle validation (max error {err:.3e})"
            )
    return factors, residual


def envelope(samples, radius: float) -> PLFunction:
    """Lower 1-Lipschitz envelope x -> min_i value_i + |x - y_i| on [-R, R].

    ``samples`` is an iterable of (y, value) pairs with distinct y containing
    the origin sample (0, 0) and satisfying |value_i - value_j| <= |y_i - y_j|.
    Outside [-R, R] the result continues with slope -1 on the left and +1 on
    the right, matching the envelope's own behaviour at infinity.
    """
    pts = sorted((float(y), float(v)) for y, v in samples)
    if not pts:
        raise InconsistentSamples("need at least one sample")
    R = float(radius)
    if not np.isfinite(R) or R <= 0.0:
        raise ValueError("radius must be positive and finite")
    ys = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if np.any(np.diff(ys) <= 0.0):
        raise InconsistentSamples("sample positions must be distinct")
    scale = 1.0 + float(np.max(np.abs(ys)))
    slack = 1e-12 * scale
    if np.any(np.abs(np.diff(vs)) > np.diff(ys) + slack):
        raise InconsistentSamples("sample values are not 1-Lipschitz consistent")
    at_zero = np.flatnonzero(ys == 0.0)
    if at_zero.size != 1 or vs[at_zero[0]] != 0.0:
        raise InconsistentSamples("samples must contain the origin pair (0, 0)")

    # prefix/suffix minima give e(x) = min(x + L(x), -x + Rm(x))
    left = np.minimum.accumulate(vs - ys)           # min over y_i <= x of v - y
    right = np.minimum.accumulate((vs + ys)[::-1])[::-1]  # min over y_i >= x

    def env(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(ys, x, side="right") - 1
        up = np.where(idx >= 0, x + left[np.clip(idx, 0, None)], np.inf)
        down = np.where(
            idx + 1 < ys.size, -x + right[np.clip(idx + 1, None, ys.size - 1)], np.inf
        )
        return np.minimum(up, down)

    candidates = [y for y in ys if -R < y < R]
    for i in range(ys.size - 1):  # one descending->ascending switch per gap
        cross = 0.5 * (right[i + 1] - left[i])
        if ys[i] < cross < ys[i + 1] and -R < cross < R:
            candidates.append(float(cross))
    # arms may also cross beyond the outermost samples
    lo_cross = 0.5 * (right[0] - left[0])
    if lo_cross < ys[0] and -R < lo_cross < R:
        candidates.append(float(lo_cross))
    hi_cross = 0.5 * (right[-1] - left[-1])
    if hi_cross > ys[-1] and -R < hi_cross < R:
        candidates.append(float(hi_cross))

    grid = _dedupe_sorted(sorted([-R, *sorted(candidates), R]))
    vals = env(np.asarray(grid))
    inner_slopes = [
        _snap_slope((v2 - v1) / (b2 - b1))
        for (b1, v1), (b2, v2) in zip(zip(grid, vals), zip(grid[1:], vals[1:]))
    ]
    slopes = [-1.0, *inner_slopes, 1.0]
    # anchor 0 pins value 0 at the origin sample; the kink at y=0 keeps the
    # slope integration aligned with env at every grid point
    return PLFunction(tuple(grid), tuple(slopes), 0.0)
