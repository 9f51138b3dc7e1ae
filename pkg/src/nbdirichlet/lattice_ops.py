"""Pointwise lattice and projection operators on pairs of fields.

Provides the lattice join/meet, the band clamp H_alpha(f, g) = (g-a) v f ^ (g+a),
the scalar soft-band map phi_alpha, the closed-form metric projections onto the
order cone {f <= g} and the band {|f-g| <= a}, an independent analytic projection
oracle, and the twist-condition residuals used by the identity checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpaceMismatch
from .measure import Field, check_same_space, linf_norm


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if not np.isfinite(a) or a < 0.0:
        raise ValueError("alpha must be a finite nonnegative number")
    return a


@dataclass(frozen=True)
class ConstraintSet:
    """Order cone C1 = {f <= g} or band C2,a = {|f-g| <= a}."""

    kind: str  # "order" | "band"
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in ("order", "band"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "band":
            object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        elif self.alpha is not None:
            raise ValueError("the order cone takes no alpha")

    @classmethod
    def order(cls) -> "ConstraintSet":
        return cls("order")

    @classmethod
    def band(cls, alpha: float) -> "ConstraintSet":
        return cls("band", alpha)


def sup(f: Field, g: Field) -> Field:
    """Pointwise maximum f v g."""
    check_same_space(f, g)
    return Field(f.space, np.maximum(f.values, g.values))


def inf(f: Field, g: Field) -> Field:
    """Pointwise minimum f ^ g."""
    check_same_space(f, g)
    return Field(f.space, np.minimum(f.values, g.values))


def h_alpha(f: Field, g: Field, alpha: float) -> Field:
    """Clamp f into the band of radius alpha around g: (g-a) v f ^ (g+a).

    At alpha = 0 this is g everywhere (the middle case applies only where f=g).
    """
    check_same_space(f, g)
    a = _check_alpha(alpha)
    return Field(f.space, np.clip(f.values, g.values - a, g.values + a))


def phi_alpha(z, alpha: float):
    """Scalar soft-band map ((z+a) v 0) + ((z-a) ^ 0); odd, 2-Lipschitz."""
    a = _check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    out = np.maximum(z + a, 0.0) + np.minimum(z - a, 0.0)
    return float(out) if out.ndim == 0 else out


def project_order(f: Field, g: Field) -> tuple[Field, Field]:
    """Metric projection of (f, g) onto the order cone {f <= g}.

    Closed form: both components move by half the positive part of f-g.
    """
    check_same_space(f, g)
    d = np.maximum(f.values - g.values, 0.0)
    return (
        Field(f.space, f.values - 0.5 * d),
        Field(f.space, g.values + 0.5 * d),
    )


def project_band(f: Field, g: Field, alpha: float) -> tuple[Field, Field]:
    """Metric projection of (f, g) onto the band {|f-g| <= alpha}.

    Closed form (g + phi_a(f-g)/2, f - phi_a(f-g)/2); inside the band the
    pair is returned unchanged since phi_a(z) = 2z there.
    """
    check_same_space(f, g)
    t = phi_alpha(f.values - g.values, alpha)
    return (
        Field(f.space, g.values + 0.5 * t),
        Field(f.space, f.values - 0.5 * t),
    )


def project_oracle(
    constraint: ConstraintSet, f: Field, g: Field
) -> tuple[Field, Field]:
    """Pointwise planar projection computed without the closed-form operators.

    Order cone: keep (a, b) if a <= b, else send both to the midpoint.
    Band: keep if |a-b| <= alpha, else shrink the difference to +/-alpha
    symmetrically, preserving a+b.
    """
    check_same_space(f, g)
    a = f.values
    b = g.values
    if constraint.kind == "order":
        mid = 0.5 * (a + b)
        keep = a <= b
        return (
            Field(f.space, np.where(keep, a, mid)),
            Field(f.space, np.where(keep, b, mid)),
        )
    alpha = constraint.alpha
    mid = 0.5 * (a + b)
    diff = a - b
    keep = np.abs(diff) <= alpha
    half = 0.5 * alpha * np.sign(diff)
    return (
        Field(f.space, np.where(keep, a, mid + half)),
        Field(f.space, np.where(keep, b, mid - half)),
    )


def twist_check(
    u: Field, v: Field, alpha: float, t: float, s: float
) -> tuple[float, float]:
    """Residuals of the twist conditions for the band clamp.

    With h(u,v) = H_a(u,v), k(u,v) = H_a(v,u), u_t = (1-t)u + t h(u,v) and
    v_s = (1-s)v + s k(u,v), returns
    (||H_a(u_t, v_s) - u_{1-s}||_inf, ||H_a(v_s, u_t) - v_{1-t}||_inf);
    both vanish identically.
    """
    check_same_space(u, v)
    a = _check_alpha(alpha)
    t = float(t)
    s = float(s)
    if not (0.0 <= t <= 1.0 and 0.0 <= s <= 1.0):
        raise ValueError("t and s must lie in [0, 1]")
    huv = h_alpha(u, v, a)
    hvu = h_alpha(v, u, a)

    def u_at(tt: float) -> Field:
        return Field(u.space, (1.0 - tt) * u.values + tt * huv.values)

    def v_at(ss: float) -> Field:
        return Field(u.space, (1.0 - ss) * v.values + ss * hvu.values)

    ut = u_at(t)
    vs = v_at(s)
    res_h = linf_norm(h_alpha(ut, vs, a) - u_at(1.0 - s))
    res_k = linf_norm(h_alpha(vs, ut, a) - v_at(1.0 - t))
    return res_h, res_k
