"""Property-testing harness for the convex-energy criteria and identities.

Each check samples seeded tuples, records the worst signed violation
(lhs - rhs, so anything <= tolerance passes) together with a self-contained
witness, and is replayable bit-for-bit: ``replay(witness)`` rebuilds the
inputs from the witness alone and re-evaluates the same arithmetic.

Check names say what the inequality does: "minmax" is the join/meet split
E(f v g) + E(f ^ g) <= E(f) + E(g); "clamp" is the two-sided band clamp
split E(H_a(f,g)) + E(H_a(g,f)) <= E(f) + E(g); the projection criteria are
the analogous splits through the order-cone and band projections. The
proof-chain checks walk the stepwise argument that reduces the contraction
property of a symmetric energy to those criteria, one energy inequality per
display: fold1 handles single-breakpoint contractions, fold2 the
two-breakpoint ones (one-sided when both kinks share a sign, straddle when
they enclose the origin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import PLFunction, compose, make_phi, negate
from .errors import PreconditionFailed
from .forms import FormInstance, make_form
from .lattice_ops import (
    ConstraintSet,
    h_alpha,
    phi_alpha,
    project_band,
    project_order,
    project_oracle,
    twist_check,
)
from .measure import MeasureSpace, make_field
from .samplers import (
    SuiteConfig,
    check_rng,
    pl_from_witness,
    pl_to_witness,
    sample_alpha,
    sample_contraction,
    sample_field,
)

CRITERIA_NAMES = (
    "minmax",
    "clamp",
    "order_projection",
    "band_projection",
    "symmetry",
)
IDENTITY_NAMES = (
    "identity_halfsum",
    "identity_twist",
    "identity_midpoint",
    "identity_projection_oracle",
)
PROOF_NAMES = (
    "proof_fold1_lattice_split",
    "proof_fold1_clamp_chain",
    "proof_fold1_conclusion",
    "proof_fold2_onesided_clamp_split",
    "proof_fold2_onesided_clamp_chain",
    "proof_fold2_onesided_lattice_split",
    "proof_fold2_onesided_conclusion",
    "proof_fold2_straddle_clamp_split",
    "proof_fold2_straddle_conclusion",
    "proof_fold2_straddle_clamp_split_mirror",
    "proof_fold2_straddle_conclusion_mirror",
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_violation: float
    witness: dict
    n_tested: int
    seed: int
    tolerance: float

    def report_entry(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "n_tested": self.n_tested,
            "witness": self.witness,
        }


def _sweep(name: str, seed: int, n: int, draw, tol: float) -> CheckResult:
    rng = check_rng(seed, name)
    worst = -np.inf
    worst_witness: dict = {}
    for _ in range(n):
        violation, witness = draw(rng)
        if violation > worst:
            worst = violation
            worst_witness = witness
    return CheckResult(name, bool(worst <= tol), float(worst), worst_witness, n, seed, tol)


def _pl_apply(phi: PLFunction, values: np.ndarray) -> np.ndarray:
    return phi(np.asarray(values, dtype=float))


# ---------------------------------------------------------------------------
# violation kernels; used identically by the sweeps and by replay()


def _viol_minmax(form: FormInstance, f: np.ndarray, g: np.ndarray) -> float:
    E = form.energy_of_values
    return E(np.maximum(f, g)) + E(np.minimum(f, g)) - E(f) - E(g)


def _viol_clamp(form: FormInstance, f: np.ndarray, g: np.ndarray, a: float) -> float:
    E = form.energy_of_values
    hfg = np.clip(f, g - a, g + a)
    hgf = np.clip(g, f - a, f + a)
    return E(hfg) + E(hgf) - E(f) - E(g)


def _viol_order_projection(form: FormInstance, f: np.ndarray, g: np.ndarray) -> float:
    E = form.energy_of_values
    d = np.maximum(f - g, 0.0)
    return E(f - 0.5 * d) + E(g + 0.5 * d) - E(f) - E(g)


def _viol_band_projection(
    form: FormInstance, f: np.ndarray, g: np.ndarray, a: float
) -> float:
    E = form.energy_of_values
    t = phi_alpha(f - g, a)
    return E(g + 0.5 * t) + E(f - 0.5 * t) - E(f) - E(g)


def _viol_symmetry(form: FormInstance, f: np.ndarray) -> float:
    E = form.energy_of_values
    return abs(E(-f) - E(f))


def _viol_contraction(form: FormInstance, phi: PLFunction, f: np.ndarray) -> float:
    E = form.energy_of_values
    return E(_pl_apply(phi, f)) - E(f)


_POS_PART = PLFunction((0.0,), (0.0, 1.0), 0.0)  # 0 v id


def _sigma_fold1(x: float) -> PLFunction:
    """Flat, then identity, folded down at x >= 0."""
    return compose(make_phi([x]), _POS_PART)


def _viol_fold1_lattice_split(form: FormInstance, f: np.ndarray, x: float) -> float:
    # join/meet split of the pair (f, sigma o f): the join is 0 v f and the
    # meet is the one-fold contraction applied to f
    E = form.energy_of_values
    return (
        E(_pl_apply(make_phi([x]), f))
        + E(np.maximum(f, 0.0))
        - E(f)
        - E(_pl_apply(_sigma_fold1(x), f))
    )


def _viol_fold1_clamp_chain(form: FormInstance, f: np.ndarray, x: float) -> float:
    # symmetry, then the clamp split at band radius 2x, then symmetry again
    E = form.energy_of_values
    sf = _pl_apply(_sigma_fold1(x), f)
    pf = np.maximum(f, 0.0)
    a, b = E(sf), E(-sf)
    c, d = E(pf), E(-pf)
    return max(2 * a - (a + b), (a + b) - (c + d), (c + d) - 2 * c)


def _viol_fold1_conclusion(form: FormInstance, f: np.ndarray, x: float) -> float:
    E = form.energy_of_values
    return E(_pl_apply(make_phi([x]), f)) - E(f)


def _sigma_fold2_onesided(x1: float, x2: float) -> PLFunction:
    """0 up to x1, then x1 - y, then y + x1 - 2 x2 (for 0 <= x1 < x2)."""
    return PLFunction((x1, x2), (0.0, -1.0, 1.0), 0.0)


def _psi_fold2_onesided(x1: float, x2: float) -> PLFunction:
    return compose(make_phi([x1, x2]), _POS_PART)


def _viol_fold2_onesided_clamp_split(form, f: np.ndarray, x1: float, x2: float) -> float:
    E = form.energy_of_values
    return (
        E(_pl_apply(_psi_fold2_onesided(x1, x2), f))
        + E(np.maximum(f - x1, 0.0))
        - E(np.maximum(f, 0.0))
        - E(_pl_apply(_sigma_fold2_onesided(x1, x2), f))
    )


def _viol_fold2_onesided_clamp_chain(form, f: np.ndarray, x1: float, x2: float) -> float:
    E = form.energy_of_values
    sf = _pl_apply(_sigma_fold2_onesided(x1, x2), f)
    a = E(np.maximum(f - x1, 0.0))
    b = E(np.minimum(x1 - f, 0.0))
    c, d = E(sf), E(-sf)
    return max((a + b) - 2 * a, (c + d) - (a + b), 2 * c - (c + d))


def _viol_fold2_onesided_lattice_split(form, f: np.ndarray, x1: float, x2: float) -> float:
    E = form.energy_of_values
    return (
        E(_pl_apply(make_phi([x1, x2]), f))
        + E(np.maximum(f, 0.0))
        - E(_pl_apply(_psi_fold2_onesided(x1, x2), f))
        - E(f)
    )


def _viol_fold2_conclusion(form, f: np.ndarray, x1: float, x2: float) -> float:
    E = form.energy_of_values
    return E(_pl_apply(make_phi([x1, x2]), f)) - E(f)


def _psi_fold2_straddle(x1: float, x2: float) -> PLFunction:
    """y - 2 x1 below x1, then -y, then the constant -x2 (for x1 < 0 < x2)."""
    return PLFunction((x1, x2), (1.0, -1.0, 0.0), 0.0)


def _viol_fold2_straddle_clamp_split(form, f: np.ndarray, x1: float, x2: float) -> float:
    E = form.energy_of_values
    return (
        E(_pl_apply(make_phi([x1, x2]), f))
        + E(np.minimum(f, x2))
        - E(f)
        - E(_pl_apply(_psi_fold2_straddle(x1, x2), f))
    )


def _viol_identity_halfsum(
    weights: list, f: np.ndarray, g: np.ndarray, a: float
) -> float:
    space = MeasureSpace(weights)
    ff, gg = make_field(space, f), make_field(space, g)
    p1 = project_band(ff, gg, a)[0]
    p2 = project_band(gg, ff, a)[1]
    h = h_alpha(ff, gg, a)
    return float(
        np.max(np.abs(h.values - (0.5 * p1.values + 0.5 * p2.values)))
    )


def _viol_identity_twist(
    weights: list, f: np.ndarray, g: np.ndarray, a: float, t: float, s: float
) -> float:
    space = MeasureSpace(weights)
    return max(twist_check(make_field(space, f), make_field(space, g), a, t, s))


def _viol_identity_midpoint(
    weights: list, f: np.ndarray, g: np.ndarray, a: float
) -> float:
    space = MeasureSpace(weights)
    ff, gg = make_field(space, f), make_field(space, g)
    h = h_alpha(ff, gg, a)
    k = h_alpha(gg, ff, a)
    u_half = 0.5 * (ff.values + h.values)
    v_half = 0.5 * (gg.values + k.values)
    p1, p2 = project_band(ff, gg, a)
    return float(
        max(np.max(np.abs(u_half - p1.values)), np.max(np.abs(v_half - p2.values)))
    )


def _viol_identity_projection_oracle(
    weights: list, f: np.ndarray, g: np.ndarray, a: float
) -> float:
    space = MeasureSpace(weights)
    ff, gg = make_field(space, f), make_field(space, g)
    worst = 0.0
    for closed, oracle in (
        (project_order(ff, gg), project_oracle(ConstraintSet.order(), ff, gg)),
        (project_band(ff, gg, a), project_oracle(ConstraintSet.band(a), ff, gg)),
    ):
        for c, o in zip(closed, oracle):
            worst = max(worst, float(np.max(np.abs(c.values - o.values))))
    return worst


# ---------------------------------------------------------------------------
# checks


def check_criteria(form: FormInstance, cfg: SuiteConfig) -> list[CheckResult]:
    """The lattice, clamp, projection and symmetry criteria on seeded tuples."""
    desc = form.descriptor()
    space = form.space
    results = []

    def fg(rng):
        return (
            sample_field(rng, space, cfg.fields).values,
            sample_field(rng, space, cfg.fields).values,
        )

    def draw_minmax(rng):
        f, g = fg(rng)
        wit = {"check": "minmax", "form": desc, "f": f.tolist(), "g": g.tolist()}
        return _viol_minmax(form, f, g), wit

    def draw_clamp(rng):
        f, g = fg(rng)
        a = sample_alpha(rng)
        wit = {
            "check": "clamp",
            "form": desc,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
        }
        return _viol_clamp(form, f, g, a), wit

    def draw_order_projection(rng):
        f, g = fg(rng)
        wit = {
            "check": "order_projection",
            "form": desc,
            "f": f.tolist(),
            "g": g.tolist(),
        }
        return _viol_order_projection(form, f, g), wit

    def draw_band_projection(rng):
        f, g = fg(rng)
        a = sample_alpha(rng)
        wit = {
            "check": "band_projection",
            "form": desc,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
        }
        return _viol_band_projection(form, f, g, a), wit

    def draw_symmetry(rng):
        f = sample_field(rng, space, cfg.fields).values
        wit = {"check": "symmetry", "form": desc, "f": f.tolist()}
        return _viol_symmetry(form, f), wit

    draws = {
        "minmax": draw_minmax,
        "clamp": draw_clamp,
        "order_projection": draw_order_projection,
        "band_projection": draw_band_projection,
        "symmetry": draw_symmetry,
    }
    for name in CRITERIA_NAMES:
        results.append(
            _sweep(name, cfg.seed, cfg.n_samples, draws[name], cfg.criteria_tol)
        )
    return results


def check_normal_contraction(form: FormInstance, cfg: SuiteConfig) -> CheckResult:
    """Worst E(phi o f) - E(f) over sampled contractions and fields.

    -id and id are always the first two contractions in the sample set, so a
    symmetry violation surfaces here as well.
    """
    desc = form.descriptor()
    forced = [negate(make_phi([])), make_phi([])]
    count = 0

    def draw(rng):
        nonlocal count
        if count < len(forced):
            phi = forced[count]
        else:
            phi = sample_contraction(rng, cfg.contractions)
        count += 1
        f = sample_field(rng, form.space, cfg.fields).values
        wit = {
            "check": "normal_contraction",
            "form": desc,
            "phi": pl_to_witness(phi),
            "f": f.tolist(),
        }
        return _viol_contraction(form, phi, f), wit

    return _sweep(
        "normal_contraction", cfg.seed, cfg.n_samples, draw, cfg.contraction_tol
    )


def run_proof_chain(
    form: FormInstance,
    cfg: SuiteConfig,
    criteria: list[CheckResult] | None = None,
) -> list[CheckResult]:
    """Every displayed inequality of the stepwise contraction argument.

    Requires a form that passes the criteria including symmetry. The straddle
    displays are sampled both under the stated assumption x2 > -x1 and under
    the mirrored configuration x2 < -x1 (recorded separately).
    """
    if criteria is None:
        criteria = check_criteria(form, cfg)
    failing = [c.name for c in criteria if not c.passed]
    if failing:
        raise PreconditionFailed(
            f"proof chain needs the criteria to pass; failing: {failing}"
        )
    desc = form.descriptor()
    space = form.space
    amp = cfg.fields.amplitude
    results = []

    def draw_x(rng, idx: int) -> float:
        if idx == 0:
            return 0.0  # degenerate branch is always exercised
        return float(rng.uniform(0.0, 2.0 * amp))

    def fold1_draw(kernel, name):
        count = 0

        def draw(rng):
            nonlocal count
            x = draw_x(rng, count)
            count += 1
            f = sample_field(rng, space, cfg.fields).values
            wit = {"check": name, "form": desc, "f": f.tolist(), "x": x}
            return kernel(form, f, x), wit

        return draw

    def onesided_params(rng) -> tuple[float, float]:
        x1 = 0.0 if rng.random() < 0.15 else float(rng.uniform(0.0, amp))
        x2 = x1 + float(rng.uniform(0.05, amp))
        return x1, x2

    def straddle_params(rng, mirrored: bool) -> tuple[float, float]:
        x2 = float(rng.uniform(0.05, amp))
        if mirrored:
            x1 = -x2 * float(rng.uniform(1.05, 3.0))
        else:
            x1 = -x2 * float(rng.uniform(0.02, 0.98))
        return x1, x2

    def pair_draw(kernel, name, params):
        def draw(rng):
            x1, x2 = params(rng)
            f = sample_field(rng, space, cfg.fields).values
            wit = {
                "check": name,
                "form": desc,
                "f": f.tolist(),
                "x1": x1,
                "x2": x2,
            }
            return kernel(form, f, x1, x2), wit

        return draw

    plan = [
        (_viol_fold1_lattice_split, "proof_fold1_lattice_split", None),
        (_viol_fold1_clamp_chain, "proof_fold1_clamp_chain", None),
        (_viol_fold1_conclusion, "proof_fold1_conclusion", None),
        (_viol_fold2_onesided_clamp_split, "proof_fold2_onesided_clamp_split", onesided_params),
        (_viol_fold2_onesided_clamp_chain, "proof_fold2_onesided_clamp_chain", onesided_params),
        (_viol_fold2_onesided_lattice_split, "proof_fold2_onesided_lattice_split", onesided_params),
        (_viol_fold2_conclusion, "proof_fold2_onesided_conclusion", onesided_params),
        (_viol_fold2_straddle_clamp_split, "proof_fold2_straddle_clamp_split",
         lambda r: straddle_params(r, False)),
        (_viol_fold2_conclusion, "proof_fold2_straddle_conclusion",
         lambda r: straddle_params(r, False)),
        (_viol_fold2_straddle_clamp_split, "proof_fold2_straddle_clamp_split_mirror",
         lambda r: straddle_params(r, True)),
        (_viol_fold2_conclusion, "proof_fold2_straddle_conclusion_mirror",
         lambda r: straddle_params(r, True)),
    ]
    for kernel, name, params in plan:
        if params is None:
            draw = fold1_draw(kernel, name)
        else:
            draw = pair_draw(kernel, name, params)
        results.append(_sweep(name, cfg.seed, cfg.n_samples, draw, cfg.proof_tol))
    return results


def check_identities(
    cfg: SuiteConfig, space: MeasureSpace | None = None
) -> list[CheckResult]:
    """Form-independent identity checks over random (f, g, alpha, t, s).

    identity_halfsum implements the literal half-sum relation
    H_a(f,g) = P1_{2,a}(f,g)/2 + P2_{2,a}(g,f)/2, which is false off the band
    (both right-hand components equal (f + H_a(f,g))/2); it is kept as a
    first-class check and is expected to report a violation. identity_twist
    samples the simplex t + s <= 1, the exact domain on which the twist
    relation holds (it fails for t + s > 1).
    """
    if space is None:
        space = MeasureSpace(np.ones(7))
    weights = space.weights.tolist()
    results = []

    def fga(rng):
        f = sample_field(rng, space, cfg.fields).values
        g = sample_field(rng, space, cfg.fields).values
        return f, g, sample_alpha(rng)

    def draw_halfsum(rng):
        f, g, a = fga(rng)
        wit = {
            "check": "identity_halfsum",
            "weights": weights,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
        }
        return _viol_identity_halfsum(weights, f, g, a), wit

    forced_ts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5)]
    count = 0

    def draw_twist(rng):
        nonlocal count
        f, g, a = fga(rng)
        if count < len(forced_ts):
            t, s = forced_ts[count]
        else:
            t, s = rng.uniform(0.0, 1.0, 2)
            if t + s > 1.0:  # reflect onto the valid simplex
                t, s = 1.0 - t, 1.0 - s
        count += 1
        t, s = float(t), float(s)
        wit = {
            "check": "identity_twist",
            "weights": weights,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
            "t": t,
            "s": s,
        }
        return _viol_identity_twist(weights, f, g, a, t, s), wit

    def draw_midpoint(rng):
        f, g, a = fga(rng)
        wit = {
            "check": "identity_midpoint",
            "weights": weights,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
        }
        return _viol_identity_midpoint(weights, f, g, a), wit

    def draw_oracle(rng):
        f, g, a = fga(rng)
        wit = {
            "check": "identity_projection_oracle",
            "weights": weights,
            "f": f.tolist(),
            "g": g.tolist(),
            "alpha": a,
        }
        return _viol_identity_projection_oracle(weights, f, g, a), wit

    draws = {
        "identity_halfsum": draw_halfsum,
        "identity_twist": draw_twist,
        "identity_midpoint": draw_midpoint,
        "identity_projection_oracle": draw_oracle,
    }
    for name in IDENTITY_NAMES:
        results.append(
            _sweep(name, cfg.seed, cfg.n_samples, draws[name], cfg.identity_tol)
        )
    return results


def counterexample_demo() -> CheckResult:
    """The decreasing ramp on the positive-part grid integrand.

    E(f) = 0 and E(-f) = 1 for f_i = -i/10 on 11 nodes with h = 0.1, so the
    contraction phi = -id raises the energy; passed is False by design and
    the witness replays to the exact violation.
    """
    form = make_form(
        {
            "kind": "local_grid_1d",
            "nodes": 11,
            "h": 0.1,
            "integrand": {"name": "max_positive_part"},
        }
    )
    f = -np.arange(11) / 10.0
    e_f = form.energy_of_values(f)
    e_neg = form.energy_of_values(-f)
    witness = {
        "check": "normal_contraction",
        "form": form.descriptor(),
        "phi": pl_to_witness(negate(make_phi([]))),
        "f": f.tolist(),
        "energy_f": e_f,
        "energy_neg_f": e_neg,
    }
    violation = _viol_contraction(form, negate(make_phi([])), f)
    return CheckResult(
        "counterexample_max_positive_part",
        False,
        float(violation),
        witness,
        1,
        0,
        0.0,
    )


# ---------------------------------------------------------------------------
# replay

_FORM_KERNELS = {
    "minmax": lambda form, w: _viol_minmax(form, np.asarray(w["f"]), np.asarray(w["g"])),
    "clamp": lambda form, w: _viol_clamp(
        form, np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"]
    ),
    "order_projection": lambda form, w: _viol_order_projection(
        form, np.asarray(w["f"]), np.asarray(w["g"])
    ),
    "band_projection": lambda form, w: _viol_band_projection(
        form, np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"]
    ),
    "symmetry": lambda form, w: _viol_symmetry(form, np.asarray(w["f"])),
    "normal_contraction": lambda form, w: _viol_contraction(
        form, pl_from_witness(w["phi"]), np.asarray(w["f"])
    ),
    "proof_fold1_lattice_split": lambda form, w: _viol_fold1_lattice_split(
        form, np.asarray(w["f"]), w["x"]
    ),
    "proof_fold1_clamp_chain": lambda form, w: _viol_fold1_clamp_chain(
        form, np.asarray(w["f"]), w["x"]
    ),
    "proof_fold1_conclusion": lambda form, w: _viol_fold1_conclusion(
        form, np.asarray(w["f"]), w["x"]
    ),
    "proof_fold2_onesided_clamp_split": lambda form, w: _viol_fold2_onesided_clamp_split(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_onesided_clamp_chain": lambda form, w: _viol_fold2_onesided_clamp_chain(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_onesided_lattice_split": lambda form, w: _viol_fold2_onesided_lattice_split(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_onesided_conclusion": lambda form, w: _viol_fold2_conclusion(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_straddle_clamp_split": lambda form, w: _viol_fold2_straddle_clamp_split(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_straddle_conclusion": lambda form, w: _viol_fold2_conclusion(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_straddle_clamp_split_mirror": lambda form, w: _viol_fold2_straddle_clamp_split(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
    "proof_fold2_straddle_conclusion_mirror": lambda form, w: _viol_fold2_conclusion(
        form, np.asarray(w["f"]), w["x1"], w["x2"]
    ),
}

_IDENTITY_KERNELS = {
    "identity_halfsum": lambda w: _viol_identity_halfsum(
        w["weights"], np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"]
    ),
    "identity_twist": lambda w: _viol_identity_twist(
        w["weights"], np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"], w["t"], w["s"]
    ),
    "identity_midpoint": lambda w: _viol_identity_midpoint(
        w["weights"], np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"]
    ),
    "identity_projection_oracle": lambda w: _viol_identity_projection_oracle(
        w["weights"], np.asarray(w["f"]), np.asarray(w["g"]), w["alpha"]
    ),
}


def replay(witness: dict) -> float:
    """Re-evaluate the violation a witness records, bit-for-bit."""
    check = witness["check"]
    if check in _FORM_KERNELS:
        return _FORM_KERNELS[check](make_form(witness["form"]), witness)
    if check in _IDENTITY_KERNELS:
        return _IDENTITY_KERNELS[check](witness)
    raise ValueError(f"unknown check {check!r} in witness")
