"""Non-bilinear Dirichlet forms on finite measure spaces.

Convex energies over weighted point sets, the piecewise-linear normal
contraction algebra with its two-breakpoint factorisation, explicit lattice
and projection operators, implicit-Euler gradient flows, and a seeded
property-testing harness for the order/contraction criteria.
"""

from .contraction import (
    ContractionClass,
    PLFunction,
    classify,
    compose,
    decompose,
    envelope,
    eval_pl,
    identity_pl,
    is_normal_contraction,
    make_phi,
    negate,
    recompose,
)
from .errors import (
    BadSpec,
    BadWeight,
    EmptySpace,
    InconsistentSamples,
    NoConvergence,
    NotAlternating,
    NotIncreasing,
    PreconditionFailed,
    SpaceMismatch,
)
from .flow import (
    FlowConfig,
    FlowTrace,
    evolve,
    exact_graph_resolvent,
    prox_certificate,
    prox_step,
    trace_to_csv,
)
from .forms import (
    Energy,
    FormInstance,
    GraphQuadratic,
    LocalGrid1D,
    NonlocalPsi,
    ScalarPiece,
    SymmetryReport,
    eval_form,
    is_symmetric_sampled,
    make_form,
)
from .lattice_ops import (
    ConstraintSet,
    h_alpha,
    inf,
    phi_alpha,
    project_band,
    project_oracle,
    project_order,
    sup,
    twist_check,
)
from .measure import (
    Field,
    MeasureSpace,
    l2_norm,
    leq,
    linf_norm,
    make_field,
    make_space,
)
from .samplers import (
    ContractionSamplerSpec,
    FieldSamplerSpec,
    SuiteConfig,
    check_rng,
    sample_alpha,
    sample_contraction,
    sample_field,
)
from .verifier import (
    CheckResult,
    check_criteria,
    check_identities,
    check_normal_contraction,
    counterexample_demo,
    replay,
    run_proof_chain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
