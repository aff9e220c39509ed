"""Spectral gap and interpolation toolkit for unions of intervals.

Core objects: ``SpectrumSet`` (finite unions of closed intervals) with
modular projection and periodic-gap tests, Gram matrices of exponential
systems with certified minimum-eigenvalue frame bounds, high-precision
approximation blocks, flattening polynomials with sup-norm certificates,
window-pair interpolation kernels, Neumann contraction solves, and
Monte Carlo progression mining in random gap sequences.  The ``service``
subpackage exposes every pipeline over HTTP; ``sgl.cli`` is a thin
client around it.
"""

from .errors import (
    BudgetExceeded,
    ConfigError,
    ContainmentViolation,
    DegenerateTranslates,
    HypothesisViolated,
    IllConditioned,
    InvalidArity,
    InvalidInterval,
    InvalidTrials,
    NoCertificate,
    NonInterpolating,
    NotContraction,
    OutOfRange,
    SglError,
    SpectrumMismatch,
    StepsDependent,
)
from .spectra import (
    GammaRepresentation,
    GapReport,
    Interval,
    SpectrumSet,
    format_spectrum_literal,
    from_gamma,
    gap_report,
    normalize,
    parse_spectrum_literal,
    project,
)
from .exponentials import (
    ExpPolynomial,
    FrameReport,
    FrequencySet,
    GramMatrix,
    frame_report,
    gram,
    pair_integral,
    quadratic_form,
)
from .blocks import (
    Block,
    BlockBuild,
    BlockSchedule,
    PartitionZ,
    build_blocks,
    partition_blocks,
    residual,
    residual_many,
)
from .uniqueness import (
    LambdaSet,
    build_lambda,
    density_report,
    perturbed_integers,
    star_discrepancy,
    vdc_alphas,
)
from .periodize import (
    DecayingSignal,
    PiecewiseConstantTransform,
    fejer_signal,
    periodized_coefficients,
    periodized_l2,
    poisson_gap_series,
    sobolev_norm,
    tent_signal,
    uniqueness_diagnostic,
    windowed_poly_signal,
)
from .flatten import (
    FlatteningCertificate,
    PropertyCAnchors,
    WindowPair,
    audit_sup,
    certify_sup,
    choose_steps,
    dirichlet_poly,
    flattening_poly,
    interpolator_kernel,
    least_norm_interpolant,
    neumann_interpolate,
    neumann_problem,
    progression_gamma,
    property_c_anchors,
    separation_rho,
    window_pair,
)
from .randspec import (
    MCReport,
    ProgressionHit,
    RandomGammaSample,
    build_interpolation_spectrum,
    find_progressions,
    mc_hit_probability,
    sample_gamma,
)

__version__ = "0.1.0"
