"""Numerical construction and verification of topological conjugacies for
iterated function systems on the line and for diagonal families on R^m.

Public surface, by area:

catalog     closed map catalog with exact derivatives
sequences   symbol sequence generators (explicit, periodic, Bernoulli, sparse)
ifs         orbit composition and slope products
conjugacy   fundamental-domain conjugacies and grid verification
linearize   linear parts, Koenigs neighborhood conjugacy, decay and fate
multidim    componentwise and similarity conjugacies on R^m
stability   C0/C1 map distances, family distance, hyperbolicity audit, probe
attractor   chaos-game sampling
cli         the ifsconj command
"""

__version__ = "0.1.0"

from .attractor import AffineMap, AttractorSample, chaos_game
from .catalog import (
    Perturbation,
    ScalarMap,
    derivative_at,
    estimate_lipschitz,
    linear,
    linear_plus_lipschitz,
    rational_bump,
    sine_bump,
    smooth,
)
from .conjugacy import (
    BRIDGE_LINEAR,
    BRIDGE_POWER_LAW,
    CompositeHomeomorphism,
    ConjugacyReport,
    FeasibilityReport,
    FundamentalDomainConjugacy,
    Homeomorphism1D,
    PowerLawHomeomorphism,
    TabulatedHomeomorphism,
    build_linear_conjugacy,
    evaluate,
    identity,
    invert,
    same_interval_test,
    verify_conjugacy,
    weak_conjugacy_linear,
)
from .ifs import IfsDescriptor, compose_orbit, effective_slope, orbit_trajectory
from .intervals import classify_slope_interval
from .linearize import (
    DecayBoundResult,
    LinearPartResult,
    SequenceFateReport,
    classify_sequence_fate,
    decay_bound_check,
    koenigs_conjugacy,
    linear_part,
)
from .multidim import (
    ComponentwiseHomeomorphism,
    DiagonalMap,
    LinearChangeOfBasis,
    SimilarityIfs,
    SimilarityResidual,
    componentwise_conjugacy,
    componentwise_residual,
    diag_compose,
    similarity_conjugacy,
)
from .sequences import (
    BernoulliSequence,
    ExplicitSequence,
    PeriodicSequence,
    SparseDensitySequence,
    SymbolSequence,
    count_symbols,
)
from .stability import (
    HyperbolicityAudit,
    IfsDistanceReport,
    MetricReport,
    ProbeReport,
    compare_maps,
    hyperbolicity_audit,
    ifs_distance,
    paired_rho1_max,
    perturbation_probe,
    rho0,
    rho1,
)
