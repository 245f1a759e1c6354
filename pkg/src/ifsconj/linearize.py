"""Linearization machinery: linear parts, Koenigs conjugacies, decay bounds
and the asymptotic fate of mixed contracting/expanding orbit sequences.

The neighborhood conjugacy of a nonlinear contraction to its linear part is
computed by the Koenigs limit h(x) = lim lam**(-n) f^n(x) with lam = f'(0),
tabulated on a symmetric grid and interpolated monotonically. The expansive
case runs the same limit on the numeric inverse map (whose slope at zero is
the reciprocal) and yields the same h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import intervals
from .catalog import KIND_LINEAR, KIND_LIPSCHITZ, ScalarMap, linear
from .defaults import FATE_MARGIN
from .errors import (
    ConvergenceFailureError,
    HypothesisError,
    NonHyperbolicError,
    NotFixedPointError,
    WrongCaseError,
)
from .conjugacy import TabulatedHomeomorphism
from .ifs import IfsDescriptor, orbit_trajectory
from .rootfind import monotone_inverse_batch
from .sequences import SymbolSequence

CASE_SAME_INTERVAL = "case1-same-interval"
CASE_MIXED_RATIO = "case2-mixed-signs-ratio"
CASE_INAPPLICABLE = "inapplicable"

FATE_CONVERGES = "converges-to-zero"
FATE_DIVERGES = "diverges"
FATE_UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class LinearPartResult:
    linear_ifs: IfsDescriptor
    interval_tags: tuple[str, ...]
    hg_case: str

    @property
    def slopes(self) -> np.ndarray:
        return np.array([m.k for m in self.linear_ifs.maps])


def linear_part(F: IfsDescriptor, fixed_point_tol: float = 1e-12) -> LinearPartResult:
    """Linear IFS of the slopes at zero, with the applicable analysis case.

    Every map must fix the origin; slopes of magnitude exactly 0 or 1 are
    rejected as non-hyperbolic.
    """
    slopes = []
    for i, m in enumerate(F.maps):
        v = float(m(0.0))
        if abs(v) > fixed_point_tol:
            raise NotFixedPointError(
                f"map {i + 1} does not fix the origin: f(0) = {v:g}"
            )
        s = m.slope_at_zero
        if s == 0.0 or abs(s) == 1.0:
            raise NonHyperbolicError(
                f"map {i + 1} has boundary slope {s} at the origin"
            )
        slopes.append(s)
    tags = tuple(intervals.classify_slope_interval(s) for s in slopes)
    if len(set(tags)) == 1:
        case = CASE_SAME_INTERVAL
    elif len({s > 0 for s in slopes}) == 1:
        case = CASE_MIXED_RATIO
    else:
        case = CASE_INAPPLICABLE
    lin = IfsDescriptor(
        tuple(linear(s) for s in slopes),
        label=(F.label + "-linear-part") if F.label else "linear-part",
    )
    return LinearPartResult(lin, tags, case)


def koenigs_conjugacy(
    f: ScalarMap,
    neighborhood_radius: float = 0.5,
    depth: int = 256,
    nodes: int = 2049,
    stop_tol: float = 1e-13,
    fail_tol: float = 1e-10,
) -> TabulatedHomeomorphism:
    """Tabulated conjugacy of f to its linear part x -> f'(0) x near zero.

    Iterates lam**(-n) f^n on the node grid until successive tables agree to
    stop_tol; an expansive f (|f'(0)| > 1) is handled by iterating the
    numeric inverse of f instead, which produces the identical limit.
    """
    lam = f.slope_at_zero
    if abs(float(f(0.0))) > 1e-12:
        raise NotFixedPointError("Koenigs linearization needs f(0) = 0")
    if lam == 0.0 or abs(lam) == 1.0:
        raise NonHyperbolicError(f"slope {lam} at the origin is not hyperbolic")
    r = float(neighborhood_radius)
    if not r > 0:
        raise ValueError("neighborhood radius must be positive")
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError("nodes must be an odd count >= 3 so the grid contains 0")

    expansive = abs(lam) > 1.0
    if expansive:
        def step(y):
            inv, valid = monotone_inverse_batch(f, y, -r, r, machine_precision=True)
            if not valid.all():
                raise ConvergenceFailureError("inverse iteration left the bracket")
            return inv

        lam_eff = 1.0 / lam
    else:
        step = f
        lam_eff = lam

    xs = np.linspace(-r, r, nodes)
    y = xs.copy()
    lam_pow = 1.0
    h = xs.copy()
    diff = math.inf
    for _ in range(depth):
        y = np.asarray(step(y), dtype=float)
        lam_pow *= lam_eff
        h_next = y / lam_pow
        diff = float(np.max(np.abs(h_next - h)))
        h = h_next
        if diff <= stop_tol:
            break
    if diff > fail_tol:
        raise ConvergenceFailureError(
            f"Koenigs iteration still moving by {diff:.3e} at depth {depth}",
            residual=diff,
        )
    h[nodes // 2] = 0.0
    if not np.all(np.diff(h) > 0):
        raise ConvergenceFailureError("tabulated conjugacy is not strictly monotone")
    return TabulatedHomeomorphism(xs, h)


@dataclass(frozen=True)
class DecayBoundResult:
    orbit_value: float
    bound: float
    holds: bool
    contraction_factor: float


def decay_bound_check(
    F: IfsDescriptor, sigma: SymbolSequence, n: int, x: float
) -> DecayBoundResult:
    """Check |F_sigma_n(x)| < k**n |x| with k = max_i (|k_i| + eps_i).

    Maps must be linear or linear-plus-Lipschitz with |k_i| + eps_i < 1 and
    all linear coefficients of one sign; the strict inequality is tested
    with a 1e-12 cushion so the x = 0 equality counts as holding.
    """
    budgets = []
    signs = set()
    for i, m in enumerate(F.maps):
        if m.kind not in (KIND_LINEAR, KIND_LIPSCHITZ):
            raise HypothesisError(
                f"map {i + 1} of kind {m.kind!r} has no declared Lipschitz budget"
            )
        if m.k == 0.0:
            raise HypothesisError(f"map {i + 1} has zero linear coefficient")
        b = m.lipschitz_budget
        if b >= 1.0:
            raise HypothesisError(
                f"map {i + 1} violates the contraction hypothesis: "
                f"|k| + eps = {b:g} >= 1"
            )
        budgets.append(b)
        signs.add(m.k > 0)
    if len(signs) > 1:
        raise HypothesisError("linear coefficients must all share one sign")
    k = max(budgets)
    traj = orbit_trajectory(F, sigma, n, x)
    value = abs(float(traj[-1]))
    bound = k**n * abs(x)
    return DecayBoundResult(value, bound, value < bound + 1e-12, k)


@dataclass(frozen=True, eq=False)
class SequenceFateReport:
    """Trajectory statistics for a mixed contracting/expanding IFS.

    predicted_fate follows the averaged log-slope of the linear part with a
    +-margin dead band; a prefix that never uses an expanding index is
    reported undetermined (the count ratio is degenerate there).
    """

    ns: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    ratio_trajectory: np.ndarray
    orbit_f_abs: np.ndarray
    orbit_g_abs: np.ndarray
    bound: np.ndarray
    lyapunov_sum: float
    predicted_fate: str
    margin: float = FATE_MARGIN

    @property
    def orbit_samples(self):
        return list(zip(self.ns.tolist(), self.orbit_f_abs.tolist()))


def classify_sequence_fate(
    F: IfsDescriptor,
    sigma: SymbolSequence,
    n_max: int,
    x0: float,
    epsilon: float,
) -> SequenceFateReport:
    """Ratio/decay analysis along sigma for a case-2 IFS.

    Tracks n1 (contracting symbols), n2 (expanding symbols), the orbit of F
    and of its linear part, and the envelope
    (A1 + eps)**n1 * (A2 + eps)**n2 * |x0| with A1, A2 the extreme slope
    magnitudes of each group. Orbit magnitudes of the linear part are
    computed in log space, so very long products degrade gracefully to
    0 or inf instead of over/underflowing midway.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lp = linear_part(F)
    if lp.hg_case != CASE_MIXED_RATIO:
        raise WrongCaseError(
            f"sequence-fate analysis needs a mixed-magnitude IFS, got {lp.hg_case}"
        )
    slopes = lp.slopes
    contracting = np.abs(slopes) < 1.0
    for i, s in enumerate(slopes):
        if contracting[i] and abs(s) + epsilon >= 1.0:
            raise HypothesisError(
                f"epsilon {epsilon:g} too large: |{s:g}| + eps >= 1"
            )
        if not contracting[i] and abs(s) - epsilon <= 1.0:
            raise HypothesisError(
                f"epsilon {epsilon:g} too large: |{s:g}| - eps <= 1"
            )

    syms = sigma.prefix(n_max)
    sym_contracts = contracting[syms - 1]
    ns = np.arange(1, n_max + 1)
    n1 = np.cumsum(sym_contracts)
    n2 = ns - n1
    with np.errstate(divide="ignore"):
        ratio = np.where(n2 > 0, n1 / np.maximum(n2, 1), np.inf)

    log_slopes = np.log(np.abs(slopes))
    log_g = np.cumsum(log_slopes[syms - 1])
    orbit_g = np.exp(log_g) * abs(x0)

    a1 = float(np.max(np.abs(slopes[contracting])))
    a2 = float(np.max(np.abs(slopes[~contracting])))
    log_bound = n1 * math.log(a1 + epsilon) + n2 * math.log(a2 + epsilon)
    with np.errstate(over="ignore"):
        bound = np.exp(log_bound) * abs(x0)

    with np.errstate(over="ignore"):
        orbit_f = np.abs(orbit_trajectory(F, sigma, n_max, x0))

    lyap = float(log_g[-1] / n_max)
    if n2[-1] == 0:
        fate = FATE_UNDETERMINED
    elif lyap < -FATE_MARGIN:
        fate = FATE_CONVERGES
    elif lyap > FATE_MARGIN:
        fate = FATE_DIVERGES
    else:
        fate = FATE_UNDETERMINED
    return SequenceFateReport(
        ns=ns,
        n1=n1.astype(np.int64),
        n2=n2.astype(np.int64),
        ratio_trajectory=ratio,
        orbit_f_abs=orbit_f,
        orbit_g_abs=orbit_g,
        bound=bound,
        lyapunov_sum=lyap,
        predicted_fate=fate,
    )
