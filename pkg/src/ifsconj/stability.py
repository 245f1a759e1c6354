"""C0/C1 distances between maps, cross-pair IFS distances, fixed-point
hyperbolicity audits and an empirical perturbation probe.

All suprema are taken over the working interval [-R, R]. Inverse values
needed by the C0 distance are found by bisection; the bracket expands past
the working interval when the target lies beyond the map's image of it, so
the inverse gap matches the global inverse of the (strictly monotone)
catalog maps.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .catalog import KIND_LIPSCHITZ, Perturbation, ScalarMap
from .conjugacy import same_interval_test, verify_conjugacy, weak_conjugacy_linear
from .defaults import BORDERLINE_TOL, DEFAULT_RADIUS, HYPERBOLIC_TOL
from .errors import (
    ContinuumOfFixedPointsError,
    GenerationError,
    HypothesisError,
    IfsConjError,
    InvertibilityError,
)
from .ifs import IfsDescriptor, effective_slope
from .linearize import linear_part
from .rootfind import monotone_inverse_batch
from .sequences import ExplicitSequence


@dataclass(frozen=True)
class MetricReport:
    rho0: float
    rho1: float
    grid_size: int
    working_interval: tuple[float, float]
    inverse_points_excluded: int


def _check_monotone(f: ScalarMap, radius: float):
    xs = np.linspace(-radius, radius, 1024)
    d = np.asarray(f.derivative(xs), dtype=float)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise InvertibilityError(
            "map is not strictly monotone on the working interval"
        )


def _inverse_gap(f, g, ys: np.ndarray, radius: float):
    xf, vf = monotone_inverse_batch(f, ys, -radius, radius)
    xg, vg = monotone_inverse_batch(g, ys, -radius, radius)
    ok = vf & vg
    gap = float(np.max(np.abs(xf[ok] - xg[ok]))) if ok.any() else 0.0
    return gap, int((~ok).sum())


def compare_maps(
    f: ScalarMap, g: ScalarMap, grid_size: int = 1001, radius: float = DEFAULT_RADIUS
) -> MetricReport:
    """Both distance levels in one pass, with the excluded-point count."""
    _check_monotone(f, radius)
    _check_monotone(g, radius)
    xs = np.linspace(-radius, radius, grid_size)
    value_gap = float(np.max(np.abs(np.asarray(f(xs)) - np.asarray(g(xs)))))
    inv_gap, excluded = _inverse_gap(f, g, xs, radius)
    r0 = max(value_gap, inv_gap)
    deriv_gap = float(np.max(np.abs(np.asarray(f.derivative(xs)) - np.asarray(g.derivative(xs)))))
    return MetricReport(r0, r0 + deriv_gap, grid_size, (-radius, radius), excluded)


def rho0(f: ScalarMap, g: ScalarMap, grid_size: int = 1001, radius: float = DEFAULT_RADIUS) -> float:
    """Max over the grid of the value gap and the inverse-value gap."""
    return compare_maps(f, g, grid_size, radius).rho0


def rho1(f: ScalarMap, g: ScalarMap, grid_size: int = 1001, radius: float = DEFAULT_RADIUS) -> float:
    """rho0 plus the max derivative gap over the grid."""
    return compare_maps(f, g, grid_size, radius).rho1


@dataclass(frozen=True)
class IfsDistanceReport:
    d0: float | None
    d1: float | None
    argmax_pair: tuple[int, int] | None
    identical: bool


def ifs_distance(
    F: IfsDescriptor,
    G: IfsDescriptor,
    level: int = 1,
    grid_size: int = 1001,
    radius: float = DEFAULT_RADIUS,
) -> IfsDistanceReport:
    """Max of the map distance over all cross pairs (f_i, g_j).

    Structurally identical map families are assigned distance 0 outright.
    Note the cross-pair maximum compares every map of F against every map of
    G, so it is bounded below by the spread of the families themselves; two
    IFSs listing the same maps in different order still get a positive
    value. This quirk is intentional and documented, not a bug.
    """
    if level not in (0, 1):
        raise ValueError("level must be 0 or 1")
    if tuple(F.maps) == tuple(G.maps):
        return IfsDistanceReport(0.0, 0.0 if level == 1 else None, None, True)
    d0 = -1.0
    d1 = -1.0
    best = -1.0
    best_pair = None
    for i, f in enumerate(F.maps):
        for j, g in enumerate(G.maps):
            rep = compare_maps(f, g, grid_size, radius)
            d0 = max(d0, rep.rho0)
            d1 = max(d1, rep.rho1)
            val = rep.rho1 if level == 1 else rep.rho0
            if val > best:
                best = val
                best_pair = (i + 1, j + 1)
    if level == 1:
        return IfsDistanceReport(d0, d1, best_pair, False)
    return IfsDistanceReport(d0, None, best_pair, False)


@dataclass(frozen=True)
class FixedPointRecord:
    point: float
    derivative: float
    margin: float
    verdict: str  # "hyperbolic" | "borderline" | "non-hyperbolic"


@dataclass(frozen=True)
class HyperbolicityAudit:
    records: tuple[tuple[FixedPointRecord, ...], ...]

    @property
    def all_hyperbolic(self) -> bool:
        return all(r.verdict == "hyperbolic" for per_map in self.records for r in per_map)

    def flattened(self):
        return [r for per_map in self.records for r in per_map]


def _classify_fixed_point(f: ScalarMap, p: float) -> FixedPointRecord:
    d = float(f.derivative(p))
    margin = abs(abs(d) - 1.0)
    if margin <= HYPERBOLIC_TOL:
        verdict = "non-hyperbolic"
    elif margin <= BORDERLINE_TOL:
        verdict = "borderline"
    else:
        verdict = "hyperbolic"
    return FixedPointRecord(p, d, margin, verdict)


def _fixed_points_of(f: ScalarMap, radius: float, grid: int) -> list[float]:
    xs = np.linspace(-radius, radius, grid)
    vals = np.asarray(f(xs), dtype=float) - xs
    flat = np.abs(vals) <= 1e-12
    if np.any(flat[:-1] & flat[1:]):
        raise ContinuumOfFixedPointsError(
            "f(x) - x vanishes identically on a subinterval; "
            "a continuum of fixed points is never hyperbolic"
        )
    roots: list[float] = []
    exact = np.flatnonzero(flat)
    for idx in exact:
        roots.append(float(xs[idx]))
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    for idx in sign_change:
        lo, hi = float(xs[idx]), float(xs[idx + 1])
        flo = float(f(lo)) - lo
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = float(f(mid)) - mid
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
            if hi - lo <= 1e-12:
                break
        roots.append(0.5 * (lo + hi))
    dedup: list[float] = []
    for r in sorted(roots):
        if not dedup or abs(r - dedup[-1]) > 1e-9:
            dedup.append(r)
    return dedup


def hyperbolicity_audit(
    F: IfsDescriptor, radius: float = DEFAULT_RADIUS, grid: int = 4096
) -> HyperbolicityAudit:
    """Locate fixed points of every map on [-R, R] and classify each one.

    Roots of f(x) - x come from sign changes on the scan grid refined by
    bisection; tangential fixed points without a sign change can escape the
    scan, which is a stated limitation of the grid method.
    """
    per_map = []
    for f in F.maps:
        pts = _fixed_points_of(f, radius, grid)
        per_map.append(tuple(_classify_fixed_point(f, p) for p in pts))
    return HyperbolicityAudit(tuple(per_map))


# ---------------------------------------------------------------------------
# perturbation probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeReport:
    delta: float
    trials: int
    passes: int
    attempts: int
    seed: int

    @property
    def pass_fraction(self) -> float:
        return 1.0 if self.trials == 0 else self.passes / self.trials


def paired_rho1_max(
    F: IfsDescriptor, G: IfsDescriptor, grid_size: int = 257, radius: float = DEFAULT_RADIUS
) -> float:
    """Index-paired C1 distance max_i rho1(f_i, g_i).

    The cross-pair family distance is unusable as a closeness notion for
    families with well-separated maps (it never drops below their internal
    spread), so admissibility of a perturbation is measured pairwise.
    """
    if len(F.maps) != len(G.maps):
        raise ValueError("families must have equal map counts")
    return max(
        compare_maps(f, g, grid_size, radius).rho1 for f, g in zip(F.maps, G.maps)
    )


def _jitter_map(f: ScalarMap, scale: float, rng) -> ScalarMap:
    g = replace(f, k=f.k + rng.uniform(-scale, scale))
    if g.kind == KIND_LIPSCHITZ:
        amp = g.perturbation.amplitude + rng.uniform(-scale, scale)
        amp = float(np.clip(amp, -g.perturbation.lipschitz, g.perturbation.lipschitz))
        g = replace(g, perturbation=Perturbation(g.perturbation.shape, amp, g.perturbation.lipschitz))
    return g


def perturbation_probe(
    F: IfsDescriptor,
    delta: float,
    trials: int,
    seed: int,
    radius: float = DEFAULT_RADIUS,
    residual_tol: float = 1e-8,
) -> ProbeReport:
    """Sample nearby IFSs and report how many stay weakly conjugate to F.

    Each trial jitters slopes (and bump amplitudes) until the index-paired
    C1 distance drops below delta, then checks interval feasibility and the
    conjugacy residual of the linear parts along a pinned random sequence
    for n in {1, 5, 10}. Trials whose perturbation crosses an interval
    boundary count as failures, not generation errors.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if trials < 0:
        raise ValueError("trials must be >= 0")
    audit = hyperbolicity_audit(F, radius)
    if not audit.all_hyperbolic:
        raise HypothesisError("probe requires every fixed point hyperbolic")
    if trials == 0:
        return ProbeReport(delta, 0, 0, 0, seed)

    kmin = min(abs(m.k) for m in F.maps)
    scale = delta / (4.0 * (radius + radius / (kmin * kmin) + 2.0))
    budget = 100 * trials
    attempts = 0
    passes = 0
    f_lin = linear_part(F).linear_ifs
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, t)))
        G = None
        while G is None:
            if attempts >= budget:
                raise GenerationError(
                    f"no admissible perturbation within delta={delta:g} "
                    f"after {budget} attempts"
                )
            attempts += 1
            cand = IfsDescriptor(tuple(_jitter_map(m, scale, rng) for m in F.maps))
            try:
                if paired_rho1_max(F, cand, radius=radius) < delta:
                    G = cand
            except IfsConjError:
                continue
        ok = False
        try:
            if same_interval_test(F, G).conjugable:
                g_lin = linear_part(G).linear_ifs
                alphabet = f_lin.alphabet
                sigma = ExplicitSequence(
                    tuple(rng.integers(1, len(alphabet) + 1, size=10)), alphabet
                )
                ok = True
                for n in (1, 5, 10):
                    h = weak_conjugacy_linear(f_lin, g_lin, sigma, n)
                    # composites of linear maps are linear with the product slopes
                    ks = effective_slope(f_lin, sigma, n)
                    ms = effective_slope(g_lin, sigma, n)
                    rep = verify_conjugacy(
                        lambda x, _k=ks: _k * x,
                        lambda x, _m=ms: _m * x,
                        h,
                        grid_size=257,
                        tolerance=residual_tol,
                        radius=radius,
                    )
                    if not rep.passed:
                        ok = False
                        break
        except IfsConjError:
            ok = False
        passes += int(ok)
    return ProbeReport(delta, trials, passes, attempts, seed)
