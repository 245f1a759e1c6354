"""End-to-end acceptance suite.

One test per criterion; each prints a PASS line with its wall time and
asserts the stated tolerance and runtime budget. Run with

    pytest tests/test_acceptance.py -v -rA
"""

import math
import time

import numpy as np
import pytest

import ifsconj as ic
from ifsconj.linearize import FATE_CONVERGES, FATE_DIVERGES
from ifsconj.multidim import (
    DiagonalMap,
    SimilarityIfs,
    componentwise_conjugacy,
    componentwise_residual,
    similarity_conjugacy,
)


def finish(name: str, t0: float, budget: float):
    elapsed = time.perf_counter() - t0
    print(f"{name}: PASS ({elapsed:.2f}s, budget {budget:.0f}s)")
    assert elapsed < budget, f"{name} exceeded its {budget}s runtime budget"


def oracle_grid():
    xs = np.linspace(-10.0, 10.0, 1000)
    return xs[np.abs(xs) >= 1e-6]


def contractive_pairs():
    rng = np.random.default_rng(101)
    return [tuple(rng.uniform(0.05, 0.95, size=2)) for _ in range(25)]


def test_criterion_01_power_law_oracle():
    t0 = time.perf_counter()
    xs = oracle_grid()
    for k, m in contractive_pairs():
        h = ic.build_linear_conjugacy(k, m, 1.0, "power-law")
        alpha = math.log(m) / math.log(k)
        expect = np.sign(xs) * np.abs(xs) ** alpha
        got = h(xs)
        rel = np.max(np.abs(got - expect) / np.abs(expect))
        assert rel <= 1e-9, (k, m, rel)
    finish("criterion 1 (closed-form oracle equivalence)", t0, 5.0)


def test_criterion_02_functional_equation_all_intervals():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    pairs = contractive_pairs()
    pairs += [tuple(rng.uniform(1.05, 20.0, size=2)) for _ in range(10)]
    pairs += [tuple(-rng.uniform(0.05, 0.95, size=2)) for _ in range(5)]
    pairs += [tuple(-rng.uniform(1.05, 20.0, size=2)) for _ in range(5)]
    for k, m in pairs:
        f, g = ic.linear(float(k)), ic.linear(float(m))
        for bridge in ("linear", "power-law"):
            h = ic.build_linear_conjugacy(float(k), float(m), 1.0, bridge)
            rep = ic.verify_conjugacy(f, g, h, 1000, 1e-8)
            assert rep.passed, (k, m, bridge, rep.residual_sup)
    finish("criterion 2 (conjugacy equation, 45 pairs x 2 bridges)", t0, 10.0)


def test_criterion_03_weak_conjugacy_per_interval_class():
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    samplers = {
        "(0,1)": lambda: rng.uniform(0.05, 0.95),
        "(-1,0)": lambda: -rng.uniform(0.05, 0.95),
        "(1,+inf)": lambda: rng.uniform(1.05, 3.0),
        "(-inf,-1)": lambda: -rng.uniform(1.05, 3.0),
    }
    for tag, draw in samplers.items():
        for trial in range(20):
            F = ic.IfsDescriptor((ic.linear(draw()), ic.linear(draw())))
            G = ic.IfsDescriptor((ic.linear(draw()), ic.linear(draw())))
            sigma = ic.BernoulliSequence(0.5, seed=7000 + trial)
            for n in (1, 5, 20):
                h = ic.weak_conjugacy_linear(F, G, sigma, n)
                ks = ic.effective_slope(F, sigma, n)
                ms = ic.effective_slope(G, sigma, n)
                rep = ic.verify_conjugacy(
                    ic.linear(ks), ic.linear(ms), h, 1000, 1e-8
                )
                assert rep.passed, (tag, trial, n, rep.residual_sup)
    finish("criterion 3 (weak conjugacy, 4 classes x 20 pairs x 3 depths)", t0, 30.0)


def test_criterion_04_non_conjugacy_obstructions():
    t0 = time.perf_counter()
    cases = [
        (2.0, 0.5, "attract-repel-mismatch"),
        (3.0, -3.0, "orientation-mismatch"),
        (-4.0, -0.25, "attract-repel-mismatch"),
        (0.2, -0.2, "orientation-mismatch"),
    ]
    for k, m, expected in cases:
        rep = ic.same_interval_test(
            ic.IfsDescriptor((ic.linear(k),)), ic.IfsDescriptor((ic.linear(m),))
        )
        assert rep.verdict == "obstructed"
        assert rep.obstruction == expected, (k, m)
        check = ic.verify_conjugacy(ic.linear(k), ic.linear(m), ic.identity(), 1000, 1e-8)
        assert check.verdict == "fail"
        assert check.residual_sup > 0.1
    finish("criterion 4 (four obstruction fixtures)", t0, 1.0)


def test_criterion_05_decay_bound_mass_sweep():
    t0 = time.perf_counter()
    rng = np.random.default_rng(105)
    violations = 0
    for i in range(10_000):
        k1, k2 = rng.uniform(0.05, 0.75, size=2)
        e1 = rng.uniform(0.0, min(0.2, 0.99 - k1))
        e2 = rng.uniform(0.0, min(0.2, 0.99 - k2))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        F = ic.IfsDescriptor(
            (
                ic.linear_plus_lipschitz(sign * k1, ic.sine_bump(rng.uniform(-e1, e1), e1)),
                ic.linear_plus_lipschitz(sign * k2, ic.rational_bump(rng.uniform(-e2, e2), e2)),
            )
        )
        sigma = ic.BernoulliSequence(float(rng.uniform(0.1, 0.9)), seed=i)
        n = int(rng.integers(1, 31))
        x = float(rng.uniform(-10, 10))
        if not ic.decay_bound_check(F, sigma, n, x).holds:
            violations += 1
    assert violations == 0
    finish("criterion 5 (decay bound, 10^4 samples)", t0, 20.0)


def test_criterion_06_koenigs_linearization():
    t0 = time.perf_counter()
    contractions = [
        ic.smooth(0.5, 0.1),
        ic.smooth(0.3, 0.05),
        ic.smooth(0.7, -0.1),
        ic.smooth(0.2, 0.02),
        ic.linear_plus_lipschitz(0.5, ic.sine_bump(0.2)),
        ic.linear_plus_lipschitz(0.4, ic.sine_bump(-0.15)),
        ic.linear_plus_lipschitz(0.6, ic.rational_bump(0.2)),
        ic.linear_plus_lipschitz(0.3, ic.rational_bump(-0.1)),
        ic.linear_plus_lipschitz(-0.5, ic.sine_bump(0.1)),
        ic.smooth(-0.4, 0.05),
    ]
    xs = np.linspace(-0.5, 0.5, 2001)
    for f in contractions:
        lam = f.slope_at_zero
        assert 0.0 < abs(lam) < 1.0
        h = ic.koenigs_conjugacy(f, 0.5)
        residual = float(np.max(np.abs(h(f(xs)) - lam * h(xs))))
        assert residual <= 1e-6, (f, residual)
        assert h(0.0) == 0.0
        assert np.all(np.diff(h(xs)) > 0)
    finish("criterion 6 (Koenigs linearization, 10 contractions)", t0, 10.0)


def test_criterion_07_sequence_fate():
    t0 = time.perf_counter()
    F = ic.IfsDescriptor((ic.linear(0.5), ic.linear(2.0)))
    converge = ic.classify_sequence_fate(F, ic.SparseDensitySequence(2), 400, 1.0, 0.1)
    assert converge.predicted_fate == FATE_CONVERGES
    assert converge.orbit_g_abs[-1] < 1e-50
    diverge = ic.classify_sequence_fate(F, ic.SparseDensitySequence(1), 400, 1.0, 0.1)
    assert diverge.predicted_fate == FATE_DIVERGES
    assert diverge.orbit_g_abs[-1] > 1e50
    finish("criterion 7 (sparse-sequence fate)", t0, 1.0)


def test_criterion_08_multidimensional():
    t0 = time.perf_counter()
    rng = np.random.default_rng(108)
    # componentwise residuals for m = 2, 3
    for m, grid_per_axis in ((2, 33), (3, 33)):
        for trial in range(3):
            F = [DiagonalMap(tuple(rng.uniform(0.2, 0.8, m))) for _ in range(2)]
            G = [DiagonalMap(tuple(rng.uniform(0.2, 0.8, m))) for _ in range(2)]
            sigma = ic.BernoulliSequence(0.5, seed=800 + trial)
            n = int(rng.integers(1, 11))
            h = componentwise_conjugacy(F, G, sigma, n)
            res = componentwise_residual(F, G, h, sigma, n, grid_per_axis)
            assert res <= 1e-8, (m, trial, res)
    # similarity route: 20 well-conditioned A, 50 points each
    for trial in range(20):
        m = int(rng.integers(2, 5))
        cond = float(10 ** rng.uniform(0.0, 2.0))
        q1, _ = np.linalg.qr(rng.normal(size=(m, m)))
        q2, _ = np.linalg.qr(rng.normal(size=(m, m)))
        A = q1 @ np.diag(np.geomspace(1 / math.sqrt(cond), math.sqrt(cond), m)) @ q2.T
        S = SimilarityIfs(
            tuple(DiagonalMap(tuple(rng.uniform(0.3, 0.9, m))) for _ in range(2)), A
        )
        sigma = ic.BernoulliSequence(0.5, seed=880 + trial)
        n = int(rng.integers(1, 21))
        for _ in range(50):
            X = rng.uniform(-10, 10, m)
            out = similarity_conjugacy(S, sigma, n, X)
            bound = 1e-10 * (1.0 + float(np.max(np.abs(X))))
            assert out.residual <= bound, (trial, out.residual, bound)
    finish("criterion 8 (componentwise + similarity residuals)", t0, 20.0)


def test_criterion_09_metric_fixtures():
    t0 = time.perf_counter()
    f = ic.linear(0.5)
    assert ic.rho0(f, f) == 0.0
    assert ic.rho1(f, f) == 0.0
    F = ic.IfsDescriptor((ic.linear(0.5), ic.linear(0.6)))
    assert ic.ifs_distance(F, ic.IfsDescriptor((ic.linear(0.5), ic.linear(0.6)))).d1 == 0.0

    rng = np.random.default_rng(109)
    for _ in range(50):
        a = ic.IfsDescriptor((ic.linear(float(rng.uniform(0.2, 0.9))),))
        b = ic.IfsDescriptor((ic.linear(float(rng.uniform(0.2, 0.9))),))
        for level in (0, 1):
            d_ab = ic.ifs_distance(a, b, level, grid_size=301)
            d_ba = ic.ifs_distance(b, a, level, grid_size=301)
            va = d_ab.d1 if level == 1 else d_ab.d0
            vb = d_ba.d1 if level == 1 else d_ba.d0
            assert abs(va - vb) <= 1e-12
            rep = ic.compare_maps(a.maps[0], b.maps[0], 301)
            assert rep.rho1 >= rep.rho0

    assert ic.rho0(ic.linear(0.5), ic.linear(0.6)) == pytest.approx(10 / 3, abs=1e-9)
    assert ic.rho1(ic.linear(0.5), ic.linear(0.6)) == pytest.approx(10 / 3 + 0.1, abs=1e-9)
    finish("criterion 9 (metric identities and fixture values)", t0, 5.0)


def test_criterion_10_hyperbolicity_and_probe():
    t0 = time.perf_counter()
    slope_one = ic.linear_plus_lipschitz(0.7, ic.rational_bump(0.3))
    flagged = ic.hyperbolicity_audit(ic.IfsDescriptor((slope_one,)))
    assert not flagged.all_hyperbolic

    audit = ic.hyperbolicity_audit(ic.IfsDescriptor((ic.linear(0.5),)))
    records = audit.flattened()
    assert len(records) == 1
    assert records[0].margin == pytest.approx(0.5, abs=1e-12)

    probe = ic.perturbation_probe(
        ic.IfsDescriptor((ic.linear(0.5), ic.linear(0.25))), 0.01, 50, seed=42
    )
    assert probe.pass_fraction == 1.0
    finish("criterion 10 (hyperbolicity audit + probe)", t0, 10.0)


def test_criterion_11_attractor_sanity():
    t0 = time.perf_counter()
    maps = [ic.AffineMap(1 / 3, 0.0), ic.AffineMap(1 / 3, 2 / 3)]
    s1 = ic.chaos_game(maps, 100_000, 60, seed=3, x0=0.5, allow_affine=True)
    gap = np.sum((s1.points > 1 / 3 + 1e-9) & (s1.points < 2 / 3 - 1e-9))
    assert gap == 0
    s2 = ic.chaos_game(maps, 100_000, 60, seed=3, x0=0.5, allow_affine=True)
    assert s1.points.tobytes() == s2.points.tobytes()
    finish("criterion 11 (Cantor gap + determinism)", t0, 5.0)
