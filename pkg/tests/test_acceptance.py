"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as the
criteria execute.
"""
import dataclasses
import math
import time

import numpy as np
import pytest

from helpers import draw_bm, draw_jd, draw_market

import forwardeq as fe
from forwardeq import investor, producer
from forwardeq.market import hedge_ratio, quad_revenue, terminal_price


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} {name}: {status} {detail}".rstrip())
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def test_criterion_1_zero_storage_closed_form():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    checked, attempts = 0, 0
    worst = 0.0
    while checked < 20 and attempts < 200:
        attempts += 1
        pi0 = float(rng.uniform(60.0, 120.0))
        p = draw_market(
            rng, pi0=pi0, piT=float(rng.uniform(1.0, 1.2) * pi0),
            gamma_p=float(rng.uniform(0.02, 0.04)),
            gamma_s=float(rng.uniform(0.02, 0.04)),
        )
        model = draw_bm(rng)
        eq = fe.solve(p, model, "brownian")
        if eq.alpha != 0.0:
            continue
        closed = fe.forward_price_zero_storage(p, model)
        worst = max(worst, abs(eq.F - closed) / abs(closed))
        checked += 1
    elapsed = time.perf_counter() - start
    ok = checked == 20 and worst <= 1e-8 and elapsed < 1.0
    report(1, "zero-storage closed form", ok,
           f"(draws={checked}, worst rel err={worst:.2e}, {elapsed:.2f}s)")


def test_criterion_2_jump_reduction():
    start = time.perf_counter()
    rng = np.random.default_rng(202)
    worst = 0.0

    def compare(eb, ej):
        nonlocal worst
        for field in dataclasses.fields(eb):
            a, b = getattr(eb, field.name), getattr(ej, field.name)
            err = abs(a - b) / (1e-8 + abs(a))
            if abs(a - b) > 1e-8:  # absolute floor for near-zero diagnostics
                worst = max(worst, err)
                assert b == pytest.approx(a, rel=1e-8, abs=1e-8), field.name

    for _ in range(20):  # vanishing intensity
        p = draw_market(rng)
        bm = draw_bm(rng)
        rho = bm.covariance[0, 1] / math.sqrt(bm.covariance[0, 0] * bm.covariance[1, 1])
        jd = fe.jump_diffusion_model(
            math.sqrt(bm.covariance[0, 0]), math.sqrt(bm.covariance[1, 1]), rho,
            0.0, 0.0, 0.0, float(bm.drift[0]), bm.horizon,
        )
        compare(fe.solve(p, bm, "brownian"), fe.solve(p, jd, "jump_diffusion"))

    for _ in range(20):  # vanishing jump sizes with positive intensity
        p = draw_market(rng)
        bm = draw_bm(rng)
        rho = bm.covariance[0, 1] / math.sqrt(bm.covariance[0, 0] * bm.covariance[1, 1])
        jd = fe.jump_diffusion_model(
            math.sqrt(bm.covariance[0, 0]), math.sqrt(bm.covariance[1, 1]), rho,
            float(rng.uniform(0.5, 2.0)), 0.0, 0.0, float(bm.drift[0]), bm.horizon,
        )
        compare(fe.solve(p, bm, "brownian"), fe.solve(p, jd, "jump_diffusion"))

    elapsed = time.perf_counter() - start
    ok = elapsed < 2.0
    report(2, "jump-diffusion reduction", ok,
           f"(worst rel err={worst:.2e}, {elapsed:.2f}s)")


def test_criterion_3_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(303)
    step = 1e-2
    details = []

    def mc_friendly_market():
        # exponential-utility Monte Carlo needs a moderate tilt
        # gamma * position-loading * sd(X); keep piT and gamma small
        return draw_market(
            rng,
            piT=float(rng.uniform(10.0, 20.0)),
            gamma_p=float(rng.uniform(0.009, 0.012)),
            gamma_s=float(rng.uniform(0.009, 0.012)),
        )

    def mc_friendly_model(kind):
        sigma2 = float(rng.uniform(16.0, 20.0))
        if kind == "brownian":
            return draw_bm(rng, sigma_demand=sigma2, mpr=float(rng.uniform(0.0, 0.2)))
        return draw_jd(
            rng,
            sigma_demand=sigma2,
            jump_demand=float(rng.uniform(1.0, 3.0)),
            intensity=float(rng.uniform(0.5, 1.5)),
        )

    for kind in ("brownian", "jump_diffusion"):
        for _ in range(5):
            p = mc_friendly_market()
            model = mc_friendly_model(kind)
            eq = fe.solve(p, model, kind)
            sd = math.sqrt(fe.terminal_moments(p, model, 0.0).variance)

            # grid best responses within one grid step of the analytic ones
            ga, gh = fe.grid_best_response(
                lambda a, h: fe.producer_utility(p, model, a, h, eq.F),
                [(max(0.0, eq.alpha - 0.5), min(p.pi0, eq.alpha + 0.5)),
                 (eq.h - 0.5, eq.h + 0.5)],
                step,
            )
            assert abs(ga - eq.alpha) <= step + 1e-12
            assert abs(gh - eq.h) <= step + 1e-12

            hs_star = -eq.h
            if kind == "brownian":
                inv = investor.best_response_bm(p, model, eq.alpha, eq.F)
            else:
                inv = investor.best_response_jd(p, model, eq.alpha, eq.F)
            (gi,) = fe.grid_best_response(
                lambda h: fe.investor_utility(p, model, eq.alpha, h, eq.F),
                [(inv.hs - 0.5, inv.hs + 0.5)],
                step,
            )
            assert abs(gi - inv.hs) <= step + 1e-12

            # grid-search equilibrium lands within one F-grid step
            _, _, f_oracle = fe.oracle_equilibrium(p, model, f_step=1e-2 * sd)
            assert abs(f_oracle - eq.F) <= 1e-2 * sd + 1e-12

            # Monte Carlo certainty equivalents at the analytic optimum
            cfg = fe.McConfig(n_samples=1_000_000, seed=99)
            est_p = fe.mc_certainty_equivalent(
                model,
                lambda x, y: quad_revenue(p, eq.alpha, eq.h, eq.F)
                + hedge_ratio(p, eq.alpha, eq.h) * x,
                p.gamma_p,
                cfg,
            )
            assert abs(est_p.value - eq.producer_utility) <= 3.0 * est_p.stderr
            est_s = fe.mc_certainty_equivalent(
                model,
                lambda x, y: hs_star * (terminal_price(p, eq.alpha, x) - eq.F),
                p.gamma_s,
                cfg,
            )
            stock_value = fe.entropy_value(p, model, hs_star) / p.gamma_s
            assert abs(est_s.value + stock_value - eq.investor_utility) <= 3.0 * est_s.stderr
            details.append(
                f"{kind[:2]}:dF={abs(f_oracle - eq.F):.1e}"
            )

    elapsed = time.perf_counter() - start
    ok = elapsed < 120.0
    report(3, "oracle equivalence", ok, f"({'; '.join(details[:4])}..., {elapsed:.1f}s)")


def test_criterion_4_foc_residuals():
    start = time.perf_counter()
    rng = np.random.default_rng(404)
    worst = 0.0
    checked = 0
    attempts = 0
    while checked < 20 and attempts < 120:
        attempts += 1
        kind = "brownian" if checked % 2 == 0 else "jump_diffusion"
        p = draw_market(rng)
        model = draw_bm(rng) if kind == "brownian" else draw_jd(rng)
        eq = fe.solve(p, model, kind)
        if not 1e-6 < eq.alpha < p.pi0 - 1e-6:
            continue
        h = 1e-6
        for da, dh in ((h, 0.0), (0.0, h)):
            grad = (
                fe.producer_utility(p, model, eq.alpha + da, eq.h + dh, eq.F)
                - fe.producer_utility(p, model, eq.alpha - da, eq.h - dh, eq.F)
            ) / (2.0 * h)
            worst = max(worst, abs(grad))
        hs = -eq.h
        grad_s = (
            fe.investor_utility(p, model, eq.alpha, hs + h, eq.F)
            - fe.investor_utility(p, model, eq.alpha, hs - h, eq.F)
        ) / (2.0 * h)
        worst = max(worst, abs(grad_s))
        checked += 1
    elapsed = time.perf_counter() - start
    ok = checked == 20 and worst <= 1e-4 and elapsed < 1.0
    report(4, "first-order-condition residuals", ok,
           f"(draws={checked}, worst |grad|={worst:.2e}, {elapsed:.2f}s)")


def test_criterion_5_comparative_statics():
    start = time.perf_counter()
    ladder = (0.02, 0.035, 0.05, 0.065, 0.08)

    def defaults(gp=0.04, gs=0.04, piT=100.0):
        return fe.MarketParams(mu=200.0, m=1.0, pi0=100.0, piT=piT, eps=0.05,
                               R=0.01, gamma_p=gp, gamma_s=gs)

    def bm(rho):
        return fe.brownian_model(0.2, 10.0, rho, 0.3, 0.25)

    checks = {}

    spots_p = [fe.solve(defaults(gp=g), bm(0.2), "brownian").P0 for g in ladder]
    checks["P0 up in gamma_p"] = all(a <= b + 1e-10 for a, b in zip(spots_p, spots_p[1:]))

    eq_s = [fe.solve(defaults(gs=g), bm(0.2), "brownian") for g in ladder]
    checks["P0 down in gamma_s"] = all(
        a.P0 >= b.P0 - 1e-10 for a, b in zip(eq_s, eq_s[1:])
    )
    checks["premium up in gamma_s"] = all(
        a.forward_premium <= b.forward_premium + 1e-10 for a, b in zip(eq_s, eq_s[1:])
    )

    y_p = [fe.solve(defaults(gp=g), bm(0.0), "brownian").convenience_yield
           for g in ladder]
    y_s = [fe.solve(defaults(gs=g), bm(0.0), "brownian").convenience_yield
           for g in ladder]
    checks["yield up in gamma_p at rho=0"] = all(
        a <= b + 1e-10 for a, b in zip(y_p, y_p[1:])
    )
    checks["yield up in gamma_s at rho=0"] = all(
        a <= b + 1e-10 for a, b in zip(y_s, y_s[1:])
    )

    dominance = True
    for rho in (-0.8, -0.4, 0.0, 0.4, 0.8):
        p60 = defaults(piT=60.0)
        eq = fe.solve(p60, bm(rho), "brownian")
        nf = fe.solve_no_forward(p60, bm(rho))
        dominance &= eq.alpha >= nf.alpha - 1e-9
    checks["storage with forward >= without"] = dominance

    def jd(eta2):
        return fe.jump_diffusion_model(0.2, 10.0, 0.2, 1.0, 0.0, eta2,
                                       0.2 * 0.3 - 0.5 * 0.2**2, 0.25)

    p60 = defaults(piT=60.0)
    base = abs(fe.solve(p60, jd(0.0), "jump_diffusion").forward_premium)
    jump_up = abs(fe.solve(p60, jd(3.0), "jump_diffusion").forward_premium)
    jump_dn = abs(fe.solve(p60, jd(-3.0), "jump_diffusion").forward_premium)
    checks["unhedgeable jump raises |premium|"] = jump_up > base and jump_dn > base

    elapsed = time.perf_counter() - start
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and elapsed < 5.0
    report(5, "comparative statics", ok,
           f"({len(checks)} checks, failed={failed or 'none'}, {elapsed:.2f}s)")


def test_criterion_6_rho_symmetry():
    start = time.perf_counter()
    rng = np.random.default_rng(606)
    worst = 0.0
    for i in range(10):
        p = draw_market(rng)
        rho = float(rng.uniform(0.1, 0.8))
        s1 = float(rng.uniform(0.15, 0.35))
        s2 = float(rng.uniform(18.0, 24.0))
        b1 = -0.5 * s1**2  # zero market price of risk
        if i % 2 == 0:
            kind = "brownian"

            def make(r):
                return fe.brownian_model(s1, s2, r, 0.0, 0.25)

        else:
            kind = "jump_diffusion"
            lam = float(rng.uniform(0.5, 2.0))
            eta2 = float(rng.uniform(1.0, 4.0))

            def make(r):
                return fe.jump_diffusion_model(s1, s2, r, lam, 0.0, eta2, b1, 0.25)

        plus = fe.solve(p, make(rho), kind)
        minus = fe.solve(p, make(-rho), kind)
        for field in dataclasses.fields(plus):
            a, b = getattr(plus, field.name), getattr(minus, field.name)
            if field.name == "clearing_residual":
                # solver diagnostic, noise-level by construction on both sides
                assert abs(a) <= 1e-9 * (1.0 + abs(plus.F))
                assert abs(b) <= 1e-9 * (1.0 + abs(minus.F))
                continue
            err = abs(a - b) / (1.0 + abs(a))
            worst = max(worst, err)
            assert err <= 1e-10, (kind, field.name, a, b)
    elapsed = time.perf_counter() - start
    ok = elapsed < 1.0
    report(6, "correlation-sign symmetry", ok,
           f"(worst rel err={worst:.2e}, {elapsed:.2f}s)")


def test_criterion_7_levy_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(707)
    worst_root = 0.0
    for _ in range(100):
        model = fe.LevyModel(
            drift=rng.normal(size=2),
            covariance=_random_psd(rng),
            jump_atoms=tuple(
                (rng.normal(size=2), float(rng.uniform(0.1, 2.0)))
                for _ in range(rng.integers(0, 3))
            ),
            u_stock=np.array([1.0, 0.0]),
            u_demand=np.array([0.0, 1.0]),
            horizon=float(rng.uniform(0.1, 2.0)),
        )
        assert fe.cumulant(model, (0.0, 0.0)) == 0.0

        v, xi = rng.normal(size=2), rng.normal(size=2)
        lhs = fe.cumulant(fe.esscher_tilt(model, xi), v)
        rhs = fe.cumulant(model, v + xi) - fe.cumulant(model, xi)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

        u, w = rng.normal(size=2), rng.normal(size=2)
        t = rng.uniform()
        assert fe.cumulant(model, t * u + (1 - t) * w) <= (
            t * fe.cumulant(model, u) + (1 - t) * fe.cumulant(model, w) + 1e-10
        )

        proj = fe.project(model, rng.normal(size=2))
        assert fe.exp_transform(proj).drift == pytest.approx(proj.cumulant(1.0), abs=1e-12)

        t_exp = fe.exp_transform(
            fe.UniTriplet(
                float(rng.normal()),
                float(rng.uniform(0.05, 2.0)),
                ((float(rng.normal()), float(rng.uniform(0.1, 2.0))),),
            )
        )
        root = t_exp and fe.esscher_root(t_exp)
        resid = abs(t_exp.cumulant_d1(root))
        worst_root = max(worst_root, resid / (1.0 + abs(t_exp.cumulant_d1(0.0))))
        assert resid <= 1e-12 * (1.0 + abs(t_exp.cumulant_d1(0.0)))
    elapsed = time.perf_counter() - start
    ok = elapsed < 1.0
    report(7, "Levy identity property suite", ok,
           f"(worst root residual={worst_root:.2e}, {elapsed:.2f}s)")


def _random_psd(rng):
    a = rng.normal(size=(2, 2))
    return a @ a.T + 0.01 * np.eye(2)
