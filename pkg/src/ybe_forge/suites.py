"""Seeded identity suites producing residual reports.

Each suite draws its parameter points from a PCG64 generator seeded
explicitly, evaluates one worst-case residual per point, and returns plain
dict reports.  Points are drawn up front in a fixed order, so the reports
are reproducible bit for bit regardless of how the evaluation is scheduled.

Default parameter box: q, p real in (0.1, 0.6), w in (0.5, 1.5), |z| in
(0.2, 2); candidate points too close to a pole (theta zeros, w = 1, series
domain edges) are rejected and redrawn.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import cartan, evalrep, gauge, qspecial, rmat
from .errors import ConfigError, PoleHit, YbeForgeError
from .qspecial import TruncationPolicy

SUITE_NAMES = ("qspecial", "cartan", "evalrep", "qybe6v", "qybe8v",
               "qdybe-irf", "twist", "vertex-irf", "hexagonal")

DEFAULT_TOLERANCES = {
    "qspecial": 1e-9,
    "cartan": 1e-12,
    "evalrep": 1e-12,
    "qybe6v": 1e-9,
    "qybe8v": 1e-9,
    "qdybe-irf": 1e-9,
    "twist": 1e-8,
    "vertex-irf": 1e-7,
    "hexagonal": 1e-9,
}

DEFAULT_SAMPLES = {
    "qspecial": 50,
    "cartan": 10,
    "evalrep": 12,
    "qybe6v": 20,
    "qybe8v": 20,
    "qdybe-irf": 20,
    "twist": 8,
    "vertex-irf": 10,
    "hexagonal": 15,
}


@dataclass
class SuiteConfig:
    """Resolved configuration of one suite run."""

    suite: str
    seed: int = 42
    samples: int | None = None
    tolerance: float | None = None
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    overrides: dict = field(default_factory=dict)  # pinned q/p/w/z values

    def resolved_tolerance(self) -> float:
        return self.tolerance if self.tolerance is not None else DEFAULT_TOLERANCES[self.suite]

    def resolved_samples(self) -> int:
        return self.samples if self.samples is not None else DEFAULT_SAMPLES[self.suite]


def _rng(cfg: SuiteConfig) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(cfg.seed))


def _draw(rng, cfg, name, lo, hi) -> float:
    if name in cfg.overrides:
        rng.uniform(lo, hi)  # keep the stream aligned
        return float(cfg.overrides[name])
    return float(rng.uniform(lo, hi))


def _draw_z(rng, cfg, name="z", lo=0.2, hi=2.0) -> complex:
    mod = rng.uniform(lo, hi)
    arg = rng.uniform(0, 2 * np.pi)
    if name in cfg.overrides:
        return complex(cfg.overrides[name])
    return mod * np.exp(1j * arg)


def _report(suite, params, residual, tolerance, policy, t0) -> dict:
    return {
        "suite": suite,
        "params": params,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(residual <= tolerance),
        "truncation": {"max_terms": policy.max_terms,
                       "tail_tolerance": policy.tail_tolerance},
        "wall_ms": (time.perf_counter() - t0) * 1e3,
    }


def _retrying(draw_and_eval, attempts: int = 60):
    last = None
    for _ in range(attempts):
        try:
            return draw_and_eval()
        except (PoleHit, YbeForgeError) as exc:  # redraw near poles
            last = exc
    raise PoleHit(f"could not draw a regular parameter point: {last}")


# ---------------------------------------------------------------------------
# individual suites
# ---------------------------------------------------------------------------

def suite_qspecial(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.1, 0.6)
            a = rng.uniform(0.05, 0.45)
            b = a + rng.uniform(0.1, 0.4)
            c = rng.uniform(0.5, 0.95)
            z = _draw_z(rng, cfg, lo=0.2, hi=0.8)
            zt = _draw_z(rng, cfg, "z_theta", 0.3, 1.5)
            worst = 0.0
            # theta symmetry and quasi-periodicity
            th = qspecial.theta_q(zt, q, pol).value
            worst = max(worst, abs(qspecial.theta_q(q / zt, q, pol).value - th)
                        / max(abs(th), 1.0))
            worst = max(worst, abs(qspecial.theta_q(q * zt, q, pol).value
                                   + th / zt) / max(abs(th), 1.0))
            # q-exponential inverse pairing
            worst = max(worst, abs(qspecial.exp_q(zt, q, pol).value
                                   * qspecial.exp_q_inv(zt, q, pol).value - 1.0))
            # three-term contiguous relation for 2phi1
            f0 = qspecial.phi21(a, b, c, q, z, pol)
            f1 = qspecial.phi21(a, b, c, q, q * z, pol)
            f2 = qspecial.phi21(a, b, c, q, q * q * z, pol)
            rec = ((1 - z) * f0 + ((a + b) * z - c / q - 1) * f1
                   + (c / q - a * b * z) * f2)
            worst = max(worst, abs(rec) / max(abs(f0), 1.0))
            # connection formula
            worst = max(worst, qspecial.connection_formula_residual(a, b, c, q, z, pol))
            # lower-parameter series pairing identity
            lhs = qspecial.basic_hypergeometric([], [a], q, a * z, pol).value
            rhs = (qspecial.qpoch_inf([z], [q * q], pol).value
                   * qspecial.phi21(-q * a, -a, a * a, q * q, z, pol))
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1.0))
            return {"q": q, "a": a, "b": b, "c": c, "z": z}, worst

        params, worst = _retrying(point)
        out.append(_report(cfg.suite, params, worst, tol, pol, t0))
    return out


def suite_cartan(cfg: SuiteConfig) -> list[dict]:
    from fractions import Fraction
    from math import gcd
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    out = []
    pairs = [(r, rot) for r in range(1, 7) for rot in range(1, r + 1)
             if gcd(rot, r + 1) == 1]
    for r, rot in pairs:
        t0 = time.perf_counter()
        d = cartan.build_cartan_data(r, rot)
        n = r + 2
        yrot = cartan.fr_eye(n)
        for _ in range(rot):
            yrot = yrot @ d.y
        w = np.empty(n, dtype=object)
        w[:] = Fraction(0)
        for i in range(r + 1):
            w[i] = Fraction(1)
        exact = ((d.theta_plus @ d.cal_a @ d.theta_plus.T == d.cal_a).all()
                 and ((d.cal_a + d.s1 + d.s1.T) == cartan.fr_zeros(n)).all()
                 and (d.abar @ d.t == d.pi).all()
                 and ((d.omega_rot @ (cartan.fr_eye(n) - yrot)) == d.pi).all()
                 and ((d.pi_rot @ d.pi_rot) == d.pi_rot).all()
                 and all(x == 0 for x in (d.theta_plus @ w - w)))
        if rot == 1:
            exact = exact and (d.s1 == cartan.expression_s1_rot1(r)).all()
        worst = 0.0 if exact else 1.0
        # q-dependent coefficient checks
        q = _draw(rng, cfg, "q", 0.1, 0.9)
        for nn in range(1, 4):
            pm = cartan.pairing_matrix(nn, r, q)
            cm = np.array([[cartan.c_coeff(i, j, nn, r, q)
                            for j in range(1, r + 1)] for i in range(1, r + 1)])
            worst = max(worst, float(np.abs(cm @ pm - np.eye(r)).max()))
            alt = np.array([[cartan.c_coeff_alt(i, j, nn, r, q)
                             for j in range(1, r + 1)] for i in range(1, r + 1)])
            worst = max(worst, float(np.abs(cm - alt).max()))
        out.append(_report(cfg.suite, {"r": r, "rot": rot, "q": q}, worst, tol,
                           cfg.policy, t0))
    return out


def suite_evalrep(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    out = []
    for idx in range(cfg.resolved_samples()):
        t0 = time.perf_counter()
        r = 1 + idx % 4
        q = _draw(rng, cfg, "q", 0.1, 0.6)
        z = _draw_z(rng, cfg, lo=0.3, hi=1.8)
        worst = evalrep.sigma_intertwining_residual(r, z, q)
        worst = max(worst, evalrep.defining_relations_residual(r, z, q))
        if r == 1:
            worst = max(worst, evalrep.imag_log_transform_residual(z, q))
        out.append(_report(cfg.suite, {"r": r, "q": q, "z": z}, worst, tol,
                           cfg.policy, t0))
    return out


def _draw_spectral_triple(rng, cfg):
    return (_draw_z(rng, cfg, "z1"), _draw_z(rng, cfg, "z2"),
            _draw_z(rng, cfg, "z3"))


def suite_qybe6v(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.1, 0.6)
            z1, z2, z3 = _draw_spectral_triple(rng, cfg)
            res = rmat.qybe_residual(lambda a, b: rmat.r6v(a, b, q, pol), z1, z2, z3)
            return {"q": q, "z1": z1, "z2": z2, "z3": z3}, res

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


def suite_qybe8v(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.1, 0.6)
            p = _draw(rng, cfg, "p", 0.1, 0.6)
            z1, z2, z3 = _draw_spectral_triple(rng, cfg)
            res = rmat.qybe_residual(lambda a, b: rmat.r8v(a, b, p, q, pol),
                                     z1, z2, z3)
            return {"q": q, "p": p, "z1": z1, "z2": z2, "z3": z3}, res

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


def suite_qdybe_irf(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.1, 0.6)
            p = _draw(rng, cfg, "p", 0.1, 0.6)
            w = _draw(rng, cfg, "w", 0.5, 1.5)
            if abs(w - 1.0) < 0.05 or abs(w - p) < 0.05:
                raise PoleHit("w too close to a face-matrix zero")
            z1, z2, z3 = _draw_spectral_triple(rng, cfg)
            res = rmat.qdybe_residual(z1, z2, z3, p, w, q, pol)
            res = max(res, rmat.star_triangle_residual(z1, z2, z3, p, w, q, 0, pol))
            return {"q": q, "p": p, "w": w, "z1": z1, "z2": z2, "z3": z3}, res

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


def suite_twist(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.3, 0.6)
            p = _draw(rng, cfg, "p", 0.1, 0.35)
            w = _draw(rng, cfg, "w", max(p + 0.1, 0.45), 0.9)
            z = _draw_z(rng, cfg, lo=0.2, hi=0.9)
            if abs(p * p * z / (q * q)) > 0.85:
                raise PoleHit("twist series argument too large")
            rate = max(w * w, p * p / (w * w))
            n_factors = min(90, int(np.ceil(np.log(tol * 1e-2) / np.log(rate))))
            closed = rmat.f_twist_closed(z, p, w, q, pol)
            prod = rmat.f_twist_product(z, 1.0, p, w, q, n_factors, pol)
            res = rmat.rel_residual(prod, closed)
            # determinant telescoping
            phi = qspecial.scalar_phi_twist(z, p, q, pol).value
            mid = closed[1:3, 1:3] / phi
            res = max(res, abs(np.linalg.det(mid)
                               - rmat.twist_block_det(z, p, q, pol))
                      / max(abs(np.linalg.det(mid)), 1.0))
            # face matrix from twist conjugation (closed route)
            res = max(res, rmat.rel_residual(
                rmat.r_irf_from_twist(z, 1.0, p, w, q, via="closed", policy=pol),
                rmat.r_irf(z, p, w, q, pol)))
            return {"q": q, "p": p, "w": w, "z": z, "n_factors": n_factors}, res

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


def suite_vertex_irf(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    for _ in range(cfg.resolved_samples()):
        t0 = time.perf_counter()

        def point():
            q = _draw(rng, cfg, "q", 0.3, 0.6)
            p = _draw(rng, cfg, "p", 0.1, 0.3)
            w = _draw(rng, cfg, "w", 0.5, 1.5)
            if abs(w - 1.0) < 0.08 or min(abs(w - p), abs(w * p - 1)) < 0.05:
                raise PoleHit("w too close to a gauge zero")
            z1 = _draw_z(rng, cfg, "z1", 0.4, 1.6)
            z2 = _draw_z(rng, cfg, "z2", 0.4, 1.6)
            if abs(p * p * z1 / z2) > 0.8 or abs(p * p * z2 / z1) > 0.8:
                raise PoleHit("spectral ratio outside gauge series domain")
            res = gauge.vertex_irf_residual(z1, z2, p, w, q, pol)
            res = max(res, gauge.phi_vector_residual(z1, z2, p, w, q, 0, pol))
            return {"q": q, "p": p, "w": w, "z1": z1, "z2": z2}, res

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


def suite_hexagonal(cfg: SuiteConfig) -> list[dict]:
    rng = _rng(cfg)
    tol = cfg.resolved_tolerance()
    pol = cfg.policy
    out = []
    n = cfg.resolved_samples()
    for idx in range(n):
        t0 = time.perf_counter()
        r = 1 + idx % 3

        def point():
            q = _draw(rng, cfg, "q", 0.1, 0.6)
            z = _draw_z(rng, cfg, lo=0.3, hi=2.0)
            rep = gauge.hexagonal_check(r, z, q, pol)
            return {"r": r, "q": q, "z": z}, rep.residual

        params, res = _retrying(point)
        out.append(_report(cfg.suite, params, res, tol, pol, t0))
    return out


_SUITE_FUNCS = {
    "qspecial": suite_qspecial,
    "cartan": suite_cartan,
    "evalrep": suite_evalrep,
    "qybe6v": suite_qybe6v,
    "qybe8v": suite_qybe8v,
    "qdybe-irf": suite_qdybe_irf,
    "twist": suite_twist,
    "vertex-irf": suite_vertex_irf,
    "hexagonal": suite_hexagonal,
}


def run_suite(cfg: SuiteConfig) -> list[dict]:
    """Run one named suite (or every suite for 'all') and return reports."""
    if cfg.suite == "all":
        reports = []
        for name in SUITE_NAMES:
            sub = SuiteConfig(suite=name, seed=cfg.seed, samples=cfg.samples,
                              tolerance=cfg.tolerance, policy=cfg.policy,
                              overrides=cfg.overrides)
            reports.extend(_SUITE_FUNCS[name](sub))
        return reports
    if cfg.suite not in _SUITE_FUNCS:
        raise ConfigError(f"unknown suite {cfg.suite!r}; pick from "
                          f"{SUITE_NAMES + ('all',)}")
    return _SUITE_FUNCS[cfg.suite](cfg)
