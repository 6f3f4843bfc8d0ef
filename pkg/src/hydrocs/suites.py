"""Verification suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import coherent, generators, hydrogen, robertson, specfun
from .config import TOL, Tolerances
from .exactalg import ComplexRational
from .numerics import rng_for

SUITES = ("algebra", "states", "cs-discrete", "cs-continuous", "robertson", "intertwine")


@dataclass
class Check:
    name: str
    paper_ref: str
    measured: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "paper_ref": self.paper_ref, "measured": self.measured,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class SuiteConfig:
    suite: str = "all"
    tol: Tolerances = field(default_factory=lambda: TOL)
    trunc: int = 40
    seed: int = 7
    samples: int = None

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.trunc < 1:
            raise ValueError("truncation must be positive")
        if self.samples is not None and self.samples < 1:
            raise ValueError("sample count must be positive")

    def as_dict(self) -> dict:
        return {"suite": self.suite, "trunc": self.trunc, "seed": self.seed, "samples": self.samples,
                "tolerances": asdict(self.tol)}


def _le(name, ref, measured, tol) -> Check:
    measured = float(measured)
    return Check(name, ref, measured, float(tol), bool(measured <= tol))


def _exact(name, ref, count) -> Check:
    return Check(name, ref, float(count), 0.0, count == 0)


# ---------------------------------------------------------------- samplers


def random_points(rng, count, r_lo, r_hi) -> np.ndarray:
    d = rng.normal(size=(count, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * rng.uniform(r_lo, r_hi, count)[:, None]


def random_u(rng, count, radius=0.6) -> List[np.ndarray]:
    return robertson.random_valid_u(rng, count, radius)


def rational_u(rng, count) -> List[tuple]:
    out = []
    while len(out) < count:
        parts = [Fraction(int(k), 8) for k in rng.integers(-3, 4, 6)]
        u = tuple(ComplexRational(parts[2 * i], parts[2 * i + 1]) for i in range(3))
        if any(parts) and coherent.is_valid_u([complex(c) for c in u]):
            out.append(u)
    return out


# ---------------------------------------------------------------- suites


def suite_algebra(cfg: SuiteConfig) -> List[Check]:
    out = []
    for tag in ("osc8", "param13", "param-cont2", "twistor3"):
        fam = generators.build_family(tag)
        bad = generators.check_commutators(fam)
        out.append(_exact(f"closure[{tag}]", "so(4,2) commutation relations, exact", len(bad)))
    rng = rng_for(cfg.seed, 1)
    pts = random_points(rng, 5, 0.5, 2.0)
    out.append(_le("closure[config11]", "so(4,2) commutation relations, configuration space",
                   generators.check_config11_commutators(pts), cfg.tol.config11_rel))
    span = generators.check_sp2r_span()
    out.append(_exact("sp2r-span", "Sp(2,R) generators inside so(3,2)",
                      sum(not ok for ok in span.consistent.values()) + (10 - span.rank)))
    return out


def suite_states(cfg: SuiteConfig) -> List[Check]:
    out = []
    labels = generators.labels_up_to(5)
    bad_c = bad_e = 0
    for lab in labels:
        st = generators.fock_state(lab)
        bad_c += not generators.check_constraint(st.value).prefactor.is_zero()
        bad_e += not generators.check_eigen_L50(lab).prefactor.is_zero()
    out.append(_exact("fock-constraint", "physical subspace constraint, n <= 5", bad_c))
    out.append(_exact("fock-eigen-L50", "L50 eigenvalue n, n <= 5", bad_e))
    G = hydrogen.gram_matrix(generators.labels_up_to(4), cfg.tol.laguerre_nodes, cfg.tol.phi_nodes)
    out.append(_le("gram-identity", "light-cone orthonormality, n <= 4",
                   np.max(np.abs(G - np.eye(len(G)))), cfg.tol.gram))
    rng = rng_for(cfg.seed, 2)
    pts = random_points(rng, 20, 0.5, 3.0)
    worst = max(hydrogen.schrodinger_residual(lab, x) for lab in generators.labels_up_to(3) for x in pts)
    out.append(_le("schrodinger-discrete", "Coulomb Schrodinger equation, bound states", worst,
                   cfg.tol.schrodinger_discrete))
    worst = max(hydrogen.schrodinger_residual((r1, r2, m), x)
                for r1, r2 in ((1.0, 1.0), (0.5, 1.5)) for m in (0, 1) for x in pts)
    out.append(_le("schrodinger-continuous", "Coulomb Schrodinger equation, scattering states", worst,
                   cfg.tol.schrodinger_continuous))
    return out


def suite_cs_discrete(cfg: SuiteConfig) -> List[Check]:
    out = []
    rng = rng_for(cfg.seed, 3)
    lams = coherent.lambda_sample(rng, 20)
    X = random_points(rng, 10, 0.2, 4.0)
    worst = max(np.max(np.abs(coherent.cs_discrete_series(l1, l2, X, cfg.trunc)
                              - coherent.cs_discrete_closed(coherent.u_of_lambdas(l1, l2), X)))
                for l1, l2 in lams)
    out.append(_le("series-vs-closed", "lambda-series against the closed form", worst, cfg.tol.series_closed))
    worst = max(abs(coherent.cs_norm(coherent.u_of_lambdas(l1, l2), cfg.tol.laguerre_nodes,
                                     cfg.tol.phi_nodes) - 1) for l1, l2 in lams)
    out.append(_le("cs-norm", "<u|u> = 1 under the light-cone measure", worst, cfg.tol.cs_norm))
    rng = rng_for(cfg.seed, 4)
    worst = 0.0
    for _ in range(20):
        z = 0.6 * rng.uniform() * np.exp(2j * math.pi * rng.uniform())
        worst = max(worst, specfun.check_bilinear_laguerre(int(rng.integers(0, 3)), rng.uniform(0, 3),
                                                           rng.uniform(0, 3), z))
    out.append(_le("bilinear-laguerre", "Laguerre bilinear generating function", worst,
                   cfg.tol.bilinear_laguerre))
    worst = 0.0
    for _ in range(20):
        t = rng.uniform(0.5, 2.0) * np.exp(2j * math.pi * rng.uniform())
        z = rng.uniform(0, 2.0) * np.exp(2j * math.pi * rng.uniform())
        worst = max(worst, specfun.check_bessel_generating(t, z))
    out.append(_le("bessel-generating", "Bessel generating function", worst, cfg.tol.bessel_sum))
    rng = rng_for(cfg.seed, 5)
    bad = sum(generators.annihilation_residual(u) != 0 for u in rational_u(rng, 10))
    out.append(_exact("annihilation-exact", "A - Lambda A^dag and B - Lambda B^dag annihilate the CS", bad))
    n_float = cfg.samples or 100
    worst = max(generators.annihilation_residual(u, numeric=True) for u in random_u(rng, n_float))
    out.append(_le("annihilation-float", "annihilation identities, float u", worst, cfg.tol.annihilation_float))
    zs = [(complex(*rng.normal(size=2)) * 0.7, complex(*rng.normal(size=2)) * 0.7) for _ in range(6)]
    worst = max(generators.perelomov_ray_check(generators.perelomov_lambda(1, Fraction(1, 4)), 24, zs),
                generators.perelomov_ray_check(generators.perelomov_lambda(2, Fraction(1, 4)), 24, zs))
    out.append(_le("perelomov-ray", "exp(Lambda X^dag)|0> is the CS ray", worst, 1e-8))
    rng = rng_for(cfg.seed, 6)
    worst = 0.0
    for u, x in zip(random_u(rng, 20), random_points(rng, 20, 0.5, 2.0)):
        worst = max(worst, coherent.covariance_check_L50(u, x, cfg.tol.fd_step_covariance))
    out.append(_le("covariance-L50", "exp(ie L50)|u> = e^{ie}|u e^{ie}>", worst, cfg.tol.covariance_L50))
    worst = 0.0
    for _ in range(10):
        s = complex(*rng.uniform(-0.4, 0.4, 2))
        x3 = rng.uniform(-3, 3, 5)
        red = coherent.cs_1d_reduction((0, 0, s), x3)
        full = coherent.cs_discrete_closed((0, 0, s), np.column_stack([0 * x3, 0 * x3, x3]))
        worst = max(worst, np.max(np.abs(red - full)))
    out.append(_le("reduction-1d", "one-dimensional specialization", worst, cfg.tol.kernel_rel))
    return out


def suite_cs_continuous(cfg: SuiteConfig) -> List[Check]:
    out = []
    rng = rng_for(cfg.seed, 7)
    worst = verify_mellin_grid(rng)
    out.append(_le("mellin", "Mellin transform of the Bessel kernel", worst, cfg.tol.mellin_rel))
    worst = 0.0
    for x in random_points(rng, 20, 0.5, 2.0):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 0.7) / np.linalg.norm(v)
        worst = max(worst, coherent.covariance_check_L06(v, x, cfg.tol.fd_step_covariance))
    out.append(_le("covariance-L06", "dilation covariance with the measure weight", worst, cfg.tol.covariance_L06))
    ratio = coherent.packet_norm_ratio()
    out.append(_le("packet-normalization", "delta(rho - rho') normalization of scattering states",
                   abs(ratio - 1), cfg.tol.packet_rel))
    return out


def verify_mellin_grid(rng) -> float:
    worst = coherent.verify_mellin(0.0, 0, 0.0, 0.0)
    for rho in (0.0, 0.5, 1.0):
        for m in (0, 1, 2):
            for xi, eta in rng.uniform(0.05, 2.0, (3, 2)):
                worst = max(worst, coherent.verify_mellin(rho, m, xi, eta))
    return worst


def suite_robertson(cfg: SuiteConfig) -> List[Check]:
    out = []
    rng = rng_for(cfg.seed, 8)
    us = random_u(rng, cfg.samples or 50, radius=0.7)
    out.append(_le("robertson-gap", "det Sigma = det Omega on the CS",
                   max(robertson.robertson_check(u).gap for u in us), cfg.tol.robertson_gap))
    out.append(_le("constraints", "<c^dag c> = 0 for the four linear constraints",
                   max(float(np.max(robertson.constraint_residuals(u))) for u in us), cfg.tol.constraint))
    rank_bad = sum(robertson.constraint_rank(u) != 4 for u in us[:5])
    out.append(_exact("constraint-rank", "four independent constraints", rank_bad))
    mc_rng = rng_for(cfg.seed, 9)
    worst = max(robertson.monte_carlo_gap(u, 10**6, mc_rng) for u in us[:3])
    out.append(_le("sigma-monte-carlo", "closed-form moments against sampling", worst, cfg.tol.robertson_mc_rel))
    return out


def suite_intertwine(cfg: SuiteConfig) -> List[Check]:
    out = []
    rng = rng_for(cfg.seed, 10)
    samples = []
    for x in random_points(rng, 10, 0.5, 2.0):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        z *= rng.uniform(0, 1) / np.linalg.norm(z)
        samples.append((x, z))
    out.append(_le("intertwining", "kernel intertwines configuration and twistor generators",
                   generators.check_intertwining(samples), cfg.tol.intertwine))
    X = random_points(rng, 10, 0.2, 3.0)
    u = random_u(rng, 1)[0]
    out.append(_le("kernel-discrete", "kernel at z = i k_u gives the discrete CS",
                   coherent.kernel_reduction_discrete(u, X), cfg.tol.kernel_rel))
    v = rng.uniform(-0.5, 0.5, 3)
    out.append(_le("kernel-continuous", "kernel at z = k_v gives the continuous CS",
                   coherent.kernel_reduction_continuous(v, X), cfg.tol.kernel_rel))
    bad = tried = 0
    while tried < 500:
        u4 = (rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)) * rng.uniform() ** 0.25
        try:
            pt = coherent.twistor_interior(u4)
        except ValueError:
            continue
        tried += 1
        bad += not pt.in_interior()
    out.append(_exact("twistor-interior", "bounded domain maps into the future tube", bad))
    return out


RUNNERS: Dict[str, Callable[[SuiteConfig], List[Check]]] = {
    "algebra": suite_algebra,
    "states": suite_states,
    "cs-discrete": suite_cs_discrete,
    "cs-continuous": suite_cs_continuous,
    "robertson": suite_robertson,
    "intertwine": suite_intertwine,
}


def run(cfg: SuiteConfig) -> List[Check]:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    checks = []
    for name in names:
        checks.extend(RUNNERS[name](cfg))
    return checks


def report(cfg: SuiteConfig, checks: List[Check]) -> dict:
    return {"suite": cfg.suite, "checks": [c.to_dict() for c in checks], "seed": cfg.seed,
            "config": cfg.as_dict()}
