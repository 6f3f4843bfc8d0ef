"""Named tolerances, steps and sample sizes used across the package."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # numerical special functions
    gamma_rel: float = 1e-12
    series_term_rel: float = 1e-16
    hyp1f1_series_rel: float = 1e-10
    hyp1f1_asym_rel: float = 1e-6
    # finite differences
    fd_step: float = 1e-4
    fd_step_laplacian: float = 1e-3
    fd_step_commutator: float = 1e-2
    fd_step_intertwine: float = 1e-4
    fd_step_covariance: float = 1e-4
    # quadrature
    laguerre_nodes: int = 64
    phi_nodes: int = 64
    adaptive_abs: float = 1e-6
    # acceptance thresholds
    annihilation_float: float = 1e-10
    config11_rel: float = 1e-5
    gram: float = 1e-8
    schrodinger_discrete: float = 1e-5
    schrodinger_continuous: float = 1e-4
    series_closed: float = 1e-8
    cs_norm: float = 1e-8
    bilinear_laguerre: float = 1e-8
    bessel_sum: float = 1e-10
    robertson_gap: float = 1e-10
    robertson_mc_rel: float = 0.05
    constraint: float = 1e-10
    mellin_rel: float = 1e-4
    covariance_L50: float = 1e-6
    covariance_L06: float = 1e-5
    intertwine: float = 1e-6
    kernel_rel: float = 1e-12
    packet_rel: float = 0.05

    def override(self, mapping: dict) -> "Tolerances":
        known = {f.name: f.type for f in fields(self)}
        updates = {}
        for key, value in mapping.items():
            if key not in known:
                raise KeyError(f"unknown tolerance key {key!r}")
            current = getattr(self, key)
            updates[key] = int(value) if isinstance(current, int) else float(value)
        return replace(self, **updates)

    def as_dict(self) -> dict:
        return asdict(self)


TOL = Tolerances()
