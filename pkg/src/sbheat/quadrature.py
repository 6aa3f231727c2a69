"""Radial quadrature checks of the integral identities behind the coefficient model.

Only one-dimensional integrals run here: group integrals are reduced
analytically by Schur orthogonality and what remains is a radial integral
against the compact density Π sin^{m_α} or the dual density Π sinh^{m_α}.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .errors import QuadratureSpecError
from .lattice import as_weight, enumerate_weights
from .report import VerificationReport
from .rules import GL_NODES_PER_PANEL, composite_rule
from .special import (
    _kind,
    compact_density_exponents,
    dual_density,
    dual_heat_kernel,
    dual_spherical,
    heat_calibration,
    rho_squared,
    spherical_eval,
    spherical_eval_holo,
)

SCHEMES = ("gauss_legendre", "tanh_sinh")
# Gaussian factor at the radial cutoff must be below this
GAUSSIAN_FLOOR = 1e-18


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "gauss_legendre"
    panels: int = 256
    radial_cutoff: float | None = None
    target_tol: float = 1e-8

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise QuadratureSpecError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if int(self.panels) != self.panels or self.panels < 8:
            raise QuadratureSpecError(f"panels must be an integer >= 8, got {self.panels}")
        if self.radial_cutoff is not None and not self.radial_cutoff > 0:
            raise QuadratureSpecError("radial_cutoff must be positive")
        if not self.target_tol > 0:
            raise QuadratureSpecError("target_tol must be positive")

    @classmethod
    def from_dict(cls, data: dict | None) -> "QuadratureSpec":
        data = dict(data or {})
        unknown = set(data) - {"scheme", "panels", "radial_cutoff", "target_tol"}
        if unknown:
            raise QuadratureSpecError(f"unknown quadrature keys {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_SPEC = QuadratureSpec()


def default_cutoff(t: float) -> float:
    """Radial cutoff for integrands carrying h_{2t}: max(10, 8√t·ln10 + 5)."""
    return max(10.0, 8.0 * math.sqrt(t) * math.log(10.0) + 5.0)


def _run(scheme, a, b, panels, g):
    nodes, weights = composite_rule(scheme, float(a), float(b), int(panels))
    return float(np.dot(weights, g(nodes)))


def _integrate(g, a, b, spec: QuadratureSpec) -> tuple[float, dict]:
    fine = _run(spec.scheme, a, b, spec.panels, g)
    coarse = _run(spec.scheme, a, b, max(spec.panels // 2, 1), g)
    diag = {
        "scheme": spec.scheme,
        "panels": spec.panels,
        "interval": [float(a), float(b)],
        "error_estimate": abs(fine - coarse),
    }
    if spec.scheme == "gauss_legendre":
        diag["nodes_per_panel"] = GL_NODES_PER_PANEL
    return fine, diag


# ---------------------------------------------------------------------------
# compact slice


def compact_normalization(model) -> float:
    """c with c ∫₀^π Π sin^{m_α}(θ) dθ = 1."""
    _kind(model)
    exps = compact_density_exponents(model)
    if len(exps) == 1 and exps[0][1] == 1.0:
        m = exps[0][0]
        log_int = 0.5 * math.log(math.pi) + gammaln((m + 1) / 2) - gammaln(m / 2 + 1)
        return math.exp(-log_int)
    total = _run("gauss_legendre", 0.0, math.pi, 512, lambda th: _compact_density(model, th))
    return 1.0 / total


def _compact_density(model, theta):
    out = np.ones_like(theta)
    for mult, scale in compact_density_exponents(model):
        out = out * np.sin(scale * theta) ** mult
    return out


def integrate_radial_compact_with_diagnostics(model, f: Callable, spec: QuadratureSpec = DEFAULT_SPEC):
    c = compact_normalization(model)
    value, diag = _integrate(lambda th: f(th) * _compact_density(model, th), 0.0, math.pi, spec)
    diag["normalization"] = c
    return c * value, diag


def integrate_radial_compact(model, f: Callable, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """∫_M f(dist to o) dm with dm of total mass one."""
    return integrate_radial_compact_with_diagnostics(model, f, spec)[0]


# ---------------------------------------------------------------------------
# dual side


def radial_cutoff(spec: QuadratureSpec, heat_time: float | None, growth: float = 0.0) -> float:
    """Cutoff for an integrand ≲ e^{growth·r} · e^{-r²/(4·heat_time)}; validated against the Gaussian floor."""
    if spec.radial_cutoff is not None:
        cutoff = spec.radial_cutoff
    elif heat_time is None:
        cutoff = default_cutoff(1.0)
    else:
        cutoff = max(default_cutoff(heat_time / 2.0), 2.0 * heat_time * growth + math.sqrt(180.0 * heat_time))
    if heat_time is not None and math.exp(-cutoff * cutoff / (4.0 * heat_time)) >= GAUSSIAN_FLOOR:
        raise QuadratureSpecError(
            f"radial cutoff {cutoff} leaves the heat Gaussian at {math.exp(-cutoff**2 / (4 * heat_time)):.3g}"
            f" >= {GAUSSIAN_FLOOR} for heat time {heat_time}"
        )
    return cutoff


def integrate_radial_dual_with_diagnostics(model, f: Callable, spec=DEFAULT_SPEC, heat_time=None, growth=0.0):
    cutoff = radial_cutoff(spec, heat_time, growth)
    value, diag = _integrate(lambda r: f(r) * dual_density(model, r), 0.0, cutoff, spec)
    diag["radial_cutoff"] = cutoff
    return value, diag


def integrate_radial_dual(model, f: Callable, spec: QuadratureSpec = DEFAULT_SPEC, heat_time=None, growth=0.0) -> float:
    """∫₀^R f(r) J₁(r) dr with J₁ = Π sinh^{m_α}(α(r))."""
    return integrate_radial_dual_with_diagnostics(model, f, spec, heat_time, growth)[0]


# ---------------------------------------------------------------------------
# identity checks


def verify_heat_mass(model, t: float, spec=DEFAULT_SPEC, tolerance=1e-8) -> VerificationReport:
    value, diag = integrate_radial_dual_with_diagnostics(
        model, lambda r: dual_heat_kernel(model, t, r), spec, heat_time=t
    )
    diag["calibration"] = heat_calibration(model)
    return VerificationReport.compare("heat_kernel_mass", model.name, {"t": t}, value, 1.0, tolerance, diag)


def verify_heat_identity(model, lam: float, t: float, spec=DEFAULT_SPEC, tolerance=1e-6) -> VerificationReport:
    """∫ h_{2t} φ_{-λ} J₁ dr against e^{-2t(λ² + ρ²)} for real λ."""
    lam = float(lam)
    value, diag = integrate_radial_dual_with_diagnostics(
        model,
        lambda r: dual_heat_kernel(model, 2 * t, r) * np.real(dual_spherical(model, -lam, r)),
        spec,
        heat_time=2 * t,
    )
    diag["calibration"] = heat_calibration(model)
    reference = math.exp(-2 * t * (lam * lam + rho_squared(model)))
    return VerificationReport.compare("heat_spherical_integral", model.name, {"lambda": lam, "t": t},
                                      value, reference, tolerance, diag)


def verify_fock_inner(model, mu, t: float, spec=DEFAULT_SPEC, tolerance=1e-5) -> VerificationReport:
    """⟨ψ̃_μ, ψ̃_μ⟩_t by radial reduction against e^{2t⟨μ+2ρ,μ⟩}/d(μ)."""
    w = as_weight(model, mu)
    growth = w.xi_coords[0] + 2.0 * math.sqrt(rho_squared(model))
    value, diag = integrate_radial_dual_with_diagnostics(
        model,
        lambda r: spherical_eval_holo(model, w, r) * dual_heat_kernel(model, 2 * t, r),
        spec,
        heat_time=2 * t,
        growth=growth,
    )
    diag["calibration"] = heat_calibration(model)
    reference = math.exp(2 * t * float(w.casimir)) / w.dim
    return VerificationReport.compare("fock_inner_spherical", model.name, {"weight": list(w.xi_coords), "t": t},
                                      value / w.dim, reference, tolerance, diag)


def verify_schur(model, mu, nu, spec=DEFAULT_SPEC, diag_tol=1e-9, off_tol=1e-10) -> VerificationReport:
    """∫ ψ_μ ψ̄_ν dm against δ_{μν}/d(μ), absolute error."""
    a, b = as_weight(model, mu), as_weight(model, nu)
    value, diag = integrate_radial_compact_with_diagnostics(
        model, lambda th: spherical_eval(model, a, th) * spherical_eval(model, b, th), spec
    )
    same = a.xi_coords == b.xi_coords
    reference = 1.0 / a.dim if same else 0.0
    return VerificationReport.compare(
        "schur_orthogonality", model.name, {"mu": list(a.xi_coords), "nu": list(b.xi_coords)},
        value, reference, diag_tol if same else off_tol, diag, absolute=True,
    )


def spherical_transform(model, f: Callable, weights, spec=DEFAULT_SPEC) -> dict:
    """f̂(μ) = ⟨f, ψ_μ⟩ for each weight (ψ_μ is real on the compact slice)."""
    out = {}
    for w in weights:
        w = as_weight(model, w)
        out[w.xi_coords] = integrate_radial_compact(model, lambda th: f(th) * spherical_eval(model, w, th), spec)
    return out


def verify_plancherel(model, f: Callable, cutoff, spec=DEFAULT_SPEC, tolerance=1e-4, name="f") -> VerificationReport:
    """Σ_{casimir ≤ cutoff} d(μ)|f̂(μ)|² against ∫|f|² dm."""
    weights = enumerate_weights(model, cutoff)
    coeffs = spherical_transform(model, f, weights, spec)
    partial = sum(w.dim * abs(coeffs[w.xi_coords]) ** 2 for w in weights)
    norm_sq, diag = integrate_radial_compact_with_diagnostics(model, lambda th: np.abs(f(th)) ** 2, spec)
    last = weights[-1]
    diag["tail_estimate"] = last.dim * abs(coeffs[last.xi_coords]) ** 2
    diag["terms"] = len(weights)
    return VerificationReport.compare("spherical_plancherel", model.name, {"function": name, "cutoff": str(cutoff)},
                                      partial, norm_sq, tolerance, diag)


def with_panels(spec: QuadratureSpec, panels: int) -> QuadratureSpec:
    return replace(spec, panels=panels)
