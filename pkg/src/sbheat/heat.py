"""The heat (Segal-Bargmann) transform as a diagonal multiplier in coefficient space."""
from __future__ import annotations

import math
from fractions import Fraction

from .coefficients import EXP_GUARD, CoefficientVector, Mode
from .errors import HeatOverflowError
from .lattice import enumerate_weights
from .models import SymmetricSpaceModel

# e^{-x} stays a normal double for x below ~708
_DAMPING_LIMIT = 700.0


def _exp_scaled(t: float, casimir: Fraction, sign: int) -> float:
    """e^{sign·t·casimir} with the exponent formed exactly, then split as hi + lo."""
    x = Fraction(t) * casimir
    hi = float(x)
    lo = float(x - Fraction(hi))
    return math.exp(sign * hi) * (1.0 + sign * lo)


def _require_t(t):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def heat_apply(model: SymmetricSpaceModel, t: float, a: CoefficientVector) -> CoefficientVector:
    """H_t in coefficients: a(μ) ↦ e^{-t⟨μ+2ρ,μ⟩} a(μ)."""
    _require_t(t)
    if a.model != model:
        raise ValueError(f"vector belongs to {a.model.name}, not {model.name}")

    def damp(w, block):
        x = t * float(w.casimir)
        if x > _DAMPING_LIMIT:
            raise HeatOverflowError(f"e^-{x:.1f} at μ = {w.xi_coords} underflows double precision")
        return block * _exp_scaled(t, w.casimir, -1)

    return a.map_blocks(damp)


def heat_invert(model: SymmetricSpaceModel, t: float, b: CoefficientVector) -> CoefficientVector:
    """Inverse multiplier b(μ) ↦ e^{t⟨μ+2ρ,μ⟩} b(μ) on the finite support of ``b``."""
    _require_t(t)
    if b.model != model:
        raise ValueError(f"vector belongs to {b.model.name}, not {model.name}")

    def grow(w, block):
        x = t * float(w.casimir)
        if x > EXP_GUARD:
            raise HeatOverflowError(f"inverse heat factor e^{x:.1f} at μ = {w.xi_coords} is unbounded in practice")
        return block * _exp_scaled(t, w.casimir, 1)

    return b.map_blocks(grow)


def kernel_coefficients(model: SymmetricSpaceModel, t: float, casimir_cutoff) -> CoefficientVector:
    """Series coefficients c(μ) = d(μ) e^{-2t⟨μ+2ρ,μ⟩} of k_t against ψ̃_μ.

    These are the coefficients of k_t = Σ c(μ) ψ̃_μ, not sequence-space
    coordinates; the latter are c(μ)/d(μ).
    """
    _require_t(t)
    out = CoefficientVector(model, Mode.KINVARIANT)
    for w in enumerate_weights(model, casimir_cutoff):
        out.entries[w.xi_coords] = complex(w.dim * math.exp(-2.0 * t * float(w.casimir)))
    return out


def kernel_tail_estimate(model: SymmetricSpaceModel, t: float, casimir_cutoff) -> float:
    """Magnitude of the last included kernel coefficient (heuristic truncation error)."""
    weights = enumerate_weights(model, casimir_cutoff)
    last = weights[-1]
    return last.dim * math.exp(-2.0 * t * float(last.casimir))
