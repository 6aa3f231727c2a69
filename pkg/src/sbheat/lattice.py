"""The spherical weight semilattice Λ⁺, dimensions d(μ) and Casimir values."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .models import SymmetricSpaceModel, inner


@dataclass(frozen=True)
class SphericalWeight:
    """μ = Σ k_j ξ_j with its cached dimension and Casimir value ⟨μ+2ρ, μ⟩."""

    xi_coords: tuple[int, ...]
    vec: tuple[Fraction, ...]
    dim: int
    casimir: Fraction

    @property
    def is_zero(self) -> bool:
        return not any(self.xi_coords)

    def __repr__(self):
        return f"SphericalWeight{self.xi_coords}"


def weight_vector(model: SymmetricSpaceModel, xi_coords: Sequence[int]) -> tuple[Fraction, ...]:
    vec = [Fraction(0)] * model.rank
    for k, xi in zip(xi_coords, model.fundamental_weights):
        for i in range(model.rank):
            vec[i] += k * xi[i]
    return tuple(vec)


def is_spherical(model: SymmetricSpaceModel, vec: Sequence) -> bool:
    """Cartan-Helgason membership: ⟨μ, α⟩/⟨α, α⟩ ∈ ℤ⁺ for every positive root."""
    for root in model.positive_roots:
        q = inner(model, vec, root.coords) / inner(model, root.coords, root.coords)
        if q.denominator != 1 or q < 0:
            return False
    return True


def casimir_of(model: SymmetricSpaceModel, vec: Sequence) -> Fraction:
    two_rho = tuple(2 * c for c in model.rho)
    return inner(model, tuple(Fraction(a) + b for a, b in zip(vec, two_rho)), vec)


def _weyl_su(coords: Sequence[int]) -> int:
    # highest weight Σ k_j ω_j of SU(n); positive roots α_i + ... + α_{j-1}
    r = len(coords)
    num, den = 1, 1
    for i in range(r):
        for j in range(i + 1, r + 1):
            num *= sum(coords[i:j]) + (j - i)
            den *= j - i
    return num // den


def _polynomial_dim(expr: str, coords: Sequence[int]) -> Fraction:
    import sympy

    symbols = [sympy.Symbol(f"k{j + 1}") for j in range(len(coords))]
    value = sympy.sympify(expr).subs(dict(zip(symbols, coords)))
    value = sympy.nsimplify(value)
    if not value.is_Rational:
        raise ValueError(f"dimension polynomial {expr!r} is not rational at {tuple(coords)}")
    return Fraction(int(value.p), int(value.q))


def _raw_dimension(model: SymmetricSpaceModel, coords: tuple[int, ...]) -> int:
    tag = model.dim_spec[0]
    if tag == "sphere":
        d = model.dim_spec[1]
        k = coords[0]
        # homogeneous harmonics of degree k in d+1 variables
        return comb(k + d, d) - (comb(k + d - 2, d) if k >= 2 else 0)
    if tag == "weyl_su_squared":
        return _weyl_su(coords) ** 2
    if tag == "product":
        out, offset = 1, 0
        for f in model.factors:
            out *= _raw_dimension(f, coords[offset:offset + f.rank])
            offset += f.rank
        return out
    if tag == "callable":
        value = Fraction(model.dim_spec[1](*coords))
    else:
        value = _polynomial_dim(model.dim_spec[1], coords)
    if value.denominator != 1 or value < 1:
        raise ValueError(f"dimension polynomial gives {value} at {coords}; expected a positive integer")
    return int(value)


def weight(model: SymmetricSpaceModel, *xi_coords) -> SphericalWeight:
    """The spherical weight with the given ξ-coordinates (cached per model)."""
    if len(xi_coords) == 1 and isinstance(xi_coords[0], (tuple, list)):
        xi_coords = tuple(xi_coords[0])
    coords = tuple(int(k) for k in xi_coords)
    cache = model._cache.setdefault("weights", {})
    hit = cache.get(coords)
    if hit is not None:
        return hit
    if len(coords) != model.rank or any(k < 0 for k in coords) or any(int(k) != k for k in xi_coords):
        raise ValueError(f"{model.name}: ξ-coordinates must be {model.rank} nonnegative integers, got {xi_coords}")
    vec = weight_vector(model, coords)
    w = SphericalWeight(coords, vec, _raw_dimension(model, coords), casimir_of(model, vec))
    cache[coords] = w
    return w


def as_weight(model: SymmetricSpaceModel, mu) -> SphericalWeight:
    """Accept a SphericalWeight, an int (rank one) or a coordinate tuple."""
    if isinstance(mu, SphericalWeight):
        if len(mu.xi_coords) != model.rank:
            raise ValueError(f"weight {mu} does not belong to {model.name}")
        return mu
    if isinstance(mu, int):
        return weight(model, mu)
    return weight(model, tuple(mu))


def dimension(model: SymmetricSpaceModel, mu) -> int:
    """d(μ) = dim V_μ."""
    if isinstance(mu, SphericalWeight) and not is_spherical(model, mu.vec):
        raise ValueError(f"{mu} fails Cartan-Helgason membership for {model.name}")
    return as_weight(model, mu).dim


def casimir(model: SymmetricSpaceModel, mu) -> Fraction:
    """⟨μ+2ρ, μ⟩, the negated Laplace eigenvalue on L²(M)_μ."""
    return as_weight(model, mu).casimir


def enumerate_weights(model: SymmetricSpaceModel, casimir_cutoff) -> list[SphericalWeight]:
    """All μ ∈ Λ⁺ with ⟨μ+2ρ, μ⟩ ≤ cutoff, sorted by (casimir, ξ-coordinates).

    The Casimir is nondecreasing in each ξ-coordinate (⟨ξ_i, ξ_j⟩ ≥ 0 and
    ⟨ξ_j, ρ⟩ > 0), so a coordinate walk can stop at the first overshoot.
    """
    cutoff = Fraction(casimir_cutoff)
    if cutoff < 0:
        raise ValueError("casimir cutoff must be nonnegative")
    r = model.rank
    found: list[SphericalWeight] = []

    def walk(j: int, prefix: list[int]):
        if j == r:
            found.append(weight(model, tuple(prefix)))
            return
        k = 0
        while True:
            trial = prefix + [k] + [0] * (r - j - 1)
            if casimir_of(model, weight_vector(model, trial)) > cutoff:
                break
            walk(j + 1, prefix + [k])
            k += 1

    walk(0, [])
    found.sort(key=lambda w: (w.casimir, w.xi_coords))
    return found


def dimension_polynomial_degree(model: SymmetricSpaceModel) -> int:
    """Σ_{α∈Σ⁺} m_α, the expected degree of μ ↦ d(μ)."""
    return sum(r.multiplicity for r in model.positive_roots)


def weyl_su_dimension(coords: Sequence[int]) -> int:
    return _weyl_su(coords)


__all__ = [
    "SphericalWeight",
    "as_weight",
    "casimir",
    "dimension",
    "enumerate_weights",
    "is_spherical",
    "weight",
    "weyl_su_dimension",
]
