"""Spherical functions on rank-one models, their continuation to exp(ia)·o,
spherical functions and heat kernels of the odd-dimensional hyperbolic duals,
and truncated reproducing-kernel series.

Radial coordinates: ``theta`` is the geodesic distance from the base point
on the compact side, ``r`` the distance on the noncompact dual (equivalently
the point exp(i r X)·o of M_ℂ). Both are measured with ⟨α, α⟩ = 1 for the
simple restricted root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapabilityError
from .heat import kernel_coefficients
from .lattice import as_weight
from .models import Family, SymmetricSpaceModel, inner
from .rules import integrate


@dataclass(frozen=True)
class RadialPoint:
    """A point on the radial slice: exactly one of ``theta`` or ``r`` is set.

    ``theta`` may be negative (the opposite direction along the same
    geodesic), which is how evenness of zonal functions is expressed.
    """

    theta: float | np.ndarray | None = None
    r: float | np.ndarray | None = None

    def __post_init__(self):
        if (self.theta is None) == (self.r is None):
            raise ValueError("RadialPoint needs exactly one of theta or r")
        if self.theta is not None and np.any(np.abs(np.asarray(self.theta)) > math.pi + 1e-12):
            raise ValueError("theta must lie in [-pi, pi]")
        if self.r is not None and np.any(np.asarray(self.r) < 0):
            raise ValueError("r must be nonnegative")

    @classmethod
    def compact(cls, theta) -> "RadialPoint":
        return cls(theta=theta)

    @classmethod
    def dual(cls, r) -> "RadialPoint":
        return cls(r=r)


def _theta_of(p) -> np.ndarray | float:
    if isinstance(p, RadialPoint):
        if p.theta is None:
            raise ValueError("expected a compact radial point (theta)")
        return p.theta
    return RadialPoint(theta=p).theta


def _r_of(p) -> np.ndarray | float:
    if isinstance(p, RadialPoint):
        if p.r is None:
            raise ValueError("expected a dual radial point (r)")
        return p.r
    return RadialPoint(r=p).r


def _kind(model: SymmetricSpaceModel) -> str:
    if model.family is Family.SPHERE:
        return "sphere"
    if model.family is Family.GROUP_SU and model.rank == 1:
        return "su2"
    raise CapabilityError(f"spherical functions are not available for {model.name}")


def supports_spherical(model: SymmetricSpaceModel) -> bool:
    try:
        _kind(model)
    except CapabilityError:
        return False
    return True


# ---------------------------------------------------------------------------
# compact side


def gegenbauer_ratio(k: int, lam: float, x):
    """C_k^λ(x) / C_k^λ(1) by the three-term recurrence (λ > 0)."""
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), 2.0 * lam * x
    prev1, cur1 = 1.0, 2.0 * lam
    if k == 0:
        return prev if prev.ndim else float(prev)
    for n in range(2, k + 1):
        a, b = 2.0 * (n + lam - 1.0) / n, (n + 2.0 * lam - 2.0) / n
        prev, cur = cur, a * x * cur - b * prev
        prev1, cur1 = cur1, a * cur1 - b * prev1
    out = cur / cur1
    return out if out.ndim else float(out)


def _su2_character(k: int, values, hyperbolic: bool):
    # normalized SU(2) character as a sum over the weights k, k-2, ..., -k
    values = np.asarray(values, dtype=float)
    fn = np.cosh if hyperbolic else np.cos
    total = np.zeros_like(values)
    for j in range(k + 1):
        total = total + fn((k - 2 * j) * values)
    out = total / (k + 1)
    return out if out.ndim else float(out)


def spherical_eval(model: SymmetricSpaceModel, mu, p):
    """ψ_μ(exp(θX)·o), normalized to ψ_μ(o) = 1."""
    kind = _kind(model)
    k = as_weight(model, mu).xi_coords[0]
    theta = _theta_of(p)
    if kind == "sphere":
        d = model.param_dict["d"]
        return gegenbauer_ratio(k, 0.5 * (d - 1), np.cos(theta))
    return _su2_character(k, theta, hyperbolic=False)


def spherical_eval_holo(model: SymmetricSpaceModel, mu, p):
    """ψ̃_μ(exp(irX)·o): the continuation θ ↦ i r (cos θ ↦ cosh r)."""
    kind = _kind(model)
    k = as_weight(model, mu).xi_coords[0]
    r = _r_of(p)
    if kind == "sphere":
        d = model.param_dict["d"]
        return gegenbauer_ratio(k, 0.5 * (d - 1), np.cosh(r))
    return _su2_character(k, r, hyperbolic=True)


def compact_density_exponents(model: SymmetricSpaceModel) -> list[tuple[int, float]]:
    """(m_α, α(H)/α_1(H)) for each positive root of a rank-one model."""
    if model.rank != 1:
        raise CapabilityError(f"radial reduction needs a rank-one model, got {model.name}")
    base = min(abs(r.coords[0]) for r in model.positive_roots)
    return [(r.multiplicity, float(r.coords[0] / base)) for r in model.positive_roots]


# ---------------------------------------------------------------------------
# noncompact dual


def dual_dimension(model: SymmetricSpaceModel) -> int:
    """Dimension n of the real hyperbolic dual H^n; odd n only."""
    kind = _kind(model)
    n = model.param_dict["d"] if kind == "sphere" else 3
    if n % 2 == 0:
        raise CapabilityError(f"{model.name}: even-dimensional dual H^{n} has no closed-form heat kernel here")
    return n


def rho_squared(model: SymmetricSpaceModel) -> float:
    return float(inner(model, model.rho, model.rho))


@lru_cache(maxsize=None)
def _descent(m: int, seed: str):
    """(expr, value at r = 0) for (1/sinh r ∂_r)^m applied to a seed in r."""
    import sympy as sp

    r, t, lam = sp.symbols("r t lam", positive=True)
    expr = sp.exp(-r**2 / (4 * t)) if seed == "heat" else sp.cos(lam * r)
    for _ in range(m):
        expr = sp.diff(expr, r) / sp.sinh(r)
    at_zero = sp.simplify(sp.limit(expr, r, 0))
    return expr, at_zero, (r, t, lam)


@lru_cache(maxsize=None)
def _descent_callables(m: int, seed: str):
    import sympy as sp

    expr, at_zero, (r, t, lam) = _descent(m, seed)
    args = (r, t) if seed == "heat" else (r, lam)
    return (
        sp.lambdify(args, expr, modules="numpy"),
        sp.lambdify(args, expr, modules="mpmath"),
        sp.lambdify(args[1:], at_zero, modules="mpmath"),
    )


def _eval_descent(m: int, seed: str, r, param):
    """Evaluate a descent expression; small r goes through mpmath to avoid cancellation."""
    import mpmath

    fast, slow, zero = _descent_callables(m, seed)
    r = np.asarray(r, dtype=float)
    flat = r.reshape(-1)
    is_complex = isinstance(param, complex)
    out = np.empty(flat.shape, dtype=complex if is_complex else float)
    big = flat >= 1.0
    if np.any(big):
        with np.errstate(all="ignore"):
            out[big] = fast(flat[big], param)
    with mpmath.workdps(60):
        for i in np.flatnonzero(~big):
            v = zero(param) if flat[i] == 0 else slow(mpmath.mpf(float(flat[i])), param)
            out[i] = complex(v) if is_complex else float(mpmath.re(v))
    out = out.reshape(r.shape)
    return out if out.ndim else out[()]


def dual_spherical(model: SymmetricSpaceModel, lam, p):
    """φ_λ(exp(rX)·o) on the hyperbolic dual H^n (n odd); φ_λ(o) = 1.

    H³: sin(λr)/(λ sinh r). Higher odd n: (1/sinh r ∂_r)^m cos(λr), normalized.
    """
    n = dual_dimension(model)
    r = np.asarray(_r_of(p), dtype=float)
    lam = complex(lam)
    if n == 3:
        if lam == 0:
            with np.errstate(invalid="ignore", divide="ignore"):
                out = np.where(r == 0, 1.0, r / np.sinh(np.where(r == 0, 1.0, r)))
            return out.astype(complex) if out.ndim else complex(out)
        with np.errstate(invalid="ignore", divide="ignore"):
            safe = np.where(r == 0, 1.0, r)
            out = np.sin(lam * safe) / (lam * np.sinh(safe))
            out = np.where(r == 0, 1.0 + 0j, out)
        return out if out.ndim else complex(out)
    m = (n - 1) // 2
    if lam == 0:
        lam = 1e-8 + 0j
    value = _eval_descent(m, "spherical", r, lam)
    norm = complex(_descent_callables(m, "spherical")[2](lam))
    return value / norm


def _heat_shape(n: int, t: float, r):
    """Uncalibrated heat kernel (4πt)^{-1/2} e^{-ρ²t} (-1/(2π sinh r) ∂_r)^m e^{-r²/4t}."""
    m = (n - 1) // 2
    r = np.asarray(r, dtype=float)
    if n == 3:
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(r == 0, 1.0, r / np.sinh(np.where(r == 0, 1.0, r)))
        return (4 * np.pi * t) ** -1.5 * np.exp(-t) * ratio * np.exp(-r * r / (4 * t))
    core = _eval_descent(m, "heat", r, float(t))
    return (4 * np.pi * t) ** -0.5 * math.exp(-m * m * t) * (-1.0 / (2 * np.pi)) ** m * core


def dual_density(model: SymmetricSpaceModel, r):
    """J₁(r) = Π sinh^{m_α}(α(r)) on the dual."""
    r = np.asarray(r, dtype=float)
    out = np.ones_like(r)
    for mult, scale in compact_density_exponents(model):
        out = out * np.sinh(scale * r) ** mult
    return out


CALIBRATION_T = 1.0


@lru_cache(maxsize=None)
def _calibration(n: int, model_key) -> float:
    model = model_key[0]
    t = CALIBRATION_T
    cutoff = max(10.0, 8.0 * math.sqrt(t) * math.log(10.0) + 5.0)
    mass = integrate(lambda r: _heat_shape(n, t, r) * dual_density(model, r), 0.0, cutoff, panels=512)
    return 1.0 / mass


def heat_calibration(model: SymmetricSpaceModel) -> float:
    """Constant κ making ∫ h_t J₁ dr = 1 (fixed once, at t = 1)."""
    n = dual_dimension(model)
    return _calibration(n, (model,))


def dual_heat_kernel(model: SymmetricSpaceModel, t: float, p):
    """Heat kernel h_t of the hyperbolic dual, normalized against J₁(r) dr."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    n = dual_dimension(model)
    out = heat_calibration(model) * _heat_shape(n, t, _r_of(p))
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# reproducing kernel


def kernel_eval(model: SymmetricSpaceModel, t: float, p, casimir_cutoff):
    """Truncated k_t = Σ d(μ) e^{-2t⟨μ+2ρ,μ⟩} ψ̃_μ at a radial point (real arithmetic)."""
    coeffs = kernel_coefficients(model, t, casimir_cutoff)
    if not isinstance(p, RadialPoint):
        p = RadialPoint(theta=p)
    total = 0.0
    for key, c in coeffs:
        if p.theta is not None:
            total = total + c.real * spherical_eval(model, key, p)
        else:
            total = total + c.real * spherical_eval_holo(model, key, p)
    return total


def kernel_partial_sums(model: SymmetricSpaceModel, t: float, p, casimir_cutoff) -> list[float]:
    coeffs = kernel_coefficients(model, t, casimir_cutoff)
    if not isinstance(p, RadialPoint):
        p = RadialPoint(theta=p)
    sums, total = [], 0.0
    for key, c in coeffs:
        f = spherical_eval if p.theta is not None else spherical_eval_holo
        total += c.real * float(f(model, key, p))
        sums.append(total)
    return sums
