"""Weighted sequence spaces on Λ⁺: the L² side ⊕_{μ,d} V_μ and the Fock side F_t(Λ⁺).

A :class:`CoefficientVector` is finitely supported. In ``Mode.FULL`` every
block is a complex vector of length d(μ) in a fixed orthonormal basis of V_μ
whose first element is the K-fixed vector e_μ; in ``Mode.KINVARIANT`` the
block is the single scalar coefficient along e_μ.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable, Mapping

import numpy as np

from .errors import HeatOverflowError
from .lattice import SphericalWeight, as_weight, enumerate_weights, is_spherical
from .models import SymmetricSpaceModel

# exponents above this are refused as plain factors and handled in log space
EXP_GUARD = 600.0
_LOG_MAX = math.log(np.finfo(float).max)


class Mode(enum.Enum):
    FULL = "full"
    KINVARIANT = "kinvariant"


class CoefficientVector:
    __slots__ = ("model", "mode", "entries")

    def __init__(self, model: SymmetricSpaceModel, mode: Mode | str, entries: Mapping | Iterable = ()):
        self.model = model
        self.mode = Mode(mode)
        self.entries: dict[tuple[int, ...], np.ndarray | complex] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for mu, block in items:
            w = as_weight(model, mu)
            if not is_spherical(model, w.vec):
                raise ValueError(f"{w} is not in Λ⁺ of {model.name}")
            if self.mode is Mode.FULL:
                arr = np.asarray(block, dtype=complex).reshape(-1)
                if arr.shape != (w.dim,):
                    raise ValueError(f"block at {w.xi_coords} has length {arr.size}, expected d(μ) = {w.dim}")
                self.entries[w.xi_coords] = arr
            else:
                arr = np.asarray(block, dtype=complex)
                if arr.size != 1:
                    raise ValueError(f"K-invariant block at {w.xi_coords} must be a scalar")
                self.entries[w.xi_coords] = complex(arr.reshape(-1)[0])

    def weights(self) -> list[SphericalWeight]:
        return [as_weight(self.model, k) for k in self.entries]

    def __getitem__(self, mu):
        return self.entries[as_weight(self.model, mu).xi_coords]

    def get(self, mu, default=None):
        return self.entries.get(as_weight(self.model, mu).xi_coords, default)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def copy(self) -> "CoefficientVector":
        out = CoefficientVector(self.model, self.mode)
        out.entries = {k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in self.entries.items()}
        return out

    def map_blocks(self, fn) -> "CoefficientVector":
        """New vector with ``fn(weight, block)`` applied to every block (support kept)."""
        out = CoefficientVector(self.model, self.mode)
        out.entries = {k: fn(as_weight(self.model, k), v) for k, v in self.entries.items()}
        return out

    def __repr__(self):
        return f"CoefficientVector({self.model.name}, {self.mode.value}, support={sorted(self.entries)})"


def _check_pair(model, a: CoefficientVector, b: CoefficientVector):
    if a.mode is not b.mode:
        raise ValueError(f"mode mismatch: {a.mode.value} vs {b.mode.value}")
    if a.model != model or b.model != model:
        raise ValueError(f"coefficient vectors must both belong to {model.name}")


def _block_inner(x, y) -> complex:
    if isinstance(x, np.ndarray):
        return complex(np.vdot(y, x))
    return x * y.conjugate()


def l2_inner(model: SymmetricSpaceModel, a: CoefficientVector, b: CoefficientVector) -> complex:
    """Σ_μ d(μ) ⟨a(μ), b(μ)⟩, linear in ``a`` and conjugate-linear in ``b``."""
    _check_pair(model, a, b)
    total = 0j
    for key, block in a.entries.items():
        other = b.entries.get(key)
        if other is not None:
            total += as_weight(model, key).dim * _block_inner(block, other)
    return total


def _log_weighted_term(log_factor: float, value: complex) -> complex:
    if value == 0:
        return 0j
    log_mag = log_factor + math.log(abs(value))
    if log_mag > _LOG_MAX:
        raise HeatOverflowError(f"Fock-space term exp({log_mag:.1f}) overflows double precision")
    return math.exp(log_mag) * (value / abs(value))


def fock_inner(model: SymmetricSpaceModel, t: float, a: CoefficientVector, b: CoefficientVector) -> complex:
    """Σ_μ d(μ) e^{2t⟨μ+2ρ,μ⟩} ⟨a(μ), b(μ)⟩."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    _check_pair(model, a, b)
    total = 0j
    for key, block in a.entries.items():
        other = b.entries.get(key)
        if other is None:
            continue
        w = as_weight(model, key)
        exponent = 2.0 * t * float(w.casimir)
        value = _block_inner(block, other)
        if exponent <= EXP_GUARD:
            total += w.dim * math.exp(exponent) * value
        else:
            total += _log_weighted_term(exponent + math.log(w.dim), value)
    return total


def l2_norm(model, a: CoefficientVector) -> float:
    return math.sqrt(max(l2_inner(model, a, a).real, 0.0))


def fock_norm(model, t: float, a: CoefficientVector) -> float:
    return math.sqrt(max(fock_inner(model, t, a, a).real, 0.0))


def embed_heat_factor(model: SymmetricSpaceModel, t: float, mu) -> float:
    """e^{t⟨μ+2ρ,μ⟩}; ``t`` may be negative."""
    w = as_weight(model, mu)
    exponent = t * float(w.casimir)
    if exponent > EXP_GUARD:
        raise HeatOverflowError(f"heat factor exp({exponent:.1f}) at μ = {w.xi_coords} exceeds the guard")
    return math.exp(exponent)


def scale_blocks(a: CoefficientVector, factor_of) -> CoefficientVector:
    """Multiply each block by ``factor_of(weight)``."""
    return a.map_blocks(lambda w, v: v * factor_of(w))


def to_full(a: CoefficientVector) -> CoefficientVector:
    """Place each K-invariant scalar on the e_μ (first) basis vector of V_μ."""
    if a.mode is Mode.FULL:
        return a.copy()
    out = CoefficientVector(a.model, Mode.FULL)
    for key, value in a.entries.items():
        block = np.zeros(as_weight(a.model, key).dim, dtype=complex)
        block[0] = value
        out.entries[key] = block
    return out


def zero(model: SymmetricSpaceModel, mode: Mode | str) -> CoefficientVector:
    return CoefficientVector(model, mode)


def random_vector(
    model: SymmetricSpaceModel,
    mode: Mode | str,
    rng: np.random.Generator,
    casimir_cutoff=30,
    max_support: int = 6,
) -> CoefficientVector:
    """Random finitely supported vector; components uniform on the complex unit disc."""
    mode = Mode(mode)
    pool = enumerate_weights(model, casimir_cutoff)
    size = int(rng.integers(1, min(max_support, len(pool)) + 1))
    picks = sorted(rng.choice(len(pool), size=size, replace=False))
    out = CoefficientVector(model, mode)
    for i in picks:
        w = pool[i]
        n = w.dim if mode is Mode.FULL else 1
        radius = np.sqrt(rng.random(n))
        phase = np.exp(2j * np.pi * rng.random(n))
        block = radius * phase
        out.entries[w.xi_coords] = block if mode is Mode.FULL else complex(block[0])
    return out


def to_json(a: CoefficientVector) -> list[dict]:
    rows = []
    for key in sorted(a.entries, key=lambda k: (as_weight(a.model, k).casimir, k)):
        block = a.entries[key]
        values = block if isinstance(block, np.ndarray) else [block]
        rows.append({"weight": list(key), "block": [[float(z.real), float(z.imag)] for z in values]})
    return rows


def from_json(model: SymmetricSpaceModel, mode: Mode | str, rows: list[dict]) -> CoefficientVector:
    items = []
    for row in rows:
        try:
            block = [complex(re, im) for re, im in row["block"]]
            items.append((tuple(row["weight"]), block))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed coefficient entry {row!r}: {exc}") from None
    return CoefficientVector(model, mode, items)
