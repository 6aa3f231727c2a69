"""Stage maps between propagating models, the isometric embeddings γ, δ, η, φ,
and finite-stage representatives of direct-limit elements.

Along a propagation pair the weight map ι keeps ξ-coordinates (padding with
zeros), and V_μ sits inside V_{ι(μ)} with multiplicity one. That inclusion is
realized here as the first d_lower(μ) coordinates of the upper block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import EXP_GUARD, CoefficientVector, Mode, fock_norm, l2_norm
from .errors import ConfigurationError, HeatOverflowError
from .heat import heat_apply
from .lattice import SphericalWeight, as_weight, weight
from .models import SymmetricSpaceModel, check_propagation
from .report import VerificationReport


@dataclass(frozen=True, eq=False)
class StageMap:
    lower: SymmetricSpaceModel
    upper: SymmetricSpaceModel
    matching: tuple[int, ...]
    t: float | None = None
    _scales: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.t is not None and not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if len(self.matching) != self.lower.rank or len(set(self.matching)) != len(self.matching):
            raise ConfigurationError(f"matching {self.matching} is not injective on rank {self.lower.rank}")
        if any(not 0 <= j < self.upper.rank for j in self.matching):
            raise ConfigurationError(f"matching {self.matching} leaves rank {self.upper.rank}")

    def with_t(self, t: float) -> "StageMap":
        return StageMap(self.lower, self.upper, self.matching, t)

    def __repr__(self):
        return f"StageMap({self.lower.name} -> {self.upper.name}, matching={self.matching}, t={self.t})"


def stage_map(lower: SymmetricSpaceModel, upper: SymmetricSpaceModel, t: float | None = None) -> StageMap:
    """Validated propagation pair; rejection raises ConfigurationError."""
    report = check_propagation(lower, upper)
    if not report.accepted:
        raise ConfigurationError(f"{upper.name} does not propagate {lower.name}: {report.reason}")
    return StageMap(lower, upper, report.matching, t)


def iota(smap: StageMap, mu) -> SphericalWeight:
    """ι(Σ k_j ξ_j) = Σ k_j ξ'_{matching(j)}."""
    w = as_weight(smap.lower, mu)
    coords = [0] * smap.upper.rank
    for j, k in enumerate(w.xi_coords):
        coords[smap.matching[j]] = k
    return weight(smap.upper, tuple(coords))


def _scales(smap: StageMap, key) -> tuple[SphericalWeight, float, float]:
    """(ι(μ), √(d/d'), cas(μ) − cas(ι(μ))) cached per weight."""
    hit = smap._scales.get(key)
    if hit is None:
        low = as_weight(smap.lower, key)
        up = iota(smap, low)
        hit = (up, math.sqrt(low.dim / up.dim), float(low.casimir - up.casimir))
        smap._scales[key] = hit
    return hit


def _heat_ratio(smap: StageMap, gap: float) -> float:
    if smap.t is None:
        raise ValueError(f"{smap!r} needs t for the Fock-side embedding")
    x = smap.t * gap
    if x > EXP_GUARD:
        raise HeatOverflowError(f"heat factor ratio e^{x:.1f} exceeds the guard")
    return math.exp(x)


def _require(a: CoefficientVector, smap: StageMap, mode: Mode, name: str):
    if a.mode is not mode:
        raise ValueError(f"{name} acts on {mode.value} vectors, got {a.mode.value}")
    if a.model != smap.lower:
        raise ValueError(f"{name}: vector belongs to {a.model.name}, not {smap.lower.name}")


def _embed(smap: StageMap, a: CoefficientVector, heat: bool) -> CoefficientVector:
    out = CoefficientVector(smap.upper, a.mode)
    for key, block in a.entries.items():
        up, root, gap = _scales(smap, key)
        factor = root * _heat_ratio(smap, gap) if heat else root
        if a.mode is Mode.FULL:
            big = np.zeros(up.dim, dtype=complex)
            big[: block.size] = factor * block
            out.entries[up.xi_coords] = big
        else:
            out.entries[up.xi_coords] = factor * block
    return out


def gamma_embed(smap: StageMap, a: CoefficientVector) -> CoefficientVector:
    """L²-isometric γ: block ↦ √(d/d')·block placed in the first d slots at ι(μ)."""
    _require(a, smap, Mode.FULL, "gamma_embed")
    return _embed(smap, a, heat=False)


def delta_embed(smap: StageMap, b: CoefficientVector) -> CoefficientVector:
    """Fock-isometric δ: γ's rule times e^{t·cas(μ)}/e^{t·cas'(ι(μ))}."""
    _require(b, smap, Mode.FULL, "delta_embed")
    return _embed(smap, b, heat=True)


def eta_embed(smap: StageMap, a: CoefficientVector) -> CoefficientVector:
    """K-invariant counterpart of γ."""
    _require(a, smap, Mode.KINVARIANT, "eta_embed")
    return _embed(smap, a, heat=False)


def phi_embed(smap: StageMap, b: CoefficientVector) -> CoefficientVector:
    """K-invariant counterpart of δ."""
    _require(b, smap, Mode.KINVARIANT, "phi_embed")
    return _embed(smap, b, heat=True)


def embeddings_for(mode: Mode):
    """(L² embedding, Fock embedding) for the given mode."""
    return (gamma_embed, delta_embed) if Mode(mode) is Mode.FULL else (eta_embed, phi_embed)


def max_relative_deviation(x: CoefficientVector, y: CoefficientVector) -> float:
    """Largest |x_i − y_i| / max(|x_i|, |y_i|) over all components of both supports."""
    worst = 0.0
    for key in set(x.entries) | set(y.entries):
        u = x.entries.get(key)
        v = y.entries.get(key)
        u = np.atleast_1d(np.asarray(u if u is not None else np.zeros_like(v), dtype=complex))
        v = np.atleast_1d(np.asarray(v if v is not None else np.zeros_like(u), dtype=complex))
        if u.shape != v.shape:
            return math.inf
        scale = np.maximum(np.abs(u), np.abs(v))
        diff = np.abs(u - v)
        nz = scale > 0
        if np.any(nz):
            worst = max(worst, float(np.max(diff[nz] / scale[nz])))
    return worst


def check_diagram(smap: StageMap, a: CoefficientVector, tolerance: float = 1e-13) -> VerificationReport:
    """H_{t,upper}∘emb against emb_t∘H_{t,lower}, with (γ, δ) or (η, φ) by mode."""
    if smap.t is None:
        raise ValueError(f"{smap!r} needs t for the diagram check")
    emb, emb_t = embeddings_for(a.mode)
    left = heat_apply(smap.upper, smap.t, emb(smap, a))
    right = emb_t(smap, heat_apply(smap.lower, smap.t, a))
    dev = max_relative_deviation(left, right)
    return VerificationReport(
        "diagram_commutes", f"{smap.lower.name}->{smap.upper.name}",
        {"t": smap.t, "mode": a.mode.value, "support": len(a)},
        dev, 0.0, dev, tolerance, dev < tolerance,
    )


# ---------------------------------------------------------------------------
# chains and limit elements


class Chain:
    """Append-only sequence of models, each propagating the previous one."""

    def __init__(self, models=(), t: float | None = None, name: str = ""):
        self.name = name
        self.t = t
        self._models: list[SymmetricSpaceModel] = []
        self._steps: list[StageMap] = []
        self._maps: dict[tuple[int, int], StageMap] = {}
        for m in models:
            self.append(m)

    def append(self, model: SymmetricSpaceModel) -> int:
        if self._models:
            self._steps.append(stage_map(self._models[-1], model, self.t))
        self._models.append(model)
        return len(self._models) - 1

    def __len__(self):
        return len(self._models)

    def __getitem__(self, n: int) -> SymmetricSpaceModel:
        return self.model(n)

    @property
    def models(self) -> tuple[SymmetricSpaceModel, ...]:
        return tuple(self._models)

    def model(self, n: int) -> SymmetricSpaceModel:
        if not 0 <= n < len(self._models):
            raise ValueError(f"stage {n} is not registered in chain {self.name or '<anonymous>'} of length {len(self)}")
        return self._models[n]

    def step(self, n: int) -> StageMap:
        """Adjacent map n → n+1."""
        self.model(n + 1)
        return self._steps[n]

    def stage_map(self, n: int, m: int, t: float | None = None) -> StageMap:
        """Map n → m with the composed matching of the adjacent steps."""
        self.model(n), self.model(m)
        if n > m:
            raise ValueError(f"cannot map stage {n} down to stage {m}")
        t = self.t if t is None else t
        key = (n, m, t)
        hit = self._maps.get(key)
        if hit is None:
            matching = tuple(range(self._models[n].rank))
            for s in self._steps[n:m]:
                matching = tuple(s.matching[j] for j in matching)
            hit = StageMap(self._models[n], self._models[m], matching, t)
            self._maps[key] = hit
        return hit


@dataclass(eq=False)
class LimitElement:
    """A vector at one stage of a chain, standing for its class in the direct limit.

    ``space`` is ``"l2"`` (embedded by γ/η) or ``"fock"`` (embedded by δ/φ at
    parameter ``t``).
    """

    chain: Chain
    stage: int
    coefficients: CoefficientVector
    space: str = "l2"
    t: float | None = None

    def __post_init__(self):
        if self.space not in ("l2", "fock"):
            raise ValueError(f"space must be 'l2' or 'fock', got {self.space!r}")
        if self.space == "fock" and not (self.t and self.t > 0):
            raise ValueError("a Fock-side limit element needs t > 0")
        if self.coefficients.model != self.chain.model(self.stage):
            raise ValueError(f"coefficients belong to {self.coefficients.model.name}, "
                             f"not stage {self.stage} ({self.chain.model(self.stage).name})")

    @property
    def model(self) -> SymmetricSpaceModel:
        return self.chain.model(self.stage)

    def norm(self) -> float:
        if self.space == "l2":
            return l2_norm(self.model, self.coefficients)
        return fock_norm(self.model, self.t, self.coefficients)

    def _common(self, other: "LimitElement"):
        if other.chain is not self.chain or other.space != self.space or other.t != self.t:
            raise ValueError("limit elements live in different limit spaces")
        top = max(self.stage, other.stage)
        return embed_to_stage(self, top).coefficients, embed_to_stage(other, top).coefficients

    def deviation(self, other: "LimitElement") -> float:
        a, b = self._common(other)
        return max_relative_deviation(a, b)

    def allclose(self, other: "LimitElement", rtol: float = 1e-12) -> bool:
        return self.deviation(other) < rtol

    def __eq__(self, other):
        if not isinstance(other, LimitElement):
            return NotImplemented
        try:
            return self.deviation(other) == 0.0
        except ValueError:
            return False

    __hash__ = None


def embed_to_stage(x: LimitElement, m: int) -> LimitElement:
    """Representative of ``x`` at stage m ≥ x.stage."""
    if m == x.stage:
        return x
    t = x.t if x.space == "fock" else None
    smap = x.chain.stage_map(x.stage, m, t)
    emb, emb_t = embeddings_for(x.coefficients.mode)
    fn = emb if x.space == "l2" else emb_t
    return LimitElement(x.chain, m, fn(smap, x.coefficients), x.space, x.t)


def limit_heat_apply(chain: Chain, t: float, x: LimitElement) -> LimitElement:
    """The limit transform: H_t at the representing stage, landing in the Fock limit at t."""
    if x.chain is not chain:
        raise ValueError("element does not belong to this chain")
    chain.model(x.stage)
    if x.space != "l2":
        raise ValueError("limit_heat_apply takes an L²-side element")
    return LimitElement(chain, x.stage, heat_apply(x.model, t, x.coefficients), "fock", t)
