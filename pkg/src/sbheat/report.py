"""Verification records and deterministic JSON output."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SCHEMA_VERSION = 1


@dataclass
class VerificationReport:
    identity: str
    model: str
    params: dict
    computed: float
    reference: float
    rel_error: float
    tolerance: float
    passed: bool
    quadrature: dict = field(default_factory=dict)
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "passed" if self.passed else "failed"

    @classmethod
    def compare(cls, identity, model, params, computed, reference, tolerance, quadrature=None, absolute=False):
        """Build a report from a computed/reference pair (relative error unless ``absolute``)."""
        computed = float(computed)
        reference = float(reference)
        err = abs(computed - reference)
        if not absolute and reference != 0:
            err /= abs(reference)
        passed = bool(err < tolerance) and math.isfinite(err)
        return cls(identity, model, dict(params), computed, reference, err, tolerance, passed, dict(quadrature or {}))

    @classmethod
    def skipped(cls, identity, model, params, reason):
        return cls(identity, model, dict(params), math.nan, math.nan, math.nan, math.nan, True,
                   {"reason": reason}, status="skipped")

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "model": self.model,
            "params": self.params,
            "computed": self.computed,
            "reference": self.reference,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "status": self.status,
            "quadrature": self.quadrature,
        }


def _encode(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return {True: "true", False: "false", None: "null"}[value]
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    if isinstance(value, Fraction):
        return '"' + str(value) + '"'
    if isinstance(value, str):
        import json

        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(value, indent: int = 2) -> str:
    """JSON text with floats written to 17 significant digits (byte-stable)."""
    return _encode(value, indent, 0) + "\n"
