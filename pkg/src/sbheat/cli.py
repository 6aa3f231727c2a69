"""Command-line driver: verification suites and the coefficient-space heat transform."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import coefficients as cs
from .errors import CapabilityError, ConfigurationError, HeatOverflowError, QuadratureSpecError
from .heat import heat_apply, kernel_tail_estimate
from .lattice import casimir_of, enumerate_weights, is_spherical
from .limits import (
    Chain,
    LimitElement,
    check_diagram,
    embed_to_stage,
    embeddings_for,
    limit_heat_apply,
    max_relative_deviation,
)
from .models import half_sum, model_from_descriptor
from .quadrature import (
    QuadratureSpec,
    spherical_transform,
    verify_fock_inner,
    verify_heat_identity,
    verify_plancherel,
    verify_schur,
)
from .report import SCHEMA_VERSION, VerificationReport, dumps
from .special import (
    RadialPoint,
    _kind,
    dual_dimension,
    kernel_eval,
    spherical_eval,
    spherical_eval_holo,
)

SUITES = ("lattice", "plancherel", "schur", "heat_identity", "fock_inner", "diagrams", "limits", "kernel")
HEAT_SUITES = {"heat_identity", "fock_inner", "diagrams", "limits", "kernel"}
LAMBDAS = (0.5, 1.0, 2.0)
FAMILY_PARAM = {"sphere": "d", "group_su": "n"}


@dataclass
class RunConfig:
    models: list = field(default_factory=list)
    chains: list = field(default_factory=list)
    t_values: list = field(default_factory=lambda: [0.1])
    cutoff: Fraction = Fraction(12)
    suites: list = field(default_factory=list)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 0
    output: str = "report.json"
    trials: int = 20
    raw: dict = field(default_factory=dict)


def _fail(pointer: str, message: str):
    raise ConfigurationError(f"{pointer or '/'}: {message}")


def _chain_from_descriptor(desc: dict, pointer: str) -> Chain:
    if not isinstance(desc, dict):
        _fail(pointer, "chain descriptor must be an object")
    family = desc.get("family")
    stages = desc.get("params_per_stage")
    if not isinstance(stages, list) or len(stages) < 2:
        _fail(pointer + "/params_per_stage", "need a list of at least two stages")
    t = desc.get("t")
    if t is not None and not (isinstance(t, (int, float)) and t > 0):
        _fail(pointer + "/t", f"must be a positive number, got {t!r}")
    models = []
    for i, params in enumerate(stages):
        if isinstance(params, int) and family in FAMILY_PARAM:
            params = {FAMILY_PARAM[family]: params}
        if not isinstance(params, dict):
            _fail(f"{pointer}/params_per_stage/{i}", "stage must be an object or an integer")
        try:
            models.append(model_from_descriptor({"family": family, **params}))
        except (ConfigurationError, ValueError) as exc:
            _fail(f"{pointer}/params_per_stage/{i}", str(exc))
    name = desc.get("name") or f"{family}:" + "-".join(m.name for m in models)
    try:
        return Chain(models, t=t, name=name)
    except ConfigurationError as exc:
        _fail(pointer, str(exc))


def parse_config(data: dict, suites_override=None, seed_override=None, out_override=None) -> RunConfig:
    """Validate a JSON config; errors carry a JSON pointer to the offending field."""
    if not isinstance(data, dict):
        _fail("", "config must be a JSON object")
    known = {"models", "chains", "t_values", "cutoff", "suites", "quadrature", "seed", "output", "trials"}
    for key in data:
        if key not in known:
            _fail(f"/{key}", "unknown key")
    cfg = RunConfig(raw=data)
    models = data.get("models", [])
    if not isinstance(models, list):
        _fail("/models", "must be a list")
    for i, desc in enumerate(models):
        try:
            cfg.models.append(model_from_descriptor(desc))
        except (ConfigurationError, ValueError) as exc:
            _fail(f"/models/{i}", str(exc))
    chains = data.get("chains", [])
    if not isinstance(chains, list):
        _fail("/chains", "must be a list")
    cfg.chains = [_chain_from_descriptor(c, f"/chains/{i}") for i, c in enumerate(chains)]
    ts = data.get("t_values", [0.1])
    if not isinstance(ts, list) or any(not isinstance(t, (int, float)) or isinstance(t, bool) or not t > 0 for t in ts):
        _fail("/t_values", "must be a list of positive numbers")
    cfg.t_values = [float(t) for t in ts]
    try:
        cfg.cutoff = Fraction(str(data.get("cutoff", 12)))
    except (ValueError, ZeroDivisionError):
        _fail("/cutoff", f"not a number: {data.get('cutoff')!r}")
    if cfg.cutoff < 0:
        _fail("/cutoff", "must be nonnegative")
    suites = suites_override if suites_override is not None else data.get("suites", [])
    if not isinstance(suites, list):
        _fail("/suites", "must be a list")
    for i, s in enumerate(suites):
        if s not in SUITES:
            _fail(f"/suites/{i}", f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    cfg.suites = list(dict.fromkeys(suites))
    if HEAT_SUITES & set(cfg.suites) and not cfg.t_values:
        _fail("/t_values", "must be nonempty when heat suites are selected")
    try:
        cfg.quadrature = QuadratureSpec.from_dict(data.get("quadrature"))
    except (QuadratureSpecError, TypeError) as exc:
        _fail("/quadrature", str(exc))
    seed = seed_override if seed_override is not None else data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        _fail("/seed", "must be a nonnegative integer")
    cfg.seed = seed
    trials = data.get("trials", 20)
    if not isinstance(trials, int) or trials < 1:
        _fail("/trials", "must be a positive integer")
    cfg.trials = trials
    cfg.output = out_override or data.get("output", "report.json")
    return cfg


# ---------------------------------------------------------------------------
# suites; each task returns a list of reports


def _guard(identity, model_name, params, fn):
    try:
        return fn()
    except CapabilityError as exc:
        return [VerificationReport.skipped(identity, model_name, params, str(exc))]
    except (HeatOverflowError, QuadratureSpecError) as exc:
        rep = VerificationReport.skipped(identity, model_name, params, str(exc))
        rep.status, rep.passed = "failed", False
        return [rep]


def _lattice_task(cfg, model, rng):
    weights = enumerate_weights(model, cfg.cutoff)
    bad = 0
    for w in weights:
        bad += not is_spherical(model, w.vec)
        bad += casimir_of(model, w.vec) != w.casimir
        bad += (w.casimir == 0) != w.is_zero
        bad += w.dim < 1
    rho_ok = half_sum(model.positive_roots, model.rank) == tuple(model.rho)
    computed = bad + (0 if rho_ok else 1)
    return [VerificationReport(
        "lattice_invariants", model.name, {"cutoff": str(cfg.cutoff), "weights": len(weights)},
        float(computed), 0.0, float(computed), 0.5, computed == 0,
    )]


def _plancherel_task(cfg, model, rng):
    _kind(model)
    return [verify_plancherel(model, lambda th: np.exp(np.cos(th)), cfg.cutoff, cfg.quadrature, name="exp(cos)")]


def _schur_task(cfg, model, rng):
    _kind(model)
    weights = enumerate_weights(model, cfg.cutoff)
    return [verify_schur(model, a, b, cfg.quadrature) for a in weights for b in weights]


def _heat_identity_task(cfg, model, rng):
    dual_dimension(model)
    return [verify_heat_identity(model, lam, t, cfg.quadrature) for t in cfg.t_values for lam in LAMBDAS]


def _fock_inner_task(cfg, model, rng):
    dual_dimension(model)
    weights = enumerate_weights(model, cfg.cutoff)
    return [verify_fock_inner(model, w, t, cfg.quadrature) for t in cfg.t_values for w in weights]


def _kernel_task(cfg, model, rng):
    _kind(model)
    theta = np.linspace(0.0, math.pi, 33)
    out = []
    for t in cfg.t_values:
        plus = np.asarray(kernel_eval(model, t, RadialPoint.compact(theta), cfg.cutoff))
        minus = np.asarray(kernel_eval(model, t, RadialPoint.compact(-theta), cfg.cutoff))
        dev = float(np.max(np.abs(plus - minus) / np.maximum(np.abs(plus), 1e-300)))
        imag = float(np.max(np.abs(np.imag(plus))))
        out.append(VerificationReport(
            "kernel_even_real", model.name, {"t": t, "cutoff": str(cfg.cutoff)}, dev, 0.0, dev, 1e-12,
            dev < 1e-12 and imag == 0.0,
            {"max_imag": imag, "tail_estimate": kernel_tail_estimate(model, t, cfg.cutoff)},
        ))
    return out


def _chain_ts(cfg, chain):
    return [chain.t] if chain.t is not None else cfg.t_values


def _diagrams_task(cfg, chain, rng):
    out = []
    modes = (cs.Mode.FULL, cs.Mode.KINVARIANT)
    for t in _chain_ts(cfg, chain):
        for n in range(len(chain) - 1):
            smap = chain.stage_map(n, n + 1, t)
            for mode in modes:
                worst = 0.0
                for _ in range(cfg.trials):
                    a = cs.random_vector(smap.lower, mode, rng, casimir_cutoff=max(cfg.cutoff, 1))
                    worst = max(worst, check_diagram(smap, a).rel_error)
                out.append(VerificationReport(
                    "diagram_commutes", f"{smap.lower.name}->{smap.upper.name}",
                    {"t": t, "mode": mode.value, "trials": cfg.trials}, worst, 0.0, worst, 1e-13, worst < 1e-13,
                ))
        for n in range(len(chain) - 2):
            direct = chain.stage_map(n, n + 2, t)
            first, second = chain.stage_map(n, n + 1, t), chain.stage_map(n + 1, n + 2, t)
            for mode in modes:
                worst = 0.0
                for emb in embeddings_for(mode):
                    for _ in range(cfg.trials):
                        a = cs.random_vector(direct.lower, mode, rng, casimir_cutoff=max(cfg.cutoff, 1))
                        dev = max_relative_deviation(emb(direct, a), emb(second, emb(first, a)))
                        worst = max(worst, dev, check_diagram(direct, a).rel_error)
                out.append(VerificationReport(
                    "embedding_composition", f"{direct.lower.name}->{direct.upper.name}",
                    {"t": t, "mode": mode.value, "trials": cfg.trials}, worst, 0.0, worst, 1e-13, worst < 1e-13,
                ))
    return out


def _limits_task(cfg, chain, rng):
    out = []
    top = len(chain) - 1
    for t in _chain_ts(cfg, chain):
        for mode in (cs.Mode.FULL, cs.Mode.KINVARIANT):
            commute, norm_dev = 0.0, 0.0
            for _ in range(cfg.trials):
                x = LimitElement(chain, 0, cs.random_vector(chain.model(0), mode, rng,
                                                            casimir_cutoff=max(cfg.cutoff, 1)))
                lhs = limit_heat_apply(chain, t, embed_to_stage(x, top))
                rhs = embed_to_stage(limit_heat_apply(chain, t, x), top)
                commute = max(commute, lhs.deviation(rhs))
                norm_dev = max(norm_dev, abs(lhs.norm() - x.norm()) / x.norm())
            worst = max(commute, norm_dev)
            out.append(VerificationReport(
                "limit_heat_transform", chain.name, {"t": t, "mode": mode.value, "trials": cfg.trials},
                worst, 0.0, worst, 1e-12, worst < 1e-12, {"commute": commute, "norm": norm_dev},
            ))
    return out


MODEL_SUITES = {
    "lattice": _lattice_task,
    "plancherel": _plancherel_task,
    "schur": _schur_task,
    "heat_identity": _heat_identity_task,
    "fock_inner": _fock_inner_task,
    "kernel": _kernel_task,
}
CHAIN_SUITES = {"diagrams": _diagrams_task, "limits": _limits_task}


def _tasks(cfg: RunConfig):
    tasks = []
    for suite in SUITES:
        if suite not in cfg.suites:
            continue
        if suite in MODEL_SUITES:
            for model in cfg.models:
                tasks.append((suite, model.name, MODEL_SUITES[suite], model))
        else:
            for chain in cfg.chains:
                tasks.append((suite, chain.name, CHAIN_SUITES[suite], chain))
    return tasks


def run(cfg: RunConfig, workers: int | None = None) -> tuple[dict, dict]:
    """Execute the selected suites; returns (report, csv tables)."""
    tasks = _tasks(cfg)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(tasks))

    def execute(i):
        suite, name, fn, target = tasks[i]
        rng = np.random.default_rng(seeds[i])
        return _guard(suite, name, {}, lambda: fn(cfg, target, rng))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(execute, range(len(tasks))))

    suites, reports = {}, []
    for (suite, name, _, _), reps in zip(tasks, results):
        summary = suites.setdefault(suite, {"passed": 0, "failed": 0, "skipped": 0})
        for rep in reps:
            summary[rep.status] += 1
            entry = rep.to_dict()
            entry["suite"] = suite
            reports.append(entry)
    all_ok = all(r["status"] != "failed" for r in reports)
    report = {
        "schema": SCHEMA_VERSION,
        "seed": cfg.seed,
        "suites_selected": cfg.suites,
        "models": [m.name for m in cfg.models],
        "chains": [c.name for c in cfg.chains],
        "t_values": cfg.t_values,
        "cutoff": cfg.cutoff,
        "quadrature": cfg.quadrature.to_dict(),
        "summary": suites,
        "passed": all_ok,
        "reports": reports,
    }
    return report, _tables(cfg)


def _tables(cfg: RunConfig) -> dict:
    lattice = [("model", "weight", "dimension", "casimir", "t", "heat_factor")]
    samples = [("model", "weight", "coordinate", "value", "function")]
    grid_theta = np.linspace(0.0, math.pi, 17)
    grid_r = np.linspace(0.0, 2.0, 17)
    for model in cfg.models:
        weights = enumerate_weights(model, cfg.cutoff)
        for w in weights:
            key = " ".join(map(str, w.xi_coords))
            for t in cfg.t_values:
                lattice.append((model.name, key, w.dim, str(w.casimir), t, math.exp(-t * float(w.casimir))))
        try:
            _kind(model)
        except CapabilityError:
            continue
        for w in weights:
            key = " ".join(map(str, w.xi_coords))
            for th, v in zip(grid_theta, np.atleast_1d(spherical_eval(model, w, grid_theta))):
                samples.append((model.name, key, float(th), float(v), "psi(theta)"))
            for r, v in zip(grid_r, np.atleast_1d(spherical_eval_holo(model, w, grid_r))):
                samples.append((model.name, key, float(r), float(v), "psi_holo(r)"))
    return {"lattice": lattice, "samples": samples}


def _csv_cell(v):
    return format(v, ".17g") if isinstance(v, float) else v


def write_tables(tables: dict, out: Path):
    for name, rows in tables.items():
        path = out.with_name(f"{out.stem}.{name}.csv")
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            for row in rows:
                writer.writerow([_csv_cell(v) for v in row])


# ---------------------------------------------------------------------------
# transform


def transform(data: dict, spec: QuadratureSpec, t_override: float | None = None) -> dict:
    """H_t of a coefficient vector or of zonal samples; reports the norm pair."""
    if not isinstance(data, dict):
        _fail("", "input must be a JSON object")
    try:
        model = model_from_descriptor(data.get("model"))
    except (ConfigurationError, ValueError) as exc:
        _fail("/model", str(exc))
    t = t_override if t_override is not None else data.get("t")
    if not isinstance(t, (int, float)) or not t > 0:
        _fail("/t", f"must be a positive number, got {t!r}")
    if "samples" in data:
        a = _from_samples(model, data["samples"], data.get("cutoff", 110), spec)
    elif "coefficients" in data:
        mode = data.get("mode", "kinvariant")
        try:
            a = cs.from_json(model, mode, data["coefficients"])
        except ValueError as exc:
            _fail("/coefficients", str(exc))
    else:
        _fail("", "input needs 'coefficients' or 'samples'")
    b = heat_apply(model, float(t), a)
    l2 = cs.l2_norm(model, a)
    fock = cs.fock_norm(model, float(t), b)
    rel = abs(fock - l2) / l2 if l2 else abs(fock)
    return {
        "schema": SCHEMA_VERSION,
        "model": model.name,
        "t": float(t),
        "mode": a.mode.value,
        "coefficients": cs.to_json(b),
        "l2_norm_in": l2,
        "fock_norm_out": fock,
        "norm_rel_error": rel,
        "passed": rel < 1e-10,
    }


def _from_samples(model, samples, cutoff, spec) -> cs.CoefficientVector:
    from scipy.interpolate import CubicSpline

    _kind(model)
    try:
        theta = np.asarray(samples["theta"], dtype=float)
        values = np.asarray(samples["values"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        _fail("/samples", f"need numeric 'theta' and 'values' lists ({exc})")
    if theta.shape != values.shape or theta.size < 4 or np.any(np.diff(theta) <= 0):
        _fail("/samples", "theta must be strictly increasing with at least 4 points matching values")
    if theta[0] > 1e-12 or theta[-1] < math.pi - 1e-12:
        _fail("/samples/theta", "grid must cover [0, pi]")
    spline = CubicSpline(theta, values)
    weights = enumerate_weights(model, Fraction(str(cutoff)))
    coeffs = spherical_transform(model, spline, weights, spec)
    scale = max(abs(v) for v in coeffs.values()) or 1.0
    kept = {k: v for k, v in coeffs.items() if abs(v) > 1e-14 * scale}
    return cs.CoefficientVector(model, cs.Mode.KINVARIANT, kept)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sbheat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run verification suites from a JSON config")
    p_run.add_argument("--config", type=Path, help="JSON config file")
    p_run.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable, overrides config)")
    p_run.add_argument("--out", type=Path, help="report path (overrides config 'output')")
    p_run.add_argument("--seed", type=int, help="seed for random coefficient vectors")
    p_run.add_argument("--format", choices=("json", "csv"), default="json",
                       help="csv also writes <out>.lattice.csv and <out>.samples.csv")
    p_run.add_argument("--workers", type=int, default=None, help="worker threads")

    p_tr = sub.add_parser("transform", help="apply H_t to coefficients or zonal samples")
    p_tr.add_argument("--input", type=Path, required=True, help="JSON input (model, t, coefficients|samples)")
    p_tr.add_argument("--config", type=Path, help="JSON config supplying quadrature settings")
    p_tr.add_argument("--t", type=float, help="override t from the input")
    p_tr.add_argument("--out", type=Path, help="output path (stdout if omitted)")
    return parser


def _load_json(path: Path, what: str):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read {what} {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            data = _load_json(args.config, "config") if args.config else {}
            cfg = parse_config(data, args.suite, args.seed, str(args.out) if args.out else None)
            report, tables = run(cfg, args.workers)
            out = Path(cfg.output)
            out.write_text(dumps(report), encoding="utf-8")
            if args.format == "csv":
                write_tables(tables, out)
            s = report["summary"]
            counts = {k: sum(v[k] for v in s.values()) for k in ("passed", "failed", "skipped")}
            print(f"{counts['passed']} passed, {counts['failed']} failed, {counts['skipped']} skipped -> {out}")
            return 0 if report["passed"] else 1
        data = _load_json(args.input, "input")
        spec = QuadratureSpec()
        if args.config:
            cfg = parse_config(_load_json(args.config, "config"))
            spec = cfg.quadrature
        result = transform(data, spec, args.t)
        text = dumps(result)
        if args.out:
            args.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0 if result["passed"] else 1
    except (ConfigurationError, CapabilityError, HeatOverflowError) as exc:
        print(f"sbheat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
