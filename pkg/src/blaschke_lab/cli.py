"""Command-line front end: file I/O, experiment orchestration, report emission.

Every number in an emitted report originates in a call into the core
modules; this layer only assembles configurations, dispatches, and
serializes.  Output is deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import criteria as crit
from . import interpolation as interp
from .blaschke import BlaschkeProduct, TargetVector, ZeroSequence
from .criteria import CircleGrid
from .errors import BlaschkeLabError, ConfigInvalid, IoFailure
from .geometry import CirclePoint, DiskPoint
from .sequences import frostman_example, perturb_sample, radial_sequence

__all__ = [
    "ExperimentConfig",
    "ReportBundle",
    "Table",
    "Series",
    "load_sequence_file",
    "write_sequence_file",
    "validate_config",
    "run",
    "emit",
    "main",
]

THREADS_ENV = "BLASCHKE_LAB_THREADS"

KINDS = ("criteria", "interpolate", "union", "nearby", "perturb", "shift")

AGREEMENT_SAMPLES = 256


# ---------------------------------------------------------------------------
# sequence files


def _sequence_to_payload(seq: ZeroSequence, meta: dict) -> dict:
    return {
        "points": [{"re": p.re, "im": p.im} for p in seq],
        "meta": meta,
    }


def write_sequence_file(path, seq: ZeroSequence, meta: Optional[dict] = None) -> None:
    payload = _sequence_to_payload(seq, dict(meta or {"name": "sequence"}))
    _write_text(Path(path), json.dumps(payload, indent=2) + "\n")


def load_sequence_file(path) -> tuple[ZeroSequence, dict]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read sequence file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"sequence file {path} is not valid JSON: {exc}") from exc
    _require_keys(raw, {"points"}, {"meta"}, context=str(path))
    points = []
    for i, entry in enumerate(raw["points"]):
        _require_keys(entry, {"re", "im"}, set(), context=f"{path} point {i}")
        points.append(DiskPoint(float(entry["re"]), float(entry["im"])))
    return ZeroSequence(points), dict(raw.get("meta", {}))


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    inputs: dict
    grid: dict
    seed: int
    N_schedule: tuple[int, ...]
    tolerances: dict

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "inputs": self.inputs,
            "grid": self.grid,
            "seed": self.seed,
            "N_schedule": list(self.N_schedule),
            "tolerances": self.tolerances,
        }

    def circle_grid(self) -> CircleGrid:
        return CircleGrid(
            base_count=self.grid["base_count"],
            refinement_rounds=self.grid["refinement_rounds"],
        )


def _require_keys(mapping, required: set, optional: set, context: str) -> None:
    if not isinstance(mapping, dict):
        raise ConfigInvalid(f"{context}: expected a mapping, got {type(mapping).__name__}")
    unknown = set(mapping) - required - optional
    if unknown:
        raise ConfigInvalid(f"{context}: unknown keys {sorted(unknown)}")
    missing = required - set(mapping)
    if missing:
        raise ConfigInvalid(f"{context}: missing keys {sorted(missing)}")


_SEQ_SPEC_KEYS = ({"path"}, {"generator"})

_GENERATOR_PARAMS = {
    "frostman_example": ({"N"}, set()),
    "radial_sequence": ({"q", "N"}, {"arg"}),
}

_INPUT_KEYS = {
    "criteria": ({"sequence"}, set()),
    "interpolate": ({"sequence", "targets"}, set()),
    "union": ({"sequence", "sequence_b", "targets", "targets_b"}, set()),
    "nearby": ({"sequence", "targets"}, {"radius_scale", "max_iter", "min_sep"}),
    "perturb": ({"sequence", "radius"}, {"trials", "min_sep"}),
    "shift": ({"sequence", "point"}, set()),
}


def _validate_sequence_spec(spec, context: str) -> dict:
    if not isinstance(spec, dict):
        raise ConfigInvalid(f"{context}: sequence spec must be a mapping")
    if "path" in spec:
        _require_keys(spec, {"path"}, set(), context)
        return {"path": str(spec["path"])}
    _require_keys(spec, {"generator", "params"}, set(), context)
    name = spec["generator"]
    if name not in _GENERATOR_PARAMS:
        raise ConfigInvalid(
            f"{context}: unknown generator {name!r}; "
            f"expected one of {sorted(_GENERATOR_PARAMS)}"
        )
    required, optional = _GENERATOR_PARAMS[name]
    _require_keys(spec["params"], required, optional, f"{context} params")
    return {"generator": name, "params": dict(spec["params"])}


def _validate_target_spec(spec, context: str) -> dict:
    if not isinstance(spec, dict):
        raise ConfigInvalid(f"{context}: target spec must be a mapping")
    if "values" in spec:
        _require_keys(spec, {"values"}, set(), context)
        values = [[float(v[0]), float(v[1])] for v in spec["values"]]
        return {"values": values}
    _require_keys(spec, {"fill"}, set(), context)
    fill = spec["fill"]
    return {"fill": [float(fill[0]), float(fill[1])]}


def validate_config(raw: dict) -> ExperimentConfig:
    """Normalize a raw configuration mapping, rejecting unknown keys.

    Defaults are filled deterministically; the resolved form is echoed
    into every report bundle.
    """
    _require_keys(
        raw,
        {"kind", "inputs"},
        {"grid", "seed", "N_schedule", "tolerances"},
        context="config",
    )
    kind = raw["kind"]
    if kind not in KINDS:
        raise ConfigInvalid(f"config: unknown kind {kind!r}; expected one of {list(KINDS)}")

    grid_raw = raw.get("grid", {})
    _require_keys(grid_raw, set(), {"base_count", "refinement_rounds"}, context="config grid")
    grid = {
        "base_count": int(grid_raw.get("base_count", 4096)),
        "refinement_rounds": int(grid_raw.get("refinement_rounds", 3)),
    }
    try:
        CircleGrid(**grid)
    except ValueError as exc:
        raise ConfigInvalid(f"config grid: {exc}") from exc

    tol_raw = raw.get("tolerances", {})
    _require_keys(tol_raw, set(), {"tol"}, context="config tolerances")
    tolerances = {"tol": float(tol_raw.get("tol", 1e-8))}

    required, optional = _INPUT_KEYS[kind]
    _require_keys(raw["inputs"], required, optional, context=f"config inputs ({kind})")
    inputs = dict(raw["inputs"])
    inputs["sequence"] = _validate_sequence_spec(inputs["sequence"], "config inputs sequence")
    if "sequence_b" in inputs:
        inputs["sequence_b"] = _validate_sequence_spec(inputs["sequence_b"], "config inputs sequence_b")
    for key in ("targets", "targets_b"):
        if key in inputs:
            inputs[key] = _validate_target_spec(inputs[key], f"config inputs {key}")
    if kind == "nearby":
        inputs.setdefault("radius_scale", 0.8)
        inputs["radius_scale"] = float(inputs["radius_scale"])
        inputs.setdefault("max_iter", 30)
        inputs["max_iter"] = int(inputs["max_iter"])
    if kind == "perturb":
        inputs["radius"] = float(inputs["radius"])
        inputs.setdefault("trials", 100)
        inputs["trials"] = int(inputs["trials"])
        if inputs["trials"] < 1:
            raise ConfigInvalid("config inputs (perturb): trials must be positive")
    if kind in ("nearby", "perturb") and "min_sep" in inputs:
        inputs["min_sep"] = float(inputs["min_sep"])
    if kind == "shift":
        point = inputs["point"]
        _require_keys(point, {"re", "im"}, set(), context="config inputs point")
        inputs["point"] = {"re": float(point["re"]), "im": float(point["im"])}

    schedule = tuple(int(n) for n in raw.get("N_schedule", []))
    if kind == "criteria" and not schedule:
        raise ConfigInvalid("config: criteria runs need a nonempty N_schedule")
    if any(n < 1 for n in schedule):
        raise ConfigInvalid("config: N_schedule entries must be positive")

    return ExperimentConfig(
        kind=kind,
        inputs=inputs,
        grid=grid,
        seed=int(raw.get("seed", 0)),
        N_schedule=schedule,
        tolerances=tolerances,
    )


def load_config_file(path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config file {path} is not valid JSON: {exc}") from exc
    return validate_config(raw)


# ---------------------------------------------------------------------------
# report bundles


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass(frozen=True)
class Series:
    label: str
    x_label: str
    y_label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass
class ReportBundle:
    config: dict
    results: dict
    tables: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "results": self.results,
            "tables": {
                name: {"columns": list(t.columns), "rows": [list(r) for r in t.rows]}
                for name, t in self.tables.items()
            },
            "series": {
                name: {
                    "label": s.label,
                    "x_label": s.x_label,
                    "y_label": s.y_label,
                    "x": list(s.x),
                    "y": list(s.y),
                }
                for name, s in self.series.items()
            },
        }


def _complex_pair(w: complex) -> dict:
    return {"re": w.real, "im": w.imag}


def _witness_json(witness) -> Any:
    if isinstance(witness, CirclePoint):
        return {"arg": witness.arg}
    if isinstance(witness, tuple):
        return list(witness)
    return witness


def _report_json(report: crit.CriterionReport) -> dict:
    payload = {
        "name": report.name,
        "value": report.value,
        "argmax_or_argmin": _witness_json(report.argmax_or_argmin),
        "per_index": list(report.per_index),
    }
    if report.grid_meta is not None:
        payload["grid"] = {
            "base_count": report.grid_meta.base_count,
            "refinement_rounds": report.grid_meta.refinement_rounds,
            "extra_count": len(report.grid_meta.extra_args),
        }
    return payload


def _report_detail_table(report: crit.CriterionReport, kind_label: str) -> Table:
    rows = [(str(i), v) for i, v in enumerate(report.per_index)]
    rows.append((kind_label, report.value))
    return Table(columns=("index", "value"), rows=tuple(rows))


# ---------------------------------------------------------------------------
# input resolution


def _resolve_sequence(spec: dict, n_override: Optional[int] = None) -> ZeroSequence:
    if "path" in spec:
        seq, _ = load_sequence_file(spec["path"])
        if n_override is not None:
            if n_override > len(seq):
                raise ConfigInvalid(
                    f"schedule entry {n_override} exceeds the {len(seq)} stored points"
                )
            seq = seq[:n_override]
        return seq
    params = dict(spec["params"])
    if n_override is not None:
        params["N"] = n_override
    if spec["generator"] == "frostman_example":
        return frostman_example(int(params["N"]))
    return radial_sequence(float(params["q"]), int(params["N"]), float(params.get("arg", 0.0)))


def _resolve_targets(spec: dict, length: int) -> TargetVector:
    if "fill" in spec:
        value = complex(spec["fill"][0], spec["fill"][1])
        return TargetVector([value] * length)
    values = [complex(re, im) for re, im in spec["values"]]
    if len(values) != length:
        raise ConfigInvalid(
            f"target vector has {len(values)} entries for {length} points"
        )
    return TargetVector(values)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        count = int(raw)
    except ValueError:
        raise ConfigInvalid(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if count <= 0:
        count = min(32, os.cpu_count() or 1)
    return count


# ---------------------------------------------------------------------------
# pipelines


def _run_criteria(config: ExperimentConfig) -> ReportBundle:
    grid = config.circle_grid()
    per_n = []
    for n in config.N_schedule:
        seq = _resolve_sequence(config.inputs["sequence"], n_override=n)
        product = BlaschkeProduct(seq)
        carleson = product.carleson()
        frostman = crit.frostman_sum(seq, grid)
        cohn = crit.cohn_sum(seq)
        per_n.append(
            {
                "N": n,
                "carleson": {
                    "delta": carleson.delta,
                    "per_zero": [[i, q] for i, q in carleson.per_zero],
                },
                "frostman": _report_json(frostman),
                "cohn": _report_json(cohn),
                "vasyunin": crit.vasyunin_sum(seq),
            }
        )

    trend_rows = tuple(
        (
            entry["N"],
            entry["carleson"]["delta"],
            entry["frostman"]["value"],
            entry["cohn"]["value"],
            entry["vasyunin"],
        )
        for entry in per_n
    )
    tables = {
        "criteria_trend": Table(
            columns=("N", "carleson_delta", "frostman_sum", "cohn_sum", "vasyunin_sum"),
            rows=trend_rows,
        )
    }

    last = per_n[-1]
    seq = _resolve_sequence(config.inputs["sequence"], n_override=last["N"])
    frostman = crit.frostman_sum(seq, grid)
    cohn = crit.cohn_sum(seq)
    tables["frostman_detail"] = _report_detail_table(frostman, "sup")
    tables["cohn_detail"] = _report_detail_table(cohn, "sup")

    xs = tuple(float(entry["N"]) for entry in per_n)
    series = {
        name: Series(
            label=f"{name} vs N",
            x_label="N",
            y_label=name,
            x=xs,
            y=tuple(float(row[i]) for row in trend_rows),
        )
        for i, name in (
            (1, "carleson_delta"),
            (2, "frostman_sum"),
            (3, "cohn_sum"),
            (4, "vasyunin_sum"),
        )
    }
    return ReportBundle(config=config.as_dict(), results={"per_N": per_n}, tables=tables, series=series)


def _boundary_series(func, label: str) -> Series:
    angles = 2.0 * math.pi * np.arange(AGREEMENT_SAMPLES) / AGREEMENT_SAMPLES
    values = np.abs(func(np.exp(1j * angles)))
    return Series(
        label=label,
        x_label="arg",
        y_label="modulus",
        x=tuple(float(a) for a in angles),
        y=tuple(float(v) for v in values),
    )


def _run_interpolate(config: ExperimentConfig) -> ReportBundle:
    grid = config.circle_grid()
    seq = _resolve_sequence(config.inputs["sequence"])
    targets = _resolve_targets(config.inputs["targets"], len(seq))
    product = BlaschkeProduct(seq)
    rep = interp.solve_kb(product, targets)

    node_values = rep(seq.values)
    residuals = np.abs(node_values - targets.values)
    agreement = None
    if rep.kernel_coeffs is not None:
        angles = 2.0 * math.pi * np.arange(AGREEMENT_SAMPLES) / AGREEMENT_SAMPLES
        zeta = np.exp(1j * angles)
        agreement = float(np.max(np.abs(rep(zeta) - rep.eval_kernel(zeta))))

    results = {
        "degree": product.degree,
        "max_node_residual": float(residuals.max()),
        "ill_conditioned": rep.ill_conditioned,
        "kernel_residual": rep.kernel_residual,
        "form_agreement_sup": agreement,
        "sup_norm": interp.sup_norm(rep, grid),
        "lebesgue_constant": interp.lebesgue_constant(product, grid),
    }
    rows = tuple(
        (j, targets.values[j].real, targets.values[j].imag, float(residuals[j]))
        for j in range(len(seq))
    )
    tables = {
        "nodes": Table(columns=("index", "target_re", "target_im", "residual"), rows=rows)
    }
    series = {"boundary_modulus": _boundary_series(rep, "interpolant modulus on the circle")}
    return ReportBundle(config=config.as_dict(), results=results, tables=tables, series=series)


def _run_union(config: ExperimentConfig) -> ReportBundle:
    seq_a = _resolve_sequence(config.inputs["sequence"])
    seq_z = _resolve_sequence(config.inputs["sequence_b"])
    alpha = _resolve_targets(config.inputs["targets"], len(seq_a))
    beta = _resolve_targets(config.inputs["targets_b"], len(seq_z))
    b = BlaschkeProduct(seq_a)
    c = BlaschkeProduct(seq_z)
    union = interp.interpolate_union(b, c, alpha, beta)

    res_a = np.abs(union(seq_a.values) - alpha.values)
    res_z = np.abs(union(seq_z.values) - beta.values)
    vanish_a = np.max(np.abs(union.G2(seq_a.values)))
    vanish_z = np.max(np.abs(union.G1(seq_z.values)))

    results = {
        "degrees": [b.degree, c.degree],
        "max_residual_a": float(res_a.max()),
        "max_residual_z": float(res_z.max()),
        "g2_vanishing_on_a": float(vanish_a),
        "g1_vanishing_on_z": float(vanish_z),
        "tilde_gamma": [_complex_pair(t) for t in union.tilde_gamma],
    }
    tables = {
        "nodes_a": Table(
            columns=("index", "residual"),
            rows=tuple((j, float(r)) for j, r in enumerate(res_a)),
        ),
        "nodes_z": Table(
            columns=("index", "residual"),
            rows=tuple((j, float(r)) for j, r in enumerate(res_z)),
        ),
    }
    series = {"boundary_modulus": _boundary_series(union, "union interpolant modulus")}
    return ReportBundle(config=config.as_dict(), results=results, tables=tables, series=series)


def _run_nearby(config: ExperimentConfig) -> ReportBundle:
    grid = config.circle_grid()
    seq = _resolve_sequence(config.inputs["sequence"])
    targets = _resolve_targets(config.inputs["targets"], len(seq))
    product = BlaschkeProduct(seq)

    m_const = interp.lebesgue_constant(product, grid)
    radius = config.inputs["radius_scale"] / (2.0 * m_const)
    min_sep = config.inputs.get("min_sep")
    if min_sep is None:
        min_sep = min(0.1, 0.5 * seq.min_separation)
    paired = perturb_sample(seq, radius, config.seed, min_sep=min_sep)

    rep, trace = interp.nearby_iterate(
        product,
        paired.Z,
        targets,
        max_iter=config.inputs["max_iter"],
        tol=config.tolerances["tol"],
        grid=grid,
    )
    results = {
        "M_used": trace.M_used,
        "epsilon_used": trace.epsilon_used,
        "nearness": paired.nearness,
        "radius": radius,
        "steps": len(trace.residual_sup),
        "converged": trace.converged,
        "contraction_marginal": trace.contraction_marginal,
        "final_residual": trace.residual_sup[-1],
    }
    steps = tuple(range(len(trace.residual_sup)))
    tables = {
        "steps": Table(
            columns=("step", "residual_sup", "bound_curve"),
            rows=tuple(
                (m, trace.residual_sup[m], trace.bound_curve[m]) for m in steps
            ),
        )
    }
    series = {
        "residual_vs_step": Series(
            label="residual per correction step",
            x_label="step",
            y_label="residual_sup",
            x=tuple(float(m) for m in steps),
            y=trace.residual_sup,
        ),
        "bound_vs_step": Series(
            label="geometric bound per step",
            x_label="step",
            y_label="bound",
            x=tuple(float(m) for m in steps),
            y=trace.bound_curve,
        ),
    }
    return ReportBundle(config=config.as_dict(), results=results, tables=tables, series=series)


def _perturb_trial(args) -> dict:
    seq, radius, trial_seed, min_sep, grid = args
    paired = perturb_sample(seq, radius, trial_seed, min_sep=min_sep)
    report = crit.perturbation_report(paired, radius, grid)
    payload = asdict(report)
    return payload


def _run_perturb(config: ExperimentConfig) -> ReportBundle:
    grid = config.circle_grid()
    seq = _resolve_sequence(config.inputs["sequence"])
    radius = config.inputs["radius"]
    trials = config.inputs["trials"]
    min_sep = config.inputs.get("min_sep")
    if min_sep is None:
        min_sep = min(0.1, 0.5 * seq.min_separation)

    master = np.random.default_rng(config.seed)
    trial_seeds = [int(s) for s in master.integers(0, 2**63 - 1, size=trials)]
    jobs = [(seq, radius, s, min_sep, grid) for s in trial_seeds]

    threads = _thread_count()
    if threads > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_perturb_trial, jobs))
    else:
        reports = [_perturb_trial(job) for job in jobs]

    aggregate = {
        "trials": trials,
        "total_violations": int(sum(r["violations"] for r in reports)),
        "min_D1": min(r["empirical_D1"] for r in reports),
        "max_D2": max(r["empirical_D2"] for r in reports),
        "min_C1": min(r["empirical_C1"] for r in reports),
        "max_C2": max(r["empirical_C2"] for r in reports),
        "min_C3": min(r["empirical_C3"] for r in reports),
        "min_C4": min(r["empirical_C4"] for r in reports),
        "C_r": reports[0]["C_r"],
    }
    columns = (
        "trial",
        "violations",
        "nearness",
        "D1",
        "D2",
        "C1",
        "C2",
        "C3",
        "C4",
        "frostman_Z",
    )
    rows = tuple(
        (
            i,
            r["violations"],
            r["nearness"],
            r["empirical_D1"],
            r["empirical_D2"],
            r["empirical_C1"],
            r["empirical_C2"],
            r["empirical_C3"],
            r["empirical_C4"],
            r["frostman_Z"],
        )
        for i, r in enumerate(reports)
    )
    series = {
        "d1_vs_trial": Series(
            label="lower size-ratio envelope per trial",
            x_label="trial",
            y_label="D1",
            x=tuple(float(i) for i in range(trials)),
            y=tuple(r["empirical_D1"] for r in reports),
        ),
        "d2_vs_trial": Series(
            label="upper size-ratio envelope per trial",
            x_label="trial",
            y_label="D2",
            x=tuple(float(i) for i in range(trials)),
            y=tuple(r["empirical_D2"] for r in reports),
        ),
    }
    results = {"aggregate": aggregate, "trial_reports": reports}
    return ReportBundle(
        config=config.as_dict(),
        results=results,
        tables={"trials": Table(columns=columns, rows=rows)},
        series=series,
    )


def _run_shift(config: ExperimentConfig) -> ReportBundle:
    grid = config.circle_grid()
    seq = _resolve_sequence(config.inputs["sequence"])
    point = DiskPoint(config.inputs["point"]["re"], config.inputs["point"]["im"])
    product = BlaschkeProduct(seq)
    roots = interp.frostman_shift_zeros(product, point)

    residuals = np.abs(product.evaluate(roots.values) - point.z)
    frostman_before = crit.frostman_sum(seq, grid)
    frostman_after = crit.frostman_sum(roots, grid)
    results = {
        "degree": product.degree,
        "shift_point": _complex_pair(point.z),
        "max_residual": float(residuals.max()),
        "frostman_original": frostman_before.value,
        "frostman_shifted": frostman_after.value,
    }
    rows = tuple(
        (j, roots.values[j].real, roots.values[j].imag, float(residuals[j]))
        for j in range(len(roots))
    )
    tables = {
        "roots": Table(columns=("index", "re", "im", "residual"), rows=rows)
    }
    series = {
        "root_modulus": Series(
            label="shifted zero moduli",
            x_label="index",
            y_label="modulus",
            x=tuple(float(j) for j in range(len(roots))),
            y=tuple(float(abs(w)) for w in roots.values),
        )
    }
    return ReportBundle(config=config.as_dict(), results=results, tables=tables, series=series)


_PIPELINES = {
    "criteria": _run_criteria,
    "interpolate": _run_interpolate,
    "union": _run_union,
    "nearby": _run_nearby,
    "perturb": _run_perturb,
    "shift": _run_shift,
}


def run(config: ExperimentConfig) -> ReportBundle:
    """Dispatch a validated configuration to its module pipeline."""
    return _PIPELINES[config.kind](config)


# ---------------------------------------------------------------------------
# emission


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _ensure_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create directory {path}: {exc}") from exc
    if not path.is_dir():
        raise IoFailure(f"{path} is not a directory")


def _format_cell(value) -> Any:
    if isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(bundle: ReportBundle, format: str = "json", path=None) -> Optional[str]:
    """Write a bundle deterministically.

    json writes one file (or returns the text when path is None); csv and
    plotdata treat path as a directory and write one file per table or
    series, always with LF line endings.
    """
    if format == "json":
        text = json.dumps(bundle.to_json_dict(), indent=2) + "\n"
        if path is None:
            return text
        _write_text(Path(path), text)
        return None

    if path is None:
        raise ConfigInvalid(f"format {format} requires an output directory")
    target = Path(path)
    if target.exists() and not target.is_dir():
        raise IoFailure(f"{target} exists and is not a directory")
    _ensure_dir(target)

    if format == "csv":
        for name, table in bundle.tables.items():
            file_path = target / f"{name}.csv"
            try:
                with open(file_path, "w", encoding="utf-8", newline="") as handle:
                    writer = csv.writer(handle, lineterminator="\n")
                    writer.writerow(table.columns)
                    for row in table.rows:
                        writer.writerow([_format_cell(v) for v in row])
            except OSError as exc:
                raise IoFailure(f"cannot write {file_path}: {exc}") from exc
        return None

    if format == "plotdata":
        for name, series in bundle.series.items():
            lines = [f"# {series.label}"]
            lines.extend(
                f"{repr(float(x))} {repr(float(y))}" for x, y in zip(series.x, series.y)
            )
            _write_text(target / f"{name}.dat", "\n".join(lines) + "\n")
        return None

    raise ConfigInvalid(f"unknown output format {format!r}")


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled experiments")
    parser.add_argument("--grid-size", type=int, default=4096, help="circle grid base count")
    parser.add_argument("--out", default=None, help="output file (json) or directory (csv, plotdata)")
    parser.add_argument(
        "--format", choices=("json", "csv", "plotdata"), default="json", help="output format"
    )
    parser.add_argument("--tol", type=float, default=1e-8, help="iteration residual tolerance")


def _add_sequence_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sequence", default=None, help="path to a sequence file")
    parser.add_argument(
        "--generator",
        choices=("frostman_example", "radial_sequence"),
        default=None,
        help="inline generator instead of a file",
    )
    parser.add_argument("--n", type=int, default=20, help="generator truncation depth")
    parser.add_argument("--q", type=float, default=0.5, help="radial generator ratio")
    parser.add_argument("--arg", type=float, default=0.0, help="radial generator angle")


def _sequence_spec_from_args(args) -> dict:
    if args.sequence is not None:
        return {"path": args.sequence}
    if args.generator is None:
        raise ConfigInvalid("provide either --sequence or --generator")
    if args.generator == "frostman_example":
        return {"generator": "frostman_example", "params": {"N": args.n}}
    return {
        "generator": "radial_sequence",
        "params": {"q": args.q, "N": args.n, "arg": args.arg},
    }


def _parse_pair(text: str, flag: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigInvalid(f"{flag} expects 're,im', got {text!r}")
    try:
        return [float(parts[0]), float(parts[1])]
    except ValueError as exc:
        raise ConfigInvalid(f"{flag} expects numbers, got {text!r}") from exc


def _target_spec_from_args(value: Optional[str], fill: str, flag: str) -> dict:
    if value is not None:
        try:
            raw = json.loads(Path(value).read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read target file {value}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"target file {value} is not valid JSON: {exc}") from exc
        _require_keys(raw, {"values"}, set(), context=str(value))
        return {"values": raw["values"]}
    return {"fill": _parse_pair(fill, flag)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blaschke-lab",
        description="Finite Blaschke products: sequence criteria and model-space interpolation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a sequence file")
    _add_common(gen)
    gen.add_argument(
        "--generator",
        choices=("frostman_example", "radial_sequence"),
        required=True,
    )
    gen.add_argument("--n", type=int, default=20)
    gen.add_argument("--q", type=float, default=0.5)
    gen.add_argument("--arg", type=float, default=0.0)
    gen.add_argument("--name", default=None, help="name stored in the file metadata")

    check = sub.add_parser("check", help="run every sequence criterion across a truncation schedule")
    _add_common(check)
    _add_sequence_source(check)
    check.add_argument(
        "--schedule",
        default=None,
        help="comma-separated truncation depths, e.g. 10,20,40 (default: full length)",
    )

    interpolate = sub.add_parser("interpolate", help="closed-form interpolation on one zero set")
    _add_common(interpolate)
    _add_sequence_source(interpolate)
    interpolate.add_argument("--targets-file", default=None, help="json file with a values list")
    interpolate.add_argument("--fill", default="1,0", help="constant target 're,im'")

    union = sub.add_parser("union", help="joint interpolation across two disjoint zero sets")
    _add_common(union)
    _add_sequence_source(union)
    union.add_argument("--sequence-b", required=True, help="path to the second sequence file")
    union.add_argument("--targets-file", default=None)
    union.add_argument("--fill", default="1,0")
    union.add_argument("--targets-file-b", default=None)
    union.add_argument("--fill-b", default="1,0")

    nearby = sub.add_parser("nearby", help="iterative interpolation on a perturbed node set")
    _add_common(nearby)
    _add_sequence_source(nearby)
    nearby.add_argument("--targets-file", default=None)
    nearby.add_argument("--fill", default="1,0")
    nearby.add_argument(
        "--radius-scale",
        type=float,
        default=0.8,
        help="perturbation radius as a fraction of the contraction threshold",
    )
    nearby.add_argument("--max-iter", type=int, default=30)
    nearby.add_argument("--min-sep", type=float, default=None)

    perturb = sub.add_parser("perturb", help="Monte Carlo perturbation inequality report")
    _add_common(perturb)
    _add_sequence_source(perturb)
    perturb.add_argument("--radius", type=float, required=True)
    perturb.add_argument("--trials", type=int, default=100)
    perturb.add_argument("--min-sep", type=float, default=None)

    shift = sub.add_parser("shift", help="zeros of the shifted product")
    _add_common(shift)
    _add_sequence_source(shift)
    shift.add_argument("--point", required=True, help="shift point 're,im'")

    runner = sub.add_parser("run", help="run an experiment from a config file")
    _add_common(runner)
    runner.add_argument("config", help="path to a config file")

    return parser


def _config_from_args(args) -> ExperimentConfig:
    grid = {"base_count": args.grid_size}
    tolerances = {"tol": args.tol}
    common = {"grid": grid, "seed": args.seed, "tolerances": tolerances}

    if args.command == "check":
        spec = _sequence_spec_from_args(args)
        if args.schedule is not None:
            try:
                schedule = [int(s) for s in args.schedule.split(",") if s.strip()]
            except ValueError as exc:
                raise ConfigInvalid(f"bad --schedule {args.schedule!r}") from exc
        else:
            schedule = [len(_resolve_sequence(spec))]
        return validate_config(
            {"kind": "criteria", "inputs": {"sequence": spec}, "N_schedule": schedule, **common}
        )

    if args.command == "interpolate":
        return validate_config(
            {
                "kind": "interpolate",
                "inputs": {
                    "sequence": _sequence_spec_from_args(args),
                    "targets": _target_spec_from_args(args.targets_file, args.fill, "--fill"),
                },
                **common,
            }
        )

    if args.command == "union":
        return validate_config(
            {
                "kind": "union",
                "inputs": {
                    "sequence": _sequence_spec_from_args(args),
                    "sequence_b": {"path": args.sequence_b},
                    "targets": _target_spec_from_args(args.targets_file, args.fill, "--fill"),
                    "targets_b": _target_spec_from_args(
                        args.targets_file_b, args.fill_b, "--fill-b"
                    ),
                },
                **common,
            }
        )

    if args.command == "nearby":
        inputs = {
            "sequence": _sequence_spec_from_args(args),
            "targets": _target_spec_from_args(args.targets_file, args.fill, "--fill"),
            "radius_scale": args.radius_scale,
            "max_iter": args.max_iter,
        }
        if args.min_sep is not None:
            inputs["min_sep"] = args.min_sep
        return validate_config({"kind": "nearby", "inputs": inputs, **common})

    if args.command == "perturb":
        inputs = {
            "sequence": _sequence_spec_from_args(args),
            "radius": args.radius,
            "trials": args.trials,
        }
        if args.min_sep is not None:
            inputs["min_sep"] = args.min_sep
        return validate_config({"kind": "perturb", "inputs": inputs, **common})

    if args.command == "shift":
        re, im = _parse_pair(args.point, "--point")
        return validate_config(
            {
                "kind": "shift",
                "inputs": {
                    "sequence": _sequence_spec_from_args(args),
                    "point": {"re": re, "im": im},
                },
                **common,
            }
        )

    raise ConfigInvalid(f"unknown command {args.command!r}")


def _run_gen(args) -> int:
    if args.generator == "frostman_example":
        seq = frostman_example(args.n)
        meta = {
            "name": args.name or f"frostman_example_{args.n}",
            "generator": "frostman_example",
            "params": {"N": args.n},
        }
    else:
        seq = radial_sequence(args.q, args.n, args.arg)
        meta = {
            "name": args.name or f"radial_q{args.q}_{args.n}",
            "generator": "radial_sequence",
            "params": {"q": args.q, "N": args.n, "arg": args.arg},
        }
    payload = json.dumps(_sequence_to_payload(seq, meta), indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(payload)
    else:
        _write_text(Path(args.out), payload)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _run_gen(args)
        if args.command == "run":
            config = load_config_file(args.config)
        else:
            config = _config_from_args(args)
        bundle = run(config)
        text = emit(bundle, format=args.format, path=args.out)
        if text is not None:
            sys.stdout.write(text)
        return 0
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IoFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except (BlaschkeLabError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
