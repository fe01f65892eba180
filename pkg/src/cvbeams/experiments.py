"""Config-driven scenario runner: builds the entanglement pipelines, runs
parameter sweeps, validates detectors with Monte Carlo, and emits reports.

Configs are flat JSON documents (see parse_config).  Reports are byte-stable
for identical config + seed: the provenance block carries the library version
and a config digest; a wall-clock timestamp is only included when
SOURCE_DATE_EPOCH is set (reproducible-build convention), since a live clock
would break report determinism.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .criteria import (correlation_signatures, heisenberg_product,
                       inseparability_split, inseparability_xp)
from .detection import (LocalOscillator, homodyne, momentum_readout,
                        monte_carlo_sample, position_readout, split_detect)
from .gaussian import (apply_beam_splitter_5050, apply_phase_shift,
                       apply_squeezer, set_coherent, vacuum_state)
from .modes import ModalCoefficients, ModeBasis

SCENARIOS = ("xp_entanglement", "split_entanglement", "position_readout_demo")
SWEEPABLE = ("r", "r1", "r2")

CSV_COLUMNS = ("sweep_param", "sum_var", "diff_var", "inseparability",
               "entangled", "x_var_3", "x_var_4", "p_var_3", "p_var_4",
               "mc_delta")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class MonteCarloSpec:
    shots: int
    seed: int


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    waist: float = 1.0
    photons: float = 1e6
    lo_photons: float = 1e8
    r1: float = 0.0
    r2: float = 0.0
    angle1: float = 0.0
    angle2: float = 0.0
    truncation: int = 8
    sweep: SweepSpec | None = None
    monte_carlo: MonteCarloSpec | None = None
    output_path: str | None = None
    output_format: str = "json"

    def echo(self):
        d = {
            "scenario": self.scenario,
            "waist": self.waist,
            "photons": self.photons,
            "lo_photons": self.lo_photons,
            "squeezing": {"r1": self.r1, "r2": self.r2,
                          "angle1": self.angle1, "angle2": self.angle2},
            "truncation": self.truncation,
        }
        if self.sweep:
            d["sweep"] = {"parameter": self.sweep.parameter,
                          "start": self.sweep.start, "stop": self.sweep.stop,
                          "steps": self.sweep.steps}
        if self.monte_carlo:
            d["monte_carlo"] = {"shots": self.monte_carlo.shots,
                                "seed": self.monte_carlo.seed}
        # the output destination is not part of the experiment, so it is
        # excluded: identical physics yields identical report bytes
        return d


def _get(doc, key, types, default=None, required=False):
    if key not in doc:
        if required:
            raise ConfigError(f"field '{key}': missing required field")
        return default
    val = doc[key]
    if types is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, types if isinstance(types, tuple) else (types,)):
        raise ConfigError(f"field '{key}': expected {types}, got {type(val).__name__}")
    return val


def parse_config(text) -> ExperimentConfig:
    """Parse and validate a JSON experiment config, filling defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}): {exc.msg}")
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")

    scenario = _get(doc, "scenario", str, required=True)
    if scenario not in SCENARIOS:
        raise ConfigError(f"field 'scenario': unknown scenario {scenario!r}, "
                          f"expected one of {SCENARIOS}")
    waist = _get(doc, "waist", float, 1.0)
    photons = _get(doc, "photons", float, 1e6)
    lo_photons = _get(doc, "lo_photons", float, 1e8)
    truncation = _get(doc, "truncation", int, 8)
    if waist <= 0:
        raise ConfigError("field 'waist': must be positive")
    if photons <= 0:
        raise ConfigError("field 'photons': must be positive")
    if truncation < 2:
        raise ConfigError("field 'truncation': must be >= 2")
    if scenario != "split_entanglement" and lo_photons < 100.0 * photons:
        raise ConfigError("field 'lo_photons': local oscillator regime requires "
                          "N_LO >= 100 * N")

    sq = _get(doc, "squeezing", dict, {})
    r1 = _get(sq, "r1", float, 0.0)
    r2 = _get(sq, "r2", float, 0.0)
    angle1 = _get(sq, "angle1", float, 0.0)
    angle2 = _get(sq, "angle2", float, 0.0)
    if r1 < 0 or r2 < 0:
        raise ConfigError("field 'squeezing': r1 and r2 must be >= 0")

    sweep = None
    if "sweep" in doc:
        sw = _get(doc, "sweep", dict)
        param = _get(sw, "parameter", str, required=True)
        if param not in SWEEPABLE:
            raise ConfigError(f"field 'sweep.parameter': unknown parameter "
                              f"{param!r}, expected one of {SWEEPABLE}")
        steps = _get(sw, "steps", int, required=True)
        if steps < 1:
            raise ConfigError("field 'sweep.steps': must be >= 1")
        sweep = SweepSpec(parameter=param,
                          start=_get(sw, "start", float, required=True),
                          stop=_get(sw, "stop", float, required=True),
                          steps=steps)

    mc = None
    if "monte_carlo" in doc:
        m = _get(doc, "monte_carlo", dict)
        shots = _get(m, "shots", int, required=True)
        if shots < 2:
            raise ConfigError("field 'monte_carlo.shots': must be >= 2")
        mc = MonteCarloSpec(shots=shots, seed=_get(m, "seed", int, 0))

    out_path, out_format = None, "json"
    if "output" in doc:
        o = _get(doc, "output", dict)
        out_path = _get(o, "path", str)
        out_format = _get(o, "format", str, "json")
        if out_format not in ("csv", "json"):
            raise ConfigError("field 'output.format': must be 'csv' or 'json'")

    return ExperimentConfig(scenario=scenario, waist=waist, photons=photons,
                            lo_photons=lo_photons, r1=r1, r2=r2,
                            angle1=angle1, angle2=angle2, truncation=truncation,
                            sweep=sweep, monte_carlo=mc,
                            output_path=out_path, output_format=out_format)


@dataclass
class ExperimentReport:
    config: dict
    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)


def _provenance(config: ExperimentConfig):
    digest = hashlib.sha256(
        json.dumps(config.echo(), sort_keys=True).encode()).hexdigest()
    prov = {"library": "cvbeams", "version": __version__, "config_sha256": digest}
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        prov["timestamp"] = datetime.fromtimestamp(
            int(epoch), tz=timezone.utc).isoformat()
    return prov


def _tem10_lo(basis, phase, photons):
    coeffs = np.zeros(basis.truncation, dtype=complex)
    coeffs[1] = 1.0
    return LocalOscillator(profile=ModalCoefficients(basis=basis, coeffs=coeffs),
                           phase=phase, photons=photons)


def _mc_delta(records, mc: MonteCarloSpec | None):
    if mc is None:
        return None
    delta = 0.0
    for k, rec in enumerate(records):
        stats = monte_carlo_sample(rec, mc.shots, mc.seed + k)
        if rec.variance > 0:
            delta = max(delta, abs(stats.sample_variance - rec.variance) / rec.variance)
    return delta


def build_xp_joint_state(config: ExperimentConfig, r1, r2):
    """Two position-squeezed beams combined on the 50:50 beam splitter.

    Beam 2's first-order mode enters with a pi/2 phase relative to beam 1's,
    which is what makes the sum/difference outputs EPR-correlated.
    """
    basis = ModeBasis.hermite_gauss(config.waist, config.truncation)
    state = vacuum_state(2, basis, config.photons)
    amp = np.sqrt(config.photons)
    for beam, r, angle in ((0, r1, config.angle1), (1, r2, config.angle2)):
        state = set_coherent(state, beam, 0, amp)
        state = apply_squeezer(state, beam, 1, r, angle)
    state = apply_phase_shift(state, 1, 1, np.pi / 2)
    return apply_beam_splitter_5050(state)


def build_split_joint_state(config: ExperimentConfig, r1, r2):
    """Two spatially squeezed beams (flipped mode squeezed in X+) combined
    in phase on the 50:50 beam splitter, in the flipped basis."""
    basis = ModeBasis.flipped(config.waist, config.truncation)
    state = vacuum_state(2, basis, config.photons)
    amp = np.sqrt(config.photons)
    for beam, r, angle in ((0, r1, config.angle1), (1, r2, config.angle2)):
        state = set_coherent(state, beam, 0, amp)
        state = apply_squeezer(state, beam, 1, r, angle)
    return apply_beam_splitter_5050(state)


def _xp_point(config: ExperimentConfig, sweep_value, r1, r2):
    joint = build_xp_joint_state(config, r1, r2)
    result = inseparability_xp(joint)
    _, xv3 = position_readout(joint, 0)
    _, xv4 = position_readout(joint, 1)
    _, pv3 = momentum_readout(joint, 0)
    _, pv4 = momentum_readout(joint, 1)
    records = [homodyne(joint, beam, _tem10_lo(joint.basis, phase, config.lo_photons))
               for beam in (0, 1) for phase in (0.0, np.pi / 2)]
    return {
        "sweep_param": sweep_value,
        "sum_var": result.sum_variance,
        "diff_var": result.diff_variance,
        "inseparability": result.value,
        "entangled": result.entangled,
        "x_var_3": xv3, "x_var_4": xv4, "p_var_3": pv3, "p_var_4": pv4,
        "mc_delta": _mc_delta(records, config.monte_carlo),
    }


def _split_point(config: ExperimentConfig, sweep_value, r1, r2):
    joint = build_split_joint_state(config, r1, r2)
    result = inseparability_split(joint)
    plus3 = split_detect(joint, 0, "plus")
    plus4 = split_detect(joint, 1, "plus")
    minus3 = split_detect(joint, 0, "minus")
    minus4 = split_detect(joint, 1, "minus")
    return {
        "sweep_param": sweep_value,
        "sum_var": result.sum_variance,
        "diff_var": result.diff_variance,
        "inseparability": result.value,
        "entangled": result.entangled,
        "x_var_3": plus3.normalized_variance,
        "x_var_4": plus4.normalized_variance,
        "p_var_3": minus3.normalized_variance,
        "p_var_4": minus4.normalized_variance,
        "mc_delta": _mc_delta([plus3, plus4, minus3, minus4], config.monte_carlo),
    }


def _demo_point(config: ExperimentConfig, sweep_value, r1, r2):
    basis = ModeBasis.hermite_gauss(config.waist, config.truncation)
    state = vacuum_state(1, basis, config.photons)
    state = set_coherent(state, 0, 0, np.sqrt(config.photons))
    state = apply_squeezer(state, 0, 1, r1, config.angle1)
    _, x_var = position_readout(state, 0)
    _, p_var = momentum_readout(state, 0)
    _, normalized = heisenberg_product(state, 0)
    records = [homodyne(state, 0, _tem10_lo(basis, phase, config.lo_photons))
               for phase in (0.0, np.pi / 2)]
    return {
        "sweep_param": sweep_value,
        "sum_var": x_var,
        "diff_var": p_var,
        "inseparability": normalized,
        "entangled": False,
        "x_var_3": x_var, "x_var_4": None, "p_var_3": p_var, "p_var_4": None,
        "mc_delta": _mc_delta(records, config.monte_carlo),
    }


_POINT_RUNNERS = {
    "xp_entanglement": _xp_point,
    "split_entanglement": _split_point,
    "position_readout_demo": _demo_point,
}


def _schedule(config: ExperimentConfig):
    """(sweep_value, r1, r2) per report row."""
    if config.sweep is None:
        return [(None, config.r1, config.r2)]
    sw = config.sweep
    values = np.linspace(sw.start, sw.stop, sw.steps)
    points = []
    for v in values:
        r1, r2 = config.r1, config.r2
        if sw.parameter in ("r", "r1"):
            r1 = float(v)
        if sw.parameter in ("r", "r2"):
            r2 = float(v)
        points.append((float(v), r1, r2))
    return points


def run_scenario(config: ExperimentConfig) -> ExperimentReport:
    runner = _POINT_RUNNERS[config.scenario]
    report = ExperimentReport(config=config.echo(), provenance=_provenance(config))
    for sweep_value, r1, r2 in _schedule(config):
        report.rows.append(runner(config, sweep_value, r1, r2))
    return report


def run_xp_scenario(config: ExperimentConfig) -> ExperimentReport:
    if config.scenario != "xp_entanglement":
        raise ConfigError("field 'scenario': expected 'xp_entanglement'")
    return run_scenario(config)


def run_split_scenario(config: ExperimentConfig) -> ExperimentReport:
    if config.scenario != "split_entanglement":
        raise ConfigError("field 'scenario': expected 'split_entanglement'")
    return run_scenario(config)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_report(report: ExperimentReport, format="json") -> str:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])
        return buf.getvalue()
    if format == "json":
        doc = {"config": report.config, "results": report.rows,
               "provenance": report.provenance}
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def emit_report(report: ExperimentReport, path, format="json"):
    """Write the report to disk; byte-stable for identical config and seed."""
    out_dir = os.environ.get("CVBEAMS_OUTPUT_DIR")
    if out_dir:
        path = os.path.join(out_dir, os.path.basename(str(path)))
    text = render_report(report, format)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path
