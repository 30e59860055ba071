"""Analytic steady-state model of a heterogeneous-engine frame pipeline.

Stages (decode, detect, track, recognize) map onto engines (GPU, DLAs,
VIC, NVDEC, CPU).  Engines overlap in a pipeline, so throughput is set by
the most loaded engine; end-to-end frame latency is the plain sum of
stage latencies.  Allocating a deep-learning stage to a DLA can incur
layer-fallback transitions, each paying a memcpy penalty on the DLA and a
management cost on the CPU.  A gating fraction scales everything the
recognize stage contributes (only that fraction of frames runs it).

Power is affine in utilization, where utilization is each engine's busy
time per frame divided by the ungated bottleneck period (the reference
frame interval the pipeline is provisioned for).
"""

import math
import re
from dataclasses import dataclass, field

DLA_ENGINES = ("DLA0", "DLA1")
STAGE_NAMES = ("decode", "detect", "track", "recognize")


@dataclass(frozen=True)
class Engine:
    name: str
    idle_mw: float
    active_mw: float
    concurrency: float

    def __post_init__(self):
        if not 0 <= self.idle_mw <= self.active_mw:
            raise ValueError("need active_mw >= idle_mw >= 0")
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")


@dataclass(frozen=True)
class StageModel:
    name: str
    latency_ms: float
    cpu_ms: float = 0.0  # CPU-side orchestration per frame
    dla_transitions: int = 0  # fallback boundary crossings when on a DLA

    def __post_init__(self):
        if self.latency_ms <= 0:
            raise ValueError("stage latency must be positive")


@dataclass(frozen=True)
class Allocation:
    name: str
    mapping: dict  # stage name -> engine name; absent stage = not in pipeline


@dataclass
class Calibration:
    engines: dict = field(default_factory=dict)  # name -> Engine
    stages: dict = field(default_factory=dict)  # name -> StageModel
    memcpy_ms: float = 0.0
    cpu_mgmt_coeff: float = 0.0  # CPU ms per fallback transition
    dla_mgmt_ms: float = 0.0  # CPU ms per DLA-allocated stage


@dataclass
class PipelineReport:
    allocation: str
    gating_fraction: float
    stage_latency_ms: dict
    end_to_end_ms: float
    effective_frame_ms: float
    fps: float
    utilization: dict
    power_mw: dict
    total_power_mw: float


def stage_latency(stage: StageModel, on_dla: bool, memcpy_ms: float) -> float:
    """Segment latencies plus one memcpy per fallback transition."""
    transitions = stage.dla_transitions if on_dla else 0
    return stage.latency_ms + transitions * memcpy_ms


def _engine_loads(cal: Calibration, alloc: Allocation, gating_fraction: float):
    loads = {name: 0.0 for name in cal.engines}
    latencies = {}
    for stage_name, engine_name in alloc.mapping.items():
        stage = cal.stages[stage_name]
        if engine_name not in cal.engines:
            raise ValueError(f"allocation names unknown engine {engine_name!r}")
        on_dla = engine_name in DLA_ENGINES
        lat = stage_latency(stage, on_dla, cal.memcpy_ms)
        latencies[stage_name] = lat
        scale = gating_fraction if stage_name == "recognize" else 1.0
        loads[engine_name] += scale * lat / cal.engines[engine_name].concurrency
        if "CPU" in cal.engines:
            transitions = stage.dla_transitions if on_dla else 0
            cpu = stage.cpu_ms + transitions * cal.cpu_mgmt_coeff
            if on_dla:
                cpu += cal.dla_mgmt_ms
            loads["CPU"] += scale * cpu / cal.engines["CPU"].concurrency
    return loads, latencies


def pipeline_throughput(
    cal: Calibration, alloc: Allocation, gating_fraction: float = 1.0
) -> PipelineReport:
    if not 0.0 <= gating_fraction <= 1.0:
        raise ValueError("gating_fraction must lie in [0, 1]")
    for stage_name in alloc.mapping:
        if stage_name not in cal.stages:
            raise ValueError(f"no calibration for stage {stage_name!r}")
    loads, latencies = _engine_loads(cal, alloc, gating_fraction)
    reference, _ = _engine_loads(cal, alloc, 1.0)
    reference_period = max(reference.values())
    effective = max(loads.values())
    utilization = {name: loads[name] / reference_period for name in loads}
    power = {
        name: cal.engines[name].idle_mw
        + utilization[name]
        * (cal.engines[name].active_mw - cal.engines[name].idle_mw)
        for name in loads
    }
    return PipelineReport(
        allocation=alloc.name,
        gating_fraction=gating_fraction,
        stage_latency_ms=latencies,
        end_to_end_ms=sum(latencies.values()),
        effective_frame_ms=effective,
        fps=1000.0 / effective,
        utilization=utilization,
        power_mw=power,
        total_power_mw=sum(power.values()),
    )


def rank_allocations(cal: Calibration, candidates, gating_fraction: float = 1.0):
    """Deterministic ranking by throughput (descending) then total power
    (ascending); equal candidates keep their input order."""
    if not candidates:
        raise ValueError("need at least one candidate allocation")
    reports = [pipeline_throughput(cal, a, gating_fraction) for a in candidates]
    order = sorted(
        range(len(reports)),
        key=lambda i: (-reports[i].fps, reports[i].total_power_mw, i),
    )
    return [reports[i] for i in order]


def solve_gating_fraction(cal: Calibration, alloc: Allocation, target_fps, tol=1e-9):
    """Gating fraction at which the pipeline reaches target_fps, by
    bisection on the (monotone non-increasing) throughput curve."""
    lo, hi = 0.0, 1.0
    if pipeline_throughput(cal, alloc, 1.0).fps >= target_fps:
        return 1.0
    if pipeline_throughput(cal, alloc, 0.0).fps < target_fps:
        raise ValueError("target throughput unreachable even fully gated")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if pipeline_throughput(cal, alloc, mid).fps >= target_fps:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# calibration file: "key = value" lines, '#' comments


_ENGINE_KEY = re.compile(r"^engine\.([A-Za-z0-9_]+)\.(idle_mw|active_mw|concurrency)$")
_STAGE_KEY = re.compile(r"^stage\.([a-z]+)\.(latency_ms|cpu_ms|dla_transitions)$")
_SCALAR_KEYS = ("memcpy_ms", "cpu_mgmt_coeff", "dla_mgmt_ms")


def parse_calibration(path) -> Calibration:
    engines = {}
    stages = {}
    scalars = {k: 0.0 for k in _SCALAR_KEYS}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            m = _ENGINE_KEY.match(key)
            if m:
                engines.setdefault(m.group(1), {})[m.group(2)] = float(value)
                continue
            m = _STAGE_KEY.match(key)
            if m:
                if m.group(1) not in STAGE_NAMES:
                    raise ValueError(f"{path}:{lineno}: unknown stage {m.group(1)!r}")
                stages.setdefault(m.group(1), {})[m.group(2)] = float(value)
                continue
            if key in _SCALAR_KEYS:
                scalars[key] = float(value)
                continue
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    cal = Calibration(
        memcpy_ms=scalars["memcpy_ms"],
        cpu_mgmt_coeff=scalars["cpu_mgmt_coeff"],
        dla_mgmt_ms=scalars["dla_mgmt_ms"],
    )
    for name, fields in engines.items():
        missing = {"idle_mw", "active_mw", "concurrency"} - set(fields)
        if missing:
            raise ValueError(f"engine {name!r} missing {sorted(missing)}")
        cal.engines[name] = Engine(name=name, **fields)
    for name, fields in stages.items():
        fields.setdefault("cpu_ms", 0.0)
        fields.setdefault("dla_transitions", 0.0)
        cal.stages[name] = StageModel(
            name=name,
            latency_ms=fields["latency_ms"],
            cpu_ms=fields["cpu_ms"],
            dla_transitions=int(fields["dla_transitions"]),
        )
    return cal


# the hardware study's four detect/recognize placements, plus the
# detection-only baseline used for power calibration
def standard_allocations():
    base = {"decode": "NVDEC", "track": "VIC"}
    return [
        Allocation("run1", {**base, "detect": "GPU", "recognize": "GPU"}),
        Allocation("run2", {**base, "detect": "DLA0", "recognize": "GPU"}),
        Allocation("run3", {**base, "detect": "GPU", "recognize": "DLA1"}),
        Allocation("run4", {**base, "detect": "DLA0", "recognize": "DLA1"}),
    ]


def detection_baseline():
    return Allocation("detection_baseline", {"decode": "NVDEC", "detect": "GPU"})
