#!/usr/bin/env python3
"""Derive the committed calibration files from the published hardware
measurements and write them to calib/.

Anchors (Jetson AGX Orin, 1080p face pipeline):
  * four detect/recognize placements with effective per-frame times of
    5.2 / 4.9 / 15.8 / 16.1 ms (GPU+GPU, DLA0+GPU, GPU+DLA1, DLA0+DLA1)
  * raw stage times: detection ~5.6 ms, recognition ~11.7 ms
  * recognition on a DLA creates 56 layer-fallback boundary crossings
  * detection-only baseline power: GPU 3506 mW, CPU 1342 mW
  * tracker-gated pipeline: 202 FPS ungated rising to 298 FPS gated,
    with total GPU+CPU power dropping by at least a quarter

The model: per-engine load(ms/frame) = stage latency / engine
concurrency; throughput = 1000 / max load; power is affine in
utilization (busy time over the ungated bottleneck period).
"""

import os

DETECT_MS = 5.6
RECOGNIZE_MS = 11.7
FALLBACK_TRANSITIONS = 56

RUN1_EFF_MS = 5.2
RUN2_EFF_MS = 4.9
RUN3_EFF_MS = 15.8
RUN4_EFF_MS = 16.1

UNGATED_FPS = 202.0
GATED_FPS = 298.0

BASELINE_GPU_MW = 3506.0
BASELINE_CPU_MW = 1342.0


def fit_table1():
    # run 1: detect+recognize both on the GPU set its concurrency
    c_gpu = (DETECT_MS + RECOGNIZE_MS) / RUN1_EFF_MS
    # run 2: detect alone on DLA0 is the bottleneck
    c_dla = DETECT_MS / RUN2_EFF_MS
    # run 3: recognize on DLA1 pays one memcpy per fallback transition
    memcpy_ms = (RUN3_EFF_MS * c_dla - RECOGNIZE_MS) / FALLBACK_TRANSITIONS
    # run 4: CPU management of two DLAs becomes the bottleneck;
    # split the CPU cost into per-transition and per-DLA-stage parts
    base_cpu_ms = 0.5  # track 0.2 + recognize 0.3 orchestration
    dla_mgmt_ms = 0.4
    cpu_mgmt_coeff = (
        RUN4_EFF_MS - base_cpu_ms - 2 * dla_mgmt_ms
    ) / FALLBACK_TRANSITIONS
    return {
        "engine.GPU.idle_mw": 500.0,
        "engine.GPU.active_mw": BASELINE_GPU_MW,
        "engine.GPU.concurrency": c_gpu,
        "engine.DLA0.idle_mw": 200.0,
        "engine.DLA0.active_mw": 600.0,
        "engine.DLA0.concurrency": c_dla,
        "engine.DLA1.idle_mw": 200.0,
        "engine.DLA1.active_mw": 600.0,
        "engine.DLA1.concurrency": c_dla,
        "engine.VIC.idle_mw": 100.0,
        "engine.VIC.active_mw": 400.0,
        "engine.VIC.concurrency": 1.0,
        "engine.NVDEC.idle_mw": 100.0,
        "engine.NVDEC.active_mw": 300.0,
        "engine.NVDEC.concurrency": 1.0,
        "engine.CPU.idle_mw": BASELINE_CPU_MW,
        "engine.CPU.active_mw": BASELINE_CPU_MW + 2800.0,
        "engine.CPU.concurrency": 1.0,
        "stage.decode.latency_ms": 0.5,
        "stage.decode.cpu_ms": 0.0,
        "stage.detect.latency_ms": DETECT_MS,
        "stage.detect.cpu_ms": 0.0,
        "stage.detect.dla_transitions": 0,
        "stage.track.latency_ms": 1.0,
        "stage.track.cpu_ms": 0.2,
        "stage.recognize.latency_ms": RECOGNIZE_MS,
        "stage.recognize.cpu_ms": 0.3,
        "stage.recognize.dla_transitions": FALLBACK_TRANSITIONS,
        "memcpy_ms": memcpy_ms,
        "cpu_mgmt_coeff": cpu_mgmt_coeff,
        "dla_mgmt_ms": dla_mgmt_ms,
    }


def fit_gating():
    # tracker-integrated pipeline, detect on DLA0 / recognize on GPU;
    # the recognize stage is the ungated bottleneck at 202 FPS
    period = 1000.0 / UNGATED_FPS
    c_gpu = RECOGNIZE_MS / period
    return {
        "engine.GPU.idle_mw": 450.0,
        "engine.GPU.active_mw": 4450.0,
        "engine.GPU.concurrency": c_gpu,
        "engine.DLA0.idle_mw": 150.0,
        "engine.DLA0.active_mw": 750.0,
        "engine.DLA0.concurrency": 1.75,
        "engine.VIC.idle_mw": 80.0,
        "engine.VIC.active_mw": 330.0,
        "engine.VIC.concurrency": 1.0,
        "engine.NVDEC.idle_mw": 80.0,
        "engine.NVDEC.active_mw": 230.0,
        "engine.NVDEC.concurrency": 1.0,
        "engine.CPU.idle_mw": 300.0,
        "engine.CPU.active_mw": 3300.0,
        "engine.CPU.concurrency": 1.0,
        "stage.decode.latency_ms": 0.5,
        "stage.decode.cpu_ms": 0.0,
        "stage.detect.latency_ms": DETECT_MS,
        "stage.detect.cpu_ms": 0.1,
        "stage.detect.dla_transitions": 0,
        "stage.track.latency_ms": 1.2,
        "stage.track.cpu_ms": 0.0,
        "stage.recognize.latency_ms": RECOGNIZE_MS,
        "stage.recognize.cpu_ms": 3.9,
        "stage.recognize.dla_transitions": FALLBACK_TRANSITIONS,
        "memcpy_ms": 0.0,
        "cpu_mgmt_coeff": 0.0,
        "dla_mgmt_ms": 0.0,
    }


def write_cal(values, path, title):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {title}\n# generated by scripts/fit_calibration.py\n")
        for key, value in values.items():
            if isinstance(value, int):
                fh.write(f"{key} = {value}\n")
            else:
                fh.write(f"{key} = {value!r}\n")


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    calib = os.path.join(os.path.dirname(here), "calib")
    os.makedirs(calib, exist_ok=True)
    write_cal(
        fit_table1(),
        os.path.join(calib, "table1.cal"),
        "four-placement hardware study + detection-only power baseline",
    )
    write_cal(
        fit_gating(),
        os.path.join(calib, "gating.cal"),
        "tracker-integrated pipeline for the gating study (202 -> 298 FPS)",
    )
    print(f"wrote calibration files to {calib}")


if __name__ == "__main__":
    main()
