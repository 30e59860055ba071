"""Command-line entry points: synth, track, gate, simulate, report.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import json
import sys

from facepipe import io_formats, metrics, pipesim, synth
from facepipe.gate import GateState, gate_step
from facepipe.tracker_dcf import DcfParams, DcfTracker
from facepipe.tracker_iou import IouParams, IouTracker
from facepipe.tracker_sort import SortParams, SortTracker
from facepipe import kalman


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_tracker(config):
    kind = config["tracker.kind"]
    if kind == "iou":
        return IouTracker(
            params=IouParams(
                iou_min=config["tracker.iou_min"],
                max_misses=config["tracker.max_misses"],
                min_confidence=config["tracker.min_confidence"],
                greedy=config["tracker.greedy"],
            )
        )
    if kind == "sort":
        return SortTracker(
            params=SortParams(
                iou_min=config["tracker.iou_min"],
                max_misses=config["tracker.max_misses"],
                min_confidence=config["tracker.min_confidence"],
                min_hits=config["tracker.min_hits"],
                greedy=config["tracker.greedy"],
            ),
            model=kalman.default_model(
                q_pos=config["sort.q_pos"],
                q_vel=config["sort.q_vel"],
                r_pos=config["sort.r_pos"],
                r_size=config["sort.r_size"],
            ),
        )
    return DcfTracker(
        params=DcfParams(
            lam=config["dcf.lambda"],
            sigma_factor=config["dcf.sigma_factor"],
            eta=config["dcf.learning_rate"],
            psr_track_min=config["dcf.psr_track_min"],
            psr_revive_min=config["dcf.psr_revive_min"],
            search_scale=config["dcf.search_scale"],
            lost_retention_frames=config["dcf.lost_retention_frames"],
            iou_min=config["tracker.iou_min"],
            min_confidence=config["tracker.min_confidence"],
        )
    )


def run_pipeline(
    config,
    detections_by_frame,
    frames_dir=None,
    embeddings=None,
    gallery=None,
    ground_truth=None,
):
    """Drive a tracker (and optionally the recognition gate) over a
    detection stream; returns the RunReport dict."""
    tracker = build_tracker(config)
    needs_frames = config["tracker.kind"] == "dcf"
    if needs_frames and frames_dir is None:
        raise io_formats.DataError("the dcf tracker requires --frames")

    gate_state = None
    if embeddings is not None:
        if gallery is None:
            raise io_formats.DataError("gating requires a gallery")
        gate_state = GateState(
            max_dist=config["gate.max_dist"],
            retry_unknown=config["gate.retry_unknown"],
        )

    timeline = metrics.IdTimeline()
    events_out = []
    total_detections = 0
    frames_processed = 0

    def process(frame, dets, image):
        nonlocal total_detections, frames_processed
        frames_processed += 1
        total_detections += len(dets)
        if needs_frames:
            ev = tracker.step(frame, image, dets)
        else:
            ev = tracker.step(frame, dets)
        if gate_state is not None:
            by_track = {}
            for det_index, tid in ev.assignments.items():
                vec = embeddings.get((frame, det_index))
                if vec is not None:
                    by_track[tid] = vec
            gate_step(gate_state, ev, by_track, gallery)
        if ground_truth is not None:
            for det_index, tid in sorted(ev.assignments.items()):
                target = ground_truth.get((frame, det_index))
                if target is not None:
                    timeline.add(target, frame, tid)
        events_out.append(
            {
                "frame": frame,
                "new": sorted(ev.new_ids),
                "continued": sorted(ev.continued_ids),
                "terminated": sorted(ev.terminated_ids),
                "revived": sorted(ev.revived_ids),
            }
        )

    if needs_frames:
        for frame, image in io_formats.load_frame_sequence(frames_dir):
            process(frame, detections_by_frame.get(frame, []), image)
    else:
        last = max(detections_by_frame) if detections_by_frame else 0
        for frame in range(1, last + 1):
            process(frame, detections_by_frame.get(frame, []), None)

    report = {
        "config_echo": dict(config),
        "frames": frames_processed,
        "tracks_created": tracker.next_id,
        "id_switches": None,
        "recognition_calls": None,
        "gating_reduction": None,
        "fps_simulated": None,
        "power_mw": None,
        "events": events_out,
    }
    if ground_truth is not None and timeline.targets:
        switches = metrics.count_id_switches(timeline)
        report["id_switches"] = switches.total_switches
    if gate_state is not None:
        calls = len(gate_state.recognition_log)
        report["recognition_calls"] = calls
        if total_detections > 0:
            report["gating_reduction"] = metrics.gating_benefit(
                total_detections, calls
            )
    return report


def _cmd_synth(args):
    spec = synth.parse_scenario(args.spec)
    synth.generate(spec, args.out)
    return 0


def _cmd_track(args, gated):
    config = io_formats.parse_config(args.config)
    detections = io_formats.parse_detections(args.detections)
    embeddings = gallery = None
    if gated:
        embeddings = io_formats.parse_embeddings(args.embeddings)
        gallery = io_formats.parse_gallery(args.gallery)
    ground_truth = (
        io_formats.parse_ground_truth(args.ground_truth)
        if args.ground_truth
        else None
    )
    report = run_pipeline(
        config,
        detections,
        frames_dir=args.frames,
        embeddings=embeddings,
        gallery=gallery,
        ground_truth=ground_truth,
    )
    io_formats.write_report(report, args.out)
    return 0


def _cmd_simulate(args):
    cal = pipesim.parse_calibration(args.calibration)
    if args.baseline:
        candidates = [pipesim.detection_baseline()]
    else:
        candidates = pipesim.standard_allocations()
        if args.allocation:
            candidates = [a for a in candidates if a.name in args.allocation]
            if not candidates:
                raise io_formats.DataError("no matching allocation name")
    gating = args.gating
    if args.target_fps is not None:
        gating = pipesim.solve_gating_fraction(cal, candidates[0], args.target_fps)
    ranked = pipesim.rank_allocations(cal, candidates, gating_fraction=gating)
    best = ranked[0]
    report = {
        "config_echo": {
            "calibration": args.calibration,
            "gating_fraction": gating,
            "allocations": [a.name for a in candidates],
        },
        "frames": None,
        "tracks_created": None,
        "id_switches": None,
        "recognition_calls": None,
        "gating_reduction": None,
        "fps_simulated": best.fps,
        "power_mw": {"per_engine": best.power_mw, "total": best.total_power_mw},
        "events": [
            {
                "allocation": r.allocation,
                "fps": r.fps,
                "effective_frame_ms": r.effective_frame_ms,
                "end_to_end_ms": r.end_to_end_ms,
                "total_power_mw": r.total_power_mw,
                "utilization": r.utilization,
            }
            for r in ranked
        ],
    }
    io_formats.write_report(report, args.out)
    return 0


def _cmd_report(args):
    report = io_formats.read_report(args.infile)
    if args.compare:
        other = io_formats.read_report(args.compare)
        if io_formats.report_bytes(report) == io_formats.report_bytes(other):
            print("reports are identical")
            return 0
        print("reports differ", file=sys.stderr)
        return 2
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def make_parser():
    parser = _Parser(prog="facepipe")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scenario")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)

    for name in ("track", "gate"):
        p = sub.add_parser(name, help=f"{name} a detection stream")
        p.add_argument("--config", required=True)
        p.add_argument("--detections", required=True)
        p.add_argument("--frames", default=None, help="PGM frame directory (dcf)")
        p.add_argument("--ground-truth", default=None)
        p.add_argument("--out", required=True)
        if name == "gate":
            p.add_argument("--embeddings", required=True)
            p.add_argument("--gallery", required=True)

    p = sub.add_parser("simulate", help="evaluate pipeline allocations")
    p.add_argument("--calibration", required=True)
    p.add_argument("--allocation", action="append", default=None)
    p.add_argument("--baseline", action="store_true")
    p.add_argument("--gating", type=float, default=1.0)
    p.add_argument("--target-fps", type=float, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="pretty-print or compare reports")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--compare", default=None)

    return parser


def run_cli(argv):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "track":
            return _cmd_track(args, gated=False)
        if args.command == "gate":
            return _cmd_track(args, gated=True)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_report(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (io_formats.DataError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
