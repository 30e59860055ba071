"""File formats: detection CSV, binary PGM frames, embedding/gallery CSV,
ground-truth CSV, run configuration, and deterministic JSON reports."""

import json
import math
import os

import numpy as np

from facepipe.gate import EMBEDDING_DIM
from facepipe.geometry import BoundingBox, Detection


class DataError(ValueError):
    """Malformed input file; message carries the file and line/byte."""


# ---------------------------------------------------------------------------
# detections: frame,track_id,x,y,w,h,confidence


def parse_detections(path):
    """Frame-grouped detections, ordered by frame.  Returns a dict
    frame -> [Detection], with insertion order following the file."""
    frames = {}
    last_frame = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise DataError(f"{path}:{lineno}: expected 7 fields")
            try:
                frame = int(parts[0])
                x, y, w, h = (float(v) for v in parts[2:6])
                conf = float(parts[6])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if frame < last_frame:
                raise DataError(f"{path}:{lineno}: frames out of order")
            last_frame = frame
            try:
                det = Detection(
                    frame=frame, box=BoundingBox(x=x, y=y, w=w, h=h), confidence=conf
                )
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            frames.setdefault(frame, []).append(det)
    return frames


def write_detections(frames, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# frame,track_id,x,y,w,h,confidence\n")
        for frame in sorted(frames):
            for det in frames[frame]:
                b = det.box
                fh.write(
                    f"{frame},-1,{_num(b.x)},{_num(b.y)},{_num(b.w)},{_num(b.h)},"
                    f"{_num(det.confidence)}\n"
                )


# ---------------------------------------------------------------------------
# binary PGM (P5, maxval <= 255, single optional comment line)


def parse_pgm(path):
    """Row-major float array in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()

    def next_token(pos):
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            if end < 0:
                raise DataError(f"{path}: unterminated comment")
            return next_token(end + 1)
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DataError(f"{path}: truncated header")
        return data[start:pos], pos

    magic, pos = next_token(0)
    if magic != b"P5":
        raise DataError(f"{path}: unsupported format {magic!r} (binary P5 only)")
    width_b, pos = next_token(pos)
    height_b, pos = next_token(pos)
    maxval_b, pos = next_token(pos)
    try:
        width, height, maxval = int(width_b), int(height_b), int(maxval_b)
    except ValueError as exc:
        raise DataError(f"{path}: bad header: {exc}") from exc
    if maxval > 255:
        raise DataError(f"{path}: maxval {maxval} > 255 unsupported")
    payload = data[pos + 1 : pos + 1 + width * height]
    if len(payload) < width * height:
        raise DataError(f"{path}: truncated payload")
    pixels = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    return (pixels / maxval).reshape(height, width)


def write_pgm(pixels, path, maxval=255):
    pixels = np.asarray(pixels)
    if pixels.dtype != np.uint8:
        pixels = np.clip(np.rint(pixels * maxval), 0, maxval).astype(np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        fh.write(pixels.tobytes())


def frame_path(directory, frame):
    return os.path.join(directory, f"frame_{frame:06d}.pgm")


def load_frame_sequence(directory):
    """Contiguous frame_000001.pgm upward; yields (frame, pixels)."""
    frame = 1
    shape = None
    while True:
        path = frame_path(directory, frame)
        if not os.path.exists(path):
            if frame == 1:
                raise DataError(f"{directory}: no frame_000001.pgm")
            return
        pixels = parse_pgm(path)
        if shape is None:
            shape = pixels.shape
        elif pixels.shape != shape:
            raise DataError(f"{path}: frame dimensions changed")
        yield frame, pixels
        frame += 1


# ---------------------------------------------------------------------------
# embeddings (frame,det_index,e0..e127) and gallery (identity,e0..e127)


def parse_embeddings(path):
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2 + EMBEDDING_DIM:
                raise DataError(
                    f"{path}:{lineno}: expected {2 + EMBEDDING_DIM} fields"
                )
            try:
                frame = int(parts[0])
                det_index = int(parts[1])
                vec = np.array([float(v) for v in parts[2:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if not np.all(np.isfinite(vec)):
                raise DataError(f"{path}:{lineno}: non-finite embedding")
            out[(frame, det_index)] = vec
    return out


def write_embeddings(embeddings, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# frame,det_index,e0..e127\n")
        for (frame, det_index) in sorted(embeddings):
            vec = embeddings[(frame, det_index)]
            comps = ",".join(_num(v) for v in vec)
            fh.write(f"{frame},{det_index},{comps}\n")


def parse_gallery(path):
    from facepipe.gate import Gallery

    gallery = Gallery()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 1 + EMBEDDING_DIM:
                raise DataError(
                    f"{path}:{lineno}: expected {1 + EMBEDDING_DIM} fields"
                )
            try:
                vec = np.array([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            try:
                gallery.add(parts[0], vec)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return gallery


def write_gallery(gallery, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# identity,e0..e127\n")
        for identity, vec in gallery.entries:
            comps = ",".join(_num(v) for v in vec)
            fh.write(f"{identity},{comps}\n")


# ---------------------------------------------------------------------------
# ground truth: frame,det_index,target


def parse_ground_truth(path):
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 fields")
            try:
                out[(int(parts[0]), int(parts[1]))] = parts[2]
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return out


def write_ground_truth(gt, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# frame,det_index,target\n")
        for (frame, det_index) in sorted(gt):
            fh.write(f"{frame},{det_index},{gt[(frame, det_index)]}\n")


# ---------------------------------------------------------------------------
# run configuration: "key = value" text, unknown keys rejected


_CONFIG_KEYS = {
    "tracker.kind": str,
    "tracker.iou_min": float,
    "tracker.max_misses": int,
    "tracker.min_confidence": float,
    "tracker.min_hits": int,
    "tracker.greedy": bool,
    "sort.q_pos": float,
    "sort.q_vel": float,
    "sort.r_pos": float,
    "sort.r_size": float,
    "dcf.lambda": float,
    "dcf.sigma_factor": float,
    "dcf.learning_rate": float,
    "dcf.psr_track_min": float,
    "dcf.psr_revive_min": float,
    "dcf.search_scale": float,
    "dcf.lost_retention_frames": int,
    "gate.max_dist": float,
    "gate.retry_unknown": bool,
    "pipesim.calibration": str,
    "seed": int,
}

_CONFIG_DEFAULTS = {
    "tracker.kind": "iou",
    "tracker.iou_min": 0.3,
    "tracker.max_misses": 0,
    "tracker.min_confidence": 0.0,
    "tracker.min_hits": 1,
    "tracker.greedy": False,
    "sort.q_pos": 1e-4,
    "sort.q_vel": 1e-2,
    "sort.r_pos": 1.0,
    "sort.r_size": 10.0,
    "dcf.lambda": 1e-2,
    "dcf.sigma_factor": 0.1,
    "dcf.learning_rate": 0.125,
    "dcf.psr_track_min": 5.0,
    "dcf.psr_revive_min": 8.0,
    "dcf.search_scale": 2.5,
    "dcf.lost_retention_frames": 60,
    "gate.max_dist": 1.1,
    "gate.retry_unknown": False,
    "pipesim.calibration": "",
    "seed": 0,
}


def _parse_bool(value, where):
    if value.lower() in ("1", "true", "yes"):
        return True
    if value.lower() in ("0", "false", "no"):
        return False
    raise DataError(f"{where}: expected a boolean, got {value!r}")


def parse_config(path):
    config = dict(_CONFIG_DEFAULTS)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise DataError(f"{path}:{lineno}: unknown key {key!r}")
            kind = _CONFIG_KEYS[key]
            try:
                if kind is bool:
                    config[key] = _parse_bool(value, f"{path}:{lineno}")
                else:
                    config[key] = kind(value)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    if config["tracker.kind"] not in ("iou", "sort", "dcf"):
        raise DataError(f"{path}: tracker.kind must be iou, sort, or dcf")
    return config


# ---------------------------------------------------------------------------
# deterministic JSON reports


def _num(x):
    """Numbers with at most 9 significant digits, shortest form."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite numbers are forbidden in reports")
    s = format(x, ".9g")
    # normalize exponent form emitted by some platforms ("1e+05" etc.)
    if "e" in s:
        mantissa, exp = s.split("e")
        s = f"{mantissa}e{int(exp)}"
    return s


def _serialize(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, float, np.integer, np.floating)):
        out.append(_num(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError("report keys must be strings")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _serialize(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _serialize(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_bytes(report) -> bytes:
    out = []
    _serialize(report, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def write_report(report, path):
    data = report_bytes(report)
    with open(path, "wb") as fh:
        fh.write(data)


def read_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
