"""Seeded synthetic scenarios: textured squares on a noisy background,
with exact detections, an optional detection dropout window, per-identity
gallery embeddings, and ground-truth target labels.

Everything derives from PCG32 streams keyed on (seed, role, index), so
regenerating a scenario is byte-identical on any platform.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from facepipe import io_formats
from facepipe.gate import EMBEDDING_DIM, Gallery
from facepipe.geometry import BoundingBox, Detection
from facepipe.prng import Pcg32

# stream selectors, arbitrary but fixed
_TEXTURE_SEQ = 1
_BACKGROUND_SEQ = 2
_GALLERY_SEQ = 3
_NOISE_SEQ = 4


@dataclass
class TargetSpec:
    x0: float
    y0: float
    vx: float
    vy: float
    size: int
    identity: str


@dataclass
class ScenarioSpec:
    width: int
    height: int
    frames: int
    seed: int
    targets: list = field(default_factory=list)
    dropout_start: int = 0  # first frame without detections; 0 = none
    dropout_len: int = 0
    background_level: float = 0.08  # noise amplitude, fraction of full scale
    embedding_noise: float = 0.02

    def position(self, target_index, frame):
        t = self.targets[target_index]
        return (t.x0 + t.vx * (frame - 1), t.y0 + t.vy * (frame - 1))

    def validate(self):
        if self.frames < 1:
            raise ValueError("need at least one frame")
        if not self.targets:
            raise ValueError("need at least one target")
        for i, t in enumerate(self.targets):
            for frame in (1, self.frames):
                x, y = self.position(i, frame)
                if x < 0 or y < 0 or x + t.size > self.width or y + t.size > self.height:
                    raise ValueError(
                        f"target {i} leaves the frame at frame {frame}"
                    )

    def in_dropout(self, frame):
        return (
            self.dropout_len > 0
            and self.dropout_start <= frame < self.dropout_start + self.dropout_len
        )


def _uniform_array(rng, shape, lo, hi):
    flat = np.array(rng.uniforms(int(np.prod(shape))))
    return (lo + (hi - lo) * flat).reshape(shape)


def _texture(spec, target_index):
    rng = Pcg32(spec.seed, seq=_TEXTURE_SEQ * 1000 + target_index)
    size = spec.targets[target_index].size
    return _uniform_array(rng, (size, size), 0.35, 1.0)


def _background(spec, frame):
    rng = Pcg32(spec.seed + frame, seq=_BACKGROUND_SEQ)
    return _uniform_array(
        rng, (spec.height, spec.width), 0.0, spec.background_level
    )


def gallery_embedding(spec, target_index):
    rng = Pcg32(spec.seed, seq=_GALLERY_SEQ * 1000 + target_index)
    return _uniform_array(rng, (EMBEDDING_DIM,), -1.0, 1.0)


def render_frame(spec: ScenarioSpec, frame):
    """Background noise plus every target's texture; during the dropout
    window the targets are occluded, not just undetected."""
    image = _background(spec, frame)
    if spec.in_dropout(frame):
        return image
    for i, t in enumerate(spec.targets):
        x, y = spec.position(i, frame)
        xi, yi = int(round(x)), int(round(y))
        image[yi : yi + t.size, xi : xi + t.size] = _texture(spec, i)
    return image


def detections_for_frame(spec: ScenarioSpec, frame):
    """Exact detections (and their target labels) unless the frame falls in
    the dropout window."""
    if spec.in_dropout(frame):
        return [], []
    dets, labels = [], []
    for i, t in enumerate(spec.targets):
        x, y = spec.position(i, frame)
        dets.append(
            Detection(
                frame=frame,
                box=BoundingBox(x=round(x), y=round(y), w=t.size, h=t.size),
                confidence=1.0,
            )
        )
        labels.append(i)
    return dets, labels


def generate(spec: ScenarioSpec, out_dir):
    """Write frames/, detections.csv, embeddings.csv, gallery.csv, and
    groundtruth.csv under out_dir."""
    spec.validate()
    frames_dir = os.path.join(out_dir, "frames")
    os.makedirs(frames_dir, exist_ok=True)

    detections = {}
    ground_truth = {}
    embeddings = {}
    noise_rng = Pcg32(spec.seed, seq=_NOISE_SEQ)
    refs = [gallery_embedding(spec, i) for i in range(len(spec.targets))]
    for frame in range(1, spec.frames + 1):
        io_formats.write_pgm(
            render_frame(spec, frame), io_formats.frame_path(frames_dir, frame)
        )
        dets, labels = detections_for_frame(spec, frame)
        if dets:
            detections[frame] = dets
        for det_index, target_index in enumerate(labels):
            ground_truth[(frame, det_index)] = spec.targets[target_index].identity
            noise = _uniform_array(
                noise_rng, (EMBEDDING_DIM,), -spec.embedding_noise, spec.embedding_noise
            )
            embeddings[(frame, det_index)] = refs[target_index] + noise

    gallery = Gallery()
    for i, t in enumerate(spec.targets):
        gallery.add(t.identity, refs[i])

    io_formats.write_detections(detections, os.path.join(out_dir, "detections.csv"))
    io_formats.write_embeddings(embeddings, os.path.join(out_dir, "embeddings.csv"))
    io_formats.write_gallery(gallery, os.path.join(out_dir, "gallery.csv"))
    io_formats.write_ground_truth(ground_truth, os.path.join(out_dir, "groundtruth.csv"))
    return out_dir


# ---------------------------------------------------------------------------
# scenario spec file: "key = value", targets as target.<i>.<field>


def parse_scenario(path) -> ScenarioSpec:
    scalars = {}
    targets = {}
    scalar_keys = {
        "width": int,
        "height": int,
        "frames": int,
        "seed": int,
        "dropout_start": int,
        "dropout_len": int,
        "background_level": float,
        "embedding_noise": float,
    }
    target_keys = {
        "x0": float,
        "y0": float,
        "vx": float,
        "vy": float,
        "size": int,
        "identity": str,
    }
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise io_formats.DataError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in scalar_keys:
                scalars[key] = scalar_keys[key](value)
                continue
            parts = key.split(".")
            if len(parts) == 3 and parts[0] == "target" and parts[2] in target_keys:
                try:
                    index = int(parts[1])
                except ValueError as exc:
                    raise io_formats.DataError(f"{path}:{lineno}: {exc}") from exc
                targets.setdefault(index, {})[parts[2]] = target_keys[parts[2]](value)
                continue
            raise io_formats.DataError(f"{path}:{lineno}: unknown key {key!r}")
    for required in ("width", "height", "frames", "seed"):
        if required not in scalars:
            raise io_formats.DataError(f"{path}: missing key {required!r}")
    spec = ScenarioSpec(
        width=scalars["width"],
        height=scalars["height"],
        frames=scalars["frames"],
        seed=scalars["seed"],
        dropout_start=scalars.get("dropout_start", 0),
        dropout_len=scalars.get("dropout_len", 0),
        background_level=scalars.get("background_level", 0.08),
        embedding_noise=scalars.get("embedding_noise", 0.02),
    )
    for index in sorted(targets):
        fields = targets[index]
        missing = set(target_keys) - set(fields)
        if missing:
            raise io_formats.DataError(
                f"{path}: target {index} missing {sorted(missing)}"
            )
        spec.targets.append(TargetSpec(**fields))
    return spec
