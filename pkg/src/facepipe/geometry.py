"""Axis-aligned box algebra, detections, and track lifecycle."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from facepipe import kernels


class TrackState(Enum):
    ACTIVE = "active"
    LOST = "lost"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class BoundingBox:
    """Corner+size box in pixel units: (x, y) is the top-left corner."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for v in (self.x, self.y, self.w, self.h):
            if not math.isfinite(v):
                raise ValueError("box values must be finite")
        if self.w <= 0 or self.h <= 0:
            raise ValueError("box width and height must be positive")

    @property
    def x2(self):
        return self.x + self.w

    @property
    def y2(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class CenterForm:
    """Center/area/aspect parameterization: u, v center; s = w*h; r = w/h."""

    u: float
    v: float
    s: float
    r: float

    def __post_init__(self):
        if self.s <= 0 or self.r <= 0:
            raise ValueError("area and aspect ratio must be positive")


@dataclass(frozen=True)
class Detection:
    frame: int
    box: BoundingBox
    confidence: float = 1.0

    def __post_init__(self):
        if self.frame < 1:
            raise ValueError("frame index must be >= 1")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


@dataclass
class Track:
    id: int
    box: BoundingBox
    state: TrackState = TrackState.ACTIVE
    misses: int = 0
    identity: Optional[str] = None


@dataclass
class TrackEvents:
    """Per-step lifecycle report emitted by every tracker.

    assignments maps detection index -> track id for this frame.
    revived_ids lists ids restored from the lost pool (DCF only).
    """

    frame: int
    new_ids: list = field(default_factory=list)
    continued_ids: list = field(default_factory=list)
    terminated_ids: list = field(default_factory=list)
    revived_ids: list = field(default_factory=list)
    assignments: dict = field(default_factory=dict)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection area over union area; 0 when disjoint, 1 when equal.

    Overlap length per axis is max(0, min(right) - max(left)).
    """
    iw = max(0.0, min(a.x2, b.x2) - max(a.x, b.x))
    ih = max(0.0, min(a.y2, b.y2) - max(a.y, b.y))
    inter = iw * ih
    # rounding in x2/y2 can push the ratio a hair past 1 for equal boxes
    return min(1.0, inter / (a.area + b.area - inter))


def iou_matrix(tracks_boxes, det_boxes):
    """IOU between every pair of boxes, as an (n_tracks, n_dets) array."""
    a = [bb.as_tuple() for bb in tracks_boxes]
    b = [bb.as_tuple() for bb in det_boxes]
    return kernels.pairwise_iou(a, b)


def box_to_center(box: BoundingBox) -> CenterForm:
    return CenterForm(
        u=box.x + box.w / 2.0,
        v=box.y + box.h / 2.0,
        s=box.w * box.h,
        r=box.w / box.h,
    )


def center_to_box(c: CenterForm) -> BoundingBox:
    w = math.sqrt(c.s * c.r)
    h = c.s / w
    return BoundingBox(x=c.u - w / 2.0, y=c.v - h / 2.0, w=w, h=h)
