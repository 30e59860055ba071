"""SORT: Kalman-predicted boxes associated to detections by the Hungarian
algorithm.  New tracks start with zero velocity and large velocity
uncertainty."""

from dataclasses import dataclass, field

import numpy as np

from facepipe import kalman
from facepipe.assoc import associate
from facepipe.geometry import (
    BoundingBox,
    Track,
    TrackEvents,
    TrackState,
    box_to_center,
)


@dataclass
class SortParams:
    iou_min: float = 0.3
    max_misses: int = 1
    min_confidence: float = 0.0
    min_hits: int = 1
    greedy: bool = False


def _measurement(box):
    c = box_to_center(box)
    return np.array([c.u, c.v, c.s, c.r])


def _state_box(x, fallback):
    # predicted area/aspect can go non-positive transiently; keep the last
    # valid box in that case
    u, v, s, r = x[:4]
    if s <= 0 or r <= 0:
        return fallback
    w = np.sqrt(s * r)
    h = s / w
    return BoundingBox(x=u - w / 2.0, y=v - h / 2.0, w=w, h=h)


@dataclass
class SortTracker:
    params: SortParams = field(default_factory=SortParams)
    model: kalman.KalmanModel = field(default_factory=kalman.default_model)
    tracks: list = field(default_factory=list)  # (Track, KalmanState) pairs
    next_id: int = 0
    last_frame: int = 0

    def step(self, frame, detections) -> TrackEvents:
        if frame <= self.last_frame:
            raise ValueError("frames must be presented in increasing order")
        self.last_frame = frame
        events = TrackEvents(frame=frame)

        # predict every active track forward one frame
        predicted = []
        for t, ks in self.tracks:
            ks_pred = kalman.kf_predict(ks, self.model)
            t.box = _state_box(ks_pred.x, t.box)
            predicted.append((t, ks_pred))
        self.tracks = predicted

        assign = associate(
            [t.box for t, _ in self.tracks],
            [d.box for d in detections],
            iou_min=self.params.iou_min,
            greedy=self.params.greedy,
        )
        for ti, di, _ in assign.matches:
            t, ks = self.tracks[ti]
            ks = kalman.kf_update(ks, _measurement(detections[di].box), self.model)
            t.box = _state_box(ks.x, detections[di].box)
            t.misses = 0
            self.tracks[ti] = (t, ks)
            events.continued_ids.append(t.id)
            events.assignments[di] = t.id
        for ti in assign.unmatched_tracks:
            t, _ = self.tracks[ti]
            t.misses += 1
            if t.misses > self.params.max_misses:
                t.state = TrackState.TERMINATED
                events.terminated_ids.append(t.id)
        for di in assign.unmatched_detections:
            d = detections[di]
            if d.confidence < self.params.min_confidence:
                continue
            t = Track(id=self.next_id, box=d.box)
            self.next_id += 1
            self.tracks.append((t, kalman.initial_state(_measurement(d.box))))
            events.new_ids.append(t.id)
            events.assignments[di] = t.id
        self.tracks = [
            (t, ks) for t, ks in self.tracks if t.state != TrackState.TERMINATED
        ]
        return events
