"""Overlap-only tracker: frame-to-frame IOU association, no motion or
appearance model.  Strict by default (max_misses=0), so any detection
gap terminates the track and forces a fresh ID."""

from dataclasses import dataclass, field

from facepipe.assoc import associate
from facepipe.geometry import Track, TrackEvents, TrackState


@dataclass
class IouParams:
    iou_min: float = 0.3
    max_misses: int = 0
    min_confidence: float = 0.0
    greedy: bool = False


@dataclass
class IouTracker:
    params: IouParams = field(default_factory=IouParams)
    tracks: list = field(default_factory=list)
    next_id: int = 0
    last_frame: int = 0

    def _new_track(self, box):
        t = Track(id=self.next_id, box=box)
        self.next_id += 1
        self.tracks.append(t)
        return t

    def step(self, frame, detections) -> TrackEvents:
        if frame <= self.last_frame:
            raise ValueError("frames must be presented in increasing order")
        self.last_frame = frame
        events = TrackEvents(frame=frame)

        active = [t for t in self.tracks if t.state == TrackState.ACTIVE]
        assign = associate(
            [t.box for t in active],
            [d.box for d in detections],
            iou_min=self.params.iou_min,
            greedy=self.params.greedy,
        )
        for ti, di, _ in assign.matches:
            t = active[ti]
            t.box = detections[di].box
            t.misses = 0
            events.continued_ids.append(t.id)
            events.assignments[di] = t.id
        for ti in assign.unmatched_tracks:
            t = active[ti]
            t.misses += 1
            if t.misses > self.params.max_misses:
                t.state = TrackState.TERMINATED
                events.terminated_ids.append(t.id)
        for di in assign.unmatched_detections:
            d = detections[di]
            if d.confidence < self.params.min_confidence:
                continue
            t = self._new_track(d.box)
            events.new_ids.append(t.id)
            events.assignments[di] = t.id
        self.tracks = [t for t in self.tracks if t.state != TrackState.TERMINATED]
        return events
