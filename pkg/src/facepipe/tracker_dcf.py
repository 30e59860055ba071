"""Appearance tracker built on per-track correlation filters.

Tracks follow response-map peaks frame to frame (detections optional once
a track exists), and recently lost tracks are revived by appearance so a
reappearing face regains its old ID and cached identity.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from facepipe import dcf, kernels
from facepipe.assoc import associate
from facepipe.geometry import BoundingBox, Track, TrackEvents, TrackState


@dataclass
class DcfParams:
    lam: float = 1e-2
    sigma_factor: float = 0.1  # label sigma = patch_size * sigma_factor
    eta: float = 0.125
    psr_track_min: float = 5.0
    psr_revive_min: float = 8.0
    search_scale: float = 2.5
    lost_retention_frames: int = 60
    iou_min: float = 0.3
    min_confidence: float = 0.0


def next_pow2(n):
    p = 1
    while p < n:
        p *= 2
    return p


@dataclass
class _FilterTrack:
    track: Track
    filt: dcf.CorrelationFilter
    patch_size: int
    window: float


@dataclass
class _LostEntry:
    track: Track
    filt: dcf.CorrelationFilter
    patch_size: int
    expires: int


def _clip_box(box, width, height):
    x0 = min(max(box.x, 0.0), width - 1.0)
    y0 = min(max(box.y, 0.0), height - 1.0)
    x1 = min(max(box.x2, x0 + 1.0), float(width))
    y1 = min(max(box.y2, y0 + 1.0), float(height))
    clipped = BoundingBox(x=x0, y=y0, w=x1 - x0, h=y1 - y0)
    if clipped != box:
        warnings.warn("detection box clipped to frame bounds", stacklevel=3)
    return clipped


def _extract(image, box, search_scale, patch_size=None):
    """Search-window crop around the box center, resampled to a
    power-of-two patch and preprocessed."""
    side = max(box.w, box.h)
    window = search_scale * side
    size = patch_size if patch_size is not None else next_pow2(int(np.ceil(2 * side)))
    cx = box.x + box.w / 2.0
    cy = box.y + box.h / 2.0
    raw = kernels.bilinear_crop(image, cx, cy, window, size)
    return dcf.preprocess(dcf.Patch(pixels=raw)), window, size


@dataclass
class DcfTracker:
    params: DcfParams = field(default_factory=DcfParams)
    tracks: list = field(default_factory=list)  # _FilterTrack
    lost_pool: list = field(default_factory=list)  # _LostEntry
    next_id: int = 0
    last_frame: int = 0

    def _label(self, size):
        return dcf.GaussianLabel(
            height=size, width=size, sigma=size * self.params.sigma_factor
        )

    def _train(self, image, box, patch_size=None):
        patch, window, size = _extract(
            image, box, self.params.search_scale, patch_size
        )
        filt = dcf.train_filter(patch, self._label(size), self.params.lam)
        return filt, window, size

    def _spawn(self, image, box, events, det_index):
        filt, window, size = self._train(image, box)
        t = Track(id=self.next_id, box=box)
        self.next_id += 1
        self.tracks.append(
            _FilterTrack(track=t, filt=filt, patch_size=size, window=window)
        )
        events.new_ids.append(t.id)
        events.assignments[det_index] = t.id

    def step(self, frame, image, detections) -> TrackEvents:
        if frame <= self.last_frame:
            raise ValueError("frames must be presented in increasing order")
        self.last_frame = frame
        image = np.asarray(image, dtype=np.float64)
        height, width = image.shape
        events = TrackEvents(frame=frame)
        detections = [
            d for d in detections if d.confidence >= self.params.min_confidence
        ]
        det_boxes = [_clip_box(d.box, width, height) for d in detections]

        # 1) follow response peaks; demote weak responses to the lost pool
        survivors = []
        for ft in self.tracks:
            patch, window, _ = _extract(
                image, ft.track.box, self.params.search_scale, ft.patch_size
            )
            resp = dcf.respond(ft.filt, patch)
            size = ft.patch_size
            if np.isfinite(resp.psr) and resp.psr >= self.params.psr_track_min:
                center = size // 2
                dr = (resp.peak[0] - center + size // 2) % size - size // 2
                dc = (resp.peak[1] - center + size // 2) % size - size // 2
                scale = window / size
                b = ft.track.box
                moved = BoundingBox(
                    x=b.x + dc * scale, y=b.y + dr * scale, w=b.w, h=b.h
                )
                ft.track.box = moved
                fresh, _, _ = self._train(image, moved, ft.patch_size)
                ft.filt = dcf.update_filter(ft.filt, fresh, self.params.eta)
                survivors.append(ft)
            else:
                ft.track.state = TrackState.LOST
                self.lost_pool.append(
                    _LostEntry(
                        track=ft.track,
                        filt=ft.filt,
                        patch_size=ft.patch_size,
                        expires=frame + self.params.lost_retention_frames,
                    )
                )
                events.terminated_ids.append(ft.track.id)
        self.tracks = survivors

        # 2) snap matched detections onto tracks; try revival for the rest
        assign = associate(
            [ft.track.box for ft in self.tracks],
            det_boxes,
            iou_min=self.params.iou_min,
        )
        for ti, di, _ in assign.matches:
            ft = self.tracks[ti]
            ft.track.box = det_boxes[di]
            events.continued_ids.append(ft.track.id)
            events.assignments[di] = ft.track.id
        for di in assign.unmatched_detections:
            box = det_boxes[di]
            revived = None
            best_psr = -np.inf
            for entry in self.lost_pool:
                patch, _, _ = _extract(
                    image, box, self.params.search_scale, entry.patch_size
                )
                resp = dcf.respond(entry.filt, patch)
                if np.isfinite(resp.psr) and resp.psr > best_psr:
                    best_psr = resp.psr
                    revived = entry
            if revived is not None and best_psr >= self.params.psr_revive_min:
                self.lost_pool.remove(revived)
                t = revived.track
                t.state = TrackState.ACTIVE
                t.misses = 0
                t.box = box
                filt, window, size = self._train(image, box, revived.patch_size)
                self.tracks.append(
                    _FilterTrack(
                        track=t, filt=filt, patch_size=size, window=window
                    )
                )
                events.revived_ids.append(t.id)
                events.assignments[di] = t.id
            else:
                self._spawn(image, box, events, di)

        # 3) expire stale lost entries
        self.lost_pool = [e for e in self.lost_pool if e.expires >= frame]
        return events
