import numpy as np
import pytest

from facepipe.geometry import BoundingBox, Detection
from facepipe.tracker_iou import IouParams, IouTracker
from facepipe.tracker_sort import SortParams, SortTracker


def det(frame, x, y=20.0, size=10.0, conf=1.0):
    return Detection(
        frame=frame, box=BoundingBox(x=x, y=y, w=size, h=size), confidence=conf
    )


def test_spawn_continue_terminate():
    t = SortTracker()
    ev = t.step(1, [det(1, 0)])
    assert ev.new_ids == [0]
    ev = t.step(2, [det(2, 1)])
    assert ev.continued_ids == [0]
    t.step(3, [])
    ev = t.step(4, [])  # default max_misses=1, second miss terminates
    assert ev.terminated_ids == [0]
    assert t.tracks == []


def test_prediction_bridges_a_detection_gap():
    """A constant-velocity target missing one detection keeps its ID under
    the motion model, while the strict overlap tracker re-labels it."""
    sort = SortTracker(params=SortParams(max_misses=2))
    strict = IouTracker(params=IouParams(max_misses=0))
    sort_ids, strict_ids = set(), set()
    for frame in range(1, 11):
        dets = [] if frame == 6 else [det(frame, 4.0 * frame)]
        for d in sort.step(frame, dets).assignments.values():
            sort_ids.add(d)
        for d in strict.step(frame, dets).assignments.values():
            strict_ids.add(d)
    assert sort_ids == {0}
    assert strict_ids == {0, 1}


def test_predicted_box_tracks_velocity():
    t = SortTracker(params=SortParams(max_misses=3))
    for frame in range(1, 8):
        t.step(frame, [det(frame, 4.0 * frame)])
    t.step(8, [])  # coast one frame on the model alone
    track, _ = t.tracks[0]
    # after seven updates the estimated velocity carries the box forward
    assert track.box.x == pytest.approx(32.0, abs=1.5)


def test_measurement_snaps_estimate_to_detection():
    t = SortTracker()
    t.step(1, [det(1, 0)])
    t.step(2, [det(2, 3)])
    track, state = t.tracks[0]
    assert np.isfinite(state.P).all()
    assert track.box.x == pytest.approx(3.0, abs=1.0)


def test_swapped_presentation_order_keeps_ids():
    t = SortTracker()
    t.step(1, [det(1, 0), det(1, 60)])
    ev = t.step(2, [det(2, 61), det(2, 1)])
    assert ev.assignments == {0: 1, 1: 0}


def test_low_confidence_ignored_and_frames_increase():
    t = SortTracker(params=SortParams(min_confidence=0.5))
    ev = t.step(1, [det(1, 0, conf=0.1)])
    assert ev.new_ids == []
    with pytest.raises(ValueError):
        t.step(1, [])
