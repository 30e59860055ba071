import pytest

from facepipe.metrics import IdTimeline, SwitchReport, count_id_switches, gating_benefit


def timeline_from_rows(rows):
    """rows[k] = IDs assigned to targets 1..n on frame k+1."""
    tl = IdTimeline()
    for frame, ids in enumerate(rows, start=1):
        for target, tid in enumerate(ids, start=1):
            tl.add(f"face{target}", frame, tid)
    return tl


# six faces over five frames, heavy occlusion churn: three faces keep their
# IDs, the rest pick up fresh ones as they reappear
CHURN_ROWS = [
    (4, 3, 2, 0, 1, 5),
    (4, 3, 2, 6, 7, 5),
    (4, 3, 2, 6, 7, 8),
    (4, 3, 2, 6, 8, 9),
    (4, 3, 2, 6, 10, 9),
]

# same setting with appearance revival: face 5 regains ID 1 after losing it
REVIVAL_ROWS = [
    (4, 3, 2, 0, 1, 5),
    (4, 7, 2, 6, 1, 5),
    (4, 7, 2, 6, 1, 8),
    (4, 7, 2, 6, 9, 8),
    (4, 7, 2, 6, 1, 8),
]


def test_churn_timeline_counts():
    got = count_id_switches(timeline_from_rows(CHURN_ROWS))
    assert got.total_switches == 5
    assert got.distinct_ids == 11
    assert got.last_id == 10
    assert got.recognition_calls == 11
    assert got.revived_reuses == 0
    assert got.per_target_switches == {
        "face1": 0,
        "face2": 0,
        "face3": 0,
        "face4": 1,
        "face5": 2,
        "face6": 2,
    }


def test_revival_timeline_counts():
    got = count_id_switches(timeline_from_rows(REVIVAL_ROWS))
    assert got.total_switches == 5
    assert got.distinct_ids == 10
    assert got.last_id == 9
    assert got.recognition_calls == 10
    assert got.revived_reuses == 1


def test_stable_single_target_has_no_switches():
    tl = IdTimeline()
    for frame in range(1, 6):
        tl.add("only", frame, 0)
    got = count_id_switches(tl)
    assert got == SwitchReport(
        per_target_switches={"only": 0},
        total_switches=0,
        distinct_ids=1,
        last_id=0,
        revived_reuses=0,
        recognition_calls=1,
    )


def test_change_onto_another_targets_id_is_not_a_switch():
    # target b inherits a's ID at frame 2: a mislabeling, not a new track
    tl = IdTimeline()
    tl.add("a", 1, 0)
    tl.add("b", 1, 1)
    tl.add("b", 2, 0)
    got = count_id_switches(tl)
    assert got.total_switches == 0
    assert got.distinct_ids == 2


def test_timeline_validation():
    tl = IdTimeline()
    tl.add("a", 3, 0)
    with pytest.raises(ValueError):
        tl.add("a", 3, 1)
    with pytest.raises(ValueError):
        count_id_switches(IdTimeline())
    bad = IdTimeline(targets={"a": []})
    with pytest.raises(ValueError):
        count_id_switches(bad)


def test_gating_benefit():
    assert gating_benefit(200, 50) == 0.75
    assert gating_benefit(10, 10) == 0.0
    with pytest.raises(ValueError):
        gating_benefit(0, 0)
    with pytest.raises(ValueError):
        gating_benefit(10, 11)
