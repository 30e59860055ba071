"""Robustness and gating-benefit metrics over per-target ID timelines."""

from dataclasses import dataclass, field


@dataclass
class IdTimeline:
    """Per ground-truth target: ordered (frame, assigned track id) pairs."""

    targets: dict = field(default_factory=dict)  # target -> [(frame, id)]

    def add(self, target, frame, track_id):
        seq = self.targets.setdefault(target, [])
        if seq and frame <= seq[-1][0]:
            raise ValueError("frames must be strictly increasing per target")
        seq.append((frame, track_id))


@dataclass
class SwitchReport:
    per_target_switches: dict
    total_switches: int
    distinct_ids: int
    last_id: int
    revived_reuses: int
    recognition_calls: int


def count_id_switches(timeline: IdTimeline) -> SwitchReport:
    """Count ID-switch events per target.

    A switch event is an assignment change where the target either picks
    up a brand-new ID (one never issued before, anywhere) or regains an ID
    it previously held (a revival).  A change onto an ID already issued to
    a different target is the continuation of that mislabeled track, not a
    new switch event.  Each distinct ID implies one recognition call;
    revivals imply none.
    """
    if not timeline.targets:
        raise ValueError("timeline must contain at least one target")
    for target, seq in timeline.targets.items():
        if not seq:
            raise ValueError(f"target {target!r} has an empty timeline")

    # merge all targets into frame order to know when each ID first appears
    merged = []
    for target, seq in timeline.targets.items():
        prev = None
        for frame, tid in seq:
            merged.append((frame, target, tid, prev))
            prev = tid
    merged.sort(key=lambda item: item[0])

    seen_ids = set()
    held = {t: set() for t in timeline.targets}
    per_target = {t: 0 for t in timeline.targets}
    revived = 0
    for frame, target, tid, prev in merged:
        is_change = prev is not None and tid != prev
        if is_change:
            if tid not in seen_ids:
                per_target[target] += 1
            elif tid in held[target]:
                per_target[target] += 1
                revived += 1
        seen_ids.add(tid)
        held[target].add(tid)

    distinct = len(seen_ids)
    return SwitchReport(
        per_target_switches=per_target,
        total_switches=sum(per_target.values()),
        distinct_ids=distinct,
        last_id=max(seen_ids),
        revived_reuses=revived,
        recognition_calls=distinct,
    )


def gating_benefit(ungated_calls, gated_calls):
    """Fraction of recognition calls removed by gating: 1 - gated/ungated."""
    if ungated_calls <= 0:
        raise ValueError("ungated call count must be positive")
    if gated_calls < 0 or gated_calls > ungated_calls:
        raise ValueError("gated calls must lie in [0, ungated]")
    return 1.0 - gated_calls / ungated_calls
