"""Track-gated recognition: identity lookups run once per track ID, the
result is cached, and revived IDs reuse their cached identity.  One alarm
per track, ever."""

from dataclasses import dataclass, field

import numpy as np

EMBEDDING_DIM = 128
UNKNOWN = "unknown"


@dataclass
class Gallery:
    entries: list = field(default_factory=list)  # (identity, embedding)

    def add(self, identity, embedding):
        embedding = np.asarray(embedding, dtype=np.float64).reshape(-1)
        if embedding.shape[0] != EMBEDDING_DIM:
            raise ValueError(f"embeddings must have {EMBEDDING_DIM} components")
        if not identity:
            raise ValueError("identity labels must be non-empty")
        if not np.all(np.isfinite(embedding)):
            raise ValueError("embedding values must be finite")
        self.entries.append((identity, embedding))


def match_embedding(embedding, gallery: Gallery, max_dist=1.1):
    """Identity of the nearest gallery entry by L2 distance, or UNKNOWN if
    nothing lies within max_dist.  Ties break on gallery order."""
    if max_dist <= 0:
        raise ValueError("max_dist must be positive")
    embedding = np.asarray(embedding, dtype=np.float64).reshape(-1)
    if embedding.shape[0] != EMBEDDING_DIM:
        raise ValueError(f"embeddings must have {EMBEDDING_DIM} components")
    best = None
    best_dist = np.inf
    for identity, ref in gallery.entries:
        d = float(np.linalg.norm(embedding - ref))
        if d < best_dist:
            best = identity
            best_dist = d
    if best is None or best_dist > max_dist:
        return UNKNOWN
    return best


@dataclass
class GateState:
    identity_cache: dict = field(default_factory=dict)  # track id -> identity
    recognition_log: list = field(default_factory=list)  # (frame, track id)
    alarm_log: list = field(default_factory=list)  # (track id, identity)
    max_dist: float = 1.1
    retry_unknown: bool = False


def gate_step(state: GateState, events, embeddings, gallery: Gallery):
    """Run recognition for track IDs without a cached identity.

    embeddings: track id -> embedding for this frame's detections.  An ID
    with no embedding yet is deferred (it stays uncached and is retried on
    a later frame).  Returns the list of (track id, identity) recognized
    this frame.
    """
    recognized = []
    for tid in list(events.new_ids) + list(events.continued_ids) + list(
        events.revived_ids
    ):
        if tid in state.identity_cache:
            if not (
                state.retry_unknown and state.identity_cache[tid] == UNKNOWN
            ):
                continue
        if tid not in embeddings:
            continue
        identity = match_embedding(embeddings[tid], gallery, state.max_dist)
        state.recognition_log.append((events.frame, tid))
        state.identity_cache[tid] = identity
        recognized.append((tid, identity))
    return recognized


def emit_alarm(state: GateState, track_id):
    """First call for a track returns an alarm record; later calls return
    None.  Revived tracks keep their alarm history."""
    if track_id not in state.identity_cache:
        raise KeyError(f"track {track_id} has no cached identity")
    if any(tid == track_id for tid, _ in state.alarm_log):
        return None
    record = (track_id, state.identity_cache[track_id])
    state.alarm_log.append(record)
    return record
