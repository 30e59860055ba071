"""Track/detection assignment: optimal (Hungarian) or greedy matching on
1 - IOU costs, with deterministic tie-breaking."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from facepipe.geometry import iou_matrix

_TIE_TOL = 1e-9


@dataclass
class Assignment:
    matches: list = field(default_factory=list)  # (row, col, cost)
    unmatched_tracks: list = field(default_factory=list)
    unmatched_detections: list = field(default_factory=list)

    @property
    def total_cost(self):
        return sum(c for _, _, c in self.matches)


def _optimal_value(m):
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0.0
    r, c = linear_sum_assignment(m)
    return float(m[r, c].sum())


def hungarian_min_cost(cost) -> Assignment:
    """Minimum-cost assignment of min(rows, cols) pairs.

    Among equal-cost optima, returns the lexicographically smallest
    row -> column mapping (unmatched sorts after every column index),
    found by fixing rows in order and re-solving the remainder.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost matrix must be 2-D")
    if cost.size and not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix entries must be finite")
    rows, cols = cost.shape
    if rows == 0 or cols == 0:
        return Assignment(
            matches=[],
            unmatched_tracks=list(range(rows)),
            unmatched_detections=list(range(cols)),
        )

    target = _optimal_value(cost)
    k = min(rows, cols)
    free_cols = list(range(cols))
    matches = []
    unmatched_rows = []
    partial = 0.0
    for r in range(rows):
        rows_after = rows - r - 1
        chosen = None
        for c in free_cols:
            remaining = [x for x in free_cols if x != c]
            # remaining sub-assignment must supply exactly the missing matches
            if k - len(matches) - 1 != min(rows_after, len(remaining)):
                continue
            sub = cost[np.ix_(range(r + 1, rows), remaining)]
            if partial + cost[r, c] + _optimal_value(sub) <= target + _TIE_TOL:
                chosen = c
                break
        if chosen is not None:
            partial += cost[r, chosen]
            matches.append((r, chosen, float(cost[r, chosen])))
            free_cols.remove(chosen)
        else:
            # only legal when enough rows remain to absorb all free columns
            if rows_after < k - len(matches):
                raise AssertionError("assignment refinement lost feasibility")
            unmatched_rows.append(r)
    return Assignment(
        matches=matches,
        unmatched_tracks=unmatched_rows,
        unmatched_detections=free_cols,
    )


def greedy_min_cost(cost) -> Assignment:
    """Greedy matching: repeatedly take the cheapest remaining pair.

    Ties break on (cost, row, col).  Kept as a fidelity mode; the optimal
    solver is the default everywhere.
    """
    cost = np.asarray(cost, dtype=np.float64)
    rows, cols = cost.shape
    pairs = sorted(
        ((float(cost[r, c]), r, c) for r in range(rows) for c in range(cols))
    )
    used_r, used_c = set(), set()
    matches = []
    for c_val, r, c in pairs:
        if r in used_r or c in used_c:
            continue
        matches.append((r, c, c_val))
        used_r.add(r)
        used_c.add(c)
        if len(matches) == min(rows, cols):
            break
    return Assignment(
        matches=matches,
        unmatched_tracks=[r for r in range(rows) if r not in used_r],
        unmatched_detections=[c for c in range(cols) if c not in used_c],
    )


def associate(track_boxes, det_boxes, iou_min=0.3, greedy=False) -> Assignment:
    """Assign detections to tracks by maximizing total IOU, then demote any
    match whose IOU falls below iou_min to unmatched on both sides."""
    if not 0.0 <= iou_min <= 1.0:
        raise ValueError("iou_min must lie in [0, 1]")
    if not track_boxes or not det_boxes:
        return Assignment(
            matches=[],
            unmatched_tracks=list(range(len(track_boxes))),
            unmatched_detections=list(range(len(det_boxes))),
        )
    overlaps = iou_matrix(track_boxes, det_boxes)
    solver = greedy_min_cost if greedy else hungarian_min_cost
    raw = solver(1.0 - overlaps)
    out = Assignment(
        unmatched_tracks=list(raw.unmatched_tracks),
        unmatched_detections=list(raw.unmatched_detections),
    )
    for r, c, cost_val in raw.matches:
        if overlaps[r, c] < iou_min:
            out.unmatched_tracks.append(r)
            out.unmatched_detections.append(c)
        else:
            out.matches.append((r, c, cost_val))
    out.unmatched_tracks.sort()
    out.unmatched_detections.sort()
    return out
