"""facepipe: multi-face trackers (IOU, SORT, DCF), track-gated face
recognition, and an analytic heterogeneous-engine pipeline simulator."""

__version__ = "0.1.0"
