"""Constant-velocity Kalman filtering over center/area/aspect box states.

State vector: [u, v, s, r, du, dv, ds] — center position, area, aspect
ratio, and velocities of the first three (aspect assumed constant).
"""

from dataclasses import dataclass

import numpy as np

STATE_DIM = 7
MEAS_DIM = 4

_SYM_TOL = 1e-9
_COND_LIMIT = 1e12


class DegenerateUpdateError(ValueError):
    """Innovation covariance is numerically singular."""


@dataclass
class KalmanModel:
    F: np.ndarray  # state transition
    H: np.ndarray  # measurement
    Q: np.ndarray  # process noise
    R: np.ndarray  # measurement noise
    B: np.ndarray  # control input (zero columns by default)
    u: np.ndarray  # control vector


@dataclass
class KalmanState:
    x: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        self.P = np.asarray(self.P, dtype=np.float64)
        if np.abs(self.P - self.P.T).max() > _SYM_TOL:
            raise ValueError("covariance must be symmetric")
        if np.any(np.diag(self.P) < 0):
            raise ValueError("covariance diagonal must be non-negative")


def default_model(q_pos=1e-4, q_vel=1e-2, r_pos=1.0, r_size=10.0):
    """Unit-timestep constant-velocity model with configurable diagonal
    noise levels.  All defaults are conventions, not fitted values."""
    F = np.eye(STATE_DIM)
    F[0, 4] = F[1, 5] = F[2, 6] = 1.0
    H = np.zeros((MEAS_DIM, STATE_DIM))
    H[:4, :4] = np.eye(4)
    Q = np.diag([q_pos] * 4 + [q_vel] * 3)
    R = np.diag([r_pos, r_pos, r_size, r_size])
    B = np.zeros((STATE_DIM, 1))
    u = np.zeros(1)
    return KalmanModel(F=F, H=H, Q=Q, R=R, B=B, u=u)


def initial_state(measurement, p_pos=10.0, p_vel=1e4):
    """New-track state: observed position, zero velocities, large velocity
    uncertainty."""
    x = np.zeros(STATE_DIM)
    x[:4] = measurement
    P = np.diag([p_pos] * 4 + [p_vel] * 3)
    return KalmanState(x=x, P=P)


def kf_predict(s: KalmanState, m: KalmanModel) -> KalmanState:
    x = m.F @ s.x + m.B @ m.u
    P = m.F @ s.P @ m.F.T + m.Q
    P = 0.5 * (P + P.T)
    return KalmanState(x=x, P=P)


def kf_update(s: KalmanState, z, m: KalmanModel) -> KalmanState:
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    S = m.H @ s.P @ m.H.T + m.R
    if np.linalg.cond(S) > _COND_LIMIT:
        raise DegenerateUpdateError("innovation covariance is singular")
    K = np.linalg.solve(S.T, (s.P @ m.H.T).T).T  # K = P Hᵀ S⁻¹
    x = s.x + K @ (z - m.H @ s.x)
    P = (np.eye(s.P.shape[0]) - K @ m.H) @ s.P
    P = 0.5 * (P + P.T)
    return KalmanState(x=x, P=P)
