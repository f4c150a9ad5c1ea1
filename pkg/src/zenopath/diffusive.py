"""Diffusive (Gaussian-readout) measurement of the driven qubit.

Conditioned on a readout record r(t), the Bloch coordinates follow

    x' = -alpha x z / 2 + r sqrt(alpha/tau) y
    y' = -alpha y z / 2 - r sqrt(alpha/tau) x - 2 Omega_s z
    z' =  alpha (1 - z^2) / 2 + 2 Omega_s y

with record convention r dt = sqrt(tau) dW, so every r-dependent term enters
through sqrt(alpha) dW and stored records never divide by dt.  Trajectory
sampling draws dW as symmetric +-sqrt(dt) steps by default (a Gaussian option
is provided; both converge to the same diffusion), applies the drift with an
RK4 substep plus the Ito noise kick, and renormalizes the state to keep it
pure.

Extremizing the stochastic action instead gives a deterministic 6-dimensional
flow in (x, y, z, p_x, p_y, p_z) with the readout pinned by the constraint
r = sqrt(alpha tau) (y p_x - x p_y); the associated stochastic Hamiltonian is
conserved along solutions, and for lam = alpha/(4 Omega_s) > 1 the
coordinates are drawn to the same critical point as the reduced phase-space
picture.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NoZenoRegime, StalledAtFixedPoint, StepTooLarge, WeakCouplingWarning
from .measurement import BlochState

_STALL_SPEED = 1e-10


@dataclass
class DiffusiveParams:
    """Continuous-measurement parameters; ``lam`` is derived from alpha."""

    omega_s: float
    alpha: float
    tau: float
    lam: float = field(init=False)

    def __post_init__(self):
        if self.omega_s <= 0.0:
            raise ValueError("omega_s must be positive")
        if self.alpha < 0.0:
            raise ValueError("alpha must be nonnegative")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        self.lam = self.alpha / (4.0 * self.omega_s)

    @classmethod
    def from_lambda(cls, omega_s: float, lam: float, tau: float):
        if lam < 0.0:
            raise ValueError("lam must be nonnegative")
        return cls(omega_s=omega_s, alpha=4.0 * omega_s * lam, tau=tau)


@dataclass(frozen=True)
class ExtendedState:
    """Bloch coordinates plus conjugate momenta; ``r`` is the derived readout
    (filled by the most-likely-path integrator, nan otherwise)."""

    x: float
    y: float
    z: float
    p_x: float
    p_y: float
    p_z: float
    r: float = math.nan

    def coords(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.p_x, self.p_y, self.p_z])


@dataclass(frozen=True)
class WienerStream:
    """Reproducible source of Wiener increments.

    ``increments(n)`` always restarts from ``seed``, so equal seeds give
    bit-identical streams.  Binary +-sqrt(dt) steps are the default; set
    ``gaussian=True`` for N(0, dt) increments.
    """

    seed: int
    dt: float
    gaussian: bool = False

    def increments(self, n: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        root_dt = math.sqrt(self.dt)
        if self.gaussian:
            return rng.normal(0.0, root_dt, n)
        return (2.0 * rng.integers(0, 2, n) - 1.0) * root_dt


def readout_constraint(s: ExtendedState, params: DiffusiveParams) -> float:
    """Extremal readout r = sqrt(alpha tau) (y p_x - x p_y)."""
    return math.sqrt(params.alpha * params.tau) * (s.y * s.p_x - s.x * s.p_y)


def sme_rhs(b: BlochState, r: float, params: DiffusiveParams):
    """Conditioned Bloch drift for a given readout value r."""
    alpha = params.alpha
    w = r * math.sqrt(alpha / params.tau)
    dx = -0.5 * alpha * b.x * b.z + w * b.y
    dy = -0.5 * alpha * b.y * b.z - w * b.x - 2.0 * params.omega_s * b.z
    dz = 0.5 * alpha * (1.0 - b.z * b.z) + 2.0 * params.omega_s * b.y
    return dx, dy, dz


@dataclass(frozen=True)
class DiffusiveTrajectory:
    """Sampled conditioned trajectory: times, Bloch rows (x, y, z) and the
    per-step readout record r_k = sqrt(tau) dW_k / dt."""

    t: np.ndarray
    bloch: np.ndarray
    readout: np.ndarray


def sample_trajectory(
    b0: BlochState,
    params: DiffusiveParams,
    dt: float,
    t_end: float,
    stream: WienerStream,
) -> DiffusiveTrajectory:
    """Sample one conditioned trajectory from b0 up to t_end.

    Raises StepTooLarge when dt > tau/10; warns when t_end exceeds tau (the
    weak-coupling window).  Deterministic given (stream.seed, dt).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if dt > params.tau / 10.0:
        raise StepTooLarge(f"dt = {dt} exceeds tau/10 = {params.tau / 10.0}")
    if stream.dt != dt:
        raise ValueError(f"stream.dt = {stream.dt} does not match dt = {dt}")
    if t_end > params.tau:
        warnings.warn(
            f"t_end = {t_end} exceeds tau = {params.tau}; weak coupling (tau >> T) "
            "is violated",
            WeakCouplingWarning,
            stacklevel=2,
        )
    n_steps = max(1, round(t_end / dt))
    dw = stream.increments(n_steps)
    path = _kernels.diffusive_walk(
        b0.x, b0.y, b0.z, params.omega_s, params.alpha, dt, dw
    )
    t = np.arange(n_steps + 1) * dt
    readout = math.sqrt(params.tau) * dw / dt
    return DiffusiveTrajectory(t=t, bloch=path, readout=readout)


def mlp_rhs(s: ExtendedState, params: DiffusiveParams):
    """Six extremal derivatives with the readout constraint substituted."""
    ds = np.empty(6)
    _kernels._mlp_rhs6(s.as_array(), params.omega_s, params.alpha, ds)
    return tuple(ds)


def stochastic_hamiltonian(s: ExtendedState, params: DiffusiveParams) -> float:
    """Conserved generator of the extremal flow, with r from the constraint.

    The log-probability term -alpha/2 (r^2/(alpha tau) + 1 - z) is evaluated
    via r^2/(alpha tau) = (y p_x - x p_y)^2, which is exact and finite at
    alpha = 0.
    """
    alpha = params.alpha
    w0 = s.y * s.p_x - s.x * s.p_y
    aw = alpha * w0
    dx = -0.5 * alpha * s.x * s.z + aw * s.y
    dy = -0.5 * alpha * s.y * s.z - aw * s.x - 2.0 * params.omega_s * s.z
    dz = 0.5 * alpha * (1.0 - s.z * s.z) + 2.0 * params.omega_s * s.y
    return (
        s.p_x * dx
        + s.p_y * dy
        + s.p_z * dz
        - 0.5 * alpha * (w0 * w0 + 1.0 - s.z)
    )


@dataclass(frozen=True)
class MLPTrajectory:
    """Most-likely-path solution: times, state rows (x, y, z, px, py, pz) and
    the readout along the path."""

    t: np.ndarray
    states: np.ndarray
    readout: np.ndarray

    def state(self, i: int) -> ExtendedState:
        row = self.states[i]
        return ExtendedState(*map(float, row), r=float(self.readout[i]))

    def hamiltonian(self, params: DiffusiveParams) -> np.ndarray:
        x, y, z, px, py, pz = self.states.T
        alpha = params.alpha
        w0 = y * px - x * py
        aw = alpha * w0
        dx = -0.5 * alpha * x * z + aw * y
        dy = -0.5 * alpha * y * z - aw * x - 2.0 * params.omega_s * z
        dz = 0.5 * alpha * (1.0 - z * z) + 2.0 * params.omega_s * y
        return px * dx + py * dy + pz * dz - 0.5 * alpha * (w0 * w0 + 1.0 - z)


def integrate_mlp(
    s0: ExtendedState,
    params: DiffusiveParams,
    dt: float,
    t_end: float,
) -> MLPTrajectory:
    """RK4 integration of the extremal equations from s0."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    n_steps = max(1, round(t_end / dt))
    states, min_speed = _kernels.mlp_rk4(
        s0.as_array(), params.omega_s, params.alpha, dt, n_steps
    )
    if min_speed < _STALL_SPEED:
        warnings.warn(
            f"flow speed fell to {min_speed:.3e}; path effectively stalled",
            StalledAtFixedPoint,
            stacklevel=2,
        )
    t = np.arange(n_steps + 1) * dt
    x, y, z, px, py, pz = states.T
    readout = math.sqrt(params.alpha * params.tau) * (y * px - x * py)
    return MLPTrajectory(t=t, states=states, readout=readout)


def mlp_fixed_point(params: DiffusiveParams) -> ExtendedState:
    """Stationary extremal state for lam > 1.

    Coordinates sit at (0, -1/lam, sqrt(1 - 1/lam^2)) -- the same point as the
    reduced-phase-space saddle (sin theta1, cos theta1) -- with momenta
    (0, 1/(2 lam z^2), 1/(2 z)) and vanishing readout.
    """
    lam = params.lam
    if lam <= 1.0:
        raise NoZenoRegime(f"the extremal fixed point requires lam > 1, got {lam}")
    z = math.sqrt(1.0 - 1.0 / lam**2)
    return ExtendedState(
        x=0.0,
        y=-1.0 / lam,
        z=z,
        p_x=0.0,
        p_y=1.0 / (2.0 * lam * z * z),
        p_z=1.0 / (2.0 * z),
        r=0.0,
    )


@dataclass(frozen=True)
class EnsembleStats:
    """Per-time-point mean and population variance of the Bloch coordinates."""

    t: np.ndarray
    mean: np.ndarray
    var: np.ndarray


def ensemble_stats(
    b0: BlochState,
    params: DiffusiveParams,
    dt: float,
    t_end: float,
    n: int,
    base_seed: int,
    gaussian: bool = False,
) -> EnsembleStats:
    """Mean/variance over n independent trajectories.

    Trajectory k uses seed ``base_seed + k``, so n = 1 reproduces
    :func:`sample_trajectory` with ``base_seed`` exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    # Welford update keeps the variance exactly zero for identical trajectories
    mean = None
    m2 = None
    t = None
    for k in range(n):
        stream = WienerStream(seed=base_seed + k, dt=dt, gaussian=gaussian)
        traj = sample_trajectory(b0, params, dt, t_end, stream)
        if mean is None:
            t = traj.t
            mean = np.zeros_like(traj.bloch)
            m2 = np.zeros_like(traj.bloch)
        delta = traj.bloch - mean
        mean += delta / (k + 1)
        m2 += delta * (traj.bloch - mean)
    return EnsembleStats(t=t, mean=mean, var=m2 / n)
