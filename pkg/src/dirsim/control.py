"""Surface phase control and effective scalar channels.

The controlling operator points every surface at its scheduled user: the
optimal element phases are the conjugate of that user's cascaded steering
vector, rotated so the reflected path adds in phase with the direct link.
From anyone else's viewpoint those phases are arbitrary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import PathSet, wrap_angle

# Two grid angles closer than this (wrapped) are the same beam.  Far below
# the finest grid spacing we ever use, far above accumulated round-off.
GRID_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class PhaseConfig:
    """Unit-modulus element phases, one length-M vector per surface."""

    per_irs: np.ndarray   # (S, M) complex

    def __post_init__(self):
        if self.per_irs.ndim != 2:
            raise ValueError("per_irs must be a (num_irs, m) array")
        if self.per_irs.size and np.max(np.abs(np.abs(self.per_irs) - 1.0)) > 1e-12:
            raise ValueError("phase entries must be unit modulus")

    @property
    def num_irs(self) -> int:
        return self.per_irs.shape[0]

    @property
    def m(self) -> int:
        return self.per_irs.shape[1]


@dataclass(frozen=True)
class EffectiveChannel:
    """Scalar end-to-end channel and its power gain."""

    value: complex

    @property
    def gain(self) -> float:
        return abs(self.value) ** 2


def optimal_phase_factors(direct: complex, gains: np.ndarray) -> np.ndarray:
    """Unit co-phasing factors ``direct * conj(gain) / |direct * gain|``.

    A vanishing direct coefficient or path gain makes any phase optimal in
    the limit; the factor defaults to 1 there.
    """
    gains = np.asarray(gains, dtype=complex)
    prod = direct * np.conj(gains)
    mag = np.abs(prod)
    out = np.ones_like(gains)
    nz = mag > 0
    out[nz] = prod[nz] / mag[nz]
    return out


def optimal_phase_config(direct: complex, inband_paths, m: int) -> PhaseConfig:
    """Jointly optimal phases for one served user with dominant-path cascades.

    ``inband_paths`` is a sequence of ``(gain, angle)`` pairs, one per
    surface.  Surface s gets ``c_s * [e^{-j pi m' w_s}]`` where ``c_s``
    co-phases against the direct link, so the composed channel magnitude is
    ``|direct| + m * sum_s |gain_s|``.
    """
    gains = np.array([g for g, _ in inband_paths], dtype=complex)
    angles = np.array([w for _, w in inband_paths], dtype=float)
    factors = optimal_phase_factors(direct, gains)
    steering = np.exp(-1j * np.pi * np.outer(angles, np.arange(m)))
    return PhaseConfig(per_irs=factors[:, None] * steering)


def random_phase_config(rng: np.random.Generator, s: int, m: int) -> PhaseConfig:
    """Independent uniform phases on [0, 2*pi) for every element."""
    return PhaseConfig(per_irs=np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (s, m))))


def _reflect_inner(angles: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Per-surface inner products ``adot_M^H(angle) @ theta_s``.

    ``angles`` has one row per surface (any number of path columns);
    ``phases`` is the (S, M) element-phase matrix.  The normalized steering
    vector ``adot_M`` is the array response divided by sqrt(M).
    """
    m = phases.shape[1]
    steer = np.exp(1j * np.pi * angles[..., None] * np.arange(m)) / m
    return np.einsum("s...m,sm->s...", steer, phases)


def effective_channel_inband(direct: complex, inband_paths, phases: PhaseConfig) -> EffectiveChannel:
    """Served-user channel: direct plus M-weighted single-path reflections."""
    gains = np.array([g for g, _ in inband_paths], dtype=complex)
    angles = np.array([w for _, w in inband_paths], dtype=float)
    if len(gains) != phases.num_irs:
        raise ValueError(
            f"{len(gains)} paths for {phases.num_irs} phase vectors")
    if len(gains) == 0:
        return EffectiveChannel(value=complex(direct))
    inner = _reflect_inner(angles, phases.per_irs)
    return EffectiveChannel(value=complex(direct + phases.m * np.sum(gains * inner)))


def effective_channel_oob(direct: complex, path_sets, phases: PhaseConfig) -> EffectiveChannel:
    """Bystander-user channel: all cascaded paths reflect off every surface."""
    path_sets = list(path_sets)
    if len(path_sets) != phases.num_irs:
        raise ValueError(
            f"{len(path_sets)} path sets for {phases.num_irs} phase vectors")
    if not path_sets:
        return EffectiveChannel(value=complex(direct))
    counts = {ps.count for ps in path_sets}
    if len(counts) != 1:
        raise ValueError(f"path count must match across surfaces, got {counts}")
    l = counts.pop()
    gains = np.stack([ps.gains for ps in path_sets])     # (S, L)
    angles = np.stack([ps.angles for ps in path_sets])   # (S, L)
    inner = _reflect_inner(angles, phases.per_irs)
    total = np.sum(gains * inner)
    return EffectiveChannel(value=complex(direct + phases.m / np.sqrt(l) * total))


def alignment_count(beam_angles, path_sets) -> int:
    """Number of surfaces whose beam angle equals one of their path angles.

    Equality is exact grid-point matching (up to wrap-around and a round-off
    guard far finer than any grid spacing).
    """
    count = 0
    for beam, ps in zip(beam_angles, path_sets):
        delta = np.abs(wrap_angle(ps.angles - beam))
        if np.any(delta < GRID_ANGLE_TOL):
            count += 1
    return count
