"""mmWave channel primitives: beam grid, array responses, path sampling.

Angles here are always the *sines* of physical angles (half-wavelength
element spacing), living on [-1, 1).  An M-element array resolves exactly M
beams, so path angles are drawn from the discrete grid {-1 + 2i/M}; distinct
grid beams are orthogonal, and cascading two paths adds their angles modulo
2.  No trigonometric inversion ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class AngleBook:
    """The M resolvable beam angles of an M-element array."""

    m: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"element count must be >= 1, got {self.m}")


def angle_book(m: int) -> AngleBook:
    """Grid {-1 + 2i/m, i = 0..m-1}, strictly increasing, spacing 2/m."""
    if m < 1:
        raise ValueError(f"element count must be >= 1, got {m}")
    return AngleBook(m=m, entries=-1.0 + 2.0 * np.arange(m) / m)


def array_response(m: int, phi: float) -> np.ndarray:
    """Unit-norm ULA response ``(1/sqrt(m)) * [1, e^{-j pi phi}, ...]``."""
    if m < 1:
        raise ValueError(f"element count must be >= 1, got {m}")
    return np.exp(-1j * np.pi * phi * np.arange(m)) / np.sqrt(m)


def wrap_angle(x):
    """Wrap a (sine-)angle into [-1, 1), identifying values modulo 2."""
    return (x + 1.0) % 2.0 - 1.0


def cascaded_angle(phi: float, psi: float) -> float:
    """Angle of a two-hop path: the wrapped sum of the hop angles.

    For an even-sized angle book the grid is closed under this operation
    (the sum of two grid members is again a grid member).
    """
    for name, val in (("phi", phi), ("psi", psi)):
        if not (-1.0 <= val < 1.0):
            raise ValueError(f"{name} must lie in [-1, 1), got {val}")
    return float(wrap_angle(phi + psi))


@dataclass(frozen=True)
class PathSet:
    """Cascaded paths through one surface: complex gains and grid angles."""

    gains: np.ndarray    # (L,) complex
    angles: np.ndarray   # (L,) float in [-1, 1)
    count: int

    def __post_init__(self):
        if len(self.gains) != self.count or len(self.angles) != self.count:
            raise ValueError("gains/angles length must equal count")


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw for one user: direct coefficient plus per-surface paths."""

    direct: complex
    per_irs: tuple

    def __post_init__(self):
        counts = {ps.count for ps in self.per_irs}
        if len(counts) > 1:
            raise ValueError("all surfaces must carry the same path count")


def _complex_normal(rng: np.random.Generator, var: float, size=None):
    """Circular complex normal: var/2 per real component."""
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def sample_direct(rng: np.random.Generator, var: float) -> complex:
    """Rayleigh-fading direct coefficient; |h|^2 is exponential with mean var."""
    if var < 0:
        raise ValueError(f"variance must be >= 0, got {var}")
    if var == 0:
        return 0j
    return complex(_complex_normal(rng, var))

def sample_path_set(rng: np.random.Generator, m: int, paths_1: int, paths_2: int,
                    var_1: float, var_2: float) -> PathSet:
    """Draw one surface's cascaded paths under the two-hop multipath model.

    ``paths_1`` hop-one and ``paths_2`` hop-two components are drawn with
    i.i.d. grid angles and complex-normal gains (variances ``var_1``,
    ``var_2``); the returned set holds all ``paths_1 * paths_2`` products
    with wrapped angle sums.  Raw gains only: the sqrt(M/L) channel scale
    factors belong to the effective-channel composition, not to the draw.
    """
    if paths_1 < 1 or paths_2 < 1:
        raise ValueError("path counts must be >= 1")
    book = angle_book(m)
    angles_1 = book.entries[rng.integers(0, m, paths_1)]
    angles_2 = book.entries[rng.integers(0, m, paths_2)]
    gains_1 = _complex_normal(rng, var_1, paths_1)
    gains_2 = _complex_normal(rng, var_2, paths_2)
    gains = np.multiply.outer(gains_1, gains_2).ravel()
    angles = wrap_angle(np.add.outer(angles_1, angles_2)).ravel()
    return PathSet(gains=gains, angles=angles, count=paths_1 * paths_2)


def sample_channel(rng: np.random.Generator, m: int, num_irs: int,
                   paths_1: int, paths_2: int,
                   var_f: float, var_g: float, var_d: float) -> ChannelRealization:
    """Draw direct coefficient plus one PathSet per surface, in a fixed order."""
    direct = sample_direct(rng, var_d)
    per_irs = tuple(
        sample_path_set(rng, m, paths_1, paths_2, var_f, var_g)
        for _ in range(num_irs)
    )
    return ChannelRealization(direct=direct, per_irs=per_irs)
