"""Experiment geometry: node layout, per-link path losses, configuration.

Two base stations serve separate user populations in a far-away rectangular
region.  Reflecting surfaces sit on the half of the circle circumscribing the
user region that faces the base stations.  Path losses follow the standard
``C0 * (d0/d)**alpha`` law with a per-link-type exponent; the reference gain
``C0`` is folded into the link budget, so topology betas carry only the
``(d0/d)**alpha`` factor.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from . import rng as _rng


class ConfigError(ValueError):
    """Invalid scenario configuration (bad field value or unknown key)."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment.

    Distances are in meters, the link budget (reference gain times transmit
    SNR) in dB.  ``num_irs = 0`` describes a system without surfaces; all
    direct links remain.
    """

    bs_x_pos: tuple[float, float] = (50.0, 0.0)
    bs_y_pos: tuple[float, float] = (0.0, 50.0)
    ue_region: tuple[float, float, float, float] = (900.0, 1100.0, 900.0, 1100.0)
    num_ues_x: int = 10
    num_ues_y: int = 10
    num_irs: int = 4
    elements_per_irs: int = 16
    paths: int = 2
    link_budget_db: float = 150.0
    alpha_bs_irs: float = 2.0
    alpha_irs_ue: float = 2.2
    alpha_bs_ue: float = 4.5
    ref_distance_m: float = 1.0
    slots: int = 10000
    master_seed: int = 12345
    normalize_pathloss: bool = False

    def __post_init__(self):
        def fail(field, msg):
            raise ConfigError(f"{field}: {msg}")

        if len(self.bs_x_pos) != 2 or len(self.bs_y_pos) != 2:
            fail("bs_x_pos/bs_y_pos", "must be 2-D coordinates")
        if len(self.ue_region) != 4:
            fail("ue_region", "must be (xmin, xmax, ymin, ymax)")
        xmin, xmax, ymin, ymax = self.ue_region
        if not (xmax > xmin and ymax > ymin):
            fail("ue_region", "must be a non-degenerate rectangle")
        if self.num_ues_x < 1:
            fail("num_ues_x", "must be >= 1")
        if self.num_ues_y < 1:
            fail("num_ues_y", "must be >= 1")
        if self.num_irs < 0:
            fail("num_irs", "must be >= 0")
        if self.elements_per_irs < 1:
            fail("elements_per_irs", "must be >= 1")
        if self.paths < 1:
            fail("paths", "must be >= 1")
        for name in ("alpha_bs_irs", "alpha_irs_ue", "alpha_bs_ue"):
            if getattr(self, name) <= 0:
                fail(name, "must be > 0")
        if self.ref_distance_m <= 0:
            fail("ref_distance_m", "must be > 0")
        if self.slots < 1:
            fail("slots", "must be >= 1")
        if not isinstance(self.master_seed, int) or not (
            -(2**63) <= self.master_seed < 2**64
        ):
            fail("master_seed", "must be a 64-bit integer")

    @property
    def snr(self) -> float:
        """Linear transmit SNR; carries the reference path gain C0."""
        return 10.0 ** (self.link_budget_db / 10.0)

    @property
    def n_total(self) -> int:
        return self.num_irs * self.elements_per_irs

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(data)
        for key in ("bs_x_pos", "bs_y_pos", "ue_region"):
            if key in kwargs:
                kwargs[key] = tuple(float(v) for v in kwargs[key])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("bs_x_pos", "bs_y_pos", "ue_region"):
            out[key] = list(out[key])
        return out

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def load_config(path) -> ScenarioConfig:
    """Read a JSON config file; unknown keys are rejected."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a JSON object")
    try:
        return ScenarioConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class Topology:
    """Node positions and per-link path losses (linear scale, C0 excluded).

    Cascade path losses are independent of the surface index: one
    ``beta_f`` per base station and one ``beta_g`` per user, computed at the
    mean distance to the surfaces.  Immutable; safe to share across workers.
    """

    irs_positions: np.ndarray      # (S, 2)
    ue_positions_x: np.ndarray     # (K, 2)
    ue_positions_y: np.ndarray     # (Q, 2)
    beta_f_x: float
    beta_f_y: float
    beta_g_x: np.ndarray           # (K,)
    beta_g_y: np.ndarray           # (Q,)
    beta_d_x: np.ndarray           # (K,)
    beta_d_y: np.ndarray           # (Q,)


def path_loss(d: float, alpha: float, c0_db: float = 0.0, d0: float = 1.0) -> float:
    """Linear path gain ``C0 * (d0/d)**alpha``.

    ``c0_db`` defaults to 0 dB because the reference gain is normally folded
    into the link budget.
    """
    if d <= 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if d0 <= 0:
        raise ValueError(f"reference distance must be > 0, got {d0}")
    return 10.0 ** (c0_db / 10.0) * (d0 / d) ** alpha


def place_irs_semicircle(s: int, region: tuple) -> np.ndarray:
    """Place ``s`` surfaces uniformly in angle on half the circumscribing circle.

    The circle is centered at the region center with radius equal to half the
    rectangle diagonal; the chosen half faces the origin (where the base
    stations sit).  Endpoints are included, so spacing is ``pi / (s - 1)``.
    """
    if s < 1:
        raise ValueError(f"need at least one surface, got {s}")
    xmin, xmax, ymin, ymax = region
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("degenerate region")
    cx, cy = (xmin + xmax) / 2.0, (ymin + ymax) / 2.0
    radius = float(np.hypot(xmax - xmin, ymax - ymin)) / 2.0
    facing = np.arctan2(-cy, -cx)
    if s == 1:
        angles = np.array([facing])
    else:
        angles = facing + np.linspace(-np.pi / 2.0, np.pi / 2.0, s)
    return np.column_stack((cx + radius * np.cos(angles),
                            cy + radius * np.sin(angles)))


def flat_topology(cfg: ScenarioConfig, beta_f: float = 1.0, beta_g: float = 1.0,
                  beta_d: float = 1.0) -> Topology:
    """Topology with hand-set, user-independent path losses.

    Convenient for studies that sweep the cascade/direct loss ratio without
    tying it to a geometry.  Positions are still placed as usual.
    """
    base = build_topology(cfg.replace(normalize_pathloss=True))
    k, q = cfg.num_ues_x, cfg.num_ues_y
    return Topology(
        irs_positions=base.irs_positions,
        ue_positions_x=base.ue_positions_x, ue_positions_y=base.ue_positions_y,
        beta_f_x=beta_f, beta_f_y=beta_f,
        beta_g_x=np.full(k, beta_g), beta_g_y=np.full(q, beta_g),
        beta_d_x=np.full(k, beta_d), beta_d_y=np.full(q, beta_d),
    )


def build_topology(cfg: ScenarioConfig, rng: np.random.Generator | None = None) -> Topology:
    """Sample user positions and compute every per-link path loss.

    Deterministic given ``(cfg, cfg.master_seed)``: the default generator is
    derived from the config's master seed.  User positions are drawn once per
    experiment and stay fixed across slots.
    """
    if rng is None:
        rng = _rng.stream(cfg.master_seed, _rng.TOPOLOGY)
    xmin, xmax, ymin, ymax = cfg.ue_region
    k, q, s = cfg.num_ues_x, cfg.num_ues_y, cfg.num_irs

    if s >= 1:
        irs_pos = place_irs_semicircle(s, cfg.ue_region)
    else:
        irs_pos = np.empty((0, 2))

    ue_x = np.column_stack((rng.uniform(xmin, xmax, k), rng.uniform(ymin, ymax, k)))
    ue_y = np.column_stack((rng.uniform(xmin, xmax, q), rng.uniform(ymin, ymax, q)))

    bs_x = np.asarray(cfg.bs_x_pos, dtype=float)
    bs_y = np.asarray(cfg.bs_y_pos, dtype=float)
    d0 = cfg.ref_distance_m

    if cfg.normalize_pathloss:
        return Topology(
            irs_positions=irs_pos, ue_positions_x=ue_x, ue_positions_y=ue_y,
            beta_f_x=1.0, beta_f_y=1.0,
            beta_g_x=np.ones(k), beta_g_y=np.ones(q),
            beta_d_x=np.ones(k), beta_d_y=np.ones(q),
        )

    def mean_dist(point, points):
        return float(np.mean(np.hypot(points[:, 0] - point[0], points[:, 1] - point[1])))

    if s >= 1:
        beta_f_x = path_loss(mean_dist(bs_x, irs_pos), cfg.alpha_bs_irs, d0=d0)
        beta_f_y = path_loss(mean_dist(bs_y, irs_pos), cfg.alpha_bs_irs, d0=d0)
        beta_g_x = np.array([
            path_loss(mean_dist(ue, irs_pos), cfg.alpha_irs_ue, d0=d0) for ue in ue_x
        ])
        beta_g_y = np.array([
            path_loss(mean_dist(ue, irs_pos), cfg.alpha_irs_ue, d0=d0) for ue in ue_y
        ])
    else:
        # No surfaces: cascade betas are unused; keep well-defined values.
        beta_f_x = beta_f_y = 1.0
        beta_g_x, beta_g_y = np.ones(k), np.ones(q)

    beta_d_x = np.array([
        path_loss(float(np.hypot(*(ue - bs_x))), cfg.alpha_bs_ue, d0=d0) for ue in ue_x
    ])
    beta_d_y = np.array([
        path_loss(float(np.hypot(*(ue - bs_y))), cfg.alpha_bs_ue, d0=d0) for ue in ue_y
    ])

    return Topology(
        irs_positions=irs_pos, ue_positions_x=ue_x, ue_positions_y=ue_y,
        beta_f_x=beta_f_x, beta_f_y=beta_f_y,
        beta_g_x=beta_g_x, beta_g_y=beta_g_y,
        beta_d_x=beta_d_x, beta_d_y=beta_d_y,
    )
