"""Slot-level Monte Carlo experiments with deterministic parallelism.

Work is split into fixed-size chunks of slot/trial indices; every index owns
its own random stream, and chunk results are concatenated in index order, so
the output is bit-identical for any worker count.  The per-slot channel
arithmetic uses the closed geometric-series form of the steering inner
products (cross-checked against the vector operations in ``control``).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat

import numpy as np

from . import rng as _rng
from .analysis import RateLawParams, alignment_probability, binomial_pmf, \
    outage_closed_form, se_inband, se_oob
from .channel import _complex_normal, angle_book, sample_direct, wrap_angle
from .control import GRID_ANGLE_TOL, optimal_phase_factors
from .scenario import ScenarioConfig, Topology, build_topology

# Slots/trials per work unit.  Fixed: chunking must not depend on the worker
# count, or the floating-point reduction order would change with it.
CHUNK = 1024


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class SweepResult:
    """Ergodic sum-SE of both operators at one (N, S, M, L) grid point."""

    n_total: int
    s: int
    m: int
    l: int
    slots: int
    seed: int
    se_x_mc: float
    se_y_mc: float
    stderr_x: float
    stderr_y: float
    se_x_cf: float
    se_y_cf: float


@dataclass(frozen=True)
class OutageReport:
    """Empirical and closed-form bystander outage at one grid point."""

    s: int
    m: int
    l: int
    n_total: int
    delta: float
    rho: float
    trials: int
    seed: int
    p_mc: float
    ci_lo: float
    ci_hi: float
    p_cf: float


@dataclass(frozen=True)
class AlignmentHistogram:
    """Distribution of how many surfaces align with one bystander user."""

    counts: np.ndarray        # (s + 1,) occurrences of each alignment count
    trials: int
    s: int
    m: int
    l: int
    seed: int
    p_hat: float              # fitted per-surface alignment frequency
    p_exact: float
    p_paper: float
    tv_exact: float           # total variation vs Binomial(s, p_exact)
    tv_paper: float           # total variation vs Binomial(s, p_paper)


@dataclass(frozen=True)
class TermDecomposition:
    """Moment split of the served-user channel gain: direct, cascade, cross."""

    samples: int
    seed: int
    s: int
    m: int
    empirical: np.ndarray     # (3,)
    stderr: np.ndarray        # (3,)
    closed_form: np.ndarray   # (3,)


# ---------------------------------------------------------------------------
# shared helpers


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score confidence interval for a binomial proportion."""
    if n < 1:
        raise ValueError("need at least one trial")
    phat = successes / n
    denom = 1.0 + z**2 / n
    center = (phat + z**2 / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z**2 / (4 * n**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total variation distance between two distributions on the same support."""
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def _beam_pattern(delta, m: int):
    """Inner product of two grid steering vectors offset by ``delta``.

    Closed form of ``(1/m) * sum_i exp(1j*pi*i*delta)``; exactly 1 when the
    beams coincide and (numerically) 0 at any other grid offset.
    """
    d = wrap_angle(np.asarray(delta, dtype=float))
    aligned = np.abs(d) < GRID_ANGLE_TOL
    safe = np.where(aligned, 1.0, d)
    ratio = np.sin(0.5 * np.pi * m * safe) / (m * np.sin(0.5 * np.pi * safe))
    out = np.exp(1j * np.pi * (m - 1) * 0.5 * safe) * ratio
    return np.where(aligned, 1.0 + 0j, out)


def _map_chunks(fn, task, n: int, workers: int) -> np.ndarray:
    """Evaluate ``fn(task, start, stop)`` over fixed chunks of ``range(n)``.

    Results are concatenated in chunk order regardless of scheduling, so the
    output is independent of ``workers``.
    """
    spans = [(a, min(a + CHUNK, n)) for a in range(0, n, CHUNK)]
    if workers <= 1:
        parts = [fn(task, a, b) for a, b in spans]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, repeat(task),
                                  [a for a, _ in spans], [b for _, b in spans]))
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# channel draws (canonical order; one stream per slot/trial)


@dataclass(frozen=True)
class _Task:
    cfg: ScenarioConfig
    topo: Topology


def _draw_slot_channels(rng, cfg: ScenarioConfig, topo: Topology, k: int, q: int):
    """Draw both users' fading for one slot, in a fixed documented order.

    Served user: direct coefficient, then per-surface dominant-path angles
    (hop one, hop two) and gains (hop one, hop two).  Bystander: the same
    with ``paths`` hop-two components per surface.
    """
    s, m, l = cfg.num_irs, cfg.elements_per_irs, cfg.paths
    book = angle_book(m).entries

    h_dk = sample_direct(rng, topo.beta_d_x[k])
    phi_x = book[rng.integers(0, m, s)]
    psi_x = book[rng.integers(0, m, s)]
    g1_x = _complex_normal(rng, topo.beta_f_x, s)
    g2_x = _complex_normal(rng, topo.beta_g_x[k], s)

    h_dq = sample_direct(rng, topo.beta_d_y[q])
    phi_y = book[rng.integers(0, m, s)]
    psi_y = book[rng.integers(0, m, (s, l))]
    g1_y = _complex_normal(rng, topo.beta_f_y, s)
    g2_y = _complex_normal(rng, topo.beta_g_y[q], (s, l))

    inband_gains = g1_x * g2_x
    beam_angles = wrap_angle(phi_x + psi_x)
    oob_gains = g1_y[:, None] * g2_y
    oob_angles = wrap_angle(phi_y[:, None] + psi_y)
    return h_dk, inband_gains, beam_angles, h_dq, oob_gains, oob_angles


def _effective_pair(h_dk, inband_gains, beam_angles, h_dq, oob_gains, oob_angles, m, l):
    """Served and bystander effective channels for one slot."""
    factors = optimal_phase_factors(h_dk, inband_gains)
    # Each surface's beam is matched to its own served-user path, so the
    # steering inner product is exactly 1.
    h_k = h_dk + m * np.sum(inband_gains * factors)
    pattern = _beam_pattern(oob_angles - beam_angles[:, None], m)
    h_q = h_dq + m / math.sqrt(l) * np.sum(factors[:, None] * oob_gains * pattern)
    return h_k, h_q


def _sum_se_chunk(task: _Task, start: int, stop: int) -> np.ndarray:
    cfg, topo = task.cfg, task.topo
    snr = cfg.snr
    out = np.empty((stop - start, 2))
    for t in range(start, stop):
        rng = _rng.stream(cfg.master_seed, _rng.SLOT, t)
        k, q = t % cfg.num_ues_x, t % cfg.num_ues_y
        draws = _draw_slot_channels(rng, cfg, topo, k, q)
        h_k, h_q = _effective_pair(*draws, cfg.elements_per_irs, cfg.paths)
        out[t - start, 0] = math.log2(1.0 + abs(h_k) ** 2 * snr)
        out[t - start, 1] = math.log2(1.0 + abs(h_q) ** 2 * snr)
    return out


@dataclass(frozen=True)
class _OutageTask:
    cfg: ScenarioConfig
    topo: Topology
    rho: float


def _outage_chunk(task: _OutageTask, start: int, stop: int) -> np.ndarray:
    cfg, topo = task.cfg, task.topo
    out = np.empty(stop - start)
    for t in range(start, stop):
        rng = _rng.stream(cfg.master_seed, _rng.OUTAGE, t)
        k = int(rng.integers(0, cfg.num_ues_x))
        draws = _draw_slot_channels(rng, cfg, topo, k, 0)
        _, h_q = _effective_pair(*draws, cfg.elements_per_irs, cfg.paths)
        out[t - start] = 1.0 if abs(h_q) ** 2 <= task.rho else 0.0
    return out


def _alignment_chunk(task: _Task, start: int, stop: int) -> np.ndarray:
    cfg = task.cfg
    s, m, l = cfg.num_irs, cfg.elements_per_irs, cfg.paths
    book = angle_book(m).entries
    out = np.empty(stop - start, dtype=np.int64)
    for t in range(start, stop):
        rng = _rng.stream(cfg.master_seed, _rng.ALIGNMENT, t)
        phi_x = book[rng.integers(0, m, s)]
        psi_x = book[rng.integers(0, m, s)]
        phi_y = book[rng.integers(0, m, s)]
        psi_y = book[rng.integers(0, m, (s, l))]
        beams = wrap_angle(phi_x + psi_x)
        oob = wrap_angle(phi_y[:, None] + psi_y)
        delta = np.abs(wrap_angle(oob - beams[:, None]))
        out[t - start] = int(np.sum(np.any(delta < GRID_ANGLE_TOL, axis=1)))
    return out


@dataclass(frozen=True)
class _TermsTask:
    cfg: ScenarioConfig
    topo: Topology


def _terms_chunk(task: _TermsTask, start: int, stop: int) -> np.ndarray:
    # Vectorized within the chunk; the chunk index keys the stream, so the
    # values are a pure function of (seed, sample index) for fixed CHUNK.
    cfg, topo = task.cfg, task.topo
    s, m = cfg.num_irs, cfg.elements_per_irs
    n = stop - start
    rng = _rng.stream(cfg.master_seed, _rng.TERMS, start // CHUNK)
    h_d = _complex_normal(rng, topo.beta_d_x[0], n)
    g1 = _complex_normal(rng, topo.beta_f_x, (n, s))
    g2 = _complex_normal(rng, topo.beta_g_x[0], (n, s))
    gain_sum = np.sum(np.abs(g1 * g2), axis=1)
    out = np.empty((n, 3))
    out[:, 0] = np.abs(h_d) ** 2
    out[:, 1] = m**2 * gain_sum**2
    out[:, 2] = 2.0 * m * np.abs(h_d) * gain_sum
    return out


# ---------------------------------------------------------------------------
# experiments


def _per_ue_summary(values: np.ndarray, num_ues: int) -> tuple[float, float]:
    """Mean of per-user ergodic means under round-robin, with standard error."""
    means = np.empty(num_ues)
    var_sum = 0.0
    for u in range(num_ues):
        v = values[u::num_ues]
        means[u] = v.mean()
        if len(v) >= 2:
            var_sum += v.var(ddof=1) / len(v)
    return float(means.mean()), float(math.sqrt(var_sum) / num_ues)


def closed_form_sum_se(cfg: ScenarioConfig, topo: Topology,
                       alignment_model: str = "paper") -> tuple[float, float]:
    """Closed-form sum-SE companions for both operators."""
    s, m, l = cfg.num_irs, cfg.elements_per_irs, cfg.paths
    se_x = np.mean([
        se_inband(RateLawParams(s=s, m=m, l=l, snr=cfg.snr,
                                beta_r=topo.beta_f_x * topo.beta_g_x[k],
                                beta_d=topo.beta_d_x[k]))
        for k in range(cfg.num_ues_x)
    ])
    se_y = np.mean([
        se_oob(RateLawParams(s=s, m=m, l=l, snr=cfg.snr,
                             beta_r=topo.beta_f_y * topo.beta_g_y[q],
                             beta_d=topo.beta_d_y[q]),
               alignment_model=alignment_model)
        for q in range(cfg.num_ues_y)
    ])
    return float(se_x), float(se_y)


def run_sum_se(cfg: ScenarioConfig, workers: int = 1,
               alignment_model: str = "paper",
               topology: Topology | None = None) -> SweepResult:
    """Round-robin ergodic sum-SE of both operators, plus closed forms.

    Slot t serves in-band user ``t mod K`` and bystander ``t mod Q``; fresh
    fading is drawn every slot and the surfaces are re-pointed at the served
    user.  The report is bit-identical for any ``workers``.  Pass
    ``topology`` to override the geometry-derived path losses.
    """
    topo = build_topology(cfg) if topology is None else topology
    values = _map_chunks(_sum_se_chunk, _Task(cfg, topo), cfg.slots, workers)
    se_x, err_x = _per_ue_summary(values[:, 0], cfg.num_ues_x)
    se_y, err_y = _per_ue_summary(values[:, 1], cfg.num_ues_y)
    cf_x, cf_y = closed_form_sum_se(cfg, topo, alignment_model)
    return SweepResult(
        n_total=cfg.n_total, s=cfg.num_irs, m=cfg.elements_per_irs,
        l=cfg.paths, slots=cfg.slots, seed=cfg.master_seed,
        se_x_mc=se_x, se_y_mc=se_y, stderr_x=err_x, stderr_y=err_y,
        se_x_cf=cf_x, se_y_cf=cf_y,
    )


def run_outage(cfg: ScenarioConfig, rho: float, trials: int,
               workers: int = 1, topology: Topology | None = None) -> OutageReport:
    """Empirical bystander outage probability with its closed-form companion.

    Every trial redraws the bystander channel and an independently chosen
    served user (hence fresh surface pointing), then tests the channel gain
    against ``rho``.  The report attaches a Wilson 95% interval.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if rho < 0:
        raise ValueError("rho must be >= 0")
    topo = build_topology(cfg) if topology is None else topology
    flags = _map_chunks(_outage_chunk, _OutageTask(cfg, topo, rho), trials, workers)
    hits = int(flags.sum())
    p_mc = hits / trials
    ci_lo, ci_hi = wilson_interval(hits, trials)
    if rho == 0.0:
        p_cf = 0.0
    else:
        p_cf = outage_closed_form(
            rho, cfg.num_irs, cfg.elements_per_irs, cfg.paths,
            beta_d=float(topo.beta_d_y[0]),
            beta_r=float(topo.beta_f_y * topo.beta_g_y[0]))
    n = cfg.n_total
    delta = math.log(cfg.paths) / math.log(n) if n >= 2 else float("nan")
    return OutageReport(
        s=cfg.num_irs, m=cfg.elements_per_irs, l=cfg.paths, n_total=n,
        delta=delta, rho=rho, trials=trials, seed=cfg.master_seed,
        p_mc=p_mc, ci_lo=ci_lo, ci_hi=ci_hi, p_cf=p_cf,
    )


def run_alignment(cfg: ScenarioConfig, trials: int, workers: int = 1) -> AlignmentHistogram:
    """Histogram of the per-trial surface alignment count for a bystander."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    topo = build_topology(cfg)
    s, m, l = cfg.num_irs, cfg.elements_per_irs, cfg.paths
    b = _map_chunks(_alignment_chunk, _Task(cfg, topo), trials, workers)
    counts = np.bincount(b, minlength=s + 1)
    p_exact = alignment_probability(m, l, "exact")
    p_paper = alignment_probability(m, l, "paper")
    empirical = counts / trials
    pmf_exact = np.array([binomial_pmf(s, p_exact, i) for i in range(s + 1)])
    pmf_paper = np.array([binomial_pmf(s, p_paper, i) for i in range(s + 1)])
    return AlignmentHistogram(
        counts=counts, trials=trials, s=s, m=m, l=l, seed=cfg.master_seed,
        p_hat=float(b.mean() / s) if s else 0.0,
        p_exact=p_exact, p_paper=p_paper,
        tv_exact=tv_distance(empirical, pmf_exact),
        tv_paper=tv_distance(empirical, pmf_paper),
    )


def run_term_decomposition(cfg: ScenarioConfig, samples: int,
                           workers: int = 1) -> TermDecomposition:
    """Estimate the three served-user gain moments against their closed forms.

    Uses the first in-band user's path losses.  Closed forms: ``beta_d``;
    ``M^2 beta_r [S^2 pi^2/16 + S (1 - pi^2/16)]``;
    ``M S (pi^{3/2}/4) sqrt(beta_r beta_d)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    topo = build_topology(cfg)
    s, m = cfg.num_irs, cfg.elements_per_irs
    beta_d = float(topo.beta_d_x[0])
    beta_r = float(topo.beta_f_x * topo.beta_g_x[0])
    values = _map_chunks(_terms_chunk, _TermsTask(cfg, topo), samples, workers)
    closed = np.array([
        beta_d,
        m**2 * beta_r * (s**2 * np.pi**2 / 16.0 + s * (1.0 - np.pi**2 / 16.0)),
        m * s * np.pi**1.5 / 4.0 * math.sqrt(beta_r * beta_d),
    ])
    return TermDecomposition(
        samples=samples, seed=cfg.master_seed, s=s, m=m,
        empirical=values.mean(axis=0),
        stderr=values.std(axis=0, ddof=1) / math.sqrt(samples),
        closed_form=closed,
    )
