"""Fast self-checks wired to the ``validate`` CLI command.

Each check runs in well under a second and exercises one structural
guarantee of the toolkit: beam orthogonality, the optimal-pointing gain
identity, the Binomial law of surface alignment, and the semi-infinite
quadrature against a brute-force oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .analysis import i0_integral
from .channel import angle_book, array_response, sample_direct, sample_path_set
from .control import effective_channel_inband, optimal_phase_config
from .engine import run_alignment
from .scenario import ScenarioConfig


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: measured {self.measured:.3e} vs limit {self.threshold:.3e}"


def check_orthogonality(m: int = 64, tol: float = 1e-12) -> CheckResult:
    """Distinct grid beams of one angle book must be orthogonal."""
    beams = np.stack([array_response(m, phi) for phi in angle_book(m).entries])
    gram = np.abs(beams.conj() @ beams.T)
    np.fill_diagonal(gram, 0.0)
    worst = float(gram.max())
    return CheckResult("beam orthogonality", worst <= tol, worst, tol)


def check_gain_identity(cfg: ScenarioConfig, slots: int = 256,
                        tol: float = 1e-9) -> CheckResult:
    """Optimally pointed surfaces must add coherently: |h| = |h_d| + M*sum|g|."""
    s, m = max(cfg.num_irs, 1), cfg.elements_per_irs
    worst = 0.0
    for t in range(slots):
        rng = _rng.stream(cfg.master_seed, _rng.SLOT, t)
        h_d = sample_direct(rng, 1.0)
        paths = [sample_path_set(rng, m, 1, 1, 1.0, 1.0) for _ in range(s)]
        pairs = [(ps.gains[0], ps.angles[0]) for ps in paths]
        phases = optimal_phase_config(h_d, pairs, m)
        h = effective_channel_inband(h_d, pairs, phases)
        expect = abs(h_d) + m * sum(abs(g) for g, _ in pairs)
        worst = max(worst, abs(abs(h.value) - expect))
    return CheckResult("optimal-gain identity", worst <= tol, worst, tol)


def check_binomial_alignment(cfg: ScenarioConfig, trials: int = 20000,
                             tol: float = 0.02) -> CheckResult:
    """Alignment counts must follow the exact-complement Binomial law."""
    probe = cfg.replace(num_irs=8, elements_per_irs=32, paths=2,
                        normalize_pathloss=True)
    hist = run_alignment(probe, trials)
    return CheckResult("binomial alignment", hist.tv_exact <= tol,
                       hist.tv_exact, tol)


def check_i0_oracle(tol: float = 1e-6, points: int = 1_000_000) -> CheckResult:
    """Adaptive quadrature must match a brute-force trapezoid oracle."""
    worst = 0.0
    for x, c1, c2 in [(0.5, 1.0, 2.0), (1.0, 1.0, 1.0), (2.0, 0.5, 10.0)]:
        t = np.linspace(c1, c1 + 60.0 * c2, points)
        oracle = float(np.trapezoid(np.exp(-(x / t + t / c2)), t))
        err = abs(i0_integral(x, c1, c2) - oracle) / oracle
        worst = max(worst, err)
    exact = abs(i0_integral(0.0, 1.0, 2.0) - 2.0 * math.exp(-0.5)) / (2.0 * math.exp(-0.5))
    worst = max(worst, exact)
    return CheckResult("i0 quadrature oracle", worst <= tol, worst, tol)


def run_all_checks(cfg: ScenarioConfig, *, orthogonality_tol: float = 1e-12,
                   identity_tol: float = 1e-9, binomial_tol: float = 0.02,
                   i0_tol: float = 1e-6) -> list[CheckResult]:
    return [
        check_orthogonality(m=cfg.elements_per_irs, tol=orthogonality_tol),
        check_gain_identity(cfg, tol=identity_tol),
        check_binomial_alignment(cfg, tol=binomial_tol),
        check_i0_oracle(tol=i0_tol),
    ]
