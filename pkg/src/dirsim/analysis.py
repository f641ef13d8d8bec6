"""Closed-form performance laws: ergodic rates, outage, design rule.

Everything here is a pure formula evaluation; the Monte Carlo engine
cross-checks these expressions.  The rate laws use the mean-gain (Jensen)
approximation of the ergodic spectral efficiency, so agreement with
simulation is approximate by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad


class NumericalError(RuntimeError):
    """A numerical routine could not reach its accuracy target."""


@dataclass(frozen=True)
class RateLawParams:
    """Inputs of the spectral-efficiency laws for one user.

    ``beta_r`` is the cascaded (two-hop product) path loss, ``beta_d`` the
    direct one; ``snr`` is the linear transmit SNR and carries the reference
    path gain.  ``n_total`` and ``eta`` are derived.
    """

    s: int
    m: int
    l: int
    beta_r: float
    beta_d: float
    snr: float
    n_total: int = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self):
        if self.s < 0 or self.m < 1 or self.l < 1:
            raise ValueError("need s >= 0, m >= 1, l >= 1")
        if self.beta_r < 0 or self.beta_d < 0 or self.snr < 0:
            raise ValueError("path losses and snr must be >= 0")
        object.__setattr__(self, "n_total", self.s * self.m)
        object.__setattr__(self, "eta",
                           self.m / self.n_total if self.n_total else 0.0)


def se_inband(params: RateLawParams) -> float:
    """Ergodic SE of a served user with jointly optimized surfaces (bps/Hz).

    Mean channel gain: the squared-magnitude expansion of
    ``|h_d| + M * sum_s |gain_s|`` with the double-Rayleigh moments
    E|gain| = (pi/4) sqrt(beta_r) and E|gain|^2 = beta_r.
    """
    n, eta = params.n_total, params.eta
    c = math.pi**2 / 16.0
    bracket = (
        n**2 * (c + eta * (1.0 - c)) * params.beta_r
        + n * (math.pi**1.5 / 4.0) * math.sqrt(params.beta_d * params.beta_r)
        + params.beta_d
    )
    return math.log2(1.0 + bracket * params.snr)


def alignment_probability(m: int, l: int, model: str = "paper") -> float:
    """Chance that one surface's beam hits a bystander path.

    ``"paper"`` uses the flat-top ratio min(L, M)/M; ``"exact"`` the
    complement count 1 - (1 - 1/M)**L for L i.i.d. grid angles.
    """
    if model == "paper":
        return min(l, m) / m
    if model == "exact":
        return 1.0 - (1.0 - 1.0 / m) ** l
    raise ValueError(f"unknown alignment model {model!r}")


def se_oob(params: RateLawParams, alignment_model: str = "paper") -> float:
    """Ergodic SE of a bystander user under randomly-pointed surfaces (bps/Hz).

    For L < M this is a Binomial mixture over how many surfaces happen to
    align, each aligned surface adding M^2/L times the cascade path loss to
    the mean gain.  For L >= M every surface aligns and the mean gain is
    ``beta_d + N * beta_r``.
    """
    s, m, l = params.s, params.m, params.l
    if s == 0:
        return math.log2(1.0 + params.beta_d * params.snr)
    if l >= m:
        gain = params.beta_d + params.n_total * params.beta_r
        return math.log2(1.0 + gain * params.snr)
    p = alignment_probability(m, l, alignment_model)
    total = 0.0
    for aligned in range(s + 1):
        gain = aligned * m**2 / l * params.beta_r + params.beta_d
        total += binomial_pmf(s, p, aligned) * math.log2(1.0 + gain * params.snr)
    return total


def binomial_pmf(s_total: int, p: float, s: int) -> float:
    """Binomial(s_total, p) mass at s, evaluated in log space."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if not 0 <= s <= s_total:
        raise ValueError(f"s must be in 0..{s_total}, got {s}")
    if p == 0.0:
        return 1.0 if s == 0 else 0.0
    if p == 1.0:
        return 1.0 if s == s_total else 0.0
    log_comb = (math.lgamma(s_total + 1) - math.lgamma(s + 1)
                - math.lgamma(s_total - s + 1))
    return math.exp(log_comb + s * math.log(p) + (s_total - s) * math.log1p(-p))


def i0_integral(x: float, c1: float, c2: float, rel_tol: float = 1e-8) -> float:
    """``integral_{c1}^{inf} exp(-(x/t + t/c2)) dt`` by adaptive quadrature.

    The half-line is mapped to [0, 1) via ``t = c1 + c2 * u/(1-u)`` (the
    rational map scaled to the integrand's decay length, so the mass never
    collapses onto an endpoint) and the transformed integrand fed to
    Gauss-Kronrod refinement down to ``rel_tol`` relative error.
    """
    if c1 <= 0 or c2 <= 0:
        raise ValueError("c1 and c2 must be > 0")
    if x < 0:
        raise ValueError("x must be >= 0")

    def integrand(u):
        t = c1 + c2 * u / (1.0 - u)
        return c2 * math.exp(-(x / t + t / c2)) / (1.0 - u) ** 2

    value, abserr, info, *message = quad(
        integrand, 0.0, 1.0, epsabs=0.0, epsrel=rel_tol,
        limit=200, full_output=1)
    if message:
        raise NumericalError(
            f"I0 quadrature did not converge for (x={x}, c1={c1}, c2={c2}): "
            f"{message[0]} (estimate {value}, abserr {abserr}, "
            f"{info['neval']} evaluations)")
    return value


def outage_closed_form(rho: float, s_total: int, m: int, l: int,
                       beta_d: float, beta_r: float) -> float:
    """Outage probability of a bystander user, ``Pr(|h|^2 <= rho)``.

    Product form ``(1 - e^{-rho/beta_d}) * P0**s_total`` where ``P0`` mixes
    the non-aligned direct-only outage with the aligned direct-plus-cascade
    outage (the I0 integral).  The per-surface factorization is an
    approximation of the generative model; see the Monte Carlo companion.
    """
    if rho < 0:
        raise ValueError("rho must be >= 0")
    if s_total < 0 or m < 1 or l < 1 or beta_d <= 0 or beta_r <= 0:
        raise ValueError("need s_total >= 0, m >= 1, l >= 1, betas > 0")
    if rho == 0.0:
        return 0.0
    l_bar = min(l, m)
    c2 = m**2 * beta_r / l_bar
    direct_cdf = -math.expm1(-rho / beta_d)
    exp_term = math.exp(-rho / beta_d)
    if beta_d / c2 > 700.0:
        raise NumericalError(
            "aligned-branch scale factor overflows double precision "
            f"(beta_d/c2 = {beta_d / c2:.3g})")
    amp = l_bar * math.exp(l_bar * beta_d / (m**2 * beta_r)) / (m**2 * beta_r)
    p0 = 1.0 - exp_term - (l_bar / m) * (amp * i0_integral(rho, beta_d, c2) - exp_term)
    if p0 < 0.0:
        if p0 < -1e-9:
            raise NumericalError(f"P0 = {p0} below round-off tolerance")
        p0 = 0.0
    if p0 > 1.0:
        if p0 > 1.0 + 1e-9:
            raise NumericalError(f"P0 = {p0} above 1")
        p0 = 1.0
    return direct_cdf * p0**s_total


@dataclass(frozen=True)
class DesignRule:
    """Surface sizing that keeps every surface useful to bystanders."""

    delta_star: float
    m_star: int
    s_star: int


def design_rule(n_total: int, l: int) -> DesignRule:
    """Largest per-surface size (and matching count) for full bystander gain.

    ``delta_star = min(1, log_N L)`` caps the per-surface element count at
    ``N**delta_star = min(L, N)``; that cap is rounded down to the largest
    divisor of N so the pair (m_star, s_star = N / m_star) still uses all N
    elements.
    """
    if n_total < 1 or l < 1:
        raise ValueError("need n_total >= 1 and l >= 1")
    if n_total == 1:
        return DesignRule(delta_star=1.0, m_star=1, s_star=1)
    delta_star = min(1.0, math.log(l) / math.log(n_total))
    cap = min(l, n_total)
    m_star = max(d for d in range(1, cap + 1) if n_total % d == 0)
    return DesignRule(delta_star=delta_star, m_star=m_star,
                      s_star=n_total // m_star)


def prelog_factor(sum_se: float, n_total: int) -> float:
    """Growth coefficient of the SE against log2 of the total element count."""
    if n_total < 2:
        raise ValueError("n_total must be >= 2")
    return sum_se / math.log2(n_total)
