"""Mismatched code design and the divergence that prices it.

Designing the encoder for Q while tasks are drawn from P costs extra rate;
the penalty is Sundaresan's divergence

    Delta_alpha(P||Q) = log2 [ (sum Q^alpha)
                               * (sum P/Q^(1-alpha))^(alpha/(1-alpha))
                               / (sum P^alpha)^(1/(1-alpha)) ]

evaluated at alpha = 1/(1+rho).  Conventions 0/0 = 0 and a/0 = +inf apply
symbol by symbol.  The three factors are computed separately in the log
domain and only then combined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatchError, InvalidOrderError, SupportViolationError
from .partitions import build_partition
from .coding import (
    MomentReport,
    TaskEncoder,
    as_rate,
    build_encoder,
    floor_pow2,
    lambda_from_law,
    lower_bound,
    m_tilde,
    moment,
    _check_m,
    _check_rho,
    _exp2,
)
from .probability import (
    DEFAULT_TUPLE_CAP,
    Pmf,
    iid_joint,
    kl_divergence,
    log2sumexp,
    renyi_rho,
)


@dataclass(frozen=True)
class DivergenceValue:
    alpha: float
    bits: float


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0.0) or alpha == 1.0:
        raise InvalidOrderError(f"order alpha must be positive and != 1, got {alpha}")


def _check_alphabets(p, q) -> None:
    if p.log_masses.size != q.log_masses.size:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {p.log_masses.size} vs {q.log_masses.size}"
        )


def _delta_bits(lp: np.ndarray, lq: np.ndarray, alpha: float) -> float:
    """Sundaresan divergence from two log2-mass vectors."""
    log_a = log2sumexp(alpha * lq)
    log_b = log2sumexp(alpha * lp)
    supp_p = np.isfinite(lp)
    supp_q = np.isfinite(lq)
    if alpha < 1.0 and np.any(supp_p & ~supp_q):
        return math.inf  # some P(x)/Q(x)^(1-alpha) hits a/0
    both = supp_p & supp_q
    log_c = log2sumexp(lp[both] + (alpha - 1.0) * lq[both])
    coeff = alpha / (1.0 - alpha)
    if math.isinf(log_c):
        # only reachable with alpha > 1 and disjoint supports
        return math.inf
    value = log_a - log_b / (1.0 - alpha) + coeff * log_c
    if -1e-12 < value < 0.0:
        value = 0.0
    return value


def sundaresan_divergence(p, q, alpha: float) -> DivergenceValue:
    """Delta_alpha(p||q) in bits.

    Accepts Pmf or JointLaw arguments.  +inf exactly when (0 < alpha < 1 and
    supp(p) is not contained in supp(q)) or (alpha > 1 and the supports are
    disjoint).
    """
    _check_alpha(alpha)
    _check_alphabets(p, q)
    return DivergenceValue(alpha, _delta_bits(p.log_masses, q.log_masses, alpha))


def renyi_divergence(p, q, alpha: float) -> float:
    """Renyi divergence (1/(alpha-1)) * log2 sum P^alpha Q^(1-alpha) in bits.

    Kept around for comparison: it shares only the nonnegativity and the
    alpha -> 1 limit with the Sundaresan divergence.
    """
    _check_alpha(alpha)
    _check_alphabets(p, q)
    lp, lq = p.log_masses, q.log_masses
    supp_p = np.isfinite(lp)
    supp_q = np.isfinite(lq)
    if alpha > 1.0 and np.any(supp_p & ~supp_q):
        return math.inf
    both = supp_p & supp_q
    s = log2sumexp(alpha * lp[both] + (1.0 - alpha) * lq[both])
    return s / (alpha - 1.0)


@dataclass(frozen=True)
class DivergenceLimits:
    """Closed-form limits of Delta_alpha plus numeric probes near them."""

    kl: float                # alpha -> 1
    order0: float            # alpha -> 0: log2(|supp q| / |supp p|)
    order_inf: float         # alpha -> inf: log2(max p / avg of p over argmax q)
    probes: dict[float, float]


_PROBE_ALPHAS = (1e-3, 1.0 - 1e-4, 1.0 + 1e-4, 1e3)


def divergence_limits(p: Pmf, q: Pmf) -> DivergenceLimits:
    """The three closed-form limits of Delta_alpha(p||q) together with
    numeric probes at alpha in {1e-3, 1 -/+ 1e-4, 1e3}.

    Requires supp(p) <= supp(q) (the alpha -> 0 limit needs it).
    """
    _check_alphabets(p, q)
    supp_p = p.masses > 0.0
    supp_q = q.masses > 0.0
    if np.any(supp_p & ~supp_q):
        raise SupportViolationError("supp(p) must be contained in supp(q)")
    order0 = math.log2(int(supp_q.sum()) / int(supp_p.sum()))
    qmax = float(q.masses.max())
    argmax = q.masses >= qmax - 1e-12
    avg = float(p.masses[argmax].mean())
    pmax = float(p.masses.max())
    order_inf = math.inf if avg == 0.0 else math.log2(pmax / avg)
    probes = {a: _delta_bits(p.log_masses, q.log_masses, a) for a in _PROBE_ALPHAS}
    return DivergenceLimits(
        kl=kl_divergence(p, q), order0=order0, order_inf=order_inf, probes=probes
    )


def product_additivity_check(p: Pmf, q: Pmf, alpha: float, n: int,
                             cap: int = DEFAULT_TUPLE_CAP) -> bool:
    """True iff Delta_alpha(p^n || q^n) = n * Delta_alpha(p || q) within
    1e-9 * n (infinities on both sides also count as equal)."""
    _check_alpha(alpha)
    _check_alphabets(p, q)
    single = _delta_bits(p.log_masses, q.log_masses, alpha)
    jp = iid_joint(p, n, cap)
    jq = iid_joint(q, n, cap)
    joint = _delta_bits(jp.log_masses, jq.log_masses, alpha)
    if math.isinf(single) or math.isinf(joint):
        return math.isinf(single) and math.isinf(joint)
    return abs(joint - n * single) <= 1e-9 * n


def mismatched_bound(p: Pmf, q: Pmf, m: int, rho: float) -> tuple[float, TaskEncoder]:
    """Build the encoder from q, and return the moment bound it obeys under
    p: 1 + 2^(rho*(H(p) + Delta(p||q) - log2 Mtilde)), entropy and
    divergence both of order 1/(1+rho).

    The bound is +inf (valid but vacuous) when supp(p) is not contained in
    supp(q).
    """
    _check_rho(rho)
    _check_alphabets(p, q)
    _check_m(m, q.size)
    part = build_partition(lambda_from_law(q, rho, m))
    enc = TaskEncoder(description_count=m, partition=part)
    rt = 1.0 / (1.0 + rho)
    delta = _delta_bits(p.log_masses, q.log_masses, rt)
    mt = m_tilde(m, p.size)
    if math.isinf(delta):
        return math.inf, enc
    bound = 1.0 + _exp2(rho * (renyi_rho(p, rho) + delta - math.log2(mt)))
    return bound, enc


def mismatched_block_experiment(p: Pmf, q: Pmf, rate, rho: float, n: int,
                                cap: int = DEFAULT_TUPLE_CAP) -> MomentReport:
    """Block-length experiment with the encoder designed for q^n but the
    moment taken under p^n.  The report's upper bound carries the
    per-letter penalty Delta_{1/(1+rho)}(p||q) in its exponent."""
    _check_rho(rho)
    _check_alphabets(p, q)
    rate_fr = as_rate(rate)
    jp = iid_joint(p, n, cap)
    jq = iid_joint(q, n, cap)
    m = floor_pow2(rate_fr * n)
    threshold = n * math.log2(p.size) + 2.0
    if not m > threshold:
        from .errors import RateTooSmallError

        raise RateTooSmallError(
            f"floor(2^(nR)) = {m} at n = {n} does not exceed "
            f"n*log2|X| + 2 = {threshold:.6g}"
        )
    pn = jp.as_pmf()
    enc = build_encoder(jq.as_pmf(), rho, m)
    rt = 1.0 / (1.0 + rho)
    delta_n = _delta_bits(jp.log_masses, jq.log_masses, rt)
    mt = m_tilde(m, pn.size)
    if math.isinf(delta_n):
        upper = math.inf
    else:
        upper = 1.0 + _exp2(rho * (renyi_rho(jp, rho) + delta_n - math.log2(mt)))
    return MomentReport(
        n=n,
        rate=float(rate_fr),
        rho=rho,
        description_count=m,
        used_count=enc.used_count,
        moment=moment(pn, enc, rho),
        lower=lower_bound(pn, m, rho),
        upper=upper,
        m_tilde=mt,
        delta=float(rate_fr) - math.log2(mt) / n,
        mismatch_bits=_delta_bits(p.log_masses, q.log_masses, rt),
    )
