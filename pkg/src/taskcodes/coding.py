"""Fixed-description-count task encoders and their moment bounds.

An encoder f: X -> {1, ..., M} forces every task sharing a description to
be performed; the figure of merit is the rho-th moment
sum_x P(x) |f^-1(f(x))|^rho.  The constructed encoder derives per-element
cardinality budgets from the law (size roughly proportional to
P(x)^(-1/(1+rho))) and feeds them to the greedy partition builder.  The
moment of any encoder is sandwiched between two exponentials in the Renyi
entropy of order 1/(1+rho).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import (
    AlphabetMismatchError,
    AlphabetTooLargeError,
    DescriptionCountTooSmallError,
    InvalidOrderError,
    RateTooSmallError,
)
from .partitions import LambdaBudget, Partition, build_partition
from .probability import DEFAULT_TUPLE_CAP, JointLaw, Pmf, renyi_rho


@dataclass(frozen=True)
class TaskEncoder:
    """An encoder f: X -> {1, ..., M} given by its induced partition; block
    m (0-based) carries description id m + 1.  Description ids above the
    number of nonempty preimages stay unused."""

    description_count: int
    partition: Partition

    def __post_init__(self) -> None:
        if self.partition.num_blocks > self.description_count:
            raise ValueError(
                f"{self.partition.num_blocks} preimages exceed M = "
                f"{self.description_count}"
            )

    @property
    def used_count(self) -> int:
        """N: the number of nonempty preimages."""
        return self.partition.num_blocks

    @property
    def assignment(self) -> tuple[int, ...]:
        """Description id per element, 1-based."""
        return tuple(self.partition.block_of(x) + 1
                     for x in range(self.partition.ground_size))


@dataclass
class MomentReport:
    """One row of a block-length experiment."""

    n: int
    rate: float
    rho: float
    description_count: int
    used_count: int
    moment: float
    lower: float
    upper: float
    m_tilde: float
    delta: float
    mismatch_bits: float | None = None

    CSV_HEADER = "n,R,rho,M,N,moment,lower,upper,m_tilde,delta"

    def csv_row(self) -> str:
        def fmt(v: float) -> str:
            return "inf" if math.isinf(v) else f"{v:.12g}"

        return ",".join([
            str(self.n), fmt(self.rate), fmt(self.rho),
            str(self.description_count), str(self.used_count),
            fmt(self.moment), fmt(self.lower), fmt(self.upper),
            fmt(self.m_tilde), fmt(self.delta),
        ])


def _check_rho(rho: float) -> None:
    if not (rho > 0.0):
        raise InvalidOrderError(f"rho must be positive, got {rho}")


def _check_m(m: int, alphabet_size: int) -> float:
    threshold = math.log2(alphabet_size) + 2.0
    if not m > threshold:
        raise DescriptionCountTooSmallError(
            f"need M > log2|X| + 2 = {threshold:.6g}, got M = {m}"
        )
    return threshold


def lambda_from_law(p: Pmf, rho: float, m: int) -> LambdaBudget:
    """Budgets ceil(beta * P(x)^(-1/(1+rho))) (inf on zero mass), with beta
    chosen just large enough that the greedy builder fits in M blocks:
    beta = 2 * sum_x P(x)^(1/(1+rho)) / (M - log2|X| - 2)."""
    _check_rho(rho)
    threshold = _check_m(m, p.size)
    rt = 1.0 / (1.0 + rho)
    supp = p.masses > 0.0
    beta = 2.0 * math.fsum(p.masses[supp] ** rt) / (m - threshold)
    budgets: list[float] = []
    for mass in p.masses:
        if mass <= 0.0:
            budgets.append(math.inf)
        else:
            budgets.append(max(1, math.ceil(beta * mass ** (-rt))))
    return LambdaBudget(budgets)


def build_encoder(p: Pmf, rho: float, m: int) -> TaskEncoder:
    """Construct the encoder induced by the greedy partition of the
    law-derived budgets.  Requires M > log2|X| + 2."""
    part = build_partition(lambda_from_law(p, rho, m))
    return TaskEncoder(description_count=m, partition=part)


def moment(p: Pmf, enc: TaskEncoder, rho: float) -> float:
    """The rho-th moment sum_x P(x) L(x)^rho of the encoder under p."""
    _check_rho(rho)
    if p.size != enc.partition.ground_size:
        raise AlphabetMismatchError(
            f"pmf over {p.size} symbols vs encoder over "
            f"{enc.partition.ground_size}"
        )
    sizes = np.array(enc.partition.cardinalities(), dtype=float)
    return math.fsum(p.masses * sizes ** rho)


def _exp2(exponent: float) -> float:
    if exponent > 1023.0:
        return math.inf
    return 2.0 ** exponent


def lower_bound(p, m: int, rho: float) -> float:
    """Converse bound 2^(rho*(H_{1/(1+rho)}(p) - log2 M)), valid for every
    encoder with M descriptions."""
    _check_rho(rho)
    if m < 1:
        raise ValueError("M must be a positive integer")
    return _exp2(rho * (renyi_rho(p, rho) - math.log2(m)))


def m_tilde(m: int, alphabet_size: int) -> float:
    """The effective description count (M - log2|X| - 2) / 4."""
    return (m - math.log2(alphabet_size) - 2.0) / 4.0


def upper_bound(p, m: int, rho: float) -> float:
    """Achievability bound 1 + 2^(rho*(H_{1/(1+rho)}(p) - log2 Mtilde));
    +inf when M <= log2|X| + 2."""
    _check_rho(rho)
    size = p.size if isinstance(p, Pmf) else int(p.log_masses.size)
    mt = m_tilde(m, size)
    if mt <= 0.0:
        return math.inf
    return 1.0 + _exp2(rho * (renyi_rho(p, rho) - math.log2(mt)))


def _growth_strings(n: int, max_blocks: int):
    """Restricted growth strings of length n with at most max_blocks values,
    in lexicographic order."""
    a = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield a
            return
        for v in range(min(used + 1, max_blocks)):
            a[i] = v
            yield from rec(i + 1, max(used, v + 1))

    yield from rec(1, 1)


def brute_force_optimum(p: Pmf, m: int, rho: float) -> tuple[float, Partition]:
    """Exact minimum of the rho-th moment over all partitions into at most m
    nonempty blocks, by enumerating restricted growth strings over supp(p).

    Zero-mass elements are parked in one extra overflow block when m leaves
    room for it (they only hurt the moment when mixed with positive mass).
    Ties go to the lexicographically smallest growth string.  Guarded to
    |X| <= 10.
    """
    _check_rho(rho)
    if m < 1:
        raise ValueError("M must be a positive integer")
    if p.size > 10:
        raise AlphabetTooLargeError(f"|X| = {p.size} > 10")
    supp = [int(x) for x in p.support]
    zeros = [x for x in range(p.size) if x not in set(supp)]
    if zeros and m == 1:
        part = Partition([list(range(p.size))])
        return math.fsum(p.masses * float(p.size) ** rho), part

    limit = m - 1 if zeros else m
    masses = p.masses
    best_val = math.inf
    best_blocks: list[list[int]] | None = None
    for rgs in _growth_strings(len(supp), limit):
        nblocks = max(rgs) + 1
        groups: list[list[int]] = [[] for _ in range(nblocks)]
        for elem, b in zip(supp, rgs):
            groups[b].append(elem)
        val = math.fsum(
            math.fsum(masses[x] for x in g) * float(len(g)) ** rho for g in groups
        )
        if val < best_val - 1e-15:
            best_val = val
            best_blocks = [list(g) for g in groups]
    assert best_blocks is not None
    if zeros:
        best_blocks.append(zeros)
    return best_val, Partition(best_blocks)


def as_rate(rate) -> Fraction:
    """Normalize a rate to an exact Fraction.  Strings and Fractions are
    taken verbatim; floats are rounded to 6 decimal places first so that
    floor(2^(nR)) is well defined."""
    if isinstance(rate, Fraction):
        return rate
    if isinstance(rate, str):
        return Fraction(rate)
    if isinstance(rate, int):
        return Fraction(rate)
    return Fraction(f"{float(rate):.6f}")


def floor_pow2(exponent: Fraction) -> int:
    """floor(2**exponent) exactly for rational exponents.

    Uses mpmath with enough working precision that the only way the floor
    could be wrong is if 2**exponent were within 2^-60 of an integer, which
    for non-integer rational exponents does not happen at desk scale.
    """
    if exponent < 0:
        return 0
    if exponent.denominator == 1:
        return 1 << int(exponent)
    whole = int(exponent.numerator // exponent.denominator)
    with mpmath.workprec(whole + 80):
        val = mpmath.mpf(exponent.numerator) / mpmath.mpf(exponent.denominator)
        return int(mpmath.floor(mpmath.power(2, val)))


def block_experiment(law: JointLaw, rate, rho: float) -> MomentReport:
    """Build the encoder for an n-tuple law with M = floor(2^(nR))
    descriptions and report its moment next to both bounds.

    delta = R - log2(Mtilde)/n is the finite-n slack between the upper
    bound's exponent and the rate; it vanishes as n grows.
    """
    _check_rho(rho)
    rate_fr = as_rate(rate)
    n = law.n
    m = floor_pow2(rate_fr * n)
    threshold = n * math.log2(law.base) + 2.0
    if not m > threshold:
        raise RateTooSmallError(
            f"floor(2^(nR)) = {m} at n = {n} does not exceed "
            f"n*log2|X| + 2 = {threshold:.6g}"
        )
    p = law.as_pmf()
    enc = build_encoder(p, rho, m)
    mt = m_tilde(m, p.size)
    return MomentReport(
        n=n,
        rate=float(rate_fr),
        rho=rho,
        description_count=m,
        used_count=enc.used_count,
        moment=moment(p, enc, rho),
        lower=lower_bound(p, m, rho),
        upper=upper_bound(p, m, rho),
        m_tilde=mt,
        delta=float(rate_fr) - math.log2(mt) / n,
    )
