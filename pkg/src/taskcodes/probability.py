"""Finite probability models and the entropy functionals built on them.

All logarithms are base 2 and all entropies are in bits.  Zero masses are
represented as -inf in the log domain; products over tuples are accumulated
as sums of log-masses so that joint laws never underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AlphabetMismatchError, CapExceededError, InvalidOrderError

#: Default ceiling on the number of tuples any enumeration may produce.
DEFAULT_TUPLE_CAP = 1 << 22

# Inputs whose total mass is further than this from 1 are rejected instead
# of silently rescaled.
_SUM_WINDOW = 1e-9


def log2sumexp(log_values: np.ndarray) -> float:
    """Return log2(sum(2**v for v in log_values)), stable for large spreads.

    Entries of -inf contribute nothing; an all--inf input returns -inf.
    """
    arr = np.asarray(log_values, dtype=float)
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        return -math.inf
    top = float(finite.max())
    return top + math.log2(float(np.exp2(finite - top).sum()))


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0.0) or alpha == 1.0:
        raise InvalidOrderError(f"order alpha must be positive and != 1, got {alpha}")


class Pmf:
    """A probability mass function over the dense alphabet 0..k-1.

    Input masses must sum to one within 1e-9 and are rescaled to sum to one
    at construction; grossly unnormalized input is rejected rather than
    silently fixed.
    """

    __slots__ = ("masses", "log_masses")

    def __init__(self, masses) -> None:
        arr = np.array(masses, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("need a nonempty 1-D sequence of masses")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("masses must be finite and nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_WINDOW:
            raise ValueError(
                f"masses sum to {total!r}; expected 1 within {_SUM_WINDOW}"
            )
        arr /= total
        with np.errstate(divide="ignore"):
            logs = np.log2(arr)
        arr.flags.writeable = False
        logs.flags.writeable = False
        self.masses = arr
        self.log_masses = logs

    @property
    def size(self) -> int:
        return int(self.masses.size)

    def __len__(self) -> int:
        return self.size

    @property
    def support(self) -> np.ndarray:
        """Indices with strictly positive mass."""
        return np.flatnonzero(self.masses > 0.0)

    def approx_equal(self, other: "Pmf", tol: float = 1e-12) -> bool:
        return self.size == other.size and bool(
            np.all(np.abs(self.masses - other.masses) <= tol)
        )

    def __repr__(self) -> str:
        return f"Pmf({self.masses.tolist()!r})"


@dataclass(frozen=True)
class MarkovSource:
    """A time-invariant Markov chain: initial distribution + row-stochastic
    transition matrix over one shared state alphabet."""

    initial: Pmf
    transitions: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = np.array(self.transitions, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("transition matrix must be square")
        if mat.shape[0] != self.initial.size:
            raise ValueError("initial distribution and transition matrix "
                             "must share one state alphabet")
        if not np.all(np.isfinite(mat)) or np.any(mat < 0.0):
            raise ValueError("transition probabilities must be finite and nonnegative")
        sums = mat.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > _SUM_WINDOW)
        if bad.size:
            raise ValueError(f"transition row {bad[0]} sums to {sums[bad[0]]!r}")
        mat /= sums[:, None]
        mat.flags.writeable = False
        object.__setattr__(self, "transitions", mat)

    @property
    def num_states(self) -> int:
        return self.initial.size


@dataclass(frozen=True)
class JointLaw:
    """The law of an n-tuple over a base alphabet, stored as log2-masses.

    Tuple (x1, ..., xn) lives at index x1*base^(n-1) + ... + xn.
    """

    n: int
    base: int
    log_masses: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 1 or self.base < 1:
            raise ValueError("block length and base alphabet size must be positive")
        arr = np.asarray(self.log_masses, dtype=float)
        if arr.shape != (self.base ** self.n,):
            raise ValueError("log-mass vector must have base**n entries")
        total = log2sumexp(arr)
        if abs(total) > 1e-9:
            raise ValueError(f"joint masses sum to 2**{total}, expected 1")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "log_masses", arr)

    @property
    def size(self) -> int:
        return int(self.log_masses.size)

    def as_pmf(self) -> Pmf:
        return Pmf(np.exp2(self.log_masses))


def _check_cap(tuples: int, cap: int) -> None:
    if tuples > cap:
        raise CapExceededError(f"enumeration of {tuples} tuples exceeds cap {cap}")


def renyi_entropy(dist, alpha: float) -> float:
    """Renyi entropy of order alpha in bits: (1/(1-alpha)) * log2 sum p^alpha.

    Accepts any object with a ``log_masses`` attribute (Pmf or JointLaw).
    """
    _check_alpha(alpha)
    return log2sumexp(alpha * dist.log_masses) / (1.0 - alpha)


def renyi_rho(dist, rho: float) -> float:
    """Renyi entropy of order 1/(1+rho), the order governing the rho-th
    moment of the number of performed tasks."""
    if not (rho > 0.0):
        raise InvalidOrderError(f"rho must be positive, got {rho}")
    return renyi_entropy(dist, 1.0 / (1.0 + rho))


def iid_joint(p: Pmf, n: int, cap: int = DEFAULT_TUPLE_CAP) -> JointLaw:
    """The n-fold product law of p."""
    if n < 1:
        raise ValueError("block length must be positive")
    _check_cap(p.size ** n, cap)
    acc = p.log_masses.copy()
    for _ in range(n - 1):
        acc = (acc[:, None] + p.log_masses[None, :]).ravel()
    return JointLaw(n=n, base=p.size, log_masses=acc)


def markov_joint(src: MarkovSource, n: int, cap: int = DEFAULT_TUPLE_CAP) -> JointLaw:
    """The joint law of the first n states of a Markov chain."""
    if n < 1:
        raise ValueError("block length must be positive")
    base = src.num_states
    _check_cap(base ** n, cap)
    with np.errstate(divide="ignore"):
        log_t = np.log2(src.transitions)
    acc = src.initial.log_masses.copy()
    for _ in range(n - 1):
        last = np.arange(acc.size) % base
        acc = (acc[:, None] + log_t[last, :]).ravel()
    return JointLaw(n=n, base=base, log_masses=acc)


def markov_renyi_sum(src: MarkovSource, alpha: float, n: int) -> float:
    """H_alpha(X^n) for a Markov chain, by the O(n * states^2) vector
    recursion v1(x) = initial(x)^alpha, v_{k+1}(x') = sum_x v_k(x) T(x,x')^alpha.

    Runs entirely in the log domain, so large n cannot underflow.
    """
    _check_alpha(alpha)
    if n < 1:
        raise ValueError("block length must be positive")
    with np.errstate(divide="ignore"):
        log_t = np.log2(src.transitions)
    lv = alpha * src.initial.log_masses
    step = alpha * log_t
    for _ in range(n - 1):
        lv = np.array([log2sumexp(lv + step[:, j]) for j in range(src.num_states)])
    return log2sumexp(lv) / (1.0 - alpha)


def kl_divergence(p: Pmf, q: Pmf) -> float:
    """Kullback-Leibler divergence D(p||q) in bits; +inf when supp(p) is not
    contained in supp(q)."""
    if p.size != q.size:
        raise AlphabetMismatchError(f"alphabet sizes differ: {p.size} vs {q.size}")
    supp = p.masses > 0.0
    if np.any(q.masses[supp] == 0.0):
        return math.inf
    pm = p.masses[supp]
    qm = q.masses[supp]
    return math.fsum(pm * np.log2(pm / qm))


def read_pmf_text(text: str) -> Pmf:
    """Parse a PMF from plain text: one probability per line.

    Blank lines and lines starting with '#' are skipped.  Raises ValueError
    naming the offending line number on malformed input.
    """
    masses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            masses.append(float(line))
        except ValueError:
            raise ValueError(f"line {lineno}: not a probability: {line!r}") from None
    if not masses:
        raise ValueError("no probabilities found")
    return Pmf(masses)


def read_markov_text(text: str) -> MarkovSource:
    """Parse a Markov source: first line = state count, then the initial
    row, then one transition row per state, whitespace-separated."""
    rows = []
    numbered = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line)
        numbered.append(lineno)
    if not rows:
        raise ValueError("empty Markov source file")
    try:
        k = int(rows[0])
    except ValueError:
        raise ValueError(f"line {numbered[0]}: state count must be an integer") from None
    if k < 1:
        raise ValueError(f"line {numbered[0]}: state count must be positive")
    if len(rows) != k + 2:
        raise ValueError(f"expected {k + 2} data lines for {k} states, got {len(rows)}")

    def parse_row(idx: int, expect: int) -> list[float]:
        parts = rows[idx].split()
        if len(parts) != expect:
            raise ValueError(
                f"line {numbered[idx]}: expected {expect} entries, got {len(parts)}"
            )
        try:
            return [float(v) for v in parts]
        except ValueError:
            raise ValueError(f"line {numbered[idx]}: malformed number") from None

    initial = Pmf(parse_row(1, k))
    transitions = [parse_row(2 + i, k) for i in range(k)]
    return MarkovSource(initial=initial, transitions=np.array(transitions))
