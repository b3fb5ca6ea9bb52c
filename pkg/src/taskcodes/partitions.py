"""Partitions of finite sets under per-element cardinality budgets.

A partition of {0, ..., k-1} into M nonempty blocks satisfies the exact
counting identity sum_x 1/L(x) = M, where L(x) is the size of the block
containing x.  The converse fails: a budget map lambda with
sum_x 1/lambda(x) = mu does not guarantee a partition into ceil(mu) blocks,
but a greedy sweep always fits within
min_{a>1} floor(a*mu + log_a(k) + 2) blocks while keeping every block that
contains x no larger than min(lambda(x), k).
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import NamedTuple

from .errors import GroundSetMismatchError

Budget = int | float  # positive int, or math.inf


class Partition:
    """An exact partition of {0, ..., k-1} into nonempty blocks.

    Block order is preserved as given (the greedy constructor relies on it);
    equality ignores order.
    """

    __slots__ = ("blocks", "_block_of")

    def __init__(self, blocks) -> None:
        cleaned = []
        for block in blocks:
            items = sorted(block)
            if not items:
                raise ValueError("empty block")
            cleaned.append(tuple(items))
        seen: dict[int, int] = {}
        for b, items in enumerate(cleaned):
            for x in items:
                if x in seen:
                    raise ValueError(f"element {x} appears in more than one block")
                seen[x] = b
        size = len(seen)
        if not cleaned or sorted(seen) != list(range(size)):
            raise ValueError("blocks must cover a dense range 0..k-1")
        self.blocks = tuple(cleaned)
        self._block_of = tuple(seen[x] for x in range(size))

    @property
    def ground_size(self) -> int:
        return len(self._block_of)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, x: int) -> int:
        return self._block_of[x]

    def block_size_of(self, x: int) -> int:
        """L(x): the cardinality of the block containing x."""
        return len(self.blocks[self._block_of[x]])

    def cardinalities(self) -> list[int]:
        """L(x) for every x in ground-set order."""
        sizes = [len(b) for b in self.blocks]
        return [sizes[b] for b in self._block_of]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return set(map(frozenset, self.blocks)) == set(map(frozenset, other.blocks))

    def __hash__(self) -> int:
        return hash(frozenset(map(frozenset, self.blocks)))

    def __repr__(self) -> str:
        return f"Partition({[list(b) for b in self.blocks]!r})"

    def to_text(self) -> str:
        """One line per block, space-separated ids, blocks ordered by their
        smallest element."""
        ordered = sorted(self.blocks, key=lambda b: b[0])
        return "\n".join(" ".join(str(x) for x in block) for block in ordered) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        blocks = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                blocks.append([int(v) for v in line.split()])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed block") from None
        return cls(blocks)


class LambdaBudget:
    """Cardinality budgets lambda: X -> {1, 2, ...} union {inf}.

    mu = sum_x 1/lambda(x) is kept as an exact rational (1/inf = 0) so the
    floor in the subset-count bound never sits on a float boundary.
    """

    __slots__ = ("budgets",)

    def __init__(self, budgets) -> None:
        cleaned: list[Budget] = []
        for b in budgets:
            if b == math.inf:
                cleaned.append(math.inf)
                continue
            ib = int(b)
            if ib != b or ib < 1:
                raise ValueError(f"budget must be a positive integer or inf, got {b!r}")
            cleaned.append(ib)
        if not cleaned:
            raise ValueError("need at least one budget")
        self.budgets = tuple(cleaned)

    @property
    def size(self) -> int:
        return len(self.budgets)

    def __len__(self) -> int:
        return self.size

    @property
    def mu(self) -> Fraction:
        """sum_x 1/lambda(x) as an exact rational."""
        counts = Counter(b for b in self.budgets if b != math.inf)
        return sum((Fraction(c, b) for b, c in counts.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"LambdaBudget({list(self.budgets)!r})"


def kraft_sum(part: Partition) -> Fraction:
    """sum_x 1/L(x) as an exact rational; always equals the block count."""
    counts = Counter(len(b) for b in part.blocks for _ in b)
    return sum((Fraction(c, size) for size, c in counts.items()), Fraction(0))


_GRID_POINTS = 512


def subset_count_bound_detail(mu, alphabet_size: int,
                              grid_points: int = _GRID_POINTS) -> tuple[int, float]:
    """Minimize floor(a*mu + log_a(k) + 2) over a > 1 on a geometric grid.

    Returns (bound, argmin alpha).  The grid covers (1, max(4, k)] and always
    includes a = 2, the value used by the single-shot encoder analysis.  Any
    grid point yields a valid upper bound, so grid search is safe even though
    the expression is not proven unimodal.
    """
    if alphabet_size < 1:
        raise ValueError("alphabet size must be positive")
    mu_f = float(mu)
    if mu_f < 0:
        raise ValueError("mu must be nonnegative")
    log_k = math.log(alphabet_size)
    hi = float(max(4, alphabet_size))
    alphas = [hi ** (i / grid_points) for i in range(1, grid_points + 1)]
    alphas.append(2.0)
    best = None
    best_alpha = 2.0
    for a in alphas:
        # +1e-12 guards the floor against float noise at exact-integer values
        val = math.floor(a * mu_f + log_k / math.log(a) + 2.0 + 1e-12)
        if best is None or val < best:
            best, best_alpha = val, a
    return max(int(best), 1), best_alpha


def subset_count_bound(mu, alphabet_size: int) -> int:
    """The minimized floor(a*mu + log_a(k) + 2); see subset_count_bound_detail."""
    return subset_count_bound_detail(mu, alphabet_size)[0]


def build_partition(budget: LambdaBudget) -> Partition:
    """Greedy budget-respecting partition.

    Elements with lambda(x) >= k form one absorbing block; the rest are
    swept in order of increasing (lambda(x), x), each new block taking
    lambda(head) elements (or all that remain).  The result satisfies
    L(x) <= min(lambda(x), k) and uses at most subset_count_bound(mu, k)
    blocks.
    """
    budgets = budget.budgets
    size = len(budgets)
    absorbing = [x for x in range(size) if budgets[x] >= size]
    rest = sorted((x for x in range(size) if budgets[x] < size),
                  key=lambda x: (budgets[x], x))
    blocks: list[list[int]] = []
    if absorbing:
        blocks.append(absorbing)
    i = 0
    while i < len(rest):
        quota = int(budgets[rest[i]])
        remaining = len(rest) - i
        take = remaining if remaining <= quota else quota
        blocks.append(rest[i:i + take])
        i += take
    return Partition(blocks)


class BudgetCheck(NamedTuple):
    ok: bool
    violator: int | None
    message: str


def verify_budget(part: Partition, budget: LambdaBudget) -> BudgetCheck:
    """Check L(x) <= min(lambda(x), k) for every element; on failure report
    the first violating element."""
    if part.ground_size != budget.size:
        raise GroundSetMismatchError(
            f"partition covers {part.ground_size} elements, budget has {budget.size}"
        )
    k = part.ground_size
    for x in range(k):
        limit = min(budget.budgets[x], k)
        got = part.block_size_of(x)
        if got > limit:
            return BudgetCheck(False, x, f"element {x}: block size {got} > {limit}")
    return BudgetCheck(True, None, "ok")
