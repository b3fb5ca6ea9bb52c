"""Shared deterministic instance generators for the property suites.

Every random draw is keyed by (seed, instance index) so reruns are
reproducible and individual failing instances can be replayed.
"""
import math
import random

import numpy as np

from taskcodes import LambdaBudget, Partition, Pmf


def rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_pmf(r: random.Random, size: int, zeros: int = 0) -> Pmf:
    """A PMF with masses bounded away from 0 (plus optional exact zeros)."""
    masses = [r.uniform(0.1, 1.0) for _ in range(size - zeros)] + [0.0] * zeros
    r.shuffle(masses)
    total = sum(masses)
    return Pmf([m / total for m in masses])


def random_pmf_gapped(r: random.Random, size: int) -> Pmf:
    """A full-support PMF whose largest mass clearly beats the runner-up,
    so that large-order divergence probes sit near their limit."""
    masses = np.array([r.uniform(0.1, 1.0) for _ in range(size)])
    top = int(masses.argmax())
    while np.sort(masses)[-2] / masses[top] > 0.8:
        masses[top] *= 1.5
    return Pmf(masses / masses.sum())


def random_partition(r: random.Random, size: int) -> Partition:
    """Uniform-ish random partition via a random restricted growth string."""
    labels = [0]
    used = 1
    for _ in range(1, size):
        v = r.randrange(used + 1)
        labels.append(v)
        used = max(used, v + 1)
    blocks = [[] for _ in range(used)]
    for x, b in enumerate(labels):
        blocks[b].append(x)
    return Partition(blocks)


def random_budget(r: random.Random, size: int) -> LambdaBudget:
    """Budgets drawn from {1, ..., 2*size} with occasional infinities."""
    budgets = [
        math.inf if r.random() < 0.15 else r.randint(1, 2 * size)
        for _ in range(size)
    ]
    return LambdaBudget(budgets)
