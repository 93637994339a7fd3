"""Entropy-based utility of a choice set.

Intrinsic utility is the expected reward of a choice set.  Extrinsic utility is
the choice entropy in bits scaled by the number of available objects ``K``;
with ``K`` objects there are ``2**K`` take/leave combinations.
"""
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InputError, InvalidDistributionError, PosteriorUndefinedError

SUM_TOL = 1e-9
MAX_ENUMERABLE_K = 20
LN2 = np.log(2.0)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability vector over finitely many outcomes.

    Inputs within ``SUM_TOL`` of unit mass are renormalized exactly.
    """

    probs: np.ndarray

    def __init__(self, probs: Sequence[float]):
        p = np.asarray(probs, dtype=float).ravel()
        if p.size == 0:
            raise InvalidDistributionError("distribution needs at least one entry")
        for j, v in enumerate(p):
            if not np.isfinite(v):
                raise InvalidDistributionError(f"probs[{j}] = {v} is not finite")
            if v < 0:
                raise InvalidDistributionError(f"probs[{j}] = {v} is negative")
        s = p.sum()
        if abs(s - 1.0) > SUM_TOL:
            raise InvalidDistributionError(f"probabilities sum to {s!r}, not 1")
        p = p / s
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))


def as_distribution(d):
    return d if isinstance(d, DiscreteDistribution) else DiscreteDistribution(d)


@dataclass(frozen=True)
class ChoiceSet:
    """Rewards and their probabilities for the choices of an object set.

    ``probs`` are per-choice probabilities of the reward being realized.  They
    form a distribution over the ``2**K`` power-set choices in the entropy
    reading; in the motivational-strength reading (``N`` alternatives) each is
    only required to lie in ``[0, 1]``.  ``prob_positive_utility`` defaults to
    1 for every choice (the certainty-calibrated model).
    """

    object_count: int
    rewards: tuple
    probs: tuple
    prob_positive_utility: tuple = field(default=None)

    def __post_init__(self):
        rewards = tuple(float(r) for r in self.rewards)
        probs = tuple(float(p) for p in self.probs)
        if self.object_count < 0:
            raise InputError(f"object count must be >= 0, got {self.object_count}")
        if len(rewards) != len(probs):
            raise InputError(f"{len(rewards)} rewards but {len(probs)} probabilities")
        for j, p in enumerate(probs):
            if not 0.0 <= p <= 1.0:
                raise InvalidDistributionError(f"probs[{j}] = {p} outside [0, 1]")
        ppu = self.prob_positive_utility
        ppu = (1.0,) * len(probs) if ppu is None else tuple(float(q) for q in ppu)
        if len(ppu) != len(probs):
            raise InputError(
                f"{len(ppu)} positive-utility probabilities for {len(probs)} choices")
        for j, q in enumerate(ppu):
            if not 0.0 <= q <= 1.0:
                raise InputError(f"prob_positive_utility[{j}] = {q} outside [0, 1]")
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "prob_positive_utility", ppu)

    def __len__(self):
        return len(self.rewards)

    @property
    def distribution(self):
        return DiscreteDistribution(self.probs)

    @property
    def is_power_set(self):
        return len(self) == 2 ** self.object_count


class CompositeUtility(NamedTuple):
    intrinsic: float
    extrinsic: float


def _entropy(p):
    nz = p[p > 0]
    return float(max(0.0, -(nz * np.log2(nz)).sum()))


def shannon_entropy(d) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    return _entropy(as_distribution(d).probs)


def extrinsic_utility(d, K: int) -> float:
    if K < 0:
        raise InputError(f"K must be >= 0, got {K}")
    return K * shannon_entropy(d)


def project_simplex(v):
    """Euclidean projection of each row of ``v`` onto the probability simplex."""
    v = np.atleast_2d(v)
    n = v.shape[1]
    u = np.sort(v, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(1, n + 1)
    rho = np.count_nonzero(u - css / ind > 0, axis=1)
    theta = css[np.arange(v.shape[0]), rho - 1] / rho
    return np.maximum(v - theta[:, None], 0.0)


def projected_gradient_max(K, starts, step=0.5, max_iter=10_000, tol=1e-10):
    """Maximize ``K * H(p)`` over the simplex by projected gradient ascent.

    ``starts`` holds one interior starting point per row.  The gradient is
    preconditioned by the inverse curvature at the uniform point,
    ``ln2 * 2**-K / K``, which makes ``step`` a dimensionless contraction
    rate; the raw gradient with a fixed step diverges once ``K >= 3``.
    Each row halves its step whenever a trial point lowers the entropy, so
    starts close to a face of the simplex cannot fall into a cycle.

    Returns ``(points, iterations)``.
    """
    p = np.array(starts, dtype=float, ndmin=2)
    n = p.shape[1]
    if n == 1 or K == 0:
        return np.ones_like(p) / n, 0
    scale = LN2 / (K * n)
    eta = np.full(p.shape[0], float(step))
    value = _row_entropy(p)
    for it in range(1, max_iter + 1):
        grad = -K * (np.log2(np.maximum(p, 1e-300)) + 1.0 / LN2)
        nxt = project_simplex(p + (eta * scale)[:, None] * grad)
        new_value = _row_entropy(nxt)
        # the slack absorbs rounding in the entropy sum near the optimum
        ok = new_value >= value - 1e-9
        done = np.abs(nxt - p).max(axis=1) < tol
        p[ok], value[ok] = nxt[ok], new_value[ok]
        eta[ok] = np.minimum(2.0 * eta[ok], step)
        eta[~ok] *= 0.5
        if done.all():
            return p, it
    return p, max_iter


def _row_entropy(p):
    logs = np.log2(np.where(p > 0, p, 1.0))
    return -(p * logs).sum(axis=1)


def maximize_extrinsic_utility(K: int, *, verify=True, max_k=MAX_ENUMERABLE_K, seed=0):
    """Uniform maximizer over the ``2**K`` choices and the maximal value ``K**2``.

    With ``verify`` a numerical projected-gradient run from a random interior
    point must land on the analytic optimum within 1e-6 per coordinate.
    """
    if K < 0:
        raise InputError(f"K must be >= 0, got {K}")
    if K > max_k:
        raise InputError(f"K = {K} exceeds the enumeration cap {max_k}")
    n = 2 ** K
    opt = DiscreteDistribution.uniform(n)
    if verify and n > 1:
        start = np.random.default_rng(seed).dirichlet(np.ones(n))
        numeric, _ = projected_gradient_max(K, start)
        gap = np.abs(numeric[0] - opt.probs).max()
        if gap > 1e-6:
            raise AssertionError(f"numerical maximizer is {gap:.3g} away from 2**-K")
    return opt, float(K * K)


def binary_extrinsic_utility(p: float) -> float:
    """Binary entropy of ``p``; 0 at the endpoints by continuity."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def binary_marginal_curvature(p: float) -> float:
    """Second derivative of the binary extrinsic utility, ``-1 / (ln2 p (1-p))``."""
    if not 0.0 < p < 1.0:
        raise InputError(f"curvature is singular outside (0, 1), got p = {p}")
    return -1.0 / (LN2 * p * (1.0 - p))


def intrinsic_utility(c: ChoiceSet) -> float:
    probs = c.distribution.probs
    return float(np.dot(c.rewards, probs))


def motivational_strength(c: ChoiceSet):
    """Index and value of the largest ``reward * P(U > 0) * P(reward)``.

    Ties go to the lowest index.
    """
    if len(c) == 0:
        raise InputError("empty choice set")
    s = np.asarray(c.rewards) * np.asarray(c.prob_positive_utility) * np.asarray(c.probs)
    k = int(np.argmax(s))
    return k, float(s[k])


def bayes_posterior(priors, likelihoods) -> DiscreteDistribution:
    prior = as_distribution(priors).probs
    lik = np.asarray(likelihoods, dtype=float)
    if lik.shape != prior.shape:
        raise InputError(f"{lik.size} likelihoods for {prior.size} priors")
    for j, v in enumerate(lik):
        if not 0.0 <= v <= 1.0:
            raise InputError(f"likelihoods[{j}] = {v} outside [0, 1]")
    joint = lik * prior
    total = joint.sum()
    if total <= 0:
        raise PosteriorUndefinedError("every likelihood-prior product is zero")
    return DiscreteDistribution(joint / total)


def composite_utility(c: ChoiceSet, posterior) -> CompositeUtility:
    return CompositeUtility(intrinsic_utility(c),
                            extrinsic_utility(posterior, c.object_count))
