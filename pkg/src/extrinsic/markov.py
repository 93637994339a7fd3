"""First-order Markov analysis of the best-performing asset.

States are asset indices with cash as the last state.  The entropy rate of the
best-performer chain is its extrinsic utility; the entropy of the stationary
marginals (the adjoint zero-memory source) bounds it from above.
"""
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import rng
from .errors import InputError, NonUniqueStationaryError
from .utility import DiscreteDistribution, _entropy, shannon_entropy

ROW_TOL = 1e-9


@dataclass(frozen=True)
class MarkovChain:
    """Row-stochastic transition matrix.

    ``unvisited`` lists rows that were filled uniformly because the estimating
    sequence never left that state.
    """

    transition: np.ndarray
    unvisited: tuple = ()

    def __post_init__(self):
        P = np.array(self.transition, dtype=float, ndmin=2)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.size == 0:
            raise InputError(f"transition matrix must be square, got shape {P.shape}")
        bad = np.argwhere(P < 0)
        if bad.size:
            i, j = bad[0]
            raise InputError(f"transition entry [{i}, {j}] = {P[i, j]} is negative")
        for i, s in enumerate(P.sum(axis=1)):
            if abs(s - 1.0) > ROW_TOL:
                raise InputError(f"transition row {i} sums to {s!r}, not 1")
        P = P / P.sum(axis=1, keepdims=True)
        P.setflags(write=False)
        object.__setattr__(self, "transition", P)
        object.__setattr__(self, "unvisited", tuple(self.unvisited))

    @property
    def n_states(self):
        return self.transition.shape[0]


class GibbsCheck(NamedTuple):
    rate: float
    adjoint: float
    slack: float
    equality: bool


def _states(seq, n_states=None):
    s = np.asarray(seq, dtype=np.int64).ravel()
    if s.size == 0:
        raise InputError("state sequence is empty")
    if s.min() < 0 or (n_states is not None and s.max() >= n_states):
        bad = int(np.flatnonzero((s < 0) | (s >= (n_states or np.inf)))[0])
        raise InputError(f"state {s[bad]} at position {bad} is out of range")
    return s


def best_performer_states(prices, cash_step_growth):
    """Index of the best gross return over each step; cash is the last index.

    ``prices`` has shape ``(n_steps + 1, n_risky)``.  Ties go to the lowest
    index.
    """
    prices = np.asarray(prices, dtype=float)
    if prices.ndim != 2 or prices.shape[0] < 2:
        raise InputError(f"prices must be (steps + 1, assets) with >= 2 rows, got {prices.shape}")
    growth = prices[1:] / prices[:-1]
    cash = np.broadcast_to(np.asarray(cash_step_growth, dtype=float), (growth.shape[0],))
    return np.column_stack([growth, cash]).argmax(axis=1)


def label_best_performer(prices, basket):
    """Best-performer state sequence for one path simulated on ``basket``'s grid."""
    prices = np.asarray(prices, dtype=float)
    if prices.ndim != 2 or prices.shape[1] != basket.n_risky:
        raise InputError(
            f"prices have shape {prices.shape}, expected (steps + 1, {basket.n_risky})")
    dt = basket.horizon / (prices.shape[0] - 1)
    return best_performer_states(prices, np.exp(basket.risk_free_rate * dt))


def estimate_transitions(seq, n_states: int) -> MarkovChain:
    """Maximum-likelihood transition matrix; states never left get a uniform row."""
    s = _states(seq, n_states)
    if s.size < 2:
        raise InputError("need at least two states to estimate transitions")
    counts = np.zeros((n_states, n_states))
    np.add.at(counts, (s[:-1], s[1:]), 1.0)
    totals = counts.sum(axis=1, keepdims=True)
    empty = totals[:, 0] == 0
    P = np.where(empty[:, None], 1.0 / n_states, counts / np.where(totals == 0, 1, totals))
    return MarkovChain(P, tuple(int(i) for i in np.flatnonzero(empty)))


def _closed_classes(P):
    n, labels = connected_components(P > 0, directed=True, connection="strong")
    leaves = np.zeros(n, dtype=bool)
    for c in range(n):
        members = labels == c
        leaves[c] = not (P[np.ix_(members, ~members)] > 0).any()
    return int(leaves.sum())


def stationary_distribution(m: MarkovChain) -> DiscreteDistribution:
    """Unique ``pi`` with ``pi P = pi`` from a dense solve.

    Raises :class:`NonUniqueStationaryError` unless the chain has exactly one
    closed communicating class.
    """
    P = m.transition
    n = m.n_states
    k = _closed_classes(P)
    if k != 1:
        raise NonUniqueStationaryError(
            f"chain has {k} closed classes; the stationary distribution is not unique")
    A = P.T - np.eye(n)
    A[-1] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(A, rhs)
    pi += np.linalg.solve(A, rhs - A @ pi)  # one refinement step
    pi = np.clip(pi, 0.0, None)
    return DiscreteDistribution(pi / pi.sum())


def conditional_information(p: float) -> float:
    """Self-information ``log2(1/p)`` in bits."""
    if not 0 < p <= 1:
        raise InputError(f"probability must lie in (0, 1], got {p}")
    return float(-np.log2(p))


def row_entropies(m: MarkovChain):
    return np.array([_entropy(row) for row in m.transition])


def entropy_rate(m: MarkovChain) -> float:
    pi = stationary_distribution(m).probs
    return float(pi @ row_entropies(m))


def adjoint_entropy(m: MarkovChain) -> float:
    return shannon_entropy(stationary_distribution(m))


def gibbs_bound_check(m: MarkovChain) -> GibbsCheck:
    pi = stationary_distribution(m).probs
    rate = float(pi @ row_entropies(m))
    adjoint = _entropy(pi)
    slack = adjoint - rate
    if slack < -1e-12:
        raise AssertionError(f"entropy rate exceeds adjoint entropy by {-slack:.3g}")
    equality = bool(np.abs(m.transition - pi).max() <= 1e-9)
    return GibbsCheck(rate, adjoint, slack, equality)


def steady_state_check(m: MarkovChain, tol: float = 1e-6) -> bool:
    """Whether the stationary law is uniform within ``tol``."""
    pi = stationary_distribution(m).probs
    return bool(np.abs(pi - 1.0 / m.n_states).max() < tol)


def simulate_chain(m: MarkovChain, n_steps: int, seed=0, start=None):
    """Trajectory of ``n_steps + 1`` states.

    The initial state is drawn from the stationary law unless ``start`` is
    given.
    """
    u = rng.uniforms(seed, 0, 1, n_steps + 1)[0].tolist()
    cum = [list(accumulate(row)) for row in m.transition.tolist()]
    for row in cum:
        row[-1] = 1.0
    last = m.n_states - 1
    if start is None:
        pi = list(accumulate(stationary_distribution(m).probs.tolist()))
        s = min(bisect_right(pi, u[0]), last)
    else:
        s = int(start)
    out = [s]
    append = out.append
    for x in u[1:]:
        s = bisect_right(cum[s], x)
        if s > last:
            s = last
        append(s)
    return np.array(out, dtype=np.int64)


def trajectory_entropy(m: MarkovChain, seq, n_batches=100):
    """Empirical ``-(1/n) sum log2 P(s_t -> s_t+1)`` with a batch-means stderr."""
    s = _states(seq, m.n_states)
    with np.errstate(divide="ignore"):
        info = -np.log2(m.transition[s[:-1], s[1:]])
    batches = np.array_split(info, n_batches)
    means = np.array([b.mean() for b in batches])
    return float(info.mean()), float(means.std(ddof=1) / np.sqrt(n_batches))
