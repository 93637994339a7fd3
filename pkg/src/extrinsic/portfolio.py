"""Capital-guaranteed best-of basket under geometric Brownian motion.

The basket holds ``n_risky`` risky assets plus cash.  Asset prices follow
correlated GBM sampled exactly on an equal step grid; cash grows at the
risk-free rate.  All Monte Carlo estimates are pure functions of the basket and
the :class:`SimulationConfig` (see :mod:`extrinsic.rng`).
"""
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from . import rng
from .errors import CorrelationError, InputError
from .utility import as_distribution, shannon_entropy

MAX_RISKY = 20


@dataclass(frozen=True)
class AssetSpec:
    name: str
    mu: float
    sigma: float
    initial_price: float = 1.0

    def __post_init__(self):
        if self.sigma < 0:
            raise InputError(f"asset {self.name!r}: sigma = {self.sigma} is negative")
        if self.initial_price <= 0:
            raise InputError(
                f"asset {self.name!r}: initial price {self.initial_price} is not positive")


@dataclass(frozen=True)
class BasketSpec:
    """Risky assets plus cash earning ``risk_free_rate`` over ``horizon`` years.

    ``correlation`` defaults to the identity.  ``insurance_cost`` is subtracted
    from the expected return and defaults to zero.
    """

    risky_assets: tuple
    risk_free_rate: float
    horizon: float
    initial_wealth: float
    correlation: np.ndarray = None
    insurance_cost: float = 0.0
    _factor: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        assets = tuple(self.risky_assets)
        if not assets:
            raise InputError("basket needs at least one risky asset")
        if self.horizon <= 0:
            raise InputError(f"horizon must be positive, got {self.horizon}")
        if self.initial_wealth <= 0:
            raise InputError(f"initial wealth must be positive, got {self.initial_wealth}")
        n = len(assets)
        corr = np.eye(n) if self.correlation is None else np.array(self.correlation, float)
        object.__setattr__(self, "risky_assets", assets)
        object.__setattr__(self, "correlation", corr)
        object.__setattr__(self, "_factor", correlation_factor(corr, n))

    @property
    def n_risky(self):
        return len(self.risky_assets)

    @property
    def mu(self):
        return np.array([a.mu for a in self.risky_assets])

    @property
    def sigma(self):
        return np.array([a.sigma for a in self.risky_assets])

    @property
    def initial_prices(self):
        return np.array([a.initial_price for a in self.risky_assets])

    @property
    def cash_growth(self):
        return float(np.exp(self.risk_free_rate * self.horizon))

    def with_initial_prices(self, prices):
        assets = tuple(AssetSpec(a.name, a.mu, a.sigma, float(s))
                       for a, s in zip(self.risky_assets, prices))
        return BasketSpec(assets, self.risk_free_rate, self.horizon,
                          self.initial_wealth, self.correlation, self.insurance_cost)


@dataclass(frozen=True)
class SimulationConfig:
    n_paths: int = 100_000
    n_steps: int = 1
    seed: int = 42
    n_workers: int = 1

    def __post_init__(self):
        if self.n_paths < 1:
            raise InputError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.n_steps < 1:
            raise InputError(f"n_steps must be >= 1, got {self.n_steps}")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


class Estimate(NamedTuple):
    value: float
    stderr: float


class Weights(NamedTuple):
    weights: np.ndarray  # risky assets first, cash last
    stderr: np.ndarray


def correlation_factor(corr, n):
    """Lower factor ``L`` with ``L @ L.T == corr``.

    Cholesky when the matrix is positive definite, otherwise a clipped
    eigen-factor for positive semidefinite matrices.
    """
    corr = np.asarray(corr, dtype=float)
    if corr.shape != (n, n):
        raise CorrelationError(f"correlation must be {n}x{n}, got shape {corr.shape}")
    if not np.allclose(corr, corr.T, atol=1e-12):
        raise CorrelationError("correlation matrix is not symmetric")
    if not np.allclose(np.diag(corr), 1.0, atol=1e-12):
        raise CorrelationError("correlation matrix must have a unit diagonal")
    try:
        return np.linalg.cholesky(corr)
    except np.linalg.LinAlgError:
        pass
    vals, vecs = np.linalg.eigh(corr)
    if vals.min() < -1e-10:
        raise CorrelationError(
            f"correlation matrix is not positive semidefinite (eigenvalue {vals.min():.3g})")
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def enumerate_choices(n_risky: int):
    """All ``2**n_risky`` reallocation vectors in ascending binary order.

    Bit ``j`` of a vector is 1 when funds go into asset ``j + 1``; asset 1 is
    the most significant bit.
    """
    if not 1 <= n_risky <= MAX_RISKY:
        raise InputError(f"number of risky assets must be in 1..{MAX_RISKY}, got {n_risky}")
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=n_risky)]


def _log_increments(b, n_steps, seed, start, stop):
    # (paths, steps, assets) exact GBM log-increments over one grid step
    n = b.n_risky
    dt = b.horizon / n_steps
    z = rng.normals(seed, start, stop, n_steps * n).reshape(stop - start, n_steps, n)
    z = z @ b._factor.T
    return (b.mu - 0.5 * b.sigma ** 2) * dt + b.sigma * np.sqrt(dt) * z


def simulate_paths(b: BasketSpec, cfg: SimulationConfig):
    """Prices on the step grid, shape ``(n_paths, n_steps + 1, n_risky)``."""
    def run(a, z):
        logs = np.cumsum(_log_increments(b, cfg.n_steps, cfg.seed, a, z), axis=1)
        logs = np.concatenate([np.zeros((z - a, 1, b.n_risky)), logs], axis=1)
        return b.initial_prices * np.exp(logs)

    return rng.map_chunks(run, cfg.n_paths, cfg.n_workers)


def simulate_terminal_prices(b: BasketSpec, cfg: SimulationConfig):
    """Terminal risky prices, shape ``(n_paths, n_risky)``."""
    def run(a, z):
        logs = _log_increments(b, cfg.n_steps, cfg.seed, a, z).sum(axis=1)
        return b.initial_prices * np.exp(logs)

    return rng.map_chunks(run, cfg.n_paths, cfg.n_workers)


def _mean_se(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    se = x.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(x.shape[1:])
    return x.mean(axis=0), se


def expected_best_of_return(b: BasketSpec, cfg: SimulationConfig, *, with_stderr=False):
    """``max(w, max_j e^{-it} E[w S_T^j / S_0^j]) - insurance_cost``.

    The outer max against the initial wealth is exact, so the capital guarantee
    holds for every sample (before insurance cost).
    """
    growth = simulate_terminal_prices(b, cfg) / b.initial_prices
    mean, se = _mean_se(growth)
    disc = b.initial_wealth / b.cash_growth
    risky = disc * mean
    j = int(np.argmax(risky))
    value = max(b.initial_wealth, float(risky[j])) - b.insurance_cost
    if not with_stderr:
        return value
    # stderr of the leading risky estimate, also when cash wins the max
    return Estimate(value, float(disc * se[j]))


def prob_all_risky_underperform(b: BasketSpec, cfg: SimulationConfig, *, with_stderr=False):
    """Probability that every risky asset ends below its cash-grown start."""
    growth = simulate_terminal_prices(b, cfg) / b.initial_prices
    hit = np.all(growth < b.cash_growth, axis=1)
    p = float(hit.mean())
    if not with_stderr:
        return p
    return Estimate(p, float(np.sqrt(p * (1 - p) / cfg.n_paths)))


def underperform_probability_closed_form(mu, sigma, i, t):
    """Single-asset ``P(S_T < S_0 e^{it})`` under GBM."""
    if sigma == 0:
        return float(mu < i)
    return float(ndtr((i - mu + 0.5 * sigma ** 2) * np.sqrt(t) / sigma))


def basket_extrinsic_utility(n_risky: int, d) -> float:
    d = as_distribution(d)
    if len(d) != 2 ** n_risky:
        raise InputError(
            f"distribution has {len(d)} outcomes, expected 2**{n_risky} = {2 ** n_risky}")
    return n_risky * shannon_entropy(d)


def bs_call_price_delta(spot, strike, sigma, i, t):
    """Black-Scholes European call price and its spot delta."""
    for name, v in (("spot", spot), ("strike", strike), ("sigma", sigma), ("t", t)):
        if not v > 0:
            raise InputError(f"{name} must be positive, got {v}")
    vol = sigma * np.sqrt(t)
    d1 = (np.log(spot / strike) + (i + 0.5 * sigma ** 2) * t) / vol
    d2 = d1 - vol
    delta = float(ndtr(d1))
    price = spot * delta - strike * np.exp(-i * t) * ndtr(d2)
    return float(price), delta


def best_of_payoff(b: BasketSpec, terminal):
    """Discounted best-of value per path, ``e^{-it} max(w e^{it}, max_j n_j S_T^j)``.

    ``n_j = w / S_0^j`` units are fixed at inception, so the payoff responds to
    a change in any single initial price.
    """
    units = b.initial_wealth / b.initial_prices
    held = np.column_stack([units * terminal,
                            np.full(terminal.shape[0], b.initial_wealth * b.cash_growth)])
    return held.max(axis=1) / b.cash_growth


def rebalance_weights(b: BasketSpec, cfg: SimulationConfig) -> Weights:
    """Delta-hedge weights of the best-of payoff over risky assets and cash.

    Risky weight ``j`` is ``S_0^j / w`` times the pathwise derivative of the
    discounted payoff with respect to ``S_0^j``, which on each path equals the
    discounted value held in asset ``j`` when it is the winner.  Cash takes the
    remainder so the weights sum to one.
    """
    terminal = simulate_terminal_prices(b, cfg)
    units = b.initial_wealth / b.initial_prices
    held = np.column_stack([units * terminal,
                            np.full(cfg.n_paths, b.initial_wealth * b.cash_growth)])
    # argmax breaks ties to the lowest index, so cash (last) only wins outright
    winner = held.argmax(axis=1)
    n = b.n_risky
    contrib = np.zeros((cfg.n_paths, n))
    rows = np.flatnonzero(winner < n)
    contrib[rows, winner[rows]] = held[rows, winner[rows]]
    contrib /= b.cash_growth * b.initial_wealth
    mean, se = _mean_se(contrib)
    w = np.append(mean, 1.0 - mean.sum())
    cash_se = float(contrib.sum(axis=1).std(ddof=1) / np.sqrt(cfg.n_paths)) if cfg.n_paths > 1 else 0.0
    return Weights(w, np.append(se, cash_se))
