"""Who wins next period?

Labels each step of a simulated basket by its best performer, fits a
Markov chain to the labels and compares entropy rate with the Gibbs bound.
"""
import numpy as np

from extrinsic import (AssetSpec, BasketSpec, MarkovChain, SimulationConfig,
                       adjoint_entropy, entropy_rate, estimate_transitions,
                       gibbs_bound_check, label_best_performer, simulate_paths,
                       stationary_distribution, steady_state_check)
from extrinsic.markov import simulate_chain, trajectory_entropy

# a sticky two-state chain
m = MarkovChain([[0.9, 0.1], [0.5, 0.5]])
print("stationary:", stationary_distribution(m).probs)
print(f"entropy rate {entropy_rate(m):.4f} <= adjoint {adjoint_entropy(m):.4f}")

# the long-run surprise of a sample path approaches the entropy rate
seq = simulate_chain(m, 200_000, seed=3)
est, se = trajectory_entropy(m, seq)
print(f"trajectory estimate {est:.4f} +/- {se:.4f}")

# rows equal to the stationary law: no memory, bound is tight
iid = MarkovChain([[0.7, 0.3], [0.7, 0.3]])
print("memoryless:", gibbs_bound_check(iid))

# best-performer labels from a simulated two-asset basket plus cash
basket = BasketSpec((AssetSpec("a", 0.08, 0.25, 1.0), AssetSpec("b", 0.06, 0.15, 1.0)),
                    risk_free_rate=0.03, horizon=10.0, initial_wealth=1.0)
path = simulate_paths(basket, SimulationConfig(1, 5000, seed=11))[0]
states = label_best_performer(path, basket)
print("win shares (a, b, cash):", np.bincount(states, minlength=3) / len(states))

chain = estimate_transitions(states, 3)
g = gibbs_bound_check(chain)
print(f"fitted chain: rate {g.rate:.4f}, adjoint {g.adjoint:.4f}, slack {g.slack:.2e}")
print("rows already at the stationary law (1e-2):", steady_state_check(chain, 1e-2))
