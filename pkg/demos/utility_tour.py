"""Entropy as a utility of choice.

Walks through intrinsic and extrinsic utility for a small menu of options,
then checks numerically that the uniform law maximizes the extrinsic part.
"""
import numpy as np

from extrinsic import (ChoiceSet, DiscreteDistribution, bayes_posterior,
                       binary_extrinsic_utility, binary_marginal_curvature,
                       composite_utility, extrinsic_utility,
                       maximize_extrinsic_utility, motivational_strength)
from extrinsic.utility import projected_gradient_max

# four options built from K = 2 binary attributes
choices = ChoiceSet(2, rewards=[3.0, 1.0, 2.0, 0.5], probs=[0.4, 0.3, 0.2, 0.1])
d = choices.distribution
print("extrinsic utility of the menu:", extrinsic_utility(d, 2))

# a uniform menu carries the most freedom: K * K bits
d_star, u_star = maximize_extrinsic_utility(2)
print("maximizer:", d_star.probs, "value:", u_star)

# the same optimum from a random interior start
start = np.random.default_rng(0).dirichlet(np.ones(16))
p, iters = projected_gradient_max(4, start)
print(f"K = 4 numeric optimum after {iters} steps, max deviation",
      np.abs(p - 1 / 16).max())

# the curve for one binary attribute is concave everywhere
for q in (0.1, 0.3, 0.5):
    print(f"p = {q}: U = {binary_extrinsic_utility(q):.4f}, "
          f"U'' = {binary_marginal_curvature(q):.4f}")

# updating beliefs after evidence, then scoring both utilities
posterior = bayes_posterior(d, likelihoods=[0.2, 0.9, 0.5, 0.5])
print("posterior:", np.round(posterior.probs, 4))
print("composite:", composite_utility(choices, posterior))

# motivational strength ranks options by reward x P(positive) x P(choice)
motive = ChoiceSet(1, rewards=[5.0, 4.0], probs=[0.1, 0.2],
                   prob_positive_utility=[0.9, 0.8])
print("strongest option (index, strength):", motivational_strength(motive))

# a degenerate law leaves no choice at all
print("point mass:", extrinsic_utility(DiscreteDistribution([1, 0, 0, 0]), 2))
