"""Information-theoretic utility of choice for structured investment products."""

__version__ = "0.1.0"

from .utility import (ChoiceSet, CompositeUtility, DiscreteDistribution,
                      bayes_posterior, binary_extrinsic_utility,
                      binary_marginal_curvature, composite_utility,
                      extrinsic_utility, intrinsic_utility,
                      maximize_extrinsic_utility, motivational_strength,
                      shannon_entropy)
from .portfolio import (AssetSpec, BasketSpec, SimulationConfig,
                        basket_extrinsic_utility, bs_call_price_delta,
                        enumerate_choices, expected_best_of_return,
                        prob_all_risky_underperform, rebalance_weights,
                        simulate_paths, simulate_terminal_prices)
from .coding import (ChannelMatrix, PrefixCode, SourceAlphabet,
                     average_length_bounds, block_code_map, build_code, decode,
                     encode, estimate_decoding_error, kraft_sum,
                     shannon_fano_lengths, simulate_channel)
from .markov import (MarkovChain, adjoint_entropy, conditional_information,
                     entropy_rate, estimate_transitions, gibbs_bound_check,
                     label_best_performer, stationary_distribution,
                     steady_state_check)
