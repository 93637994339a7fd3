"""Command-line front end.

Settings are resolved as built-in defaults, then ``--config`` file values, then
``--set KEY=VALUE`` overrides, then ``--seed``.  Exit codes: 0 success, 2 input
error, 3 analysis error.
"""
import argparse
import datetime as _dt
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import coding, markov, portfolio, utility
from .dataio import (chain_to_json, dumps_report, get_float, get_int, get_list,
                     get_matrix, ingest_prices, read_alphabet, read_chain_json,
                     read_channel_csv, read_config, read_state_sequence,
                     parse_overrides, format_code_table, results_csv, table_csv)
from .errors import AnalysisError, InputError

DEFAULT_SEED = 42

EXIT_OK, EXIT_INPUT, EXIT_ANALYSIS = 0, 2, 3


def _seed(cfg):
    seed = get_int(cfg, "seed", DEFAULT_SEED)
    if not 0 <= seed < 2 ** 64:
        raise InputError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _ranking(strengths):
    order = sorted(range(len(strengths)), key=lambda k: (-strengths[k], k))
    return [{"index": k, "strength": strengths[k]} for k in order]


def cmd_utility(cfg):
    probs = get_list(cfg, "probs")
    utility.DiscreteDistribution(probs)
    n = len(probs)
    rewards = get_list(cfg, "rewards", [0.0] * n)
    if "K" in cfg:
        K = get_int(cfg, "K")
    elif n & (n - 1) == 0:
        K = n.bit_length() - 1
    else:
        raise InputError(f"missing key 'K' ({n} choices is not a power of two)")
    ppu = get_list(cfg, "prob_positive_utility", [1.0] * n)
    choices = utility.ChoiceSet(K, rewards, probs, ppu)
    dist = choices.distribution
    if "likelihoods" in cfg:
        posterior = utility.bayes_posterior(dist, get_list(cfg, "likelihoods"))
    else:
        posterior = dist
    comp = utility.composite_utility(choices, posterior)
    p_star, max_ux = utility.maximize_extrinsic_utility(
        get_int(cfg, "maximize_K", K), verify=True, seed=_seed(cfg))
    best, s_max = utility.motivational_strength(choices)
    strengths = (np.asarray(choices.rewards) * np.asarray(choices.prob_positive_utility)
                 * np.asarray(choices.probs)).tolist()
    grid = np.round(np.arange(1, 100) / 100, 2)
    curve = [(float(p), utility.binary_extrinsic_utility(p),
              utility.binary_marginal_curvature(p)) for p in grid]
    results = {
        "K": K,
        "intrinsic": utility.intrinsic_utility(choices),
        "entropy_bits": utility.shannon_entropy(dist),
        "extrinsic": utility.extrinsic_utility(dist, K),
        "posterior": posterior.probs,
        "composite": {"intrinsic": comp.intrinsic, "extrinsic": comp.extrinsic},
        "maximizer": {"K": len(p_star).bit_length() - 1,
                      "p_star": float(p_star.probs[0]),
                      "outcomes": len(p_star),
                      "max_extrinsic": max_ux},
        "motivational_strength": {"argmax": best, "max": s_max,
                                  "ranking": _ranking(strengths)},
    }
    tables = {"curve": (("p", "extrinsic_utility", "curvature"), curve)}
    return results, tables


def _basket(cfg):
    mu = get_list(cfg, "mu")
    n = len(mu)
    sigma = get_list(cfg, "sigma")
    s0 = get_list(cfg, "s0", [100.0] * n)
    names = get_list(cfg, "names", [f"asset{j + 1}" for j in range(n)], kind=str)
    if not (len(sigma) == len(s0) == len(names) == n):
        raise InputError("mu, sigma, s0 and names must have equal lengths")
    assets = tuple(portfolio.AssetSpec(nm, m, s, p)
                   for nm, m, s, p in zip(names, mu, sigma, s0))
    return portfolio.BasketSpec(
        assets,
        risk_free_rate=get_float(cfg, "risk_free_rate"),
        horizon=get_float(cfg, "horizon", 1.0),
        initial_wealth=get_float(cfg, "wealth", 100.0),
        correlation=get_matrix(cfg, "correlation"),
        insurance_cost=get_float(cfg, "insurance_cost", 0.0),
    )


def cmd_portfolio(cfg):
    b = _basket(cfg)
    seed = _seed(cfg)
    sim = portfolio.SimulationConfig(get_int(cfg, "n_paths", 100_000),
                                     get_int(cfg, "n_steps", 1), seed,
                                     get_int(cfg, "workers", 1))
    er = portfolio.expected_best_of_return(b, sim, with_stderr=True)
    under = portfolio.prob_all_risky_underperform(b, sim, with_stderr=True)
    weights = portfolio.rebalance_weights(b, sim)
    choices = portfolio.enumerate_choices(b.n_risky)

    walk = portfolio.SimulationConfig(1, get_int(cfg, "markov_steps", 10_000), seed)
    path = portfolio.simulate_paths(b, walk)[0]
    states = markov.label_best_performer(path, b)
    chain = markov.estimate_transitions(states, b.n_risky + 1)
    gibbs = markov.gibbs_bound_check(chain)
    names = [a.name for a in b.risky_assets] + ["cash"]
    results = {
        "expected_return": er.value,
        "expected_return_stderr": er.stderr,
        "capital_guaranteed": er.value >= b.initial_wealth - b.insurance_cost,
        "prob_all_risky_underperform": under.value,
        "prob_all_risky_underperform_stderr": under.stderr,
        "choices": {"count": len(choices),
                    "vectors": ["".join(map(str, v)) for v in choices]},
        "max_extrinsic_utility": {"p_star": 2.0 ** -b.n_risky,
                                  "value": portfolio.basket_extrinsic_utility(
                                      b.n_risky, utility.DiscreteDistribution.uniform(len(choices)))},
        "rebalance_weights": dict(zip(names, weights.weights)),
        "rebalance_weights_stderr": dict(zip(names, weights.stderr)),
        "best_performer": {
            "states": names,
            "chain": chain_to_json(chain),
            "unvisited": list(chain.unvisited),
            "stationary": markov.stationary_distribution(chain).probs,
            "entropy_rate": gibbs.rate,
            "adjoint_entropy": gibbs.adjoint,
            "gibbs_slack": gibbs.slack,
            "steady_state": markov.steady_state_check(chain, get_float(cfg, "tol", 1e-2)),
        },
    }
    return results, {}


def cmd_code(cfg):
    if "alphabet" in cfg:
        symbols, probs = read_alphabet(cfg["alphabet"])
    else:
        probs = get_list(cfg, "probs")
        symbols = get_list(cfg, "symbols", [f"s{j + 1}" for j in range(len(probs))], kind=str)
    alpha = coding.SourceAlphabet(symbols, probs)
    code = coding.build_code(alpha)
    L, H, holds = coding.average_length_bounds(alpha)
    results = {
        "symbols": list(alpha.symbols),
        "probs": alpha.probs.probs,
        "lengths": list(code.lengths),
        "codewords": list(code.codewords),
        "kraft_sum": coding.kraft_sum(code.lengths),
        "average_length": L,
        "entropy": H,
        "bounds_hold": holds,
    }
    if "message" in cfg:
        results["encoded"] = coding.encode(code, get_list(cfg, "message", kind=str))
    if "channel_csv" in cfg or "channel" in cfg:
        mat = read_channel_csv(cfg["channel_csv"]) if "channel_csv" in cfg \
            else get_matrix(cfg, "channel")
        pe, se = coding.estimate_decoding_error(
            code, coding.ChannelMatrix(mat), get_int(cfg, "trials", 10_000), _seed(cfg))
        results["decoding_error"] = {"p_e": pe, "stderr": se}
    table = format_code_table(alpha.symbols, alpha.probs.probs, code.codewords)
    return results, {"code": table}


def cmd_markov(cfg):
    if "chain" in cfg:
        chain = read_chain_json(cfg["chain"])
    elif "transition" in cfg:
        chain = markov.MarkovChain(get_matrix(cfg, "transition"))
    else:
        if "sequence" in cfg:
            seq = read_state_sequence(cfg["sequence"])
            n = get_int(cfg, "n_states", max(seq) + 1)
        elif "prices" in cfg:
            table = ingest_prices(cfg["prices"])
            if len(table.dates) < 3:
                raise InputError("need at least three price rows to form transitions")
            dt = np.diff(table.year_fractions())
            seq = markov.best_performer_states(
                table.prices, np.exp(get_float(cfg, "risk_free_rate") * dt))
            n = len(table.assets) + 1
        else:
            raise InputError("markov needs one of 'chain', 'transition', 'sequence', 'prices'")
        chain = markov.estimate_transitions(seq, n)
    gibbs = markov.gibbs_bound_check(chain)
    results = {
        "chain": chain_to_json(chain),
        "unvisited": list(chain.unvisited),
        "stationary": markov.stationary_distribution(chain).probs,
        "entropy_rate": gibbs.rate,
        "adjoint_entropy": gibbs.adjoint,
        "gibbs_slack": gibbs.slack,
        "gibbs_equality": gibbs.equality,
        "steady_state": markov.steady_state_check(chain, get_float(cfg, "tol", 1e-6)),
    }
    return results, {}


COMMANDS = {"utility": cmd_utility, "portfolio": cmd_portfolio,
            "code": cmd_code, "markov": cmd_markov}


def run(command, cfg):
    """Build the report dictionary and side tables for one subcommand."""
    results, tables = COMMANDS[command](cfg)
    report = {
        "command": command,
        "config": dict(sorted(cfg.items())),
        "results": results,
        "provenance": {
            "seed": _seed(cfg),
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    }
    return report, tables


def _side_path(out, name, suffix):
    out = Path(out)
    return out.with_name(f"{out.stem}.{name}{suffix}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="extrinsic",
        description="Extrinsic utility, best-of baskets, Shannon-Fano coding and "
                    "best-performer Markov analysis.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value settings file")
        p.add_argument("--seed", type=int, help=f"64-bit seed (default {DEFAULT_SEED})")
        p.add_argument("--out", help="report path (stdout when omitted)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", default=[],
                       help="override a setting; repeatable")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = read_config(args.config) if args.config else {}
        cfg.update(parse_overrides(args.set))
        if args.seed is not None:
            cfg["seed"] = str(args.seed)
        cfg.setdefault("seed", str(DEFAULT_SEED))
        report, tables = run(args.command, cfg)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalysisError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS

    text = dumps_report(report) if args.format == "json" else results_csv(report)
    if args.out:
        Path(args.out).write_text(text)
        for name, table in tables.items():
            if isinstance(table, str):
                _side_path(args.out, name, ".tsv").write_text(table)
            else:
                _side_path(args.out, name, ".csv").write_text(table_csv(*table))
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
