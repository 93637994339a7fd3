"""Shannon-Fano prefix codes, block codes and discrete memoryless channels.

Bitstrings are plain ``str`` of ASCII ``'0'``/``'1'``.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import DecodeError, InputError
from .utility import DiscreteDistribution, as_distribution, shannon_entropy

MAX_BLOCK_BITS = 20


@dataclass(frozen=True)
class SourceAlphabet:
    symbols: tuple
    probs: DiscreteDistribution

    def __init__(self, symbols, probs):
        symbols = tuple(str(s) for s in symbols)
        probs = as_distribution(probs)
        if len(symbols) != len(probs):
            raise InputError(f"{len(symbols)} symbols but {len(probs)} probabilities")
        if len(set(symbols)) != len(symbols):
            raise InputError("symbols must be distinct")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return len(self.symbols)


@dataclass(frozen=True)
class PrefixCode:
    symbols: tuple
    codewords: tuple

    def __post_init__(self):
        if len(self.symbols) != len(self.codewords):
            raise InputError("symbols and codewords differ in length")
        for w in self.codewords:
            if not w or set(w) - {"0", "1"}:
                raise InputError(f"invalid codeword {w!r}")
        if not is_prefix_free(self.codewords):
            raise InputError("codewords are not prefix-free")

    @property
    def lengths(self):
        return tuple(len(w) for w in self.codewords)

    @property
    def table(self):
        return dict(zip(self.symbols, self.codewords))


class ChannelMatrix:
    """Row-stochastic transition probabilities, rows = inputs, columns = outputs."""

    def __init__(self, transition):
        t = np.array(transition, dtype=float, ndmin=2)
        if t.ndim != 2 or t.size == 0:
            raise InputError("channel matrix must be a non-empty 2-D array")
        bad = np.argwhere(t < 0)
        if bad.size:
            i, j = bad[0]
            raise InputError(f"channel entry [{i}, {j}] = {t[i, j]} is negative")
        for i, s in enumerate(t.sum(axis=1)):
            if abs(s - 1.0) > 1e-9:
                raise InputError(f"channel row {i} sums to {s!r}, not 1")
        self.transition = t / t.sum(axis=1, keepdims=True)
        self.transition.setflags(write=False)

    @property
    def n_inputs(self):
        return self.transition.shape[0]

    @property
    def n_outputs(self):
        return self.transition.shape[1]

    @classmethod
    def binary_symmetric(cls, q):
        return cls([[1 - q, q], [q, 1 - q]])


def is_prefix_free(words):
    ordered = sorted(words)
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def _sf_length(p):
    # smallest l >= 1 with 2**-l <= p, compared exactly
    l = max(1, math.ceil(-math.log2(p)))
    while math.ldexp(1.0, -l) > p:
        l += 1
    while l > 1 and math.ldexp(1.0, -(l - 1)) <= p:
        l -= 1
    return l


def shannon_fano_lengths(a: SourceAlphabet):
    """``ceil(log2(1/p_i))`` per symbol, clamped to at least 1."""
    p = a.probs.probs
    for j, v in enumerate(p):
        if v <= 0:
            raise InputError(f"symbol {a.symbols[j]!r} has zero probability")
    return [_sf_length(float(v)) for v in p]


def kraft_sum(lengths) -> float:
    lengths = list(lengths)
    if not lengths:
        raise InputError("kraft_sum needs at least one length")
    return math.fsum(math.ldexp(1.0, -int(l)) for l in lengths)


def build_code(a: SourceAlphabet) -> PrefixCode:
    """Shannon's cumulative-probability construction of the Shannon-Fano code.

    Symbols are taken in descending probability (stable on ties); codeword
    ``i`` is the first ``l_i`` bits of the binary expansion of the cumulative
    probability of the symbols before it.  Arithmetic is exact.
    """
    lengths = shannon_fano_lengths(a)
    p = a.probs.probs
    order = sorted(range(len(a)), key=lambda k: -p[k])
    words = [None] * len(a)
    cum = Fraction(0)
    for k in order:
        l = lengths[k]
        words[k] = format(math.floor(cum * 2 ** l), f"0{l}b")
        cum += Fraction(float(p[k]))
    return PrefixCode(a.symbols, tuple(words))


def encode(code: PrefixCode, message) -> str:
    table = code.table
    out = []
    for pos, s in enumerate(message):
        try:
            out.append(table[str(s)])
        except KeyError:
            raise InputError(f"unknown symbol {s!r} at message position {pos}") from None
    return "".join(out)


def decode(code: PrefixCode, bits: str):
    """Inverse of :func:`encode`; raises :class:`DecodeError` with the bit offset."""
    lookup = dict(zip(code.codewords, code.symbols))
    prefixes = {w[:k] for w in code.codewords for k in range(1, len(w))}
    out = []
    start = 0
    buf = ""
    for pos, ch in enumerate(bits):
        if ch not in "01":
            raise DecodeError(f"invalid bit {ch!r}", pos)
        buf += ch
        if buf in lookup:
            out.append(lookup[buf])
            buf = ""
            start = pos + 1
        elif buf not in prefixes:
            raise DecodeError(f"no codeword matches {buf!r}", start)
    if buf:
        raise DecodeError(f"incomplete codeword {buf!r}", start)
    return out


def average_length_bounds(a: SourceAlphabet):
    """Average Shannon-Fano length ``L``, entropy ``H`` and whether ``H <= L < H + 1``.

    The single-symbol alphabet gives ``L = 1 = H + 1`` and reports ``False``.
    """
    lengths = shannon_fano_lengths(a)
    p = a.probs.probs
    L = math.fsum(float(pi) * li for pi, li in zip(p, lengths))
    H = shannon_entropy(a.probs)
    holds = H <= L + 1e-12 and L < H + 1
    return L, H, holds


def block_code_map(n_assets: int):
    """Fixed-length code: reallocation vector -> ``n_assets``-bit word.

    Identity on the bits, asset 1 is the most significant bit.
    """
    if not 1 <= n_assets <= MAX_BLOCK_BITS:
        raise InputError(f"number of assets must be in 1..{MAX_BLOCK_BITS}, got {n_assets}")
    return {tuple(int(c) for c in format(m, f"0{n_assets}b")): format(m, f"0{n_assets}b")
            for m in range(2 ** n_assets)}


def _letters(seq):
    return np.array([int(c) for c in seq], dtype=np.int64) if isinstance(seq, str) \
        else np.asarray(seq, dtype=np.int64)


def _transmit(ch: ChannelMatrix, x, u):
    cum = np.cumsum(ch.transition, axis=1)
    out = (u[..., None] >= cum[x]).sum(axis=-1)
    return np.minimum(out, ch.n_outputs - 1)


def simulate_channel(ch: ChannelMatrix, letters, seed=0):
    """Pass input letters (0-based) through the channel, one uniform per letter."""
    x = _letters(letters)
    if x.size and (x.min() < 0 or x.max() >= ch.n_inputs):
        raise InputError(f"input letters must lie in 0..{ch.n_inputs - 1}")
    u = rng.uniforms(seed, 0, 1, x.size)[0] if x.size else np.empty(0)
    return _transmit(ch, x, u).tolist()


def _as_codewords(code):
    if isinstance(code, PrefixCode):
        return list(code.codewords), False
    if isinstance(code, dict):
        words = [code[k] for k in sorted(code)]
    else:
        words = list(code)
    if len({len(w) for w in words}) != 1:
        raise InputError("block code words must share one length")
    return words, True


def estimate_decoding_error(code, ch: ChannelMatrix, trials: int, seed=0):
    """Monte Carlo probability that a uniformly drawn message decodes wrongly.

    ``code`` is a :class:`PrefixCode`, a block map from :func:`block_code_map`
    or a list of equal-length codewords.  Block codes use minimum Hamming
    distance decoding with ties to the lowest message index; prefix codes send
    one codeword per trial and any decode failure counts as an error.

    Returns ``(p_e, stderr)``.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    words, block = _as_codewords(code)
    M = len(words)
    cw = np.array([[int(c) for c in w] for w in words]) if block else None
    if max(int(c) for w in words for c in w) >= ch.n_inputs:
        raise InputError(f"code uses letters outside the channel's {ch.n_inputs} inputs")
    n = max(len(w) for w in words)
    errors = 0
    for a, b in rng.chunks(trials, 1 << 15):
        u = rng.uniforms(seed, a, b, n + 1)
        msg = np.minimum((u[:, 0] * M).astype(np.int64), M - 1)
        if block:
            recv = _transmit(ch, cw[msg], u[:, 1:])
            dist = (recv[:, None, :] != cw[None, :, :]).sum(axis=2)
            errors += int(np.count_nonzero(dist.argmin(axis=1) != msg))
        else:
            errors += _prefix_errors(code, ch, msg, u[:, 1:])
    pe = errors / trials
    return pe, float(np.sqrt(pe * (1 - pe) / trials))


def _prefix_errors(code, ch, msg, u):
    if ch.n_outputs > 2:
        raise InputError("prefix codes need a binary output alphabet")
    errs = 0
    for m, row in zip(msg, u):
        w = code.codewords[m]
        sent = _transmit(ch, _letters(w), row[:len(w)])
        try:
            got = decode(code, "".join(map(str, sent)))
        except DecodeError:
            errs += 1
            continue
        errs += got != [code.symbols[m]]
    return errs
