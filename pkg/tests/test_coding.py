import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extrinsic.coding import (ChannelMatrix, PrefixCode, SourceAlphabet,
                              average_length_bounds, block_code_map, build_code,
                              decode, encode, estimate_decoding_error, kraft_sum,
                              shannon_fano_lengths, simulate_channel)
from extrinsic.errors import DecodeError, InputError

DYADIC = SourceAlphabet(["s1", "s2", "s3", "s4"], [0.5, 0.25, 0.125, 0.125])


def random_dyadic(gen, splits):
    leaves = [1.0]
    for _ in range(splits):
        k = gen.integers(len(leaves))
        p = leaves.pop(k)
        leaves += [p / 2, p / 2]
    return leaves


alphabets = st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=30).map(
    lambda v: SourceAlphabet([f"x{j}" for j in range(len(v))], [x / sum(v) for x in v]))


class TestLengths:
    @pytest.mark.parametrize("probs, lengths", [
        ([0.5, 0.25, 0.125, 0.125], [1, 2, 3, 3]),
        ([0.9, 0.1], [1, 4]),
        ([0.125] * 8, [3] * 8),
        ([1.0], [1]),
    ])
    def test_examples(self, probs, lengths):
        a = SourceAlphabet(range(len(probs)), probs)
        assert shannon_fano_lengths(a) == lengths

    def test_zero_probability(self):
        with pytest.raises(InputError, match="zero probability"):
            shannon_fano_lengths(SourceAlphabet("ab", [1.0, 0.0]))

    @given(alphabets)
    def test_two_sided_bound(self, a):
        for p, l in zip(a.probs.probs, shannon_fano_lengths(a)):
            if p <= 0.5:
                assert math.log2(1 / p) - 1e-12 <= l < math.log2(1 / p) + 1
            else:
                assert l == 1

    def test_duplicate_symbols(self):
        with pytest.raises(InputError):
            SourceAlphabet("aa", [0.5, 0.5])


class TestKraft:
    def test_examples(self):
        assert kraft_sum([1, 2, 3, 3]) == 1.0
        assert kraft_sum([1, 4]) == 0.5625
        assert kraft_sum([1, 1, 1]) == 1.5

    def test_empty(self):
        with pytest.raises(InputError):
            kraft_sum([])

    @given(alphabets)
    def test_shannon_fano_kraft_window(self, a):
        k = kraft_sum(shannon_fano_lengths(a))
        assert k <= 1.0
        if max(a.probs.probs) <= 0.5:
            assert k >= 0.5


class TestBuild:
    def test_dyadic(self):
        assert build_code(DYADIC).codewords == ("0", "10", "110", "111")

    def test_single_symbol(self):
        assert build_code(SourceAlphabet(["only"], [1.0])).codewords == ("0",)

    def test_ties_keep_input_order(self):
        code = build_code(SourceAlphabet("xyz", [0.25, 0.5, 0.25]))
        assert code.table == {"y": "0", "x": "10", "z": "11"}

    def test_rejects_non_prefix_table(self):
        with pytest.raises(InputError):
            PrefixCode(("a", "b"), ("0", "01"))

    @given(alphabets)
    def test_prefix_free_exhaustive(self, a):
        words = build_code(a).codewords
        for i, u in enumerate(words):
            for j, v in enumerate(words):
                if i != j:
                    assert not v.startswith(u)
        assert [len(w) for w in words] == shannon_fano_lengths(a)


class TestEncodeDecode:
    def test_examples(self):
        code = build_code(DYADIC)
        assert encode(code, []) == ""
        assert encode(code, ["s2"]) == "10"
        assert encode(code, ["s1", "s3"]) == "0110"
        assert decode(code, "0110") == ["s1", "s3"]
        assert decode(code, "") == []

    def test_incomplete(self):
        with pytest.raises(DecodeError) as exc:
            decode(build_code(DYADIC), "1")
        assert exc.value.position == 0
        with pytest.raises(DecodeError) as exc:
            decode(build_code(DYADIC), "0011")
        assert exc.value.position == 2

    def test_unmatchable(self):
        code = build_code(SourceAlphabet("ab", [0.9, 0.1]))  # "0", "1110"
        with pytest.raises(DecodeError) as exc:
            decode(code, "0101")
        assert exc.value.position == 1

    def test_unknown_symbol(self):
        with pytest.raises(InputError):
            encode(build_code(DYADIC), ["s9"])

    @given(alphabets, st.data())
    def test_round_trip(self, a, data):
        code = build_code(a)
        msg = data.draw(st.lists(st.sampled_from(a.symbols), max_size=40))
        assert decode(code, encode(code, msg)) == msg


class TestBounds:
    def test_examples(self):
        L, H, ok = average_length_bounds(DYADIC)
        assert L == H == 1.75 and ok
        L, H, ok = average_length_bounds(SourceAlphabet("ab", [0.9, 0.1]))
        assert L == pytest.approx(1.3) and H == pytest.approx(0.4690, abs=5e-5) and ok
        L, H, ok = average_length_bounds(SourceAlphabet("ab", [0.5, 0.5]))
        assert L == H == 1.0 and ok

    def test_single_symbol_meets_upper_bound(self):
        L, H, ok = average_length_bounds(SourceAlphabet("a", [1.0]))
        assert (L, H, ok) == (1.0, 0.0, False)

    def test_dyadic_equality(self):
        gen = np.random.default_rng(0)
        for _ in range(100):
            p = random_dyadic(gen, int(gen.integers(1, 40)))
            L, H, ok = average_length_bounds(SourceAlphabet(range(len(p)), p))
            assert ok and abs(L - H) < 1e-12

    @given(alphabets.filter(lambda a: len(a) > 1))
    def test_bounds_hold(self, a):
        assert average_length_bounds(a)[2]


class TestBlockCode:
    def test_examples(self):
        assert block_code_map(2)[(1, 0)] == "10"
        m = block_code_map(3)
        assert len(set(m.values())) == 8 and all(len(w) == 3 for w in m.values())

    @pytest.mark.parametrize("n", range(1, 17))
    def test_bijection(self, n):
        m = block_code_map(n)
        assert len(m) == len(set(m.values())) == 2 ** n
        inverse = {w: v for v, w in m.items()}
        assert all(inverse[m[v]] == v for v in m)

    def test_range(self):
        with pytest.raises(InputError):
            block_code_map(0)


class TestChannel:
    def test_identity(self):
        letters = [0, 1, 2, 2, 1, 0]
        assert simulate_channel(ChannelMatrix(np.eye(3)), letters, 4) == letters

    def test_deterministic_row(self):
        ch = ChannelMatrix([[0, 1], [1, 0]])
        assert simulate_channel(ch, [0] * 20, 1) == [1] * 20

    def test_seeded(self):
        ch = ChannelMatrix.binary_symmetric(0.3)
        x = [0, 1] * 500
        assert simulate_channel(ch, x, 7) == simulate_channel(ch, x, 7)

    def test_validation(self):
        with pytest.raises(InputError, match="row 1"):
            ChannelMatrix([[1, 0], [0.5, 0.6]])
        with pytest.raises(InputError):
            simulate_channel(ChannelMatrix(np.eye(2)), [0, 2])

    @pytest.mark.slow
    def test_bsc_flip_rate(self):
        q, n = 0.1, 10 ** 6
        x = np.zeros(n, dtype=int)
        y = np.asarray(simulate_channel(ChannelMatrix.binary_symmetric(q), x, 13))
        assert abs(y.mean() - q) < 3 * math.sqrt(q * (1 - q) / n)


class TestDecodingError:
    def test_noiseless(self):
        ch = ChannelMatrix(np.eye(2))
        assert estimate_decoding_error(block_code_map(3), ch, 5000, 1)[0] == 0.0
        assert estimate_decoding_error(build_code(DYADIC), ch, 2000, 1)[0] == 0.0

    def test_repetition_code(self):
        q = 0.1
        pe, se = estimate_decoding_error(["000", "111"], ChannelMatrix.binary_symmetric(q), 200_000, 2)
        truth = 3 * q ** 2 * (1 - q) + q ** 3
        assert truth == pytest.approx(0.028)
        assert abs(pe - truth) < 3 * se

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_uninformative_channel(self, n):
        M = 2 ** n
        pe, se = estimate_decoding_error(block_code_map(n), ChannelMatrix([[0.5, 0.5]] * 2), 100_000, 3)
        assert abs(pe - (1 - 1 / M)) < 3 * se

    def test_prefix_code_over_noisy_channel(self):
        pe, _ = estimate_decoding_error(build_code(DYADIC), ChannelMatrix.binary_symmetric(0.2), 3000, 5)
        assert 0.0 < pe < 1.0

    def test_incompatible(self):
        with pytest.raises(InputError):
            estimate_decoding_error(["02", "11"], ChannelMatrix(np.eye(2)), 10)
        with pytest.raises(InputError):
            estimate_decoding_error(["0", "11"], ChannelMatrix(np.eye(2)), 10)
