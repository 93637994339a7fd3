"""Prefix codes for a portfolio's choice alphabet.

Builds a Shannon-Fano code, checks the Kraft and length bounds, then sends
codewords through a noisy binary channel.
"""
from extrinsic import (ChannelMatrix, SourceAlphabet, average_length_bounds,
                       block_code_map, build_code, decode, encode,
                       estimate_decoding_error, kraft_sum)

alpha = SourceAlphabet(["hold", "equity", "bonds", "both"], [0.45, 0.3, 0.15, 0.1])
code = build_code(alpha)
for sym, word in code.table.items():
    print(f"{sym:>6} -> {word}")
print("Kraft sum:", kraft_sum(code.lengths))

L, H, ok = average_length_bounds(alpha)
print(f"average length {L:.3f} bits, entropy {H:.3f} bits, H <= L < H+1: {ok}")

msg = ["equity", "hold", "both", "hold"]
bits = encode(code, msg)
print("encoded:", bits, "decoded:", decode(code, bits))

# dyadic probabilities meet the entropy exactly
L, H, _ = average_length_bounds(SourceAlphabet("abcd", [0.5, 0.25, 0.125, 0.125]))
print("dyadic: L == H ->", L == H)

# a 3-bit repetition code over a channel that flips 10% of bits
bsc = ChannelMatrix.binary_symmetric(0.1)
pe, se = estimate_decoding_error(["000", "111"], bsc, 200_000, seed=1)
print(f"repetition-3 error {pe:.4f} +/- {se:.4f} (exact 0.028)")

# without redundancy every flip becomes a decoding error
pe, se = estimate_decoding_error(block_code_map(3), bsc, 200_000, seed=1)
print(f"plain 3-bit block error {pe:.4f} +/- {se:.4f} (exact {1 - 0.9 ** 3:.4f})")
