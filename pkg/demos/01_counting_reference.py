"""
Leading-zero and leading-one counts
===================================

The classical reference every circuit is checked against, and the flip-mask
rule that turns the leading-one count into a chain of conditional bit flips.
"""
from qlzoc.oracle import BitWord, complement, flip_mask, loc, lzc, mloc

x = BitWord(0b0000000100100011, 16)
print(f"x = {x}  lzc = {lzc(x.value, x.width)}  loc = {loc(x.value, x.width)}")

# zero counting is one counting on the complemented word
print("lzc(x) == loc(~x):", lzc(x.value, 16) == loc(complement(x.value, 16), 16))

# stage i fires when the top i bits are all ones and XORs (i-1) ^ i into the count
for i in range(1, 9):
    n, delta = flip_mask(i)
    print(f"stage {i}: flips the {n} low bit(s), mask {delta:0{4}b}")

# the running XOR of the fired masks lands on the count itself
trace = []
word = 0b11111110
print("mloc(11111110) =", mloc(word, 8, trace), "via", [f"{d:b}" for _, d in trace])
