#!/usr/bin/env python3
# Rebuilds the 8-bit Khazad S-box from its 4-bit involutional mini-boxes P and Q
# (P|Q, bit wiring, Q|P, bit wiring, P|Q) and writes it as 16 lines of hex.
# With a file argument, checks that file against the construction instead.
import sys

P = [0x3, 0xF, 0xE, 0x0, 0x5, 0x4, 0xB, 0xC, 0xD, 0xA, 0x9, 0x6, 0x7, 0x8, 0x2, 0x1]
Q = [0x9, 0xE, 0x5, 0x6, 0xA, 0x2, 0x3, 0xC, 0xF, 0x0, 0x4, 0xD, 0x7, 0xB, 0x1, 0x8]
# Bit i of the input moves to bit WIRE[i]: exchanges bits 2,3 with bits 4,5.
WIRE = [0, 1, 4, 5, 2, 3, 6, 7]


def layer(hi, lo, u):
    return (hi[u >> 4] << 4) | lo[u & 15]


def wire(u):
    return sum(((u >> i) & 1) << WIRE[i] for i in range(8))


def sbox(x):
    return layer(P, Q, wire(layer(Q, P, wire(layer(P, Q, x)))))


if __name__ == "__main__":
    table = [sbox(x) for x in range(256)]
    assert all(table[table[x]] == x for x in range(256))
    text = "\n".join(" ".join("%02x" % v for v in table[16 * r:16 * r + 16]) for r in range(16))
    if len(sys.argv) > 1:
        with open(sys.argv[1]) as f:
            fixture = [int(tok, 16) for tok in f.read().split()]
        if fixture != table:
            sys.exit("fixture %s differs from the mini-box construction" % sys.argv[1])
        print("fixture matches")
    else:
        print(text)
