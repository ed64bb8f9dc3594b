#!/usr/bin/env python3
# Copyright 2026 The qsilab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference vectors for the default expander, PRG chain and GGM tree.

Independent of the C++ code: BLAKE2b from hashlib and ChaCha20 from the
`cryptography` package. Bit strings print with bit 0 first.
"""

import hashlib
import struct

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms


def pack(bits):
    out = bytearray((len(bits) + 7) // 8)
    for i, b in enumerate(bits):
        if b:
            out[i // 8] |= 1 << (i % 8)
    return bytes(out)


def expand(seed):
    msg = b"qsilab-prg-v1" + struct.pack("<Q", len(seed)) + pack(seed)
    key = hashlib.blake2b(msg, digest_size=32).digest()
    # 32-bit counter 0 followed by a 96-bit zero nonce; identical to the
    # 64/64 layout for the first 2^32 blocks.
    enc = Cipher(algorithms.ChaCha20(key, bytes(16)), mode=None).encryptor()
    n = 2 * len(seed)
    stream = enc.update(bytes((n + 7) // 8))
    return [(stream[i // 8] >> (i % 8)) & 1 for i in range(n)]


def stretch(seed, n):
    k = len(seed)
    if n <= k:
        return seed[:n]
    out, s = [], seed
    while len(out) < n:
        e = expand(s)
        s = e[:k]
        out += e[k:][: n - len(out)]
    return out


def ggm(seed, x, out_len):
    if not x:
        return stretch(seed, out_len)
    e = expand(seed)
    k = len(seed)
    half = e[k:] if x[0] else e[:k]
    return ggm(half, x[1:], out_len)


def s(bits):
    return "".join(map(str, bits))


def b(text):
    return [int(c) for c in text]


if __name__ == "__main__":
    for seed in ["1", "0110", "10110011", "1" * 16, "0" * 16 + "1"]:
        print("expand", seed, s(expand(b(seed))))
    print("stretch 10110011 40", s(stretch(b("10110011"), 40)))
    print("stretch 1 9", s(stretch(b("1"), 9)))
    key = b("1100101011110000")
    for x in ["00000000", "10000000", "11111111", "01010101"]:
        print("ggm", s(key), x, s(ggm(key, b(x), 8)))
    print("ggm", s(key), "", s(ggm(key, [], 20)))
