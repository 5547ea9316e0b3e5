#!/usr/bin/env python3
"""Independent numpy/scipy evaluation of the twelve randomness tests.

Prints JSON with the p-values for the reference sequences used by
tests/test_nist.cpp:
  splitmix:<seed>  10^6 bits from SplitMix64 words, most significant bit first
  counter          32-bit big-endian counters 0,1,2,... truncated to 10^6 bits
"""
import json
import math
import sys

import numpy as np
from scipy.special import erfc, gammaincc, gammaln
from scipy.stats import norm

MASK = (1 << 64) - 1
N_BITS = 1_000_000


def splitmix_bits(seed, n):
    state = seed
    words = []
    for _ in range((n + 63) // 64):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        words.append(z ^ (z >> 31))
    raw = np.array(words, dtype=">u8").view(np.uint8)
    return np.unpackbits(raw)[:n].astype(np.int64)


def counter_bits(n):
    raw = np.arange((n + 31) // 32, dtype=">u4").view(np.uint8)
    return np.unpackbits(raw)[:n].astype(np.int64)


def frequency(e):
    s = np.sum(2 * e - 1)
    return [erfc(abs(s) / math.sqrt(len(e)) / math.sqrt(2))]


def block_frequency(e, m=128):
    nb = len(e) // m
    pi = e[: nb * m].reshape(nb, m).mean(axis=1)
    chi2 = 4 * m * np.sum((pi - 0.5) ** 2)
    return [gammaincc(nb / 2, chi2 / 2)]


def cumulative_sums(e):
    n = len(e)
    out = []
    for x in (e, e[::-1]):
        z = int(np.max(np.abs(np.cumsum(2 * x - 1))))
        sq = math.sqrt(n)
        # C-style truncating integer division for the summation bounds
        lo1, hi1 = int((-n / z + 1) / 4), int((n / z - 1) / 4)
        lo2 = int((-n / z - 3) / 4)
        s1 = sum(norm.cdf((4 * k + 1) * z / sq) - norm.cdf((4 * k - 1) * z / sq) for k in range(lo1, hi1 + 1))
        s2 = sum(norm.cdf((4 * k + 3) * z / sq) - norm.cdf((4 * k + 1) * z / sq) for k in range(lo2, hi1 + 1))
        out.append(1 - s1 + s2)
    return out


def runs(e):
    n = len(e)
    pi = e.mean()
    v = 1 + int(np.sum(e[1:] != e[:-1]))
    return [erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))]


def longest_run(e):
    m = 10_000
    probs = [0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727]
    nb = len(e) // m
    counts = [0] * 7
    for block in e[: nb * m].reshape(nb, m):
        best = cur = 0
        for b in block:
            cur = cur + 1 if b else 0
            best = max(best, cur)
        counts[min(max(best, 10), 16) - 10] += 1
    chi2 = sum((c - nb * p) ** 2 / (nb * p) for c, p in zip(counts, probs))
    return [gammaincc(3, chi2 / 2)]


def gf2_rank(rows):
    rank = 0
    rows = list(rows)
    for col in range(31, -1, -1):
        pivot = next((i for i in range(rank, len(rows)) if rows[i] >> col & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> col & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def rank_probability(r, m=32, q=32):
    log_p = r * (q + m - r) - m * q
    for i in range(r):
        log_p += math.log2((1 - 2.0 ** (i - q)) * (1 - 2.0 ** (i - m)) / (1 - 2.0 ** (i - r)))
    return 2.0 ** log_p


def rank(e):
    nm = len(e) // 1024
    full = minus1 = 0
    weights = 1 << np.arange(31, -1, -1, dtype=np.int64)
    for k in range(nm):
        mat = e[k * 1024 : (k + 1) * 1024].reshape(32, 32)
        r = gf2_rank(int(v) for v in mat @ weights)
        full += r == 32
        minus1 += r == 31
    p32, p31 = rank_probability(32), rank_probability(31)
    p30 = 1 - p32 - p31
    rest = nm - full - minus1
    chi2 = (full - p32 * nm) ** 2 / (p32 * nm) + (minus1 - p31 * nm) ** 2 / (p31 * nm) + (rest - p30 * nm) ** 2 / (p30 * nm)
    return [math.exp(-chi2 / 2)]


def spectral(e):
    n = len(e)
    mod = np.abs(np.fft.fft(2 * e - 1))[: n // 2]
    t = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2
    n1 = np.sum(mod < t)
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4)
    return [erfc(abs(d) / math.sqrt(2))]


def non_overlapping(e, template="000000001", nblocks=8):
    tpl = [int(c) for c in template]
    m = len(tpl)
    bm = len(e) // nblocks
    counts = []
    for b in range(nblocks):
        block = e[b * bm : (b + 1) * bm].tolist()
        i = w = 0
        while i <= bm - m:
            if block[i : i + m] == tpl:
                w += 1
                i += m
            else:
                i += 1
        counts.append(w)
    mu = (bm - m + 1) / 2**m
    var = bm * (1 / 2**m - (2 * m - 1) / 2 ** (2 * m))
    chi2 = sum((w - mu) ** 2 / var for w in counts)
    return [gammaincc(nblocks / 2, chi2 / 2)]


def overlapping_probability(u, eta):
    if u == 0:
        return math.exp(-eta)
    return sum(
        math.exp(-eta - u * math.log(2) + l * math.log(eta) - gammaln(l + 1) + gammaln(u) - gammaln(l) - gammaln(u - l + 1))
        for l in range(1, u + 1)
    )


def overlapping(e, template="111111111", m_block=1032):
    tpl = np.array([int(c) for c in template])
    m = len(tpl)
    nb = len(e) // m_block
    lam = (m_block - m + 1) / 2**m
    eta = lam / 2
    pi = [overlapping_probability(u, eta) for u in range(5)]
    pi.append(1 - sum(pi))
    v = [0] * 6
    windows = np.lib.stride_tricks.sliding_window_view(e, m)
    hits = np.all(windows == tpl, axis=1)
    for b in range(nb):
        c = int(np.sum(hits[b * m_block : b * m_block + m_block - m + 1]))
        v[min(c, 5)] += 1
    chi2 = sum((v[i] - nb * pi[i]) ** 2 / (nb * pi[i]) for i in range(6))
    return [gammaincc(5 / 2, chi2 / 2)]


def universal(e):
    L, Q = 7, 1280
    expected, variance = 6.1962507, 3.125
    nblocks = len(e) // L
    K = nblocks - Q
    weights = 1 << np.arange(L - 1, -1, -1)
    vals = e[: nblocks * L].reshape(nblocks, L) @ weights
    last = [0] * (1 << L)
    for i in range(Q):
        last[vals[i]] = i + 1
    total = 0.0
    for i in range(Q, nblocks):
        total += math.log2(i + 1 - last[vals[i]])
        last[vals[i]] = i + 1
    fn = total / K
    c = 0.7 - 0.8 / L + (4 + 32 / L) * K ** (-3 / L) / 15
    sigma = c * math.sqrt(variance / K)
    return [erfc(abs(fn - expected) / (math.sqrt(2) * sigma))]


def circular_counts(e, m):
    n = len(e)
    if m == 0:
        return np.array([n])
    ext = np.concatenate([e, e[: m - 1]])
    vals = np.zeros(n, dtype=np.int64)
    for j in range(m):
        vals = (vals << 1) | ext[j : j + n]
    return np.bincount(vals, minlength=1 << m)


def approximate_entropy(e, m=10):
    n = len(e)

    def phi(mm):
        c = circular_counts(e, mm) / n
        c = c[c > 0]
        return float(np.sum(c * np.log(c)))

    apen = phi(m) - phi(m + 1)
    chi2 = 2 * n * (math.log(2) - apen)
    return [gammaincc(2 ** (m - 1), chi2 / 2)]


def serial(e, m=16):
    n = len(e)

    def psi(mm):
        if mm <= 0:
            return 0.0
        c = circular_counts(e, mm).astype(np.float64)
        return 2**mm / n * float(np.sum(c * c)) - n

    d1 = psi(m) - psi(m - 1)
    d2 = psi(m) - 2 * psi(m - 1) + psi(m - 2)
    return [gammaincc(2 ** (m - 2), d1 / 2), gammaincc(2 ** (m - 3), d2 / 2)]


TESTS = [
    ("frequency", frequency),
    ("block_frequency", block_frequency),
    ("cumulative_sums", cumulative_sums),
    ("runs", runs),
    ("longest_run", longest_run),
    ("rank", rank),
    ("spectral", spectral),
    ("non_overlapping_template", non_overlapping),
    ("overlapping_template", overlapping),
    ("universal", universal),
    ("approximate_entropy", approximate_entropy),
    ("serial", serial),
]


def evaluate(e):
    return {name: [float(p) for p in fn(e)] for name, fn in TESTS}


def main():
    seeds = [int(s) for s in sys.argv[1:]] or [1, 2]
    out = {f"splitmix:{s}": evaluate(splitmix_bits(s, N_BITS)) for s in seeds}
    c = counter_bits(N_BITS)
    out["counter"] = {"approximate_entropy": approximate_entropy(c), "serial": serial(c)}
    json.dump(out, sys.stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
