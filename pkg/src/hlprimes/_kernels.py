"""Numba kernels for the two hot loops.

Both kernels are sequential and release the GIL, so callers can shard work
over threads and merge the exact (or fixed-order) partial results without
any scheduling dependence.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def leibniz_pair_sum(pairs: int) -> float:
    """Sum of 1/(4j+1) - 1/(4j+3) = 2/((4j+1)(4j+3)) for j in [0, pairs).

    Kahan-compensated so the rounding error stays near machine epsilon even
    for ~1e9 pairs.
    """
    s = 0.0
    c = 0.0
    for j in range(pairs):
        d = 4.0 * j + 1.0
        term = 2.0 / (d * (d + 2.0))
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(cache=True, nogil=True)
def count_divisors_upto(primes_block, spf, a, Q, k, ell, counts):
    """For each prime p in the block (with p == ell mod k when k > 1),
    increment counts[q] for every divisor q <= Q of p - a.

    Requires p > a for every p in the block and p - a <= len(spf) - 1.
    Exact integer accumulation, so merge order is irrelevant.
    """
    divs = np.empty(2048, dtype=np.int64)
    for idx in range(primes_block.size):
        p = primes_block[idx]
        if k > 1 and p % k != ell:
            continue
        n = p - a
        divs[0] = 1
        nd = 1
        while n > 1:
            q = np.int64(spf[n])
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            base = nd
            pk = np.int64(1)
            for _ in range(e):
                pk *= q
                for t in range(base):
                    d = divs[t] * pk
                    if d <= Q:
                        divs[nd] = d
                        nd += 1
        for t in range(nd):
            counts[divs[t]] += 1


@njit(cache=True, nogil=True)
def weighted_divisors_upto(primes_block, weights, spf, a, Q, k, ell, acc):
    """Weighted variant: acc[q] += weights[idx] for each divisor q <= Q of
    p - a.  Accumulation order is the in-block prime order; callers must
    merge block partials in a fixed block order for bitwise determinism.
    """
    divs = np.empty(2048, dtype=np.int64)
    for idx in range(primes_block.size):
        p = primes_block[idx]
        if k > 1 and p % k != ell:
            continue
        wp = weights[idx]
        n = p - a
        divs[0] = 1
        nd = 1
        while n > 1:
            q = np.int64(spf[n])
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            base = nd
            pk = np.int64(1)
            for _ in range(e):
                pk *= q
                for t in range(base):
                    d = divs[t] * pk
                    if d <= Q:
                        divs[nd] = d
                        nd += 1
        for t in range(nd):
            acc[divs[t]] += wp
