"""Prime tables and smallest-prime-factor tables.

Everything downstream (multiplicative functions, progression counts,
asymptotic tables) consumes these two exact-integer structures:

* :class:`PrimeTable` -- a primality bitmap over [2, limit], stored for odd
  numbers only (2 is special-cased), built by a segmented sieve of
  Eratosthenes.  Supports membership tests, pi(x) queries, and
  residue-filtered prime streams.
* :class:`SpfTable` -- smallest prime factor of every n <= limit, giving
  O(log n) factorization, totients, and divisor enumeration.

Both tables are immutable after construction, so concurrent reads are safe.
Segmented construction over disjoint index ranges is bit-for-bit identical
to monolithic construction.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from math import isqrt

import numpy as np

from .errors import CapacityError, RangeError

MAX_PRIME_LIMIT = 2**32
MAX_SPF_LIMIT = 2**31 - 1  # spf entries are stored as int32
DEFAULT_SEGMENT = 1 << 18  # numbers per segment, sized for L2 cache


def _simple_odd_sieve(limit: int) -> np.ndarray:
    """Boolean array over odd numbers 1,3,5,... <= limit (monolithic)."""
    size = (limit + 1) // 2
    bits = np.ones(size, dtype=bool)
    bits[0] = False  # 1 is not prime
    for p in range(3, isqrt(limit) + 1, 2):
        if bits[p >> 1]:
            bits[(p * p) >> 1 :: p] = False
    return bits


class PrimeTable:
    """Primality of every integer in [2, limit], odd numbers bit-mapped.

    ``odd_bits[i]`` is the primality of ``2*i + 1``; the prime 2 is handled
    separately.  Use :func:`build_prime_table` to construct.
    """

    __slots__ = ("limit", "odd_bits", "_prime_cache")

    def __init__(self, limit: int, odd_bits: np.ndarray):
        self.limit = int(limit)
        self.odd_bits = odd_bits
        self._prime_cache: np.ndarray | None = None

    def is_prime(self, n: int) -> bool:
        """Membership test; n must not exceed the table limit."""
        if n > self.limit:
            raise RangeError(f"n={n} exceeds prime table limit {self.limit}")
        if n < 2:
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        return bool(self.odd_bits[(n - 1) >> 1])

    def is_prime_array(self, ns: np.ndarray) -> np.ndarray:
        """Vectorized membership for an integer array."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and int(ns.max()) > self.limit:
            raise RangeError(f"array max {int(ns.max())} exceeds limit {self.limit}")
        odd = (ns & 1) == 1
        idx = np.where(odd & (ns >= 3), (ns - 1) >> 1, 0)
        res = np.where(odd & (ns >= 3), self.odd_bits[idx], False)
        return res | (ns == 2)

    def primes(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        """All primes in [lo, hi] as an int64 array, ascending."""
        if self._prime_cache is None:
            odd_primes = (np.flatnonzero(self.odd_bits).astype(np.int64) << 1) + 1
            self._prime_cache = np.concatenate(([2], odd_primes)) if self.limit >= 2 else odd_primes
        hi = self.limit if hi is None else hi
        if hi > self.limit:
            raise RangeError(f"hi={hi} exceeds prime table limit {self.limit}")
        arr = self._prime_cache
        i = int(np.searchsorted(arr, lo, side="left"))
        j = int(np.searchsorted(arr, hi, side="right"))
        return arr[i:j]

    def primes_mod(self, residue: int, modulus: int, hi: int | None = None) -> np.ndarray:
        """Primes p <= hi with p == residue (mod modulus)."""
        ps = self.primes(hi=hi)
        return ps[ps % modulus == residue % modulus]

    def prime_count(self, x: int) -> int:
        """pi(x) = number of primes <= x."""
        if x > self.limit:
            raise RangeError(f"x={x} exceeds prime table limit {self.limit}")
        if x < 2:
            return 0
        return 1 + int(np.count_nonzero(self.odd_bits[: ((x - 1) >> 1) + 1]))

    def __iter__(self):
        for p in self.primes():
            yield int(p)

    def __repr__(self):
        return f"PrimeTable(limit={self.limit})"


def _mark_segment(bits: np.ndarray, base: np.ndarray, i0: int, i1: int) -> None:
    """Clear composites in the odd-index window [i0, i1)."""
    lo_val = 2 * i0 + 1
    hi_val = 2 * i1 - 1
    for p in base:
        p = int(p)
        if p * p > hi_val:
            break
        m = max(p * p, ((lo_val + p - 1) // p) * p)
        if m % 2 == 0:
            m += p
        if m > hi_val:
            continue
        bits[(m - 1) >> 1 : i1 : p] = False


def build_prime_table(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> PrimeTable:
    """Sieve primality of [2, limit] in cache-sized segments.

    ``segment_size`` is in numbers (each segment covers segment_size/2 odd
    indices).  With ``threads > 1`` the disjoint segments are sieved
    concurrently; the result is identical to the sequential build.
    """
    if limit < 2 or limit > MAX_PRIME_LIMIT:
        raise CapacityError(f"prime table limit must be in [2, {MAX_PRIME_LIMIT}], got {limit}")
    if segment_size < 64:
        raise CapacityError(f"segment_size too small: {segment_size}")
    size = (limit + 1) // 2
    bits = np.ones(size, dtype=bool)
    bits[0] = False
    root = isqrt(limit)
    base_bits = _simple_odd_sieve(root) if root >= 3 else np.zeros(0, dtype=bool)
    base = (np.flatnonzero(base_bits).astype(np.int64) << 1) + 1

    span = max(segment_size // 2, 32)
    windows = [(i0, min(i0 + span, size)) for i0 in range(1, size, span)]
    if threads > 1 and len(windows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda w: _mark_segment(bits, base, *w), windows))
    else:
        for w in windows:
            _mark_segment(bits, base, *w)
    return PrimeTable(limit, bits)


class SpfTable:
    """Smallest prime factor of every n in [2, limit].

    ``spf[n]`` is the least prime dividing n; ``spf[p] == p`` exactly for
    primes.  Entries are int32, which caps the limit at 2^31 - 1.
    """

    __slots__ = ("limit", "spf")

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        self.spf = spf

    def _check(self, n: int) -> None:
        if n < 1 or n > self.limit:
            raise RangeError(f"n={n} outside [1, {self.limit}]")

    def smallest_factor(self, n: int) -> int:
        self._check(n)
        return int(self.spf[n])

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization as [(p, e), ...] with p strictly increasing."""
        self._check(n)
        out: list[tuple[int, int]] = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def totient(self, n: int) -> int:
        """Euler phi(n), via the factorization."""
        self._check(n)
        spf = self.spf
        r = 1
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            r *= (p - 1) * p ** (e - 1)
        return r

    def divisors(self, n: int) -> np.ndarray:
        """All divisors of n, sorted ascending, as an int64 array."""
        self._check(n)
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return np.sort(np.asarray(divs, dtype=np.int64))

    def __repr__(self):
        return f"SpfTable(limit={self.limit})"


def build_spf_table(limit: int) -> SpfTable:
    """Sieve the smallest-prime-factor array for [1, limit]."""
    if limit < 2 or limit > MAX_SPF_LIMIT:
        raise CapacityError(f"spf table limit must be in [2, {MAX_SPF_LIMIT}], got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for i in range(2, isqrt(limit) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest.astype(np.int32)
    spf[1] = 1
    return SpfTable(limit, spf)
