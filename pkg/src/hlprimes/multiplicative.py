"""The character chi mod 4, lambda = 1*chi, and divisor switching.

Notation used throughout:

    chi(n)     = +1 for n == 1 (mod 4), -1 for n == 3 (mod 4), 0 for even n
    lambda(n)  = sum of chi(d) over divisors d of n
    r2(n)      = #{(a,b) in Z^2 : a^2 + b^2 = n} = 4*lambda(n)

For n == 1 (mod 4) the divisor sum can be split at any y > 0 into

    lambda(n) = sum_{a|n, a <= y} chi(a) + sum_{b|n, b < n/y} chi(b)

(boundary convention: the first sum is inclusive, the second strict), and
the split can be smoothed against a weight w supported on [1,2] with
integral of w(t)/t equal to 1, giving

    lambda(n) = integral of [w(y/Y) + w(n/(y*Y))] * D(y) dy/y,   Y >= 1,

where D(y) = sum of chi(b) over divisors b < y.  D is a step function, so
the quadrature splits the integration domain at every divisor inside it.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError
from .sieve import SpfTable


def chi(n: int) -> int:
    """Nonprincipal character mod 4: 0 on evens, +1 / -1 on 1 / 3 mod 4."""
    if n < 0:
        raise DomainError(f"chi is defined for n >= 0, got {n}")
    r = n & 3
    if r == 0 or r == 2:
        return 0
    return 1 if r == 1 else -1


def _chi_array(ns: np.ndarray) -> np.ndarray:
    r = ns & 3
    return np.where(r == 1, 1, np.where(r == 3, -1, 0))


def lambda_of(n: int, spf: SpfTable) -> int:
    """lambda(n) by the closed form over prime powers.

    A factor p^e contributes e+1 when p == 1 (mod 4); 1 when p == 3 (mod 4)
    and e is even, 0 when e is odd; and 1 when p = 2.
    """
    val = 1
    for p, e in spf.factorize(n):
        if p == 2:
            continue
        if p & 3 == 1:
            val *= e + 1
        elif e & 1:
            return 0
    return val


def lambda_via_divisors(n: int, spf: SpfTable) -> int:
    """lambda(n) by direct divisor enumeration (independent of the closed form)."""
    return int(_chi_array(spf.divisors(n)).sum())


def r2(n: int, spf: SpfTable) -> int:
    """Representations of n as an ordered, signed sum of two squares: 4*lambda(n)."""
    return 4 * lambda_of(n, spf)


def r2_bruteforce(n: int) -> int:
    """r2(n) by exhausting a in [-isqrt(n), isqrt(n)] and solving for b."""
    if n < 1:
        raise DomainError(f"r2_bruteforce needs n >= 1, got {n}")
    count = 0
    s = math.isqrt(n)
    for a in range(-s, s + 1):
        rem = n - a * a
        b = math.isqrt(rem)
        if b * b == rem:
            count += 2 if b > 0 else 1
    return count


def _split_preconditions(n: int, spf: SpfTable) -> np.ndarray:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n % 4 != 1:
        raise DomainError(f"divisor switching requires n == 1 (mod 4), got n={n}")
    return spf.divisors(n)


def divisor_split(n: int, y, spf: SpfTable) -> tuple[int, int]:
    """Split lambda(n) at y: (sum over a|n, a <= y, of chi(a); sum over b|n, b*y < n, of chi(b)).

    Requires n == 1 (mod 4); the two components always sum to lambda(n)
    exactly.  For integer y both comparisons are exact integer arithmetic.
    """
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    divs = _split_preconditions(n, spf)
    first = 0
    second = 0
    for d in divs:
        d = int(d)
        c = chi(d)
        if d <= y:
            first += c
        if d * y < n:
            second += c
    return first, second


def divisor_split_batch(n: int, ys: np.ndarray, spf: SpfTable) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`divisor_split` over an array of y values.

    Integer-dtype arrays use exact threshold arithmetic; float arrays rely
    on y staying away from the measure-zero divisor boundaries.
    """
    divs = _split_preconditions(n, spf)
    ys = np.asarray(ys)
    if ys.size and not np.all(ys > 0):
        raise DomainError("all y must be positive")
    chivals = _chi_array(divs)
    prefix = np.concatenate(([0], np.cumsum(chivals)))
    first = prefix[np.searchsorted(divs, ys, side="right")]
    if np.issubdtype(ys.dtype, np.integer):
        # b*y < n  <=>  b <= (n-1) // y
        thr = (n - 1) // ys
        second = prefix[np.searchsorted(divs, thr, side="right")]
    else:
        second = prefix[np.searchsorted(divs, n / ys, side="left")]
    return first, second


# ---------------------------------------------------------------------------
# smooth weights


def standard_bump(t: float) -> float:
    """The usual C-infinity bump exp(-1/((t-1)(2-t))) on (1,2), zero elsewhere."""
    if t <= 1.0 or t >= 2.0:
        return 0.0
    return math.exp(-1.0 / ((t - 1.0) * (2.0 - t)))


@dataclass(frozen=True)
class SmoothWeight:
    """A weight w supported on [1,2], normalized so that the integral of
    w(t)/t over (0, inf) equals 1.

    ``norm_const`` is the integral of shape(t)/t; calling the instance
    evaluates shape(t)/norm_const.  ``smooth`` records whether one-sided
    difference quotients at the endpoints vanish to working precision.
    """

    shape: Callable[[float], float] = field(repr=False)
    norm_const: float
    smooth: bool = True

    def __call__(self, t: float) -> float:
        return self.shape(t) / self.norm_const


def _adapt(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, True
    if depth <= 0:
        return left + right + delta / 15.0, False
    lv, lok = _adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
    rv, rok = _adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
    return lv + rv, lok and rok


def adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.

    Raises :class:`NumericError` (with the best estimate attached) if the
    recursion depth is exhausted before the local error test passes.
    """
    if not b > a:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    val, ok = _adapt(f, a, fa, m, fm, b, fb, whole, tol, max_depth)
    if not ok:
        raise NumericError(f"quadrature on [{a}, {b}] did not reach tol={tol}", estimate=val)
    return val


_SUPPORT_PROBES = (-1.0, 0.0, 0.5, 0.9, 0.999, 2.001, 2.1, 3.0, 10.0)
_QUOTIENT_STEPS = (1e-2, 1e-3, 1e-4)
_SMOOTH_EPS = 1e-9


def weight_normalize(shape: Callable[[float], float]) -> SmoothWeight:
    """Normalize a nonnegative shape supported on [1,2] into a SmoothWeight.

    The normalization integral is evaluated to ~1e-14 so the resulting
    weight satisfies the unit-integral condition within 1e-12.  Shapes whose
    endpoint difference quotients do not vanish are accepted but flagged
    ``smooth=False``.
    """
    for t in _SUPPORT_PROBES:
        if shape(t) != 0.0:
            raise DomainError(f"shape is nonzero at t={t}, outside [1, 2]")
    for t in np.linspace(1.0, 2.0, 41):
        if shape(float(t)) < 0.0:
            raise DomainError(f"shape is negative at t={t}")
    norm = adaptive_simpson(lambda t: shape(t) / t, 1.0, 2.0, 1e-14, max_depth=60)
    if not norm > 0.0 or not math.isfinite(norm):
        raise DomainError("shape integrates to zero; cannot normalize")
    quot = max(
        max(abs(shape(1.0 + h)), abs(shape(2.0 - h))) / h for h in _QUOTIENT_STEPS
    )
    return SmoothWeight(shape=shape, norm_const=norm, smooth=quot <= _SMOOTH_EPS)


# ---------------------------------------------------------------------------
# the smoothed switching identity


def _merge_intervals(segs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    segs = sorted((s, e) for s, e in segs if e > s)
    merged: list[tuple[float, float]] = []
    for s, e in segs:
        if merged and s <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return merged


def smoothed_identity_eval(
    n: int,
    Y: float,
    w: SmoothWeight,
    spf: SpfTable,
    tol: float = 1e-9,
) -> float:
    """Evaluate the smoothed divisor-switching integral; equals lambda(n).

    Integrates [w(y/Y) + w(n/(y*Y))] * D(y) / y over the union of the two
    weight supports y in [Y, 2Y] and [n/(2Y), n/Y], where D(y) is the
    partial sum of chi over divisors below y.  The domain is subdivided at
    every divisor of n inside it, so each quadrature piece has a constant
    D and a smooth integrand.
    """
    if n < 1 or n % 4 != 1:
        raise DomainError(f"identity requires n == 1 (mod 4), got n={n}")
    if Y < 1.0:
        raise DomainError(f"Y must be >= 1, got {Y}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    divs = [int(d) for d in spf.divisors(n)]
    prefix = [0]
    for d in divs:
        prefix.append(prefix[-1] + chi(d))

    def dstep(y: float) -> int:
        return prefix[bisect_left(divs, y)]

    segments = _merge_intervals([(Y, 2.0 * Y), (n / (2.0 * Y), n / Y)])
    pieces: list[tuple[float, float, int]] = []
    for s, e in segments:
        bps = [s] + [float(d) for d in divs if s < d < e] + [e]
        for lo, hi in zip(bps, bps[1:]):
            d_val = dstep(0.5 * (lo + hi))
            if d_val != 0:
                pieces.append((lo, hi, d_val))
    if not pieces:
        return 0.0

    def g(y: float) -> float:
        return (w(y / Y) + w(n / (y * Y))) / y

    budget = 0.5 * tol / len(pieces)
    total = 0.0
    failed = False
    for lo, hi, d_val in pieces:
        try:
            part = adaptive_simpson(g, lo, hi, budget / abs(d_val))
        except NumericError as err:
            part = err.estimate or 0.0
            failed = True
        total += d_val * part
    if failed:
        raise NumericError(
            f"smoothed identity quadrature for n={n}, Y={Y} missed tol={tol}",
            estimate=total,
        )
    return total
