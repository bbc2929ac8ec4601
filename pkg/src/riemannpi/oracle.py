"""Exact integer-side number theory: sieve, Moebius, von Mangoldt, pi, theta, psi.

This module is the ground truth the analytic estimators are tested
against.  Large sieves are segmented (memory goes with the segment, not
the limit) and keep only a per-segment census: prime counts plus
float64 log sums.  Point queries re-sieve the one segment they land in.

Accuracy of theta/psi: logs are IEEE doubles summed segment-wise with
numpy pairwise summation and combined with math.fsum, so the absolute
error at the default cap (1e9) stays below ~1e-7 — five orders of
magnitude finer than anything the floor-sensitive consumers need.
Summation order is fixed, so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np
from mpmath import mp, mpf

from .errors import DomainError, RangeLimitError, ResourceError
from .precision import BigReal, PrecisionPolicy, DEFAULT_POLICY

DEFAULT_SIEVE_CAP = 10**9
SEGMENT_SIZE = 1 << 23

_small_primes_cache: Optional[np.ndarray] = None


def _dense_sieve(limit: int) -> np.ndarray:
    """Plain sieve of Eratosthenes, returns primes <= limit as int64."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def _small_primes() -> np.ndarray:
    global _small_primes_cache
    if _small_primes_cache is None:
        _small_primes_cache = _dense_sieve(65536)
    return _small_primes_cache


def moebius(n: int) -> int:
    """Moebius function via trial division; 0 iff n has a squared factor."""
    if n < 1:
        raise DomainError(f"moebius undefined for n={n}")
    if n == 1:
        return 1
    parity = 0
    m = n
    for p in _small_primes():
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            parity ^= 1
    if m > 1:
        # every remaining prime factor exceeds 65536
        root = math.isqrt(m)
        if root * root == m:
            return 0
        if _is_prime_large(m):
            parity ^= 1
        elif m < 65536**3:
            # exactly two distinct large primes: parity unchanged
            pass
        else:
            raise DomainError(f"moebius: cannot factor remainder {m}")
    return -1 if parity else 1


def is_prime_power(n: int) -> Optional[Tuple[int, int]]:
    """(p, k) with n = p**k when n is a prime power, else None."""
    if n < 2:
        return None
    for p in _small_primes():
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    # no prime factor <= 65536: n is prime, a square of a prime, or has
    # at most two large prime factors
    root = math.isqrt(n)
    if root * root == n and root > 1 and is_prime_power(root) == (root, 1):
        return (root, 2)
    if _is_prime_large(n):
        return (n, 1)
    return None


def _is_prime_large(n: int) -> bool:
    if n < 2:
        return False
    for p in _small_primes():
        p = int(p)
        if p * p > n:
            return True
        if n % p == 0:
            return n == p
    # beyond 65536**2 = 4.3e9: deterministic Miller-Rabin
    return _miller_rabin(n)


def _miller_rabin(n: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % a == 0:
            return n == a
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def von_mangoldt(n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """log p when n = p^k, else zero, at the policy's working precision."""
    if n < 1:
        raise DomainError(f"von Mangoldt undefined for n={n}")
    pk = is_prime_power(n)
    wd = policy.working_for()
    if pk is None:
        return BigReal.from_any(0, wd)
    with mp.workdps(wd):
        return BigReal(mp.log(pk[0]), wd)


@dataclass(frozen=True)
class ExactChebyshev:
    theta: BigReal
    psi: BigReal


class SieveOracle:
    """Segmented prime sieve with census rows for fast prefix queries."""

    def __init__(self, limit: int, cap: int = DEFAULT_SIEVE_CAP):
        if limit < 2:
            raise DomainError(f"sieve limit must be >= 2, got {limit}")
        if limit > cap:
            raise ResourceError(f"sieve limit {limit} exceeds configured cap {cap}")
        self.limit = int(limit)
        self.base_primes = _dense_sieve(int(math.isqrt(self.limit)))
        self._small = _dense_sieve(min(self.limit, 65536))
        self._small_logcum = np.concatenate(
            [[0.0], np.cumsum(np.log(self._small.astype(np.float64)))]
        )
        n_seg = (self.limit + SEGMENT_SIZE) // SEGMENT_SIZE
        self._seg_count = np.zeros(n_seg, dtype=np.int64)
        self._seg_theta = np.zeros(n_seg, dtype=np.float64)
        for i in range(n_seg):
            primes = self._segment_primes(i)
            self._seg_count[i] = len(primes)
            if len(primes):
                self._seg_theta[i] = np.log(primes.astype(np.float64)).sum()
        self._count_prefix = np.concatenate([[0], np.cumsum(self._seg_count)])

    # -- segment machinery ------------------------------------------------

    def _segment_bounds(self, i: int) -> Tuple[int, int]:
        lo = i * SEGMENT_SIZE
        hi = min(lo + SEGMENT_SIZE, self.limit + 1)
        return lo, hi

    def _segment_primes(self, i: int) -> np.ndarray:
        lo, hi = self._segment_bounds(i)
        flags = np.ones(hi - lo, dtype=bool)
        for x in range(lo, min(hi, 2)):
            flags[x - lo] = False
        for p in self.base_primes:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo :: p] = False
        # base primes themselves live in segment 0
        return np.nonzero(flags)[0] + lo

    def iter_prime_segments(self) -> Iterator[np.ndarray]:
        for i in range(len(self._seg_count)):
            yield self._segment_primes(i)

    # -- queries -----------------------------------------------------------

    def _check_range(self, x: int):
        if x > self.limit:
            raise RangeLimitError(f"x={x} beyond sieve limit {self.limit}")

    def prime_count(self) -> int:
        return int(self._count_prefix[-1])

    def exact_pi(self, x: int) -> int:
        if x < 2:
            return 0
        self._check_range(x)
        i = x // SEGMENT_SIZE
        primes = self._segment_primes(i)
        return int(self._count_prefix[i]) + int(np.searchsorted(primes, x, "right"))

    def theta_float(self, x: int) -> float:
        """theta(x) as a float64 (fsum over segment census rows)."""
        if x < 2:
            return 0.0
        self._check_range(x)
        if len(self._small) and x <= int(self._small[-1]):
            k = int(np.searchsorted(self._small, x, "right"))
            return float(self._small_logcum[k])
        i = x // SEGMENT_SIZE
        primes = self._segment_primes(i)
        part = primes[primes <= x]
        pieces = list(self._seg_theta[:i])
        if len(part):
            pieces.append(np.log(part.astype(np.float64)).sum())
        return math.fsum(pieces)

    def psi_float(self, x: int) -> float:
        """psi(x) = sum_k theta(x^(1/k)), exact prime-power accounting."""
        if x < 2:
            return 0.0
        self._check_range(x)
        total = [self.theta_float(x)]
        k = 2
        while True:
            r = _integer_kth_root(x, k)
            if r < 2:
                break
            total.append(self.theta_float(r))
            k += 1
        return math.fsum(total)

    def exact_chebyshev(
        self, x: int, policy: PrecisionPolicy = DEFAULT_POLICY
    ) -> ExactChebyshev:
        th = self.theta_float(x)
        ps = self.psi_float(x)
        return ExactChebyshev(theta=BigReal.from_any(th, 16), psi=BigReal.from_any(ps, 16))


def _integer_kth_root(x: int, k: int) -> int:
    """Largest r with r**k <= x."""
    if x < 1:
        return 0
    r = int(round(x ** (1.0 / k)))
    while r > 0 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def build_sieve(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> SieveOracle:
    return SieveOracle(limit, cap=cap)


def lambda_prefix(limit: int) -> np.ndarray:
    """psi(x) for x = 0..limit as float64, via a von Mangoldt table.

    The cumulative sum runs in extended precision so the rounding drift
    stays ~1e-12 even at limit = 1e7.  Used by the disagreement scanner
    and the dual-route psi identity test.
    """
    if limit < 1:
        raise DomainError("limit must be >= 1")
    if limit > 10**7:
        raise ResourceError("lambda_prefix is meant for desk-scale limits (<= 1e7)")
    lam = np.zeros(limit + 1, dtype=np.float64)
    primes = _dense_sieve(limit)
    for p in primes:
        p = int(p)
        logp = math.log(p)
        q = p
        while q <= limit:
            lam[q] = logp
            q *= p
    return np.cumsum(lam.astype(np.longdouble)).astype(np.float64)
