"""Arbitrary-precision special functions: Ei, li, offset Li, zeta, Gram series, Moebius sum.

All series run inside mpmath working-precision contexts derived from a
PrecisionPolicy.  Conventions:

  * Ei by its convergent series gamma + ln z + sum z^n/(n*n!): every
    term is positive for z > 0, so there is no cancellation, only the
    peak-term growth the policy's log10(x) inflation absorbs.
  * li(x) = Ei(ln x) for x > 1.
  * Li(y) = li(y) - li(2), the offset logarithmic integral.  The Moebius
    sum uses the offset form.
  * zeta at integer arguments by Borwein's alternating-series
    acceleration (switching to the direct Dirichlet sum once 2^-n is
    below working resolution), cached per (n, working digits).
  * Ri by the Gram series 1 + sum (ln x)^n / (n * zeta(n+1) * n!), with
    the term recurrence and the n > ln x stop guard (terms peak near
    n = ln x, so the size test alone would stop too early).

Floor/integer-part conversions never happen here; callers that report
integer parts do their own flooring.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Optional

from mpmath import mp, mpf

from .errors import DomainError
from .oracle import moebius
from .precision import BigReal, PrecisionPolicy, DEFAULT_POLICY

_MAX_SERIES_TERMS = 200_000


def _coerce_mpf(x, wd: int) -> mpf:
    if isinstance(x, BigReal):
        return x.value
    with mp.workdps(wd):
        return mpf(x)


# ---------------------------------------------------------------------------
# exponential / logarithmic integral
# ---------------------------------------------------------------------------

def _ei_series(z: mpf, wd: int) -> mpf:
    with mp.workdps(wd):
        s = mp.euler + mp.log(z)
        tiny = mpf(10) ** (-wd)
        p = mpf(1)
        n = 0
        zf = float(z)
        while True:
            n += 1
            p = p * z / n
            add = p / n
            s += add
            if n > zf and add < tiny * abs(s):
                return s
            if n > _MAX_SERIES_TERMS:
                raise DomainError(f"Ei series failed to converge for z={float(z)!r}")


def exp_integral_ei(z, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """Ei(z) for z > 0 to the policy's target digits."""
    wd0 = policy.working_for()
    zv = _coerce_mpf(z, wd0)
    if not zv > 0:
        raise DomainError(f"Ei requires z > 0, got {zv}")
    wd = policy.working_for_log(zv)
    return BigReal(_ei_series(_coerce_mpf(z, wd), wd), wd)


def _li_mpf(x: mpf, wd: int) -> mpf:
    with mp.workdps(wd):
        return _ei_series(mp.log(x), wd)


def li(x, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """Logarithmic integral li(x) = Ei(ln x) for x > 1."""
    wd = policy.working_for(x)
    xv = _coerce_mpf(x, wd)
    if not xv > 1:
        raise DomainError(f"li requires x > 1, got {xv}")
    return BigReal(_li_mpf(xv, wd), wd)


_li2_cache: dict[int, mpf] = {}
_li2_lock = threading.Lock()


def _li2(wd: int) -> mpf:
    with _li2_lock:
        v = _li2_cache.get(wd)
        if v is None:
            v = _li_mpf(mpf(2), wd)
            _li2_cache[wd] = v
        return v


def li_offset(y, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """Offset logarithmic integral Li(y) = li(y) - li(2), for y > 1."""
    wd = policy.working_for(y)
    yv = _coerce_mpf(y, wd)
    if not yv > 1:
        raise DomainError(f"Li requires y > 1, got {yv}")
    with mp.workdps(wd):
        return BigReal(_li_mpf(yv, wd) - _li2(wd), wd)


# ---------------------------------------------------------------------------
# zeta at integers
# ---------------------------------------------------------------------------

_borwein_cache: dict[int, list[int]] = {}
_zeta_cache: dict[tuple[int, int], mpf] = {}
_zeta_lock = threading.Lock()


def _borwein_d(m: int) -> list[int]:
    d = _borwein_cache.get(m)
    if d is not None:
        return d
    # d_k = m * sum_{i<=k} (m+i-1)! 4^i / ((m-i)! (2i)!), exact integers
    terms = []
    t = Fraction(1)
    terms.append(t)
    for i in range(1, m + 1):
        t = t * Fraction(4 * (m + i - 1) * (m - i + 1), (2 * i - 1) * (2 * i))
        terms.append(t)
    acc = Fraction(0)
    d = []
    for t in terms:
        acc += t
        v = acc * m
        assert v.denominator == 1
        d.append(int(v))
    _borwein_cache[m] = d
    return d


def _zeta_direct(n: int, wd: int) -> mpf:
    with mp.workdps(wd):
        tiny = mpf(10) ** (-(wd + 4))
        s = mpf(1)
        k = 2
        while True:
            t = mpf(k) ** (-n)
            s += t
            # geometric tail bound: sum_{j>k} j^-n < (k+1)^-n * (k+1)/n-ish;
            # the crude bound t itself suffices once below tiny
            if t < tiny:
                return s
            k += 1


def _zeta_borwein(n: int, wd: int) -> mpf:
    m = int(1.32 * (wd + 6)) + 6
    d = _borwein_d(m)
    with mp.workdps(wd + 8):
        s = mpf(0)
        dm = d[m]
        for k in range(m):
            term = mpf(d[k] - dm) / mpf(k + 1) ** n
            s = s - term if k % 2 else s + term
        val = -s / (dm * (1 - mpf(2) ** (1 - n)))
    with mp.workdps(wd):
        return +val


def zeta_int(n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """zeta(n) for integer n >= 2."""
    wd = policy.working_for()
    return BigReal(_zeta_mpf(n, wd), wd)


def _zeta_mpf(n: int, wd: int) -> mpf:
    if n < 2:
        raise DomainError(f"zeta_int requires n >= 2, got {n}")
    key = (n, wd)
    with _zeta_lock:
        v = _zeta_cache.get(key)
    if v is not None:
        return v
    if n > 3.33 * (wd + 6):
        v = _zeta_direct(n, wd)
    else:
        v = _zeta_borwein(n, wd)
    with _zeta_lock:
        _zeta_cache[key] = v
    return v


# ---------------------------------------------------------------------------
# Riemann prime counting function
# ---------------------------------------------------------------------------

def _ri_gram_mpf(x: mpf, wd: int) -> mpf:
    with mp.workdps(wd):
        lx = mp.log(x)
        tiny = mpf(10) ** (-wd)
        s = mpf(1)
        p = mpf(1)  # (ln x)^n / n!
        n = 0
        peak = abs(float(lx))
        while True:
            n += 1
            p = p * lx / n
            add = p / (n * _zeta_mpf(n + 1, wd))
            s += add
            if n > peak and abs(add) < tiny * abs(s):
                return s
            if n > _MAX_SERIES_TERMS:
                raise DomainError(f"Gram series failed to converge for x={float(x)!r}")


def ri_gram(x, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """Ri(x) via the Gram series.

    Defined for any x > 0: the series is entire in ln x, and the
    disagreement scanner evaluates it below 1 (psi(2) = log 2).
    """
    wd = policy.working_for(x)
    xv = _coerce_mpf(x, wd)
    if not xv > 0:
        raise DomainError(f"ri_gram requires x > 0, got {xv}")
    return BigReal(_ri_gram_mpf(xv, wd), wd)


def _ri_moebius_mpf(x: mpf, n_terms: int, wd: int) -> mpf:
    with mp.workdps(wd):
        li2 = _li2(wd)
        s = mpf(0)
        for n in range(1, n_terms + 1):
            mu = moebius(n)
            if mu == 0:
                continue
            r = x ** (mpf(1) / n)
            if not r > 1 + mpf(10) ** (-wd // 2):
                raise DomainError(
                    f"Moebius sum term n={n}: x^(1/n)={float(r)!r} is at or below the li singularity"
                )
            term = (_li_mpf(r, wd) - li2) / n
            s = s + term if mu > 0 else s - term
        return s


def ri_moebius(x, n_terms: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """Truncated Moebius sum sum_{n<=N} mu(n)/n * Li(x^(1/n)).

    Terms with mu(n) = 0 are skipped.  Every contributing root x^(1/n)
    must stay strictly above 1 (the li singularity); the error message
    names the first offending n.
    """
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms}")
    wd = policy.working_for(x)
    xv = _coerce_mpf(x, wd)
    if not xv > 1:
        raise DomainError(f"ri_moebius requires x > 1, got {xv}")
    return BigReal(_ri_moebius_mpf(xv, n_terms, wd), wd)


# ---------------------------------------------------------------------------
# reporting-layer helper
# ---------------------------------------------------------------------------

def stable_floor(
    evaluate: Callable[[PrecisionPolicy], BigReal],
    policy: PrecisionPolicy,
    boosts: int = 3,
    step: int = 15,
) -> tuple[int, BigReal]:
    """Floor with precision escalation.

    Evaluates at the given policy and again with the target raised by
    `step`; if the floors disagree (value too close to an integer for
    the first precision), keeps escalating up to `boosts` times.
    """
    est = evaluate(policy)
    prev = est.floor()
    for i in range(1, boosts + 1):
        stronger = policy.with_target(policy.target_digits + step * i)
        est = evaluate(stronger)
        cur = est.floor()
        if cur == prev:
            return cur, est
        prev = cur
    raise DomainError("floor did not stabilize under precision escalation")
