"""Chebyshev psi via the von Mangoldt explicit formula over a zero table.

    psi0(x) = x - sum_rho x^rho / rho - log(2 pi) - (1/2) log(1 - x^-2)

with the zero sum taken over conjugate pairs: for rho = 1/2 + i t the
pair contributes

    2 sqrt(x) * [ (1/2) cos(t ln x) + t sin(t ln x) ] / (1/4 + t^2).

zeta'(0)/zeta(0) is evaluated as log(2 pi) (classical identity, unit
tested against the numerical derivative).  When x is exactly an integer
prime power, psi(x) = psi0(x) + Lambda(x)/2; real arguments merely near
a prime power get no correction.

Two interchangeable engines compute the pair sum:

  vector  phases t*ln(x) reduced mod 2pi in 80-bit longdouble, the
          bounded per-pair factor summed with math.fsum.  fsum is exact
          over its float64 inputs, so the reduction is independent of
          chunking and worker count by construction: parallel workers
          only fill disjoint slices of the term array.
  mp      mpmath terms from the table's original decimal strings at the
          policy working precision, summed in fixed ascending order.

Both are bit-reproducible at fixed (x, K, policy).  The vector engine's
arithmetic error is bounded and checked against the request; it raises
PrecisionEscalationError rather than answer beyond its resolution (the
practical floor is the zero table's own quantization, tracked in the
tail estimate, not the engine arithmetic).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp, mpf

from .errors import DomainError, PrecisionEscalationError, RangeLimitError
from .oracle import SieveOracle, is_prime_power
from .precision import BigReal, PrecisionPolicy, DEFAULT_POLICY
from .zeros import ZeroTable

LD = np.longdouble
TWO_PI_LD = LD("6.283185307179586476925286766559005768394")

_HAVE_EXTENDED = np.finfo(LD).eps < 1e-18


@dataclass(frozen=True)
class PsiEstimate:
    value: BigReal
    x: BigReal
    zeros_used: int
    tail_estimate: BigReal
    corrected: bool
    engine: str = "vector"


def _ln_x_longdouble(lnx: mpf) -> LD:
    """Exact-to-longdouble image of an mpf via a two-float split."""
    a = float(lnx)
    b = float(lnx - a)
    return LD(a) + LD(b)


def _pair_terms(t: np.ndarray, lnx_ld: LD) -> np.ndarray:
    """Per-pair factor [cos(tL)/2 + t sin(tL)] / (1/4 + t^2), float64."""
    if _HAVE_EXTENDED:
        ph = np.mod(t.astype(LD) * lnx_ld, TWO_PI_LD).astype(np.float64)
    else:  # pragma: no cover - x86 linux always has extended precision
        ph = np.mod(t * float(lnx_ld), 2 * math.pi)
    return (0.5 * np.cos(ph) + t * np.sin(ph)) / (0.25 + t * t)


def _vector_pair_sum(t: np.ndarray, lnx_ld: LD, workers: int) -> Tuple[float, float]:
    """(fsum of pair terms, |last term|); identical for any worker count."""
    terms = np.empty(len(t), dtype=np.float64)
    if workers <= 1 or len(t) < 4096:
        terms[:] = _pair_terms(t, lnx_ld)
    else:
        bounds = np.linspace(0, len(t), workers + 1).astype(int)

        def fill(i):
            terms[bounds[i] : bounds[i + 1]] = _pair_terms(t[bounds[i] : bounds[i + 1]], lnx_ld)

        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(fill, range(workers)))
    return math.fsum(terms.tolist()), abs(float(terms[-1])) if len(terms) else 0.0


def _mp_pair_sum(table: ZeroTable, K: int, lnx: mpf, wd: int) -> Tuple[mpf, mpf]:
    """Fixed-ascending-order mpmath pair sum from the source decimal strings."""
    with mp.workdps(wd):
        total = mpf(0)
        last = mpf(0)
        quarter = mpf(1) / 4
        for k, s in enumerate(table.iter_gamma_strings(K)):
            t = mpf(s)
            ph = t * lnx
            last = (mp.cos(ph) / 2 + t * mp.sin(ph)) / (quarter + t * t)
            total += last
        return total, abs(last)


def _oscillatory_working_digits(policy: PrecisionPolicy, t_max: float, lnx: float) -> int:
    phase = max(t_max * lnx, 1.0)
    return policy.target_digits + int(math.ceil(math.log10(phase))) + 10


def psi_explicit(
    x,
    table: ZeroTable,
    K: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    engine: str = "auto",
    workers: int = 1,
) -> PsiEstimate:
    """Explicit-formula psi at x using the first K zeros of the table."""
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    if K > table.count:
        raise RangeLimitError(f"K={K} exceeds zero table count {table.count}")
    if engine not in ("auto", "vector", "mp"):
        raise DomainError(f"unknown engine {engine!r}")
    wd = policy.working_for(x)
    with mp.workdps(wd):
        xv = x.value if isinstance(x, BigReal) else mpf(x)
        if not xv > 1:
            raise DomainError(f"psi_explicit requires x > 1, got {xv}")
        lnx = mp.log(xv)
        sqrtx = mp.sqrt(xv)

    t_max = float(table.gammas[K - 1]) if K else 0.0
    wd_osc = _oscillatory_working_digits(policy, t_max, float(lnx)) if K else wd
    wd_full = max(wd, wd_osc)

    chosen = engine
    if K and engine != "mp":
        # vector arithmetic: ld phase rounding + f64 trig, on pair terms
        # divided by t; fsum adds nothing.  Compare against the request.
        phase_err = t_max * float(lnx) * 2.2e-19 + 3e-16
        sum_err_bound = float(2 * sqrtx) * phase_err * float(np.log(K + 1) + 3)
        target_abs = float(abs(xv)) * 10.0 ** (-policy.target_digits)
        vector_ok = sum_err_bound < target_abs
        if engine == "vector" and not vector_ok:
            raise PrecisionEscalationError(
                f"vector engine bound {sum_err_bound:.2e} exceeds requested "
                f"resolution {target_abs:.2e}; use engine='mp' or lower target_digits"
            )
        chosen = "vector" if vector_ok else "mp"
    elif engine == "auto":
        chosen = "vector"

    if K == 0:
        pair_sum_mpf = mpf(0)
        last_abs = mpf(0)
    elif chosen == "vector":
        s, last = _vector_pair_sum(table.gammas[:K], _ln_x_longdouble(lnx), workers)
        pair_sum_mpf, last_abs = mpf(s), mpf(last)
    else:
        pair_sum_mpf, last_abs = _mp_pair_sum(table, K, lnx, wd_full)

    with mp.workdps(wd_full):
        value = xv - 2 * sqrtx * pair_sum_mpf - mp.log(2 * mp.pi) - mp.log1p(-(xv ** -2)) / 2
        corrected = False
        if xv == mp.floor(xv) and xv < mpf(10) ** 18:
            pk = is_prime_power(int(xv))
            if pk is not None:
                value += mp.log(pk[0]) / 2
                corrected = True
        if K:
            # truncation heuristic plus the zero-table quantization noise
            # model sqrt(x) * ln(x) * dt * sqrt(K); heuristic, not a bound
            dt = 10.0 ** (-table.source_precision)
            tail = 2 * sqrtx * last_abs * mp.log(t_max) + sqrtx * lnx * dt * mp.sqrt(K)
        else:
            tail = mp.inf
        return PsiEstimate(
            value=BigReal(value, wd_full),
            x=BigReal(xv, wd_full),
            zeros_used=K,
            tail_estimate=BigReal(tail, wd_full) if tail != mp.inf else BigReal(mp.inf, 16),
            corrected=corrected,
            engine=chosen if K else "none",
        )


def psi_convergence_profile(
    x,
    table: ZeroTable,
    checkpoints: Sequence[int],
    policy: PrecisionPolicy = DEFAULT_POLICY,
    oracle: Optional[SieveOracle] = None,
) -> List[Tuple[int, BigReal, Optional[BigReal]]]:
    """Partial explicit-formula values at ascending zero-count checkpoints.

    One pass over the pair terms; the exact-psi error column appears only
    when a sieve oracle covering x is supplied.
    """
    cps = list(checkpoints)
    if not cps:
        return []
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise DomainError("checkpoints must be strictly ascending")
    if cps[-1] > table.count:
        raise RangeLimitError(f"checkpoint {cps[-1]} exceeds table count {table.count}")
    wd = policy.working_for(x)
    with mp.workdps(wd):
        xv = x.value if isinstance(x, BigReal) else mpf(x)
        if not xv > 1:
            raise DomainError(f"psi profile requires x > 1, got {xv}")
        lnx = mp.log(xv)
        sqrtx = mp.sqrt(xv)
        main = xv - mp.log(2 * mp.pi) - mp.log1p(-(xv ** -2)) / 2
        if xv == mp.floor(xv) and xv < mpf(10) ** 18:
            pk = is_prime_power(int(xv))
            if pk is not None:
                main += mp.log(pk[0]) / 2
    exact = None
    if oracle is not None and xv <= oracle.limit and xv == mp.floor(xv):
        exact = oracle.psi_float(int(xv))
    terms = _pair_terms(table.gammas[: cps[-1]], _ln_x_longdouble(lnx))
    rows: List[Tuple[int, BigReal, Optional[BigReal]]] = []
    for k in cps:
        s = math.fsum(terms[:k].tolist())
        with mp.workdps(wd):
            val = main - 2 * sqrtx * mpf(s)
            err = BigReal(abs(val - mpf(exact)), wd) if exact is not None else None
            rows.append((k, BigReal(val, wd), err))
    return rows
