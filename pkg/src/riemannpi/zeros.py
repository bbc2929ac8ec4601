"""Zero-table ingestion, validation, and zero-sum diagnostics.

Tables hold imaginary parts t_k of critical zeros rho_k = 1/2 + i t_k
(RH normalization, matching the public Odlyzko-style listings).  The
package never computes zeros itself; it loads them from text files:

    one record per line; a record is either a bare decimal value or an
    integer index followed by whitespace and the value; lines starting
    with '#' are comments.  Files ending in .gz are read transparently.

The float64 carrier keeps each t_k to ~1.2e-10 absolute at the top of a
2e6-zero table, below the quantization of the usual 9-10 decimal
listings; the original decimal strings remain available by re-reading
the file for consumers that need them.
"""

from __future__ import annotations

import gzip
import math
import os
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from hashlib import sha256
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import numpy as np
from mpmath import mp, mpf

from .errors import (
    ConfigurationError,
    DataIntegrityError,
    DomainError,
    RangeLimitError,
)
from .precision import BigReal, PrecisionPolicy, DEFAULT_POLICY

FIRST_ZERO = 14.134725
FIRST_ZERO_TOL = 1e-5


def _open_text(path: Path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "rt", encoding="utf-8")


@dataclass(frozen=True)
class ZeroTable:
    """Ordered imaginary parts of critical zeros plus source metadata."""

    gammas: np.ndarray
    count: int
    source_precision: int
    path: Optional[Path] = None
    sha256: Optional[str] = None
    has_index_column: bool = False
    requested: Optional[int] = None

    @property
    def short_of_request(self) -> bool:
        """True when the file held fewer records than were asked for."""
        return self.requested is not None and self.count < self.requested

    def gamma(self, k: int) -> float:
        if not 1 <= k <= self.count:
            raise RangeLimitError(f"zero index {k} outside table of {self.count}")
        return float(self.gammas[k - 1])

    def iter_gamma_strings(self, limit: Optional[int] = None) -> Iterator[str]:
        """Original decimal strings, re-read from the source file."""
        if self.path is None:
            for t in self.gammas[: limit or self.count]:
                yield repr(float(t))
            return
        n = 0
        stop = limit or self.count
        with _open_text(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                yield line.split()[-1]
                n += 1
                if n >= stop:
                    return


def load_zeros(path, max_count: int) -> ZeroTable:
    """Parse a zero listing, validating monotonicity and the first-zero anchor."""
    if max_count <= 0:
        raise DomainError(f"max_count must be positive, got {max_count}")
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"zero file not found: {path}")
    values: List[float] = []
    has_index = None
    decimals = 9
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if has_index is None:
                if len(parts) == 1:
                    has_index = False
                elif len(parts) == 2:
                    has_index = True
                else:
                    raise DataIntegrityError(
                        f"{path}:{lineno}: expected 'value' or 'index value', got {len(parts)} fields"
                    )
                frac = parts[-1].partition(".")[2]
                decimals = len(frac) if frac else 0
            if len(parts) != (2 if has_index else 1):
                raise DataIntegrityError(
                    f"{path}:{lineno}: inconsistent field count (auto-detected "
                    f"{'index value' if has_index else 'bare value'} format)"
                )
            try:
                v = float(parts[-1])
            except ValueError:
                raise DataIntegrityError(f"{path}:{lineno}: malformed value {parts[-1]!r}")
            if not math.isfinite(v) or v <= 0:
                raise DataIntegrityError(f"{path}:{lineno}: non-positive or non-finite value")
            if values and v <= values[-1]:
                raise DataIntegrityError(
                    f"{path}:{lineno}: non-monotone sequence ({v!r} after {values[-1]!r})"
                )
            values.append(v)
            if len(values) >= max_count:
                break
    if not values:
        raise DataIntegrityError(f"{path}: no zero records found")
    if abs(values[0] - FIRST_ZERO) > FIRST_ZERO_TOL:
        raise DataIntegrityError(
            f"{path}: first record {values[0]!r} does not look like the first "
            f"critical zero (expected {FIRST_ZERO} within {FIRST_ZERO_TOL})"
        )
    digest = sha256(path.read_bytes()).hexdigest()
    return ZeroTable(
        gammas=np.asarray(values, dtype=np.float64),
        count=len(values),
        source_precision=decimals,
        path=path,
        sha256=digest,
        has_index_column=bool(has_index),
        requested=max_count,
    )


@dataclass(frozen=True)
class ZeroSumDiagnostic:
    """Partial sums of sum_rho 1/(rho(1-rho)) against its closed form C."""

    partial_sum: BigReal
    C: BigReal
    ratio: BigReal
    K: int


def zero_sum_constant(policy: PrecisionPolicy = DEFAULT_POLICY) -> BigReal:
    """C = 2 + gamma - log(4 pi), computed fresh at the policy precision."""
    wd = policy.working_for()
    with mp.workdps(wd):
        return BigReal(2 + mp.euler - mp.log(4 * mp.pi), wd)


def zero_sum_identity(
    table: ZeroTable, K: int, policy: PrecisionPolicy = DEFAULT_POLICY
) -> ZeroSumDiagnostic:
    """Sum 1/(rho(1-rho)) = 2/(t^2+1/4) over the first K conjugate pairs."""
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if K > table.count:
        raise RangeLimitError(f"K={K} exceeds table count {table.count}")
    t = table.gammas[:K]
    terms = 2.0 / (t * t + 0.25)
    partial = math.fsum(terms.tolist())
    wd = policy.working_for()
    c = zero_sum_constant(policy)
    with mp.workdps(wd):
        pv = mpf(partial)
        return ZeroSumDiagnostic(
            partial_sum=BigReal(pv, wd),
            C=c,
            ratio=BigReal(pv / c.value, wd),
            K=K,
        )


@dataclass(frozen=True)
class ZeroCountCheck:
    K: int
    t: float
    predicted: float
    passed: bool


@dataclass(frozen=True)
class ZeroCountReport:
    checks: Tuple[ZeroCountCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def zero_count_sanity(table: ZeroTable, rel_tol: float = 0.006) -> ZeroCountReport:
    """Riemann-von Mangoldt density check per decade of the table.

    Compares the table count below T = t_K against
    (T/2pi) log(T/(2 pi e)) + 7/8, catching truncated or duplicated files.
    """
    if table.count < 1:
        raise DomainError("empty table")
    ks = [10**d for d in range(1, 9) if 10**d < table.count]
    ks.append(table.count)
    checks = []
    for k in ks:
        t = float(table.gammas[k - 1])
        pred = t / (2 * math.pi) * math.log(t / (2 * math.pi * math.e)) + 7.0 / 8
        tol = max(2.0, rel_tol * k)
        checks.append(ZeroCountCheck(K=k, t=t, predicted=pred, passed=abs(pred - k) <= tol))
    return ZeroCountReport(checks=tuple(checks))


def fetch_zeros(url: str, destination, max_count: int = 10**9, timeout: float = 60.0) -> Path:
    """Download a plain-text zero listing, validate it, then install it.

    The payload streams to a temporary file that is validated with
    load_zeros before being moved into place, so a failed download or a
    corrupt payload leaves no partial destination file.
    """
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    tmp_fd, tmp_name = tempfile.mkstemp(dir=destination.parent, suffix=".part")
    tmp = Path(tmp_name)
    try:
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp, open(tmp_fd, "wb") as out:
                while True:
                    chunk = resp.read(1 << 20)
                    if not chunk:
                        break
                    out.write(chunk)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise ConfigurationError(f"fetching {url} failed: {exc}") from exc
        load_zeros(tmp, max_count=max_count)  # raises DataIntegrityError on bad payload
        os.replace(tmp, destination)
        return destination
    finally:
        if tmp.exists():
            tmp.unlink()
