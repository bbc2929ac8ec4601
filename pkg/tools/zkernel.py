"""Fast vectorized Riemann-Siegel Z(t) evaluator.

Used only by the offline zero-table generator (tools/generate_zeros.py).
The package itself never computes zeta zeros; it consumes the table this
tooling produces.

Accuracy model:
  * main sum phases theta(t) - t*log(n) are reduced mod 2*pi in 80-bit
    extended precision (numpy longdouble on x86), keeping phase error
    below ~1e-11 rad for t <= 1.2e6,
  * the remainder term is a polynomial in eta = (2*pi/t)^(1/2) whose
    coefficient functions C_j(p) are Chebyshev tables fitted against
    mpmath.siegelz (see tools/rs_coeffs.py); fit residuals are ~1e-11,
  * total |Z_fast - Z_mpmath| < ~1e-9 over the supported range
    (validated on random points by rs_coeffs.py --validate).

Supported range: t >= MIN_T (a = sqrt(t/2pi) >= 24, inside the fitted
eta ladder).  Below that the generator falls back to mpmath.
"""

import numpy as np

LD = np.longdouble

# 2*pi and pi to more digits than longdouble holds; numpy rounds on parse.
TWO_PI = LD("6.283185307179586476925286766559005768394")
PI = LD("3.141592653589793238462643383279502884197")

# a = sqrt(t/2pi) must stay inside the coefficient fit's eta ladder
MIN_A = 24.0
MIN_T = float(TWO_PI * LD(MIN_A) * LD(MIN_A))  # ~3619.1


def require_extended_precision():
    """The phase reduction needs a longdouble wider than float64."""
    if np.finfo(LD).eps > 1e-18:
        raise RuntimeError(
            "numpy longdouble is not 80-bit extended on this platform; "
            "the phase reduction would lose the zero-location accuracy target"
        )


def theta(t):
    """Riemann-Siegel theta, asymptotic series, longdouble in/out.

    Valid to ~1e-12 absolute for t >= 1500 (validated against
    mpmath.siegeltheta by rs_coeffs.py).
    """
    t = np.asarray(t, dtype=LD)
    x = t / TWO_PI
    inv = 1.0 / t
    inv2 = inv * inv
    corr = inv * (LD(1) / 48 + inv2 * (LD(7) / 5760 + inv2 * (LD(31) / 80640 + inv2 * LD(127) / 430080)))
    return t / 2 * np.log(x) - t / 2 - PI / 8 + corr


def theta_deriv(t):
    """d theta/dt ~ 0.5*log(t/2pi); float64 is plenty for Newton steps."""
    t = np.asarray(t, dtype=np.float64)
    return 0.5 * np.log(t / float(TWO_PI))


def gram_points(ns):
    """Gram points g_n (theta(g_n) = n*pi) for an int64 array of indices.

    Newton on the theta series; do not call for indices whose Gram point
    lies below MIN_T (the generator handles those through mpmath).
    """
    ns = np.asarray(ns, dtype=np.int64)
    c = ns.astype(LD) + LD(1) / 8
    # invert tau*(log(tau)-1) = c by fixed point, then polish on theta
    tau = c / np.log(np.maximum(c, LD(3)))
    for _ in range(30):
        tau = c / (np.log(tau) - 1)
    g = tau * TWO_PI
    target = ns.astype(LD) * PI
    for _ in range(6):
        g = g - (theta(g) - target) / (LD(0.5) * np.log(g / TWO_PI))
    return g


class ZKernel:
    """Chunked, vectorized Z(t) with fitted remainder coefficients."""

    def __init__(self, coeffs_path, nmax=480):
        data = np.load(coeffs_path)
        self.cheb = data["cheb"]  # shape (J+1, deg+1)
        self.eta_min = float(data["eta_min"])
        self.eta_max = float(data["eta_max"])
        n = np.arange(1, nmax + 1)
        self.ln_ld = np.log(n.astype(LD))
        self.ln_f64 = np.log(n.astype(np.float64))
        self.rsqrt = 1.0 / np.sqrt(n.astype(np.float64))
        self.nmax = nmax

    def _remainder(self, a, N):
        """(-1)^(N-1) * sqrt(eta) * sum_j C_j(p) eta^j, all float64."""
        eta = 1.0 / a
        p = a - N
        u = 2.0 * p - 1.0
        acc = np.zeros_like(eta)
        for j in range(self.cheb.shape[0] - 1, -1, -1):
            acc = acc * eta + np.polynomial.chebyshev.chebval(u, self.cheb[j])
        sign = np.where(N % 2 == 1, 1.0, -1.0)
        return sign * np.sqrt(eta) * acc

    def z(self, t, exact_phase=True, chunk=2048):
        """Z(t) for a float64 array t (all entries must be >= MIN_T).

        exact_phase=True uses longdouble phase reduction (slow, accurate
        to ~1e-9); False runs everything in float64 (fast, ~1e-7, fine
        for bracketing sweeps).
        """
        t = np.asarray(t, dtype=np.float64)
        out = np.empty(t.shape, dtype=np.float64)
        for s in range(0, len(t), chunk):
            tt = t[s : s + chunk]
            tl = tt.astype(LD)
            a_ld = np.sqrt(tl / TWO_PI)
            N = np.floor(a_ld).astype(np.int64)
            nmax = int(N.max())
            if nmax > self.nmax:
                raise ValueError(f"t too large for kernel tables (need n={nmax})")
            th = theta(tl)
            cols = np.arange(1, nmax + 1)
            if exact_phase:
                ph = th[:, None] - tl[:, None] * self.ln_ld[None, :nmax]
                ph = np.mod(ph, TWO_PI).astype(np.float64)
            else:
                ph = th.astype(np.float64)[:, None] - tt[:, None] * self.ln_f64[None, :nmax]
            c = np.cos(ph)
            c *= self.rsqrt[None, :nmax]
            c *= cols[None, :] <= N[:, None]
            main = 2.0 * c.sum(axis=1)
            a = a_ld.astype(np.float64)
            out[s : s + chunk] = main + self._remainder(a, N.astype(np.float64))
        return out
