"""Calibrate the Riemann-Siegel remainder coefficients against mpmath.

The Z(t) remainder after the main sum has the classical form

    R(t) = (-1)^(N-1) * (t/2pi)^(-1/4) * sum_j C_j(p) * eta^j,

with a = sqrt(t/2pi), N = floor(a), p = a - N, eta = 1/a.  Rather than
trusting published tables for the C_j, this script solves for them
numerically: for each p on a Chebyshev grid it evaluates the true
remainder (mpmath.siegelz minus the main sum) along a ladder of N values
sharing that p, then least-squares fits the eta-polynomial.  Each C_j(p)
is then stored as a Chebyshev series over p in [0, 1].

Run time is dominated by ~500 mpmath.siegelz calls (a few minutes).

Usage:
    python tools/rs_coeffs.py --out tools/rs_coeffs.npz
    python tools/rs_coeffs.py --out tools/rs_coeffs.npz --validate 300
"""

import argparse
import time

import numpy as np
from mpmath import mp, mpf, siegelz, siegeltheta, cos as mpcos, sqrt as mpsqrt, log as mplog

LADDER_N = [24, 32, 44, 62, 88, 126, 180, 256, 364, 430]
N_NODES = 48
DEGREE_ETA = 6


def true_remainder_scaled(a):
    """y = (Z(t) - mainsum(t)) * (-1)^(N-1) * sqrt(a) at a = sqrt(t/2pi).

    Everything in mpmath at the current dps, so y carries the full
    sum_j C_j(p) eta^j to working accuracy.
    """
    t = 2 * mp.pi * a * a
    N = int(mp.floor(a))
    th = siegeltheta(t)
    main = mpf(0)
    for n in range(1, N + 1):
        main += mpcos(th - t * mplog(n)) / mpsqrt(n)
    main *= 2
    r = siegelz(t) - main
    sign = 1 if (N - 1) % 2 == 0 else -1
    return r * sign * mpsqrt(a)


def fit(out_path):
    mp.dps = 40
    # Chebyshev nodes on p in (0,1), avoiding the endpoints
    k = np.arange(N_NODES)
    u_nodes = np.cos((2 * k + 1) * np.pi / (2 * N_NODES))  # in (-1,1)
    p_nodes = (u_nodes + 1.0) / 2.0

    etas = np.array([1.0 / (n + p) for p in p_nodes for n in LADDER_N])
    eta_min, eta_max = etas.min(), etas.max()

    cvals = np.zeros((DEGREE_ETA + 1, N_NODES))
    t0 = time.time()
    for j, p in enumerate(p_nodes):
        ys, rows = [], []
        for n in LADDER_N:
            a = mpf(n) + mpf(p)
            ys.append(true_remainder_scaled(a))
            eta = 1 / a
            rows.append([eta**e for e in range(DEGREE_ETA + 1)])
        A = mp.matrix(rows)
        b = mp.matrix(ys)
        sol, _ = mp.qr_solve(A, b)
        cvals[:, j] = [float(sol[e]) for e in range(DEGREE_ETA + 1)]
        if j % 8 == 0:
            print(f"  node {j + 1}/{N_NODES} (p={p:.4f})  elapsed {time.time() - t0:.0f}s", flush=True)

    # Chebyshev interpolation of each C_j over u = 2p-1
    cheb = np.zeros((DEGREE_ETA + 1, N_NODES))
    for e in range(DEGREE_ETA + 1):
        cheb[e] = np.polynomial.chebyshev.chebfit(u_nodes, cvals[e], N_NODES - 1)
    tail = np.abs(cheb[:, -6:]).max()
    print(f"fit done in {time.time() - t0:.0f}s; trailing cheb coeff magnitude {tail:.2e}")

    np.savez(
        out_path,
        cheb=cheb,
        eta_min=eta_min,
        eta_max=eta_max,
        ladder=np.array(LADDER_N),
        nodes=N_NODES,
    )
    print(f"wrote {out_path}")
    return tail


def validate(coeffs_path, count, seed=7):
    """Compare the fast kernel against mpmath.siegelz at random points."""
    import zkernel

    zkernel.require_extended_precision()
    kern = zkernel.ZKernel(coeffs_path)
    rng = np.random.default_rng(seed)
    # log-uniform over the generator's working range
    ts = np.exp(rng.uniform(np.log(zkernel.MIN_T * 1.02), np.log(1.16e6), count))
    mp.dps = 30
    t0 = time.time()
    zf = kern.z(ts, exact_phase=True)
    worst = 0.0
    worst_t = None
    for t, zv in zip(ts, zf):
        d = abs(float(siegelz(t)) - zv)
        if d > worst:
            worst, worst_t = d, t
    print(f"validated {count} points in {time.time() - t0:.0f}s: max |dZ| = {worst:.3e} at t={worst_t:.1f}")
    # theta series check
    ts2 = np.exp(rng.uniform(np.log(1500.0), np.log(1.3e6), 60))
    dth = max(abs(float(siegeltheta(t)) - float(zkernel.theta(np.asarray([t], dtype=zkernel.LD))[0])) for t in ts2)
    print(f"theta series max abs err over [1.5e3,1.3e6]: {dth:.3e}")
    return worst, dth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="tools/rs_coeffs.npz")
    ap.add_argument("--validate", type=int, default=0, metavar="COUNT")
    args = ap.parse_args()
    if args.validate and not args.out:
        ap.error("--validate needs --out")
    fit(args.out)
    if args.validate:
        worst, dth = validate(args.out, args.validate)
        if worst > 5e-9 or dth > 1e-11:
            raise SystemExit("validation failed: fast kernel disagrees with mpmath")


if __name__ == "__main__":
    main()
