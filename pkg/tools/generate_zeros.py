"""Generate a table of imaginary parts of Riemann zeta critical-line zeros.

The package treats zero tables as external input data (like the public
Odlyzko listings); this offline tool produces such a table when no
network source is available.

Pipeline
  1. low range (t below ~5e3):   mpmath siegelz on Gram intervals
  2. high range:                 vectorized Riemann-Siegel kernel
       Gram points by longdouble Newton on the theta series,
       good/bad Gram classification, Rosser-rule blocks with adaptive
       grid search inside violations, then a vectorized Illinois
       refinement (float64 sweep, longdouble polish).
  3. merge, strict monotonicity + Riemann-von Mangoldt density checks,
     mpmath spot checks of random zeros.
  4. gzip text output, one zero per line, fixed decimal places.

Rosser's rule (every Gram block bounded by good Gram points holds
exactly as many zeros as intervals) has no exceptions below Gram index
13,999,825, far above the 2e6 zeros produced here.

Accuracy: ~1e-10 typical (limited by the float64 carrier and the
~7e-12 Z evaluation noise); isolated close pairs with tiny |Z'| may
reach ~1e-9.  Output is rounded to --decimals places.

Usage:
    python tools/generate_zeros.py --count 2000000 \
        --out ../data/zeros_2000000.txt.gz --coeffs rs_coeffs.npz
"""

import argparse
import gzip
import json
import math
import time
from hashlib import sha256
from pathlib import Path

import numpy as np
from mpmath import mp, grampoint, siegelz, zetazero

import zkernel

LD = zkernel.LD
GOOD_EPS = 1e-6
FIRST_ROSSER_EXCEPTION = 13_999_825


# ---------------------------------------------------------------------------
# low range: everything through mpmath
# ---------------------------------------------------------------------------

def _mp_z(t):
    return float(siegelz(t))


def _refine_scalar(f, lo, hi, flo, fhi, tol=5e-11, max_iter=80):
    side = 0
    for it in range(max_iter):
        if hi - lo < tol:
            break
        w = hi - lo
        if it % 3 == 2:
            x = lo + 0.5 * w  # periodic bisection guarantees geometric shrink
        else:
            x = (lo * fhi - hi * flo) / (fhi - flo)
            x = min(max(x, lo + 0.05 * w), hi - 0.05 * w)
        fx = f(x)
        if fx == 0.0:
            return x
        if fx * flo < 0:
            hi, fhi = x, fx
            if side == +1:
                flo *= 0.5
            side = +1
        else:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
    return (lo * fhi - hi * flo) / (fhi - flo)


def _block_brackets_scalar(f, edges_t, edges_f, need):
    """Brackets for `need` zeros inside a Gram block, adaptive grid."""
    lo_t, hi_t = edges_t[0], edges_t[-1]
    pts_per = 8
    while pts_per <= 1 << 14:
        grid = np.linspace(lo_t, hi_t, (len(edges_t) - 1) * pts_per + 1)
        vals = np.array([f(t) for t in grid])
        sign = np.sign(vals)
        idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        if len(idx) == need:
            return [(grid[i], grid[i + 1], vals[i], vals[i + 1]) for i in idx]
        pts_per *= 2
    raise RuntimeError(f"could not isolate {need} zeros in block at t={lo_t:.6f}")


def low_range_zeros(n_switch):
    """Zeros in (g_-1, g_{n_switch}] via mpmath; n_switch must be good."""
    mp.dps = 18
    ns = list(range(-1, n_switch + 1))
    g = [float(grampoint(n)) for n in ns]
    zv = [_mp_z(t) for t in g]
    good = [abs(z) > GOOD_EPS and ((-1) ** n) * z > 0 for n, z in zip(ns, zv)]
    if not (good[0] and good[-1]):
        raise RuntimeError("endpoint Gram points of the low range must be good")
    zeros = []
    i = 0
    while i < len(ns) - 1:
        j = i + 1
        while not good[j]:
            j += 1
        k = j - i  # Rosser: k zeros between good g_i and g_j
        if k == 1:
            br = [(g[i], g[j], zv[i], zv[j])]
        else:
            br = _block_brackets_scalar(_mp_z, g[i : j + 1], zv[i : j + 1], k)
        for lo, hi, flo, fhi in br:
            zeros.append(_refine_scalar(_mp_z, lo, hi, flo, fhi))
        i = j
    return zeros


# ---------------------------------------------------------------------------
# high range: vectorized kernel
# ---------------------------------------------------------------------------

def refine_batch(kern, lo, hi, flo, fhi, tol, exact_phase, max_rounds=90):
    """Vectorized safeguarded Illinois; shrinks every bracket below tol."""
    side = np.zeros(len(lo), dtype=np.int8)
    for r in range(max_rounds):
        act = (hi - lo) > tol
        if not act.any():
            return
        al, ah = lo[act], hi[act]
        afl, afh = flo[act], fhi[act]
        w = ah - al
        if r % 3 == 2:
            x = 0.5 * (al + ah)
        else:
            x = (al * afh - ah * afl) / (afh - afl)
            x = np.clip(x, al + 0.03 * w, ah - 0.03 * w)
        fx = kern.z(x, exact_phase=exact_phase)
        aside = side[act]
        repl_hi = fx * afl < 0
        ah2 = np.where(repl_hi, x, ah)
        afh2 = np.where(repl_hi, fx, afh)
        al2 = np.where(repl_hi, al, x)
        afl2 = np.where(repl_hi, afl, fx)
        # Illinois: halve the stale side on repeated same-side updates
        afl2 = np.where(repl_hi & (aside == 1), afl2 * 0.5, afl2)
        afh2 = np.where(~repl_hi & (aside == -1), afh2 * 0.5, afh2)
        lo[act], hi[act], flo[act], fhi[act] = al2, ah2, afl2, afh2
        side[act] = np.where(repl_hi, 1, -1)
    raise RuntimeError(f"{int(((hi - lo) > tol).sum())} brackets failed to converge")


def high_range_zeros(kern, n_start, n_end_target, progress=True):
    """Zeros between good Gram points starting at index n_start.

    Returns (zeros, n_last_good).  Processes Gram indices n_start..n_end
    where n_end is the last good index <= n_end_target.
    """
    t0 = time.time()
    ns = np.arange(n_start, n_end_target + 1, dtype=np.int64)
    g = zkernel.gram_points(ns).astype(np.float64)
    if g[0] < zkernel.MIN_T:
        raise RuntimeError(f"fast kernel starts below its validity range: {g[0]:.1f}")
    zg = kern.z(g, exact_phase=False)
    if progress:
        print(f"  gram points + Z: {time.time() - t0:.0f}s", flush=True)
    parity = np.where(ns % 2 == 0, 1.0, -1.0)
    good = (np.abs(zg) > GOOD_EPS) & (parity * zg > 0)
    if not good[0]:
        raise RuntimeError("n_start must be a good Gram index")
    gi = np.nonzero(good)[0]
    n_last_good = int(ns[gi[-1]])
    # simple blocks (k=1) all at once; larger blocks individually
    starts, ends = gi[:-1], gi[1:]
    ks = ends - starts
    simple = ks == 1
    lo = g[starts[simple]].copy()
    hi = g[ends[simple]].copy()
    flo = zg[starts[simple]].copy()
    fhi = zg[ends[simple]].copy()
    blk_lo, blk_hi, blk_flo, blk_fhi = [], [], [], []
    n_blocks = 0
    for s, e in zip(starts[~simple], ends[~simple]):
        n_blocks += 1
        need = int(e - s)
        br = _block_brackets_vector(kern, g[s : e + 1], need)
        for b in br:
            blk_lo.append(b[0])
            blk_hi.append(b[1])
            blk_flo.append(b[2])
            blk_fhi.append(b[3])
    if progress:
        print(f"  blocks resolved: {n_blocks} multi-interval blocks", flush=True)
    lo = np.concatenate([lo, np.array(blk_lo)])
    hi = np.concatenate([hi, np.array(blk_hi)])
    flo = np.concatenate([flo, np.array(blk_flo)])
    fhi = np.concatenate([fhi, np.array(blk_fhi)])
    assert (flo * fhi < 0).all(), "invalid bracket signs"
    t1 = time.time()
    refine_batch(kern, lo, hi, flo, fhi, tol=1e-5, exact_phase=False)
    if progress:
        print(f"  float64 sweep: {time.time() - t1:.0f}s", flush=True)
    t1 = time.time()
    # re-evaluate endpoints in exact mode so the polish starts from
    # consistent signs (f64 values may be off by ~1e-7 near the root)
    flo = kern.z(lo, exact_phase=True)
    fhi = kern.z(hi, exact_phase=True)
    bad = flo * fhi >= 0
    if bad.any():
        # the f64 sweep overshot into the noise band: widen those brackets
        w = np.maximum(hi[bad] - lo[bad], 1e-7)
        lo[bad] -= 3 * w
        hi[bad] += 3 * w
        flo[bad] = kern.z(lo[bad], exact_phase=True)
        fhi[bad] = kern.z(hi[bad], exact_phase=True)
        assert (flo * fhi < 0).all(), "bracket recovery failed"
    refine_batch(kern, lo, hi, flo, fhi, tol=2.5e-11, exact_phase=True)
    if progress:
        print(f"  longdouble polish: {time.time() - t1:.0f}s", flush=True)
    root = (lo * fhi - hi * flo) / (fhi - flo)
    root = np.clip(root, lo, hi)
    root.sort()
    return root, n_last_good


def _block_brackets_vector(kern, edges, need):
    lo_t, hi_t = float(edges[0]), float(edges[-1])
    pts_per = 8
    while pts_per <= 1 << 14:
        grid = np.linspace(lo_t, hi_t, (len(edges) - 1) * pts_per + 1)
        vals = kern.z(grid, exact_phase=(pts_per >= 1 << 10))
        sign = np.sign(vals)
        idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        if len(idx) == need:
            return [(grid[i], grid[i + 1], vals[i], vals[i + 1]) for i in idx]
        pts_per *= 2
    raise RuntimeError(f"could not isolate {need} zeros in block at t={lo_t:.6f}")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def density_check(zeros):
    """Count below T vs (T/2pi)log(T/2pi e) + 7/8 at decade checkpoints."""
    T = zeros[-1]
    pts = [zeros[min(len(zeros), 10**d) - 1] for d in range(2, 8) if 10**d <= len(zeros)]
    pts.append(T)
    ok = True
    for t in pts:
        n_pred = t / (2 * math.pi) * math.log(t / (2 * math.pi * math.e)) + 7.0 / 8
        n_act = np.searchsorted(zeros, t, "right")
        if abs(n_pred - n_act) > max(3.0, 0.006 * n_act):
            ok = False
        print(f"  N({t:.1f}) = {n_act}, predicted {n_pred:.1f}")
    return ok


def spot_check(zeros, n_samples=20, seed=11):
    """mpmath confirms a sign change of Z tightly around sampled zeros."""
    rng = np.random.default_rng(seed)
    idx = sorted(set(rng.integers(0, len(zeros), n_samples).tolist()) | {0, 1, 2, len(zeros) - 1})
    mp.dps = 30
    worst = 0.0
    for i in idx:
        t = zeros[i]
        lo, hi = siegelz(t - 2e-9), siegelz(t + 2e-9)
        if not lo * hi < 0:
            raise RuntimeError(f"zero #{i + 1} at t={t!r} not confirmed by mpmath")
        worst = max(worst, float(abs(siegelz(t))))
    print(f"  spot check: {len(idx)} zeros confirmed, max |Z| at zero = {worst:.2e}")
    for n in (1, 2, 3, 10, 100):
        ref = float(zetazero(n).imag)
        if abs(ref - zeros[n - 1]) > 2e-9:
            raise RuntimeError(f"zero #{n}: {zeros[n - 1]!r} vs mpmath {ref!r}")
    print("  first zeros match mpmath.zetazero")


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def generate(count, coeffs, decimals=10, n_switch_target=3200):
    zkernel.require_extended_precision()
    kern = zkernel.ZKernel(coeffs)

    # choose a good switch index >= target (low zone must end on a good point)
    mp.dps = 18
    n_switch = n_switch_target
    while True:
        z = _mp_z(float(grampoint(n_switch)))
        if abs(z) > GOOD_EPS and ((-1) ** n_switch) * z > 0:
            break
        n_switch += 1

    t0 = time.time()
    print(f"low range via mpmath up to Gram index {n_switch} ...", flush=True)
    low = low_range_zeros(n_switch)
    print(f"  {len(low)} zeros in {time.time() - t0:.0f}s", flush=True)

    print("high range via fast kernel ...", flush=True)
    high, n_last = high_range_zeros(kern, n_switch, count + 60)
    zeros = np.concatenate([np.array(low), high])

    # bookkeeping: Gram index n_last (good) means N(g_{n_last}) = n_last + 1
    expected = n_last + 1
    if len(zeros) != expected:
        raise RuntimeError(f"zero count {len(zeros)} != Gram bookkeeping {expected}")
    if not (np.diff(zeros) > 0).all():
        raise RuntimeError("zeros not strictly increasing")
    if len(zeros) < count:
        raise RuntimeError(f"only {len(zeros)} zeros isolated, need {count}")
    zeros = zeros[:count]

    print("validating ...", flush=True)
    if not density_check(zeros):
        raise RuntimeError("density check failed")
    spot_check(zeros)
    return zeros


def write_table(zeros, out_path, decimals, meta):
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    opener = gzip.open if out_path.suffix == ".gz" else open
    with opener(out_path, "wt", encoding="utf-8") as fh:
        fh.write(f"# imaginary parts of the first {len(zeros)} nontrivial zeta zeros\n")
        fh.write(f"# generated by tools/generate_zeros.py; {decimals} decimal places\n")
        for t in zeros:
            fh.write(f"{t:.{decimals}f}\n")
    digest = sha256(out_path.read_bytes()).hexdigest()
    meta_path = out_path.with_suffix(out_path.suffix + ".meta.json")
    meta = dict(meta, sha256=digest, count=len(zeros), t_max=float(zeros[-1]))
    meta_path.write_text(json.dumps(meta, indent=1))
    print(f"wrote {out_path} ({out_path.stat().st_size / 1e6:.1f} MB), sha256 {digest[:16]}...")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=2_000_000)
    ap.add_argument("--out", default="../data/zeros_2000000.txt.gz")
    ap.add_argument("--coeffs", default="rs_coeffs.npz")
    ap.add_argument("--decimals", type=int, default=10)
    args = ap.parse_args()
    t0 = time.time()
    zeros = generate(args.count, args.coeffs, args.decimals)
    write_table(zeros, args.out, args.decimals, {"decimals": args.decimals})
    print(f"total {time.time() - t0:.0f}s")


if __name__ == "__main__":
    main()
