"""Generate the bundled fixture census, braid words, 2-bridge table and
representation files under data/.

Sources: SnapPy/spherogram (PD codes, braid words, volumes, holonomy).
Representations are located numerically (wirtinger_rep.Search for diagrams
that need two seed arcs, deflate.Deflated otherwise), put in a canonical
gauge and polished to ~40 digits with mpmath Gauss-Newton.

Usage: python3 gen_fixtures.py [--rep-seconds S] [--out DIR]
"""
import argparse
import math
import os
import signal
import sys
import time
import warnings

warnings.filterwarnings("ignore")

import mpmath as mp
import numpy as np
import snappy
from spherogram import RationalTangle

from wirtinger_rep import Search, analyze
from deflate import Deflated

TORUS = {"3_1", "5_1", "7_1", "8_19", "9_1", "10_124"}
ROLFSEN_COUNTS = {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 21, 9: 49, 10: 165}
FIGURE_EIGHT_PD = [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)]


class Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise Timeout()


signal.signal(signal.SIGALRM, _alarm)


def pd_text(pd):
    return " ".join("X(%d,%d,%d,%d)" % c for c in pd)


def one_based(L):
    return [tuple(x + 1 for x in c) for c in L.PD_code()]


# ---------------------------------------------------------------- reps

def mpar(v):
    p, q = v
    return mp.matrix([[1 - p * q, p * p], [-q * q, 1 + p * q]])


def act(o, a, s):
    # M(v_o)^s v_a
    w = o[0] * a[1] - o[1] * a[0]
    return (a[0] + s * o[0] * w, a[1] + s * o[1] * w)


def residual(z, na, cross):
    v = [(z[2 * i], z[2 * i + 1]) for i in range(na)]
    out = []
    for a, o, c, s in cross:
        pc = mpar(v[c])
        pp = mpar(act(v[o], v[a], s))
        out.extend([pc[0, 0] - pp[0, 0], pc[0, 1] - pp[0, 1], pc[1, 0] - pp[1, 0]])
    return out


def canonical_gauge(vs, edge_arc):
    """Conjugate so the arc of edge 1 has v = (1, 0) and the next arc met
    along the knot has v = (0, q)."""
    base = edge_arc[1]
    other = next(edge_arc[e] for e in sorted(edge_arc) if edge_arc[e] != base)
    u, w = vs[base], vs[other]
    det = u[0] * w[1] - u[1] * w[0]
    # A u = (1, 0), A w = (0, det)
    A = np.linalg.inv(np.column_stack([u, w / det])) if abs(det) > 1e-12 else None
    if A is None:
        raise ValueError("degenerate seed arcs")
    return [A @ v for v in vs]


def polish(vs, na, cross, frozen, dps=60, iters=30):
    mp.mp.dps = dps
    z = []
    for v in vs:
        z.extend([mp.mpc(complex(v[0])), mp.mpc(complex(v[1]))])
    for k, val in frozen.items():
        z[k] = mp.mpc(val)
    free = [k for k in range(len(z)) if k not in frozen]
    m = len(free)
    h = mp.mpf(10) ** (-(dps // 2 + 5))
    for _ in range(iters):
        r = residual(z, na, cross)
        err = max(abs(x) for x in r)
        if err < mp.mpf(10) ** (-(dps - 15)):
            break
        J = mp.matrix(len(r), m)
        for j, k in enumerate(free):
            zz = list(z)
            zz[k] += h
            rj = residual(zz, na, cross)
            for i in range(len(r)):
                J[i, j] = (rj[i] - r[i]) / h
        JH = J.transpose_conj()
        N = JH * J
        for j in range(m):
            N[j, j] += mp.mpf(10) ** (-(dps - 10))
        step = mp.lu_solve(N, JH * mp.matrix(r))
        for j, k in enumerate(free):
            z[k] -= step[j]
    r = residual(z, na, cross)
    return [(z[2 * i], z[2 * i + 1]) for i in range(na)], max(abs(x) for x in r)


def find_rep(pd, M, seconds):
    na, cross, edge_arc = analyze(pd)
    t0 = time.time()
    for flip in (False, True):
        left = int(seconds / 2 - (time.time() - t0))
        if left <= 0:
            break
        signal.alarm(left)
        try:
            v = Search(pd, M, budget=200_000, flip=flip).run()
        except Timeout:
            v = None
        finally:
            signal.alarm(0)
        if v is not None:
            return v, "search"
    left = seconds - (time.time() - t0)
    if left > 1:
        D = Deflated(pd, complex(M.cusp_info(0)["shape"]))
        v, _ = D.run(seconds=left)
        if v is not None:
            return v, "deflate"
    return None, None


def clean(x):
    return mp.mpf(0) if abs(x) < mp.mpf(10) ** -40 else x


def write_rep(path, name, pd, vs, conjugate=False):
    na, cross, edge_arc = analyze(pd)
    vs = canonical_gauge([np.asarray(v, dtype=complex) for v in vs], edge_arc)
    if conjugate:
        vs = [np.conj(v) for v in vs]
    base = edge_arc[1]
    other = next(edge_arc[e] for e in sorted(edge_arc) if edge_arc[e] != base)
    frozen = {2 * base: 1, 2 * base + 1: 0, 2 * other: 0}
    pv, err = polish(vs, na, cross, frozen)
    if err > mp.mpf(10) ** -30:
        raise ValueError("polish failed for %s: %s" % (name, mp.nstr(err, 5)))
    lines = ["# %s: geometric SL(2,C) representation, one parabolic per PD edge label" % name,
             "knot %s arcs %d tolerance 1e-8" % (name, 2 * len(pd))]
    for e in range(1, 2 * len(pd) + 1):
        Mx = mpar(pv[edge_arc[e]])
        nums = []
        for i in range(2):
            for j in range(2):
                nums.append(mp.nstr(clean(Mx[i, j].real), 32, min_fixed=-5, max_fixed=5))
                nums.append(mp.nstr(clean(Mx[i, j].imag), 32, min_fixed=-5, max_fixed=5))
        lines.append("arc %d %s" % (e, " ".join(nums)))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


# ------------------------------------------------------------ knot lists

def cf(p, q):
    out = []
    while q:
        out.append(p // q)
        p, q = q, p % q
    return out


def two_bridge(c_target, limit):
    """Hyperbolic 2-bridge knots K(p, q) with c_target crossings, one
    representative per knot type (q normalized under q -> q^-1, -q)."""
    seen = set()
    out = []
    for p in range(3, 2000, 2):
        for q in range(2, p - 1):
            if math.gcd(p, q) != 1:
                continue
            if sum(cf(p, q)) != c_target:
                continue
            qi = pow(q, -1, p)
            key = (p, min(q, qi, p - q, p - qi))
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
    out.sort()
    step = max(1, len(out) // limit)
    return out[::step][:limit]


def identify(M):
    names = [str(x).split("(")[0] for x in M.identify()]
    for pref in ("K", ""):
        for n in names:
            if "_" in n and not n.startswith("K") and pref == "":
                return n
            if n.startswith("K") and "_" not in n and pref == "K":
                return n
    return names[0] if names else None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--rep-seconds", type=float, default=20.0)
    ap.add_argument("--bridge-per-size", type=int, default=15)
    args = ap.parse_args()
    out = os.path.abspath(args.out)
    os.makedirs(os.path.join(out, "reps"), exist_ok=True)

    entries = []  # (name, crossings, alternating, volume, pd, manifold)
    for c, count in ROLFSEN_COUNTS.items():
        for k in range(1, count + 1):
            name = "%d_%d" % (c, k)
            if name in TORUS:
                continue
            L = snappy.Link(name)
            pd = FIGURE_EIGHT_PD if name == "4_1" else one_based(L)
            M = snappy.Manifold(name)
            entries.append((name, c, L.is_alternating(), float(M.volume()), pd, M))

    bridge_rows = []
    for c in (11, 12):
        for p, q in two_bridge(c, args.bridge_per_size):
            L = RationalTangle(q, p).denominator_closure()
            M = L.exterior()
            name = identify(M)
            pd = one_based(L)
            assert len(pd) == c
            entries.append((name, c, True, float(M.volume()), pd, M))
            bridge_rows.append((name, p, q, pd))
    with open(os.path.join(out, "two_bridge.csv"), "w") as f:
        f.write("# 2-bridge knots K(p,q); the determinant of K(p,q) is p\n")
        f.write("name,p,q,determinant,pd\n")
        for name, p, q, pd in bridge_rows:
            f.write('%s,%d,%d,%d,"%s"\n' % (name, p, q, p, pd_text(pd)))

    with open(os.path.join(out, "braids.txt"), "w") as f:
        f.write("# name: strands: letters (braid closures from SnapPy)\n")
        for name, c, alt, vol, pd, M in entries:
            if c > 10:
                continue
            w = snappy.Link(name).braid_word()
            strands = max(abs(x) for x in w) + 1
            f.write("%s: %d: %s\n" % (name, strands, " ".join(str(x) for x in w)))

    rows = []
    stats = {"search": 0, "deflate": 0, None: 0}
    for name, c, alt, vol, pd, M in entries:
        t = time.time()
        rep = ""
        try:
            vs, how = find_rep(pd, M, args.rep_seconds)
        except Exception as exc:  # noqa: BLE001
            print(name, "error", exc, file=sys.stderr)
            vs, how = None, None
        if vs is not None:
            try:
                # the figure-eight is amphichiral; pick the conjugate whose second
                # arc is [[1,0],[-omega,1]] with omega = (-1+i*sqrt3)/2
                write_rep(os.path.join(out, "reps", name + ".rep"), name, pd, vs,
                          conjugate=(name == "4_1"))
                rep = "reps/%s.rep" % name
            except ValueError as exc:
                print(exc, file=sys.stderr)
                how = None
        stats[how] += 1
        print(name, c, how, round(time.time() - t, 1), flush=True)
        rows.append((name, c, alt, vol, pd, rep))

    with open(os.path.join(out, "census.csv"), "w") as f:
        f.write("# hyperbolic knots up to 10 crossings plus sampled 2-bridge knots with 11-12\n")
        f.write("# volumes and PD codes from SnapPy; rep_path relative to this directory\n")
        f.write("name,crossings,alternating,volume,pd,rep_path\n")
        for name, c, alt, vol, pd, rep in rows:
            f.write('%s,%d,%d,%.12f,"%s",%s\n' % (name, c, int(alt), vol, pd_text(pd), rep))
    print(stats)


if __name__ == "__main__":
    main()
