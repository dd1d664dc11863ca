"""Deflated Levenberg-Marquardt search for the geometric Wirtinger representation.

Used for knots whose diagrams need three or more seed arcs, where the
candidate-word search in wirtinger_rep.py is too expensive.
"""
import itertools
import time

import numpy as np
import scipy.optimize as so
import snappy

from wirtinger_rep import analyze, par, inv, cusp_shape


def plan(na, cross, start):
    known = {start}
    seeds = [start]
    steps = []
    used = set()

    def closure(kn, u, record):
        changed = True
        while changed:
            changed = False
            for i, (a, o, c, s) in enumerate(cross):
                if i in u or o not in kn:
                    continue
                if a in kn and c not in kn:
                    if record is not None:
                        record.append((i, "fwd"))
                    kn.add(c)
                    u.add(i)
                    changed = True
                elif c in kn and a not in kn:
                    if record is not None:
                        record.append((i, "bwd"))
                    kn.add(a)
                    u.add(i)
                    changed = True

    closure(known, used, steps)
    while len(known) < na:
        best = None
        for cand in range(na):
            if cand in known:
                continue
            kn = set(known) | {cand}
            u = set(used)
            closure(kn, u, None)
            if best is None or len(kn) > best[0]:
                best = (len(kn), cand)
        seeds.append(best[1])
        known.add(best[1])
        closure(known, used, steps)
    closing = [i for i in range(len(cross)) if i not in used]
    return seeds, steps, closing


class Deflated:
    def __init__(self, pd, shape):
        self.pd = pd
        self.na, self.cross, self.edge_arc = analyze(pd)
        self.seeds, self.steps, self.closing = plan(self.na, self.cross, self.edge_arc[1])
        self.nun = 1 + 2 * (len(self.seeds) - 2)
        self.shape = shape
        self.roots = []

    def build(self, z):
        v = [None] * self.na
        v[self.seeds[0]] = np.array([1 + 0j, 0j])
        v[self.seeds[1]] = np.array([0j, z[0]])
        k = 1
        for sd in self.seeds[2:]:
            v[sd] = np.array([z[k], z[k + 1]])
            k += 2
        for i, d in self.steps:
            a, o, c, s = self.cross[i]
            X = par(v[o]) if s == 1 else inv(par(v[o]))
            if d == "fwd":
                v[c] = X @ v[a]
            else:
                v[a] = inv(X) @ v[c]
        return v

    def raw(self, z):
        v = self.build(z)
        r = []
        for i in self.closing:
            a, o, c, s = self.cross[i]
            X = par(v[o]) if s == 1 else inv(par(v[o]))
            r.extend((par(v[c]) - X @ par(v[a]) @ inv(X)).flatten())
        return np.array(r)

    def split(self, x):
        h = len(x) // 2
        return x[:h] + 1j * x[h:]

    def fun(self, x):
        z = self.split(x)
        r = self.raw(z)
        m = 1.0
        for root in self.roots:
            d2 = np.sum(np.abs(z - root) ** 2)
            m *= 1.0 / max(d2, 1e-300) + 1.0
        r = r * m
        return np.concatenate([r.real, r.imag])

    def sign_copies(self, z):
        groups = [[0]] + [[1 + 2 * j, 2 + 2 * j] for j in range(len(self.seeds) - 2)]
        out = []
        for flips in itertools.product([1, -1], repeat=len(groups)):
            w = z.copy()
            for g, f in zip(groups, flips):
                w[g] *= f
            out.append(w)
        return out

    def classify(self, z):
        v = self.build(z)
        Ms = [par(w) for w in v]
        irr = any(abs(np.trace(A @ B @ inv(A) @ inv(B)) - 2) > 1e-6 for A in Ms for B in Ms)
        tau = cusp_shape(v, self.pd, self.cross, self.edge_arc)
        geo = irr and abs(abs(tau.real) - abs(self.shape.real)) < 1e-6 and abs(
            abs(tau.imag) - abs(self.shape.imag)
        ) < 1e-6
        return geo, v

    def run(self, seconds=60.0, seed=0):
        rng = np.random.default_rng(seed)
        t0 = time.time()
        tries = 0
        while time.time() - t0 < seconds:
            tries += 1
            x0 = rng.normal(size=2 * self.nun) * rng.uniform(0.3, 3)
            try:
                r = so.least_squares(self.fun, x0, method="lm", xtol=1e-14, ftol=1e-14,
                                     gtol=1e-14, max_nfev=1500)
            except Exception:
                continue
            z = self.split(r.x)
            raw = self.raw(z)
            if not np.all(np.isfinite(raw)) or np.max(np.abs(raw)) > 1e-9:
                continue
            geo, v = self.classify(z)
            if geo:
                return v, tries
            self.roots.extend(self.sign_copies(z))
        return None, tries


if __name__ == "__main__":
    import sys
    import warnings

    warnings.filterwarnings("ignore")
    for name in sys.argv[1:]:
        K = snappy.Link(name)
        pd = [tuple(x + 1 for x in c) for c in K.PD_code()]
        D = Deflated(pd, complex(snappy.Manifold(name).cusp_info(0)["shape"]))
        t = time.time()
        v, tries = D.run(seconds=120)
        print(name, len(D.seeds), v is not None, tries, len(D.roots), round(time.time() - t, 1), flush=True)
