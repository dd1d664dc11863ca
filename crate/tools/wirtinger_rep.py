"""Find the geometric SL(2,C) representation of a knot group in Wirtinger form.

Arc matrices are parabolics M(v) = I + v v^T J (J the standard symplectic
form), parametrized by fixed vectors v. The geometric representation is
located inside SnapPy's holonomy group: every Wirtinger meridian is a
conjugate g mu g^-1, so candidate fixed vectors are rho(g) e1 for short
words g. A depth-first search assigns arcs by (1) propagating along
crossings where the over-arc is known, (2) inferring over-arcs from known
under-arcs (two sign choices), (3) branching over candidates. Leaves must be
irreducible and reproduce SnapPy's cusp shape up to sign/conjugation.
"""
import numpy as np
import snappy
import warnings

warnings.filterwarnings("ignore")


def inv(M):
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])


def par(v):
    p, q = v
    return np.array([[1 - p * q, p * p], [-q * q, 1 + p * q]])


def omega(u, v):
    return u[0] * v[1] - u[1] * v[0]


def analyze(pd):
    n2 = 2 * len(pd)
    parent = list(range(n2 + 1))

    def f(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, d in pd:
        parent[f(b)] = f(d)
    roots = sorted(set(f(i) for i in range(1, n2 + 1)))
    idx = {r: i for i, r in enumerate(roots)}
    cross = []
    for a, b, c, d in pd:
        if (b - d) % n2 == 1:
            s = 1
        elif (d - b) % n2 == 1:
            s = -1
        else:
            raise ValueError("ambiguous over-strand orientation")
        cross.append((idx[f(a)], idx[f(b)], idx[f(c)], s))
    edge_arc = {e: idx[f(e)] for e in range(1, n2 + 1)}
    return len(roots), cross, edge_arc


def cm(m):
    return np.array([complex(x) for x in m.list()]).reshape(2, 2)


def geometric_group(M):
    G = M.fundamental_group()
    mats = {}
    for g in G.generators():
        mats[g] = cm(G.SL2C(g))
        mats[g.upper()] = inv(mats[g])
    mu = cm(G.SL2C(G.meridian()))
    sgn = np.sign(np.trace(mu).real)
    N = mu * sgn - np.eye(2)
    if abs(N[0, 1]) + abs(N[0, 0]) > 1e-9:
        f = np.array([N[0, 1], -N[0, 0]])
    else:
        f = np.array([N[1, 1], -N[1, 0]])
    f = f / np.linalg.norm(f)
    g = np.array([-f[1].conjugate(), f[0].conjugate()])
    P = np.column_stack([f, g])
    P = P / np.sqrt(np.linalg.det(P))
    mu2 = inv(P) @ mu @ P * sgn
    x = mu2[0, 1]
    D = np.diag([1 / np.sqrt(x), np.sqrt(x)])
    T = P @ inv(D)
    Ti = inv(T)
    return {k: Ti @ v @ T for k, v in mats.items()}


def candidates(gm, depth):
    letters = list(gm.keys())
    e1 = np.array([1 + 0j, 0j])
    e1i = np.array([1j, 0j])
    seen = {}

    def add(A):
        for base in (e1, e1i):
            v = A @ base
            key = tuple(np.round(par(v).flatten(), 6))
            if key not in seen:
                seen[key] = v

    frontier = [("", np.eye(2, dtype=complex))]
    add(frontier[0][1])
    for _ in range(depth):
        nxt = []
        for w, A in frontier:
            for c in letters:
                if w and w[-1] == c.swapcase():
                    continue
                B = A @ gm[c]
                if np.max(np.abs(B)) > 1e4:
                    continue
                nxt.append((w + c, B))
                add(B)
        frontier = nxt
    return list(seen.values())


def cusp_shape(vs, pd, cross, edge_arc):
    Ms = [par(v) for v in vs]
    L = np.eye(2, dtype=complex)
    w = 0
    under = {pd[i][0]: i for i in range(len(pd))}
    for e in range(1, 2 * len(pd) + 1):
        if e in under:
            a, o, c, s = cross[under[e]]
            L = (Ms[o] if s == 1 else inv(Ms[o])) @ L
            w += s
    mu = Ms[edge_arc[1]]
    L = L @ np.linalg.matrix_power(mu if -w >= 0 else inv(mu), abs(w))
    A = (mu - np.eye(2)).flatten()
    B = (L - np.eye(2) * np.sign(L.trace().real)).flatten()
    return np.vdot(A, B) / np.vdot(A, A)


class Search:
    def __init__(self, pd, M, depth=6, budget=2_000_000, flip=False):
        self.pd = pd
        self.na, self.cross, self.edge_arc = analyze(pd)
        self.shape = complex(M.cusp_info(0)["shape"])
        gm = geometric_group(M)
        if flip:
            # meridian orientation reversed: conjugate mu^-1 into [[1,1],[0,1]]
            D = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
            gm = {k: D @ m @ inv(D) for k, m in gm.items()}
        self.cands = candidates(gm, depth)
        self.budget = budget
        self.nodes = 0

    def X(self, v, s):
        return par(v) if s == 1 else inv(par(v))

    def propagate(self, v):
        changed = True
        while changed:
            changed = False
            for a, o, c, s in self.cross:
                if v[o] is None:
                    continue
                X = self.X(v[o], s)
                if v[a] is not None and v[c] is None:
                    v[c] = X @ v[a]
                    changed = True
                elif v[c] is not None and v[a] is None:
                    v[a] = inv(X) @ v[c]
                    changed = True

    def consistent(self, v):
        for a, o, c, s in self.cross:
            if v[a] is None or v[o] is None or v[c] is None:
                continue
            X = self.X(v[o], s)
            Mc = par(v[c])
            R = Mc - X @ par(v[a]) @ inv(X)
            if np.max(np.abs(R)) > 1e-7 * (1 + np.max(np.abs(Mc))):
                return False
        return True

    def leaf_ok(self, v):
        Ms = [par(w) for w in v]
        irreducible = any(
            abs(np.trace(A @ B @ inv(A) @ inv(B)) - 2) > 1e-6 for A in Ms for B in Ms
        )
        if not irreducible:
            return False
        tau = cusp_shape(v, self.pd, self.cross, self.edge_arc)
        return (
            abs(abs(tau.real) - abs(self.shape.real)) < 1e-6
            and abs(abs(tau.imag) - abs(self.shape.imag)) < 1e-6
        )

    def inferences(self, v):
        for a, o, c, s in self.cross:
            if v[o] is None and v[a] is not None and v[c] is not None:
                opts = []
                for sign in (1, -1):
                    d = sign * v[c] - v[a]
                    if np.linalg.norm(d) < 1e-9:
                        continue
                    w = omega(d, v[a])
                    # s * lam^2 * omega(v_o-dir, v_a) = 1 with v_c = v_a + s*omega(v_o, v_a) v_o
                    lam2 = 1.0 / (s * omega(d, v[a])) if abs(w) > 1e-12 else None
                    if lam2 is None:
                        continue
                    opts.append(np.sqrt(lam2) * d)
                return o, opts
        return None

    def dfs(self, v):
        self.nodes += 1
        if self.nodes > self.budget:
            return None
        self.propagate(v)
        if not self.consistent(v):
            return None
        if all(w is not None for w in v):
            return v if self.leaf_ok(v) else None
        inf = self.inferences(v)
        if inf is not None:
            o, opts = inf
            for w in opts:
                nv = list(v)
                nv[o] = w
                r = self.dfs(nv)
                if r is not None:
                    return r
            return None
        k = next(i for i in range(self.na) if v[i] is None)
        for cand in self.cands:
            nv = list(v)
            nv[k] = cand
            r = self.dfs(nv)
            if r is not None:
                return r
        return None

    def run(self):
        v = [None] * self.na
        v[self.edge_arc[1]] = np.array([1 + 0j, 0j])
        return self.dfs(v)


if __name__ == "__main__":
    import sys, time

    for name in sys.argv[1:]:
        t = time.time()
        K = snappy.Link(name)
        pd = [tuple(x + 1 for x in c) for c in K.PD_code()]
        for flip in (False, True):
            S = Search(pd, snappy.Manifold(name), budget=200000, flip=flip)
            r = S.run()
            print(flip, r is not None, S.nodes)
        print(name, "found" if r is not None else "MISSING", S.nodes, round(time.time() - t, 1), flush=True)


def _act(v, u, s):
    # M(v)^s u for batches of vectors (..., 2)
    w = v[..., 0] * u[..., 1] - v[..., 1] * u[..., 0]
    return u + s * v * w[..., None]


class FastSearch(Search):
    """Search with the last seed level evaluated as one vectorized batch."""

    def schedule(self, known, seed):
        known = set(known) | {seed}
        ops = []
        changed = True
        while changed:
            changed = False
            for i, (a, o, c, s) in enumerate(self.cross):
                if o in known and (a in known) != (c in known):
                    ops.append(("fwd" if a in known else "bwd", i))
                    known.add(c)
                    known.add(a)
                    changed = True
                elif o not in known and a in known and c in known:
                    ops.append(("inf", i))
                    known.add(o)
                    changed = True
        return ops, known

    def batch(self, v, seed):
        known = [i for i in range(self.na) if v[i] is not None]
        ops, kn = self.schedule(known, seed)
        if len(kn) < self.na:
            return None
        C = np.array(self.cands)
        B = len(C)
        V = np.zeros((B, self.na, 2), dtype=complex)
        for i in known:
            V[:, i, :] = v[i]
        V[:, seed, :] = C
        for op, i in ops:
            a, o, c, s = self.cross[i]
            if op == "fwd":
                V[:, c] = _act(V[:, o], V[:, a], s)
            elif op == "bwd":
                V[:, a] = _act(V[:, o], V[:, c], -s)
            else:
                outs = []
                for sign in (1, -1):
                    W = V.copy()
                    d = sign * W[:, c] - W[:, a]
                    om = d[:, 0] * W[:, a, 1] - d[:, 1] * W[:, a, 0]
                    with np.errstate(all="ignore"):
                        lam = np.sqrt(1.0 / (s * om))
                    W[:, o] = lam[:, None] * d
                    outs.append(W)
                V = np.concatenate(outs)
                V = V[np.all(np.isfinite(V), axis=(1, 2))]
        ok = np.ones(len(V), dtype=bool)
        for a, o, c, s in self.cross:
            pred = _act(V[:, o], V[:, a], s)
            scale = 1 + np.abs(V[:, c]).max(axis=1) ** 2
            e1 = np.abs(V[:, c] - pred).max(axis=1)
            e2 = np.abs(V[:, c] + pred).max(axis=1)
            ok &= np.minimum(e1, e2) < 1e-7 * scale
        for row in V[ok]:
            sol = [row[i].copy() for i in range(self.na)]
            if self.leaf_ok(sol):
                return sol
        return None

    def best_seed(self, v):
        known = [i for i in range(self.na) if v[i] is not None]
        best = None
        for cand in range(self.na):
            if v[cand] is not None:
                continue
            _, kn = self.schedule(known, cand)
            if best is None or len(kn) > best[0]:
                best = (len(kn), cand)
        return best

    def dfs(self, v):
        self.nodes += 1
        if self.nodes > self.budget:
            return None
        self.propagate(v)
        if not self.consistent(v):
            return None
        if all(w is not None for w in v):
            return v if self.leaf_ok(v) else None
        inf = self.inferences(v)
        if inf is not None:
            o, opts = inf
            for w in opts:
                nv = list(v)
                nv[o] = w
                r = self.dfs(nv)
                if r is not None:
                    return r
            return None
        size, k = self.best_seed(v)
        if size == self.na:
            return self.batch(v, k)
        for cand in self.cands:
            nv = list(v)
            nv[k] = cand
            r = self.dfs(nv)
            if r is not None:
                return r
        return None
