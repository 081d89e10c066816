#!/usr/bin/env python3
"""Independent reference evaluation of the bosonic q-series for plumbing files.

Reads `.plumb` files, evaluates the signed binomial theta sum with Python
fractions and brute-force enumeration (its own bound, no shared code with
the Rust crate), and writes JSON in the crate's series format.

usage: golden_zhat.py ORDER FILE.plumb [FILE.plumb ...] > out.json
"""
import itertools
import json
import math
import sys
from fractions import Fraction as F

import sympy


def parse(path):
    w, edges = {}, []
    for line in open(path):
        line = line.split("#", 1)[0].split()
        if not line:
            continue
        if line[0] == "v":
            w[line[1]] = int(line[2])
        elif line[0] == "e":
            edges.append((line[1], line[2]))
    return w, edges


def zhat(w, edges, order):
    ids = sorted(w)
    idx = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    W = sympy.zeros(n, n)
    nbr = {v: [] for v in ids}
    for v in ids:
        W[idx[v], idx[v]] = w[v]
    for a, b in edges:
        W[idx[a], idx[b]] = W[idx[b], idx[a]] = 1
        nbr[a].append(b)
        nbr[b].append(a)
    deg = {v: len(nbr[v]) for v in ids}
    leaves = [v for v in ids if deg[v] <= 1]
    inner = [v for v in ids if deg[v] >= 2]
    nodes = [v for v in ids if deg[v] >= 3]
    Winv = -W.inv()
    S = [[F(int(Winv[idx[a], idx[b]].p), int(Winv[idx[a], idx[b]].q)) for b in inner] for a in inner]
    # crude but safe box: smallest eigenvalue lower bound via floats, padded
    import numpy as np
    lam = min(np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in S])))
    box = int(math.ceil(math.sqrt(float(order) / lam))) + 3
    out = {}
    for e in itertools.product([1, -1], repeat=len(nodes)):
        ev = dict(zip(nodes, e))
        pre = 1
        for v in nodes:
            nb = sum(1 for u in nbr[v] if u in leaves)
            pre *= ev[v] ** (deg[v] - nb)
        for eps in itertools.product([1, -1], repeat=len(leaves)):
            ep = dict(zip(leaves, eps))
            sgn = pre
            for i in leaves:
                sgn *= ep[i]
            off = {}
            for v in inner:
                c = F(deg[v] - 2, 2) if v in ev else F(0)
                for u in nbr[v]:
                    if u in leaves:
                        c += F(ep[u], 2 * w[u])
                off[v] = c
            for ns in itertools.product(range(box + 1), repeat=len(nodes)):
                nv = dict(zip(nodes, ns))
                x = []
                mult = 1
                for v in inner:
                    if v in ev:
                        x.append(ev[v] * (nv[v] + off[v]))
                        mult *= math.comb(nv[v] + deg[v] - 3, nv[v])
                    else:
                        x.append(off[v])
                q = sum(x[i] * S[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))
                if q <= order:
                    out[q] = out.get(q, 0) + sgn * mult
    return [{"exponent": f"{k.numerator}/{k.denominator}", "coefficient": c}
            for k, c in sorted(out.items()) if c != 0]


if __name__ == "__main__":
    order = F(sys.argv[1])
    res = {}
    for p in sys.argv[2:]:
        w, e = parse(p)
        res[p.rsplit("/", 1)[-1]] = zhat(w, e, order)
    json.dump(res, sys.stdout, indent=1)
