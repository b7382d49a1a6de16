"""Independent reference computations used only by the tests.

None of these import the package; they re-derive results from the textbook
formulas with plain Python or a different numerical route.
"""

import math
import random

import numpy as np

SAATY = [1, 2, 3, 4, 5, 6, 7, 8, 9]


def dominant_eigvec_squaring(a, squarings=60):
    """Perron vector by repeated squaring: A^(2^k) columns converge to it."""
    m = np.array(a, dtype=float)
    for _ in range(squarings):
        m = m @ m
        m /= m.sum()
    v = m.sum(axis=1)
    return v / v.sum()


def dominant_eigvec_lapack(a):
    vals, vecs = np.linalg.eig(np.array(a, dtype=float))
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    return v / v.sum(), float(vals[k].real)


def random_reciprocal(rng: random.Random, n):
    """Reciprocal matrix with upper entries drawn from the Saaty set and reciprocals."""
    a = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rng.choice(SAATY)
            if rng.random() < 0.5:
                x = 1.0 / x
            a[i][j] = float(x)
            a[j][i] = 1.0 / x
    return a


def consistent_matrix(w):
    return [[wi / wj for wj in w] for wi in w]


def topsis_reference(x, w, benefit):
    """Straightforward loop implementation of the five TOPSIS formulas."""
    m, n = len(x), len(x[0])
    norms = [math.sqrt(sum(x[i][j] ** 2 for i in range(m))) for j in range(n)]
    r = [[x[i][j] / norms[j] for j in range(n)] for i in range(m)]
    v = [[w[j] * r[i][j] for j in range(n)] for i in range(m)]
    pos, neg = [], []
    for j in range(n):
        col = [v[i][j] for i in range(m)]
        if benefit[j]:
            pos.append(max(col))
            neg.append(min(col))
        else:
            pos.append(min(col))
            neg.append(max(col))
    dp = [math.sqrt(sum((v[i][j] - pos[j]) ** 2 for j in range(n))) for i in range(m)]
    dn = [math.sqrt(sum((v[i][j] - neg[j]) ** 2 for j in range(n))) for i in range(m)]
    c = [dn[i] / (dp[i] + dn[i]) for i in range(m)]
    return {"r": r, "v": v, "pos": pos, "neg": neg, "dp": dp, "dn": dn, "c": c}
