"""Independent reference computations used by the tests.

Nothing here imports the package under test.
"""

import itertools
import math
from math import factorial

import sympy

_X = sympy.Symbol("x")


def chebyshev_polys(count):
    """Delta_0 .. Delta_{count-1} as sympy polynomials in x."""
    polys = [sympy.Poly(1, _X), sympy.Poly(_X, _X)]
    while len(polys) < count:
        polys.append(polys[1] * polys[-1] - polys[-2])
    return polys[:count]


def verlinde_oracle(n):
    """``{(j, k): {i: c}}`` for R_n by sympy division modulo Delta_{n-1}."""
    polys = chebyshev_polys(n)
    modulus = polys[n - 1]
    basis = polys[: n - 1]
    out = {}
    for j in range(n - 1):
        for k in range(n - 1):
            rem = (basis[j] * basis[k]).rem(modulus)
            coeffs = {}
            # peel off leading terms; Delta_d is monic of degree d
            while not rem.is_zero:
                d = rem.degree()
                c = rem.LC()
                coeffs[d] = int(c)
                rem = rem - basis[d] * c
            out[(j, k)] = {i: c for i, c in coeffs.items() if c}
    return out


def verlinde_closed_form(n):
    """Truncated Clebsch-Gordan rule with upper limit 2(n-2)-(j+k)."""
    out = {}
    for j in range(n - 1):
        for k in range(n - 1):
            top = min(j + k, 2 * (n - 2) - (j + k))
            out[(j, k)] = {i: 1 for i in range(abs(j - k), top + 1, 2)}
    return out


def quantum_number(k, n):
    return math.sin(k * math.pi / n) / math.sin(math.pi / n)


# finite irreducible Coxeter groups: (order, Coxeter number)
def coxeter_data(kind, n=None):
    if kind == "A":
        return factorial(n + 1), n + 1
    if kind == "B":
        return 2 ** n * factorial(n), 2 * n
    if kind == "D":
        return 2 ** (n - 1) * factorial(n), 2 * n - 2
    if kind == "I2":
        return 2 * n, n
    return {"E6": (51840, 12), "E7": (2903040, 18), "E8": (696729600, 30),
            "F4": (1152, 12), "H3": (120, 10), "H4": (14400, 30)}[kind]


def path_rows(labels):
    n = len(labels) + 1
    rows = [[1 if s == t else 2 for t in range(n)] for s in range(n)]
    for i, m in enumerate(labels):
        rows[i][i + 1] = rows[i + 1][i] = m
    return rows


def classical_rows(kind, n=None):
    """Coxeter matrix rows for a classical diagram (0 = infinity)."""
    if kind == "A":
        return path_rows([3] * (n - 1))
    if kind == "B":
        return path_rows([4] + [3] * (n - 2))
    if kind == "D":
        rows = path_rows([3] * (n - 2) + [2])
        rows[n - 3][n - 1] = rows[n - 1][n - 3] = 3
        return rows
    if kind == "I2":
        return path_rows([n])
    if kind in ("E6", "E7", "E8"):
        r = int(kind[1])
        rows = path_rows([3] * (r - 2) + [2])
        # branch node attached to the third vertex of the long arm
        rows[2][r - 1] = rows[r - 1][2] = 3
        return rows
    if kind == "F4":
        return path_rows([3, 4, 3])
    if kind == "H3":
        return path_rows([5, 3])
    if kind == "H4":
        return path_rows([5, 3, 3])
    raise KeyError(kind)


def isomorphic(adj_a, adj_b):
    """Brute-force labelled-graph isomorphism on small vertex sets.

    ``adj`` maps frozenset({u, v}) -> label for edges; vertices are 0..n-1.
    """
    na = 1 + max(v for e in adj_a for v in e)
    nb = 1 + max(v for e in adj_b for v in e)
    if na != nb or len(adj_a) != len(adj_b):
        return False
    for perm in itertools.permutations(range(na)):
        if all(adj_b.get(frozenset(perm[v] for v in e)) == lab for e, lab in adj_a.items()):
            return True
    return False


def pentagon_roots():
    """Positive roots of I2(5) with Cartan [[2, -phi], [-phi, 2]]."""
    phi = (1 + math.sqrt(5)) / 2
    return [(1.0, 0.0), (0.0, 1.0), (phi, 1.0), (1.0, phi), (phi, phi)]
