"""Unfolded Coxeter system, its integral Cartan matrix and the unfolding map.

Vertices of the unfolded graph are pairs ``(b, s)`` of a ring basis index and
a generator index, ordered generator-major: vertex ``(b, s)`` has position
``s * rank(R) + b``.  This agrees with the Z-basis ``b alpha_s`` used by
:meth:`RMatrix.to_integer_matrix`, so the identification ``b alpha_s ->
alpha_(b,s)`` is the identity on coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError
from .realisation import (
    INF,
    CoxeterMatrix,
    GeometricRealisation,
    enumerate_group,
    enumerate_realisation,
    generator_matrix,
)


@dataclass(frozen=True)
class UnfoldedSystem:
    source: GeometricRealisation
    vertices: tuple          # ((b, s), ...) in generator-major order
    graph: CoxeterMatrix
    cartan_z: np.ndarray     # int64, symmetric
    phi: tuple               # phi[s] = ((b_1, s), ..., (b_q, s))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, b: int, s: int) -> int:
        return s * self.source.ring.rank + b

    def vertex_name(self, v) -> str:
        b, s = self.vertices[v] if isinstance(v, int) else v
        return f"({self.source.ring.basis_labels[b]},{self.source.coxeter.names[s]})"

    def vertex_names(self):
        return [self.vertex_name(i) for i in range(self.size)]

    def fiber(self, s: int):
        return [self.index(b, s_) for b, s_ in self.phi[s]]


def unfolded_cartan(real: GeometricRealisation) -> np.ndarray:
    """``rcheck[(b_i,s),(b_j,t)]`` = coefficient of ``b_i`` in ``b_j * r_{s,t}``."""
    ring, n = real.ring, real.rank
    q = ring.rank
    out = np.zeros((n * q, n * q), dtype=np.int64)
    for s in range(n):
        for i in range(q):
            out[s * q + i, s * q + i] = 2
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            r = real.r(s, t)
            if r.is_zero():
                continue
            for j in range(q):
                for i, c in (ring.basis(j) * r).support():
                    out[s * q + i, t * q + j] = c
    return out


def _label_from_entry(c: int):
    if c == 0:
        return 2
    if c == -1:
        return 3
    if c <= -2:
        return INF
    raise InvariantError(f"unfolded Cartan entry {c} is positive")


def unfold(real: GeometricRealisation) -> UnfoldedSystem:
    """Build the unfolded system; raises :class:`InvariantError` on violations."""
    ring, n = real.ring, real.rank
    q = ring.rank
    cz = unfolded_cartan(real)
    size = n * q
    vertices = tuple((b, s) for s in range(n) for b in range(q))

    problems = []
    if not np.all(np.diag(cz) == 2):
        problems.append("diagonal entries must be 2")
    off = cz - np.diag(np.diag(cz))
    if np.any(off > 0):
        i, j = map(int, np.argwhere(off > 0)[0])
        problems.append(f"positive off-diagonal entry at {vertices[i]}, {vertices[j]}")
    if not np.array_equal(cz, cz.T):
        i, j = map(int, np.argwhere(cz != cz.T)[0])
        problems.append(f"not symmetric at {vertices[i]}, {vertices[j]}")
    for s in range(n):
        block = cz[s * q:(s + 1) * q, s * q:(s + 1) * q]
        if not np.array_equal(block, 2 * np.eye(q, dtype=np.int64)):
            problems.append(f"fiber of generator {s} is not independent")
    if problems:
        raise InvariantError("unfolded system invalid: " + "; ".join(problems))

    entries = [[1 if a == b else _label_from_entry(int(cz[a, b])) for b in range(size)]
               for a in range(size)]
    names = [f"({ring.basis_labels[b]},{real.coxeter.names[s]})" for b, s in vertices]
    graph = CoxeterMatrix(tuple(tuple(r) for r in entries), tuple(names))
    phi = tuple(tuple((b, s) for b in range(q)) for s in range(n))
    return UnfoldedSystem(real, vertices, graph, cz, phi)


def reflection_matrix_z(cartan_z: np.ndarray, v: int) -> np.ndarray:
    """Row-action matrix of the simple reflection at vertex ``v``."""
    m = np.eye(cartan_z.shape[0], dtype=np.int64)
    m[:, v] -= cartan_z[v, :]
    return m


def _reflect_right(mat: np.ndarray, cartan_z: np.ndarray, v: int) -> None:
    # mat @ [v] in place: only column v changes
    mat[:, v] -= mat @ cartan_z[v, :]


def fiber_product(u: UnfoldedSystem, s: int) -> np.ndarray:
    """Row-action matrix of ``phi(s)``: product of the fiber's reflections."""
    out = np.eye(u.size, dtype=np.int64)
    for v in u.fiber(s):
        _reflect_right(out, u.cartan_z, v)
    return out


def psi_conjugation_check(u: UnfoldedSystem) -> dict:
    """Compare ``Psi [s] Psi^{-1}`` with the fiber product for every generator."""
    entries = []
    for s in range(u.source.rank):
        lhs = generator_matrix(u.source, s).to_integer_matrix()
        rhs = fiber_product(u, s)
        ok = np.array_equal(np.asarray(lhs, dtype=object), np.asarray(rhs, dtype=object))
        entry = {"generator": u.source.coxeter.names[s], "status": "pass" if ok else "fail"}
        if not ok:
            a, b = map(int, np.argwhere(np.asarray(lhs != rhs))[0])
            entry["witness"] = [u.vertex_name(a), u.vertex_name(b)]
        entries.append(entry)
    return {"ok": all(e["status"] == "pass" for e in entries), "entries": entries}


def phi_image(u: UnfoldedSystem, word) -> list:
    """Concatenate fibers: ``s -> (b_1, s)(b_2, s)...(b_q, s)``.

    The same routine emits Artin-level words ``sigma_s -> prod_b sigma_(b,s)``.
    """
    out = []
    for s in word:
        if not 0 <= s < u.source.rank:
            raise IndexError(f"generator index {s} out of range")
        out.extend(u.phi[s])
    return out


def phi_image_indices(u: UnfoldedSystem, word) -> list:
    return [u.index(b, s) for b, s in phi_image(u, word)]


def zword_matrix(cartan_z: np.ndarray, word) -> np.ndarray:
    """Row-action matrix of a word in the unfolded generators (vertex indices)."""
    out = np.eye(cartan_z.shape[0], dtype=np.int64)
    for v in word:
        # [v] @ out only changes by a rank-one term
        out -= np.outer(cartan_z[v, :], out[v, :])
    return out


def fiber_edges(u: UnfoldedSystem):
    """Edges ``(a, b, label)`` of the unfolded graph with ``a < b``."""
    g = u.graph
    return [(a, b, g.label(a, b)) for a in range(u.size) for b in range(a + 1, u.size)
            if g.label(a, b) != 2]


def literal_edge_rule(real: GeometricRealisation):
    """Edges from the rule "b_j appears in (-r_{s,t}) * b_i" (commutative check)."""
    ring, n, q = real.ring, real.rank, real.ring.rank
    edges = {}
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            neg = -real.r(s, t)
            for i in range(q):
                for j, c in (neg * ring.basis(i)).support():
                    a, b = s * q + i, t * q + j
                    edges[(min(a, b), max(a, b))] = 3 if c == 1 else INF
    return edges


def unfolded_group(u: UnfoldedSystem, cap: int = 1200):
    """Enumerate ``W-check`` through its integer reflection matrices."""
    gens = [reflection_matrix_z(u.cartan_z, v) for v in range(u.size)]
    ident = np.eye(u.size, dtype=np.int64)
    return enumerate_group(gens, lambda m, g: g @ m, lambda m: m.tobytes(), ident, cap)


def desk_check_phi(u: UnfoldedSystem, cap: int = 1200, pairs: int = 200, seed: int = 0) -> dict:
    """Check phi on matrix images of all of ``W`` (when ``|W| <= cap``).

    * injective: distinct elements have distinct images;
    * well defined and multiplicative: for random pairs, the image of the
      canonical word of ``w1 w2`` equals the product of the images;
    * equivariant: the image of ``w`` equals ``Psi [w] Psi^-1``.
    """
    enum = enumerate_realisation(u.source, cap)
    if not enum.complete:
        return {"status": "inconclusive", "ok": None, "detail": f"|W| exceeds {cap}"}
    index = {m.key(): i for i, m in enumerate(enum.elements)}
    images = [zword_matrix(u.cartan_z, phi_image_indices(u, w)) for w in enum.words]
    distinct = len({m.tobytes() for m in images})
    equivariant = all(np.array_equal(img, np.asarray(m.to_integer_matrix(), dtype=np.int64))
                      for img, m in zip(images, enum.elements))
    rng = random.Random(seed)
    bad = []
    n = len(enum.elements)
    for _ in range(pairs):
        i, j = rng.randrange(n), rng.randrange(n)
        prod = enum.elements[j] @ enum.elements[i]     # [w_i w_j] = [w_j][w_i]
        k = index[prod.key()]
        if not np.array_equal(images[k], images[j] @ images[i]):
            bad.append([list(enum.words[i]), list(enum.words[j])])
    ok = distinct == n and equivariant and not bad
    return {"status": "pass" if ok else "fail", "ok": ok, "order": n, "image_order": distinct,
            "injective": distinct == n, "equivariant": equivariant, "homomorphism_failures": bad,
            "pairs": pairs}


def generator_pair_order(u: UnfoldedSystem, s: int, t: int, cap: int = 10_000):
    """Order of ``phi(s) phi(t)``; ``None`` if it exceeds ``cap``."""
    m = fiber_product(u, s) @ fiber_product(u, t)
    p = m.copy()
    ident = np.eye(u.size, dtype=np.int64)
    for k in range(1, cap + 1):
        if np.array_equal(p, ident):
            return k
        p = p @ m
    return None
