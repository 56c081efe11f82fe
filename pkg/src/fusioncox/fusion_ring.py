"""Finite-rank fusion rings with exact integer arithmetic.

A ring of rank ``n`` is stored through its structure constants
``c[j][k][i]``, the coefficient of ``b_i`` in ``b_j * b_k``.  Internally the
table is kept sparse (``table[j][k]`` is a tuple of ``(i, c)`` pairs) so that
tensor products of several Verlinde rings stay cheap to build and multiply
in.  Coefficients are plain Python integers, hence arbitrary precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, GroupTableError, RingMismatchError, StructureError

__all__ = [
    "FusionRing",
    "RingElement",
    "Violation",
    "ValidationReport",
    "validate",
    "multiply",
    "involute",
    "fpdim",
    "fpdim_basis",
    "chebyshev",
    "build_group_ring",
    "cyclic_group_table",
    "symmetric_group_table",
    "build_verlinde",
    "build_verlinde_even",
    "build_rep_s3",
    "build_tambara_yamagami",
    "build_tensor_product",
    "integer_ring",
]

FPDIM_TOL = 1e-12
FPDIM_MAX_ITER = 100_000


class FusionRing:
    """A based ring ``Z{b_0, ..., b_{n-1}}`` with unit and basis involution.

    Construction only checks shapes and index ranges; the ring axioms are
    checked by :func:`validate`.  Instances are treated as immutable.
    """

    __slots__ = ("name", "basis_labels", "unit", "involution", "_table", "_key", "_fpdims")

    def __init__(self, name, basis_labels, unit, involution, table):
        labels = tuple(str(b) for b in basis_labels)
        n = len(labels)
        if n == 0:
            raise StructureError("a fusion ring needs at least one basis element")
        if len(set(labels)) != n:
            raise StructureError(f"basis labels are not distinct: {labels}")
        if not 0 <= int(unit) < n:
            raise StructureError(f"unit index {unit} out of range for rank {n}")
        inv = tuple(int(x) for x in involution)
        if len(inv) != n:
            raise StructureError(f"involution has length {len(inv)}, expected {n}")
        if any(not 0 <= x < n for x in inv):
            raise StructureError(f"involution entries out of range: {inv}")
        if len(table) != n or any(len(row) != n for row in table):
            raise StructureError(f"structure table is not {n}x{n}")
        frozen = []
        for row in table:
            frozen_row = []
            for terms in row:
                acc = {}
                for i, c in terms:
                    i, c = int(i), int(c)
                    if not 0 <= i < n:
                        raise StructureError(f"output index {i} out of range for rank {n}")
                    if c:
                        acc[i] = acc.get(i, 0) + c
                frozen_row.append(tuple(sorted((i, c) for i, c in acc.items() if c)))
            frozen.append(tuple(frozen_row))
        self.name = str(name)
        self.basis_labels = labels
        self.unit = int(unit)
        self.involution = inv
        self._table = tuple(frozen)
        self._key = None
        self._fpdims = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_dense(cls, name, basis_labels, unit, involution, mult):
        """Build from a dense ``n x n x n`` tensor ``mult[j][k][i]``."""
        n = len(basis_labels)
        arr = np.asarray(mult, dtype=object)
        if arr.shape != (n, n, n):
            raise StructureError(f"mult tensor has shape {arr.shape}, expected {(n, n, n)}")
        table = [[[(i, int(arr[j, k, i])) for i in range(n) if arr[j, k, i]] for k in range(n)]
                 for j in range(n)]
        return cls(name, basis_labels, unit, involution, table)

    @classmethod
    def from_triples(cls, name, basis_labels, unit, involution, triples):
        """Build from sparse ``(j, k, i, coeff)`` entries; unlisted entries are 0."""
        n = len(basis_labels)
        table = [[[] for _ in range(n)] for _ in range(n)]
        for entry in triples:
            if len(entry) != 4:
                raise StructureError(f"mult entry {entry!r} is not a (j, k, i, coeff) quadruple")
            j, k, i, c = (int(x) for x in entry)
            if not (0 <= j < n and 0 <= k < n and 0 <= i < n):
                raise StructureError(f"mult entry {entry!r} has an index out of range")
            table[j][k].append((i, c))
        return cls(name, basis_labels, unit, involution, table)

    # -- basic accessors --------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def product_terms(self, j: int, k: int):
        """Sparse expansion ``((i, c), ...)`` of ``b_j * b_k``."""
        return self._table[j][k]

    def structure_constant(self, j: int, k: int, i: int) -> int:
        for ii, c in self._table[j][k]:
            if ii == i:
                return c
        return 0

    def triples(self):
        """All nonzero ``(j, k, i, c)`` sorted lexicographically."""
        return [(j, k, i, c) for j, row in enumerate(self._table)
                for k, terms in enumerate(row) for i, c in terms]

    def dense(self) -> np.ndarray:
        """Dense ``(n, n, n)`` tensor; int64 when safe, object dtype otherwise."""
        n = self.rank
        cmax = max((abs(c) for _, _, _, c in self.triples()), default=0)
        # associativity sums reach n * cmax**2
        dtype = np.int64 if n * cmax * cmax < 2 ** 62 else object
        arr = np.zeros((n, n, n), dtype=dtype)
        for j, k, i, c in self.triples():
            arr[j, k, i] = c
        return arr

    def left_matrix(self, j: int) -> np.ndarray:
        """Float matrix ``(c[j][k][i])_{k,i}`` of left multiplication by ``b_j``."""
        n = self.rank
        m = np.zeros((n, n))
        for k, terms in enumerate(self._table[j]):
            for i, c in terms:
                m[k, i] = c
        return m

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    # -- elements -----------------------------------------------------------
    def element(self, coeffs) -> "RingElement":
        return RingElement(self, tuple(int(c) for c in coeffs))

    def basis(self, j) -> "RingElement":
        """The basis element ``b_j``; ``j`` may be an index or a label."""
        if isinstance(j, str):
            j = self.index(j)
        coeffs = [0] * self.rank
        coeffs[j] = 1
        return RingElement(self, tuple(coeffs))

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.rank)

    def one(self) -> "RingElement":
        return self.basis(self.unit)

    def scalar(self, c: int) -> "RingElement":
        return self.one() * int(c)

    def relabel(self, labels, name=None) -> "FusionRing":
        return FusionRing(self.name if name is None else name, labels, self.unit,
                          self.involution, self._table)

    # -- identity ---------------------------------------------------------
    def _identity_key(self):
        if self._key is None:
            self._key = (self.basis_labels, self.unit, self.involution, self._table)
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FusionRing):
            return NotImplemented
        return self._identity_key() == other._identity_key()

    def __hash__(self):
        return hash(self._identity_key())

    def __repr__(self):
        return f"FusionRing({self.name!r}, rank={self.rank})"


@dataclass(frozen=True)
class RingElement:
    """Integer combination ``sum coeffs[i] * b_i`` of basis elements."""

    ring: FusionRing = field(repr=False)
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.ring.rank:
            raise StructureError(
                f"element has {len(self.coeffs)} coefficients, ring {self.ring.name} has rank {self.ring.rank}")

    def _same(self, other):
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatchError(f"{self.ring.name} vs {other.ring.name}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        self._same(other)
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        self._same(other)
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RingElement(self.ring, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, tuple(a * other for a in self.coeffs))
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, tuple(other * a for a in self.coeffs))
        return NotImplemented

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = multiply(out, self)
        return out

    @property
    def star(self):
        return involute(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_positive(self) -> bool:
        return self.is_nonnegative() and not self.is_zero()

    def support(self):
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def __str__(self):
        terms = []
        for i, c in self.support():
            label = self.ring.basis_labels[i]
            if i == self.ring.unit:
                terms.append(str(c))
            elif c == 1:
                terms.append(label)
            elif c == -1:
                terms.append(f"-{label}")
            else:
                terms.append(f"{c}*{label}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def multiply(a: RingElement, b: RingElement) -> RingElement:
    """Exact product ``a * b`` by bilinear extension of the structure constants."""
    a._same(b)
    ring = a.ring
    out = [0] * ring.rank
    bsupp = b.support()
    for j, aj in a.support():
        row = ring._table[j]
        for k, bk in bsupp:
            w = aj * bk
            for i, c in row[k]:
                out[i] += w * c
    return RingElement(ring, tuple(out))


def involute(a: RingElement) -> RingElement:
    """Apply the basis involution coefficientwise: ``sum c_j b_{j*}``."""
    out = [0] * a.ring.rank
    for j, c in enumerate(a.coeffs):
        out[a.ring.involution[j]] += c
    return RingElement(a.ring, tuple(out))


def _perron_eigenvalue(m: np.ndarray, tol=FPDIM_TOL, max_iter=FPDIM_MAX_ITER) -> float:
    # Power iteration on M + I: the shift makes the Perron root strictly dominant
    # even when M is periodic (permutation matrices of group rings).
    n = m.shape[0]
    shifted = m + np.eye(n)
    x = np.ones(n) / math.sqrt(n)
    residual = math.inf
    for _ in range(max_iter):
        y = shifted @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
        mx = m @ x
        lam = float(x @ mx)
        residual = float(np.linalg.norm(mx - lam * x))
        if residual <= tol * max(1.0, abs(lam)):
            return lam
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps", residual)


def fpdim_basis(ring: FusionRing) -> tuple:
    """Frobenius-Perron dimensions of all basis elements (memoised per ring)."""
    if ring._fpdims is None:
        ring._fpdims = tuple(_perron_eigenvalue(ring.left_matrix(j)) for j in range(ring.rank))
    return ring._fpdims


def fpdim(a: RingElement) -> float:
    """FPdim extended Z-linearly from the basis."""
    dims = fpdim_basis(a.ring)
    return float(sum(c * dims[j] for j, c in a.support()))


def chebyshev(x: RingElement, k: int) -> RingElement:
    """``Delta_k(x)`` computed in the ring of ``x`` (``Delta_{-1} = 0``)."""
    if k < -1:
        raise ValueError("Chebyshev index must be >= -1")
    prev, cur = x.ring.zero(), x.ring.one()
    if k == -1:
        return prev
    for _ in range(k):
        prev, cur = cur, x * cur - prev
    return cur


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple
    detail: str = ""

    def to_dict(self):
        return {"axiom": self.axiom, "indices": list(self.indices), "detail": self.detail}


@dataclass
class ValidationReport:
    ring: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def to_dict(self):
        return {"ring": self.ring, "ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


_MAX_WITNESSES = 50


def validate(ring: FusionRing) -> ValidationReport:
    """Check every fusion-ring axiom; each violation records a witness.

    At most ``_MAX_WITNESSES`` witnesses are listed per axiom; the last entry
    for a truncated axiom carries the total count.
    """
    n, u, inv = ring.rank, ring.unit, ring.involution
    c = ring.dense()
    found: dict = {}

    def flag(axiom, idx, detail=""):
        found.setdefault(axiom, []).append(Violation(axiom, tuple(int(i) for i in idx), detail))

    for idx in zip(*np.nonzero(c < 0)):
        flag("non-negativity", idx, f"coefficient {c[idx]}")

    eye = np.eye(n, dtype=c.dtype)
    for k, i in zip(*np.nonzero(c[u] != eye)):
        flag("unit", (u, k, i), "unit * b_k must equal b_k")
    for j, i in zip(*np.nonzero(c[:, u, :] != eye)):
        flag("unit", (j, u, i), "b_j * unit must equal b_j")

    for j, k in zip(*np.nonzero(~np.any(c > 0, axis=2))):
        flag("non-degeneracy", (j, k), "b_j * b_k has no positive coefficient")

    # (b_j b_k) b_l  vs  b_j (b_k b_l)
    flat = c.reshape(n * n, n)
    for j in range(n):
        lhs = np.tensordot(c[j], c, axes=([1], [0]))   # [k, l, i] = sum_m c[j,k,m] c[m,l,i]
        rhs = (flat @ c[j]).reshape(n, n, n)           # [k, l, i] = sum_m c[k,l,m] c[j,m,i]
        for k, l, i in zip(*np.nonzero(lhs != rhs)):
            flag("associativity", (j, k, l, i), f"{lhs[k, l, i]} != {rhs[k, l, i]}")

    is_perm = sorted(inv) == list(range(n))
    if not is_perm:
        flag("involution", tuple(inv), "not a permutation")
    for j in range(n):
        if inv[inv[j]] != j:
            flag("involution", (j,), f"({j}*)* = {inv[inv[j]]}")

    if is_perm:
        p = np.array(inv)
        # anti[j, k, i] = c[k*, j*, i*]
        anti = c[p][:, p][:, :, p].transpose(1, 0, 2)
        for j, k, i in zip(*np.nonzero(c != anti)):
            flag("anti-homomorphism", (j, k, i), "c[j][k][i] != c[k*][j*][i*]")

    for j in range(n):
        for k in range(n):
            want = 1 if k == inv[j] else 0
            if c[j, k, u] != want:
                flag("unit-pairing", (j, k),
                     f"coefficient of unit in b_j*b_k is {c[j, k, u]}, expected {want}")

    if is_perm:
        p = np.array(inv)
        # c[j][k][i] == c[j*][i][k]
        fr1 = c[p].transpose(0, 2, 1)
        # c[j][k][i] == c[i][k*][j]
        fr2 = c[:, p, :].transpose(2, 1, 0)
        for j, k, i in zip(*np.nonzero((c != fr1) | (c != fr2))):
            flag("frobenius-reciprocity", (j, k, i), "c[j][k][i], c[j*][i][k], c[i][k*][j] differ")

    report = ValidationReport(ring.name)
    for axiom in ("non-negativity", "unit", "non-degeneracy", "associativity", "involution",
                  "anti-homomorphism", "unit-pairing", "frobenius-reciprocity"):
        items = found.get(axiom, [])
        if len(items) > _MAX_WITNESSES:
            total = len(items)
            items = items[:_MAX_WITNESSES]
            last = items[-1]
            items[-1] = Violation(axiom, last.indices, f"{last.detail} ({total} violations in total)")
        report.violations.extend(items)
    return report


# ---------------------------------------------------------------------------
# builders


def integer_ring() -> FusionRing:
    return FusionRing("Z", ["1"], 0, [0], [[[(0, 1)]]])


def _check_group(table):
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise GroupTableError("Cayley table must be square and non-empty")
    if any(not (isinstance(x, int) and 0 <= x < n) for row in table for x in row):
        raise GroupTableError("Cayley table entries must be element indices")
    units = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
    if not units:
        raise GroupTableError("no identity element")
    e = units[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupTableError(f"not associative at {(a, b, c)}")
    inverses = []
    for g in range(n):
        inv = [h for h in range(n) if table[g][h] == e and table[h][g] == e]
        if not inv:
            raise GroupTableError(f"element {g} has no inverse")
        inverses.append(inv[0])
    return e, inverses


def cyclic_group_table(n: int):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_group_table(k: int = 3):
    """Cayley table of ``S_k``; returns ``(table, names)``.

    Elements are permutations of ``0..k-1`` in lexicographic order, composed
    as functions (``(p*q)(x) = p(q(x))``).
    """
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    names = ["".join(str(x + 1) for x in p) for p in perms]
    return table, names


def _cyclic_names(n):
    return ["1"] + ["g" if a == 1 else f"g^{a}" for a in range(1, n)]


def build_group_ring(cayley_table, names=None, name="Z[G]") -> FusionRing:
    """Group ring ``Z[G]`` with basis ``G`` and involution ``g -> g^{-1}``."""
    table = [list(row) for row in cayley_table]
    e, inverses = _check_group(table)
    n = len(table)
    if names is None:
        names = _cyclic_names(n) if table == cyclic_group_table(n) else [str(g) for g in range(n)]
    mult = [[[(table[a][b], 1)] for b in range(n)] for a in range(n)]
    return FusionRing(name, names, e, inverses, mult)


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _chebyshev_polys(count):
    """Coefficient lists (low degree first) of ``Delta_0 .. Delta_{count-1}``."""
    polys = [[1], [0, 1]][:count]
    while len(polys) < count:
        a, b = polys[-1], polys[-2]
        nxt = [0] + a
        for i, c in enumerate(b):
            nxt[i] -= c
        polys.append(nxt)
    return polys


def _poly_rem_monic(p, modulus):
    p = list(p)
    d = len(modulus) - 1
    for top in range(len(p) - 1, d - 1, -1):
        lead = p[top]
        if lead:
            for i, c in enumerate(modulus):
                p[top - d + i] -= lead * c
    return p[:d] + [0] * max(0, d - len(p))


def _in_chebyshev_basis(p, polys):
    """Express a polynomial of degree < len(polys) in the Delta basis."""
    p = list(p) + [0] * (len(polys) - len(p))
    out = [0] * len(polys)
    for k in range(len(polys) - 1, -1, -1):
        lead = p[k]
        if lead:
            out[k] = lead
            for i, c in enumerate(polys[k]):
                p[i] -= lead * c
    if any(p):
        raise AssertionError("Chebyshev basis expansion left a remainder")
    return out


def build_verlinde(n: int) -> FusionRing:
    """``R_n = Z[x]/(Delta_{n-1}(x))`` with basis ``Delta_0 .. Delta_{n-2}``.

    Structure constants come from exact polynomial multiplication and
    reduction modulo the monic polynomial ``Delta_{n-1}``.
    """
    if n < 2:
        raise ValueError("Verlinde ring needs n >= 2")
    polys = _chebyshev_polys(n)
    modulus, basis_polys = polys[n - 1], polys[: n - 1]
    r = n - 1
    table = []
    for j in range(r):
        row = []
        for k in range(r):
            rem = _poly_rem_monic(_poly_mul(basis_polys[j], basis_polys[k]), modulus)
            coeffs = _in_chebyshev_basis(rem, basis_polys)
            row.append([(i, c) for i, c in enumerate(coeffs) if c])
        table.append(row)
    return FusionRing(f"R_{n}", [f"D{k}" for k in range(r)], 0, list(range(r)), table)


def build_verlinde_even(n: int) -> FusionRing:
    """Subring of ``R_n`` spanned by even-degree ``Delta_{2k}``."""
    if n < 2:
        raise ValueError("Verlinde ring needs n >= 2")
    full = build_verlinde(n)
    keep = list(range(0, n - 1, 2))
    pos = {old: new for new, old in enumerate(keep)}
    table = []
    for j in keep:
        row = []
        for k in keep:
            terms = full.product_terms(j, k)
            if any(i not in pos for i, _ in terms):
                raise AssertionError("even-degree span is not closed under multiplication")
            row.append([(pos[i], c) for i, c in terms])
        table.append(row)
    return FusionRing(f"R_{n}^even", [f"D{k}" for k in keep], 0, list(range(len(keep))), table)


def build_rep_s3() -> FusionRing:
    """Representation ring of ``S_3`` with basis ``1, V, sgn``."""
    one, v, sgn = 0, 1, 2
    mult = {
        (one, one): [(one, 1)], (one, v): [(v, 1)], (one, sgn): [(sgn, 1)],
        (v, one): [(v, 1)], (v, v): [(one, 1), (v, 1), (sgn, 1)], (v, sgn): [(v, 1)],
        (sgn, one): [(sgn, 1)], (sgn, v): [(v, 1)], (sgn, sgn): [(one, 1)],
    }
    table = [[mult[(j, k)] for k in range(3)] for j in range(3)]
    return FusionRing("Rep(S3)", ["1", "V", "sgn"], one, [0, 1, 2], table)


def build_tambara_yamagami(abelian_cayley_table, names=None, name="TY(G)") -> FusionRing:
    """``TY(G) = Z[G] + Z*m`` with ``g*m = m*g = m`` and ``m*m = sum_g g``."""
    table = [list(row) for row in abelian_cayley_table]
    e, inverses = _check_group(table)
    n = len(table)
    if any(table[a][b] != table[b][a] for a in range(n) for b in range(n)):
        raise GroupTableError("Tambara-Yamagami construction here requires an abelian group")
    if names is None:
        names = _cyclic_names(n) if table == cyclic_group_table(n) else [str(g) for g in range(n)]
    if "m" in names:
        raise StructureError("group element names must not clash with 'm'")
    m = n
    mult = [[[(table[a][b], 1)] for b in range(n)] + [[(m, 1)]] for a in range(n)]
    mult.append([[(m, 1)] for _ in range(n)] + [[(g, 1) for g in range(n)]])
    return FusionRing(name, list(names) + ["m"], e, list(inverses) + [m], mult)


def build_tensor_product(r1: FusionRing, r2: FusionRing, name=None) -> FusionRing:
    """``R1 (x) R2`` with basis ``b (x) b'`` ordered with ``R1`` index major."""
    n1, n2 = r1.rank, r2.rank
    labels = [f"{a}*{b}" for a in r1.basis_labels for b in r2.basis_labels]
    table = []
    for j1 in range(n1):
        for j2 in range(n2):
            row = []
            for k1 in range(n1):
                t1 = r1.product_terms(j1, k1)
                for k2 in range(n2):
                    t2 = r2.product_terms(j2, k2)
                    row.append([(i1 * n2 + i2, c1 * c2) for i1, c1 in t1 for i2, c2 in t2])
            table.append(row)
    inv = [r1.involution[a] * n2 + r2.involution[b] for a in range(n1) for b in range(n2)]
    return FusionRing(name or f"{r1.name}(x){r2.name}", labels, r1.unit * n2 + r2.unit, inv, table)
