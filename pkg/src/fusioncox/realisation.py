"""Geometric realisations of Coxeter systems over fusion rings.

Conventions
-----------
Vectors of ``R Lambda_S`` are ROW vectors of ring elements and matrices act
on the right, ``[s(v)] = [v][s]``.  Consequently a word ``s_1 s_2 ... s_k``
(the group element ``s_1 * s_2 * ... * s_k``) is represented by the matrix
product ``[s_k] ... [s_2][s_1]``; in particular ``[ts] = [s][t]``.

``cartan[s][t]`` stores ``r_{s,t} = B(alpha_s, alpha_t)``.  The form is
``B(u, v) = sum_{a,b} v_a * r_{b,a} * u_b^*``, i.e. ``[v] A [u]^dagger`` for
``A`` the transpose of ``cartan``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import RingMismatchError, StructureError
from .fusion_ring import (
    FusionRing,
    RingElement,
    build_rep_s3,
    build_tambara_yamagami,
    build_tensor_product,
    build_verlinde,
    build_verlinde_even,
    cyclic_group_table,
    fpdim,
    integer_ring,
    involute,
)

INF = math.inf
FPDIM_CONDITION_TOL = 1e-9
DEFAULT_RELATION_CAP = 24
GROUP_SIZE_CAP = 10_000
VARIANTS = ("standard", "even", "infty_S3", "ty")

_DEFAULT_NAMES = "stuvwxyz"


def default_generator_names(n: int):
    if n <= len(_DEFAULT_NAMES):
        return tuple(_DEFAULT_NAMES[:n])
    return tuple(f"s{i}" for i in range(n))


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix; ``math.inf`` encodes an infinite label."""

    entries: tuple
    names: tuple = None

    def __post_init__(self):
        rows = tuple(tuple(INF if m == INF else int(m) for m in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise StructureError("Coxeter matrix must be square")
        for s in range(n):
            if rows[s][s] != 1:
                raise StructureError(f"diagonal entry m[{s}][{s}] must be 1")
            for t in range(n):
                if rows[s][t] != rows[t][s]:
                    raise StructureError(f"Coxeter matrix not symmetric at ({s}, {t})")
                if s != t and rows[s][t] != INF and rows[s][t] < 2:
                    raise StructureError(f"off-diagonal label m[{s}][{t}] must be >= 2 or infinity")
        names = tuple(self.names) if self.names is not None else default_generator_names(n)
        if len(names) != n or len(set(names)) != n:
            raise StructureError("generator names must be n distinct strings")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "names", tuple(str(x) for x in names))

    @classmethod
    def from_rows(cls, rows, names=None):
        """Accept the file encoding where 0 (or ``None``/``"inf"``) means infinity."""
        conv = [[INF if m in (0, None, "inf", "∞") or m == INF else int(m) for m in row] for row in rows]
        return cls(tuple(tuple(r) for r in conv), names)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def label(self, s: int, t: int):
        return self.entries[s][t]

    def labels(self):
        """Distinct off-diagonal labels, finite ones ascending, infinity last."""
        found = {self.entries[s][t] for s in range(self.rank) for t in range(self.rank) if s != t}
        return sorted(found)

    def to_rows(self):
        return [[0 if m == INF else m for m in row] for row in self.entries]

    def __repr__(self):
        return f"CoxeterMatrix({self.to_rows()})"


def real_cartan_entry(m) -> float:
    """``-2cos(pi/m)``, exact for the integral labels 2, 3 and infinity."""
    if m == INF:
        return -2.0
    if m == 1:
        return 2.0
    if m == 2:
        return 0.0
    if m == 3:
        return -1.0
    return -2.0 * math.cos(math.pi / m)


def infer_label(value: float, tol: float = FPDIM_CONDITION_TOL):
    """Recover ``m`` from ``value ~ -2cos(pi/m)``; ``None`` if no label fits.

    Values ``<= -2 + tol`` are reported as infinity.
    """
    if value <= -2.0 + tol:
        return INF
    if value > 0 + tol:
        return None
    m = round(math.pi / math.acos(max(-1.0, min(1.0, -value / 2.0))))
    if m >= 2 and abs(real_cartan_entry(m) - value) <= tol:
        return m
    return None


# ---------------------------------------------------------------------------
# matrices over a fusion ring


class RMatrix:
    """Square matrix of ring elements acting on row vectors from the right."""

    __slots__ = ("ring", "rows", "_key")

    def __init__(self, ring: FusionRing, rows):
        self.ring = ring
        self.rows = tuple(tuple(row) for row in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise StructureError("RMatrix must be square")
        self._key = None

    @classmethod
    def identity(cls, ring: FusionRing, n: int):
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if a == b else zero for b in range(n)] for a in range(n)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatchError("matrices over different rings")
        n = self.size
        zero = self.ring.zero()
        out = []
        for a in range(n):
            row = []
            for c in range(n):
                acc = zero
                for b in range(n):
                    x, y = self.rows[a][b], other.rows[b][c]
                    if not x.is_zero() and not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return RMatrix(self.ring, out)

    def __pow__(self, k: int) -> "RMatrix":
        out = RMatrix.identity(self.ring, self.size)
        for _ in range(k):
            out = out @ self
        return out

    def act(self, vec: Sequence[RingElement]):
        """Row vector times matrix: ``[v] M``."""
        n = self.size
        zero = self.ring.zero()
        out = []
        for c in range(n):
            acc = zero
            for b in range(n):
                if not vec[b].is_zero() and not self.rows[b][c].is_zero():
                    acc = acc + vec[b] * self.rows[b][c]
            out.append(acc)
        return out

    def key(self):
        if self._key is None:
            self._key = tuple(e.coeffs for row in self.rows for e in row)
        return self._key

    def __eq__(self, other):
        return isinstance(other, RMatrix) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return self == RMatrix.identity(self.ring, self.size)

    def to_integer_matrix(self) -> np.ndarray:
        """Z-linear matrix in the basis ``b_j alpha_t`` (index ``t * rank + j``).

        Row ``(t, j)`` holds the coordinates of ``(b_j alpha_t) M``.
        """
        n, q = self.size, self.ring.rank
        out = np.zeros((n * q, n * q), dtype=object)
        for t in range(n):
            for j in range(q):
                bj = self.ring.basis(j)
                for u in range(n):
                    entry = self.rows[t][u]
                    if entry.is_zero():
                        continue
                    prod = bj * entry
                    for i, c in prod.support():
                        out[t * q + j, u * q + i] = c
        return _shrink_int(out)

    def __repr__(self):
        return "RMatrix(" + "; ".join(", ".join(str(e) for e in row) for row in self.rows) + ")"


def _shrink_int(arr: np.ndarray) -> np.ndarray:
    big = max((abs(int(x)) for x in arr.flat), default=0)
    return arr.astype(np.int64) if big < 2 ** 31 else arr


# ---------------------------------------------------------------------------
# realisations


@dataclass(frozen=True)
class GeometricRealisation:
    ring: FusionRing
    coxeter: CoxeterMatrix
    cartan: tuple
    name: str = ""

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.cartan)
        n = self.coxeter.rank
        if len(rows) != n or any(len(r) != n for r in rows):
            raise StructureError(f"Cartan matrix must be {n}x{n}")
        for row in rows:
            for e in row:
                if not isinstance(e, RingElement):
                    raise StructureError("Cartan entries must be RingElements")
                if e.ring is not self.ring and e.ring != self.ring:
                    raise RingMismatchError("Cartan entry from a different ring")
        object.__setattr__(self, "cartan", rows)

    @property
    def rank(self) -> int:
        return self.coxeter.rank

    def r(self, s: int, t: int) -> RingElement:
        return self.cartan[s][t]

    def simple_root(self, s: int):
        return [self.ring.one() if a == s else self.ring.zero() for a in range(self.rank)]

    def real_cartan(self) -> np.ndarray:
        """``FPdim`` applied entrywise (no label snapping)."""
        n = self.rank
        return np.array([[fpdim(self.cartan[s][t]) for t in range(n)] for s in range(n)])


def check_geometric(real: GeometricRealisation, tol: float = FPDIM_CONDITION_TOL):
    """List of violated geometric-realisation conditions (empty if geometric)."""
    problems = []
    n, two = real.rank, real.ring.scalar(2)
    for s in range(n):
        if real.r(s, s) != two:
            problems.append({"condition": "diagonal", "generators": [s, s],
                             "detail": f"r_ss = {real.r(s, s)}, expected 2"})
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            r = real.r(s, t)
            if not (-r).is_nonnegative():
                problems.append({"condition": "sign", "generators": [s, t],
                                 "detail": f"-r_st = {-r} is not non-negative"})
            if s < t and real.r(t, s) != involute(r):
                problems.append({"condition": "star-symmetry", "generators": [s, t],
                                 "detail": f"r_ts = {real.r(t, s)} != r_st* = {involute(r)}"})
            m = real.coxeter.label(s, t)
            d = fpdim(r)
            if m == INF:
                ok = d <= -2.0 + tol
            else:
                ok = abs(d - real_cartan_entry(m)) <= tol
            if not ok:
                inferred = infer_label(d, tol)
                problems.append({"condition": "fpdim", "generators": [s, t],
                                 "detail": f"FPdim(r_st) = {d:.12g} does not match label {_fmt_label(m)}"
                                           f" (value fits label {_fmt_label(inferred)})"})
    return problems


def _fmt_label(m):
    if m is None:
        return "none"
    return "inf" if m == INF else str(m)


def _check_vec(real, vec):
    if len(vec) != real.rank:
        raise StructureError(f"vector length {len(vec)} != rank {real.rank}")
    for e in vec:
        if e.ring is not real.ring and e.ring != real.ring:
            raise RingMismatchError("vector entry from a different ring")


def sesquilinear_form(real: GeometricRealisation, u, v) -> RingElement:
    """``B(u, v) = [v] A [u]^dagger``."""
    _check_vec(real, u)
    _check_vec(real, v)
    acc = real.ring.zero()
    for a, va in enumerate(v):
        if va.is_zero():
            continue
        for b, ub in enumerate(u):
            if ub.is_zero():
                continue
            acc = acc + va * real.r(b, a) * involute(ub)
    return acc


def generator_matrix(real: GeometricRealisation, s: int) -> RMatrix:
    """``[s] = Id - A [alpha_s]^dagger [alpha_s]``: column ``s`` loses ``(r_{s,a})_a``."""
    n = real.rank
    ident = RMatrix.identity(real.ring, n)
    rows = [list(r) for r in ident.rows]
    for a in range(n):
        rows[a][s] = rows[a][s] - real.r(s, a)
    return RMatrix(real.ring, rows)


def word_matrix(real: GeometricRealisation, word, gens=None) -> RMatrix:
    """Matrix of ``s_1 s_2 ... s_k``, namely ``[s_k] ... [s_1]``."""
    gens = gens or [generator_matrix(real, s) for s in range(real.rank)]
    out = RMatrix.identity(real.ring, real.rank)
    for s in word:
        out = gens[s] @ out
    return out


def act(real: GeometricRealisation, word, vec, gens=None):
    """``w(v)`` for the word ``w``; applies the last letter first."""
    gens = gens or [generator_matrix(real, s) for s in range(real.rank)]
    out = list(vec)
    for s in reversed(list(word)):
        out = gens[s].act(out)
    return out


@dataclass
class RelationReport:
    entries: list = field(default_factory=list)

    @property
    def failures(self):
        return [e for e in self.entries if e["status"] == "fail"]

    @property
    def unchecked(self):
        return [e for e in self.entries if e["status"] == "unchecked"]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def complete(self) -> bool:
        return not self.unchecked

    def to_dict(self):
        return {"ok": self.ok, "complete": self.complete, "entries": self.entries}


def verify_coxeter_relations(real: GeometricRealisation, cap: int = DEFAULT_RELATION_CAP) -> RelationReport:
    """Exact check of ``s^2 = 1``, ``(st)^m = 1`` and form invariance."""
    n = real.rank
    gens = [generator_matrix(real, s) for s in range(n)]
    report = RelationReport()
    for s in range(n):
        sq = gens[s] @ gens[s]
        report.entries.append({"relation": "involution", "generators": [s],
                               "status": "pass" if sq.is_identity() else "fail"})
    for s in range(n):
        for t in range(s + 1, n):
            m = real.coxeter.label(s, t)
            entry = {"relation": "braid", "generators": [s, t], "label": _fmt_label(m)}
            if m == INF:
                entry["status"] = "vacuous"
            elif m > cap:
                entry["status"] = "unchecked"
                entry["detail"] = f"label {m} exceeds relation cap {cap}"
            else:
                st = gens[t] @ gens[s]
                power = RMatrix.identity(real.ring, n)
                order = None
                for k in range(1, m + 1):
                    power = power @ st
                    if power.is_identity():
                        order = k
                        break
                entry["status"] = "pass" if order == m else "fail"
                if order != m:
                    entry["detail"] = (f"(st)^{m} != 1" if order is None
                                       else f"(st) has order {order}, expected {m}")
            report.entries.append(entry)
    roots = [real.simple_root(a) for a in range(n)]
    for s in range(n):
        images = [gens[s].act(v) for v in roots]
        bad = [(a, b) for a in range(n) for b in range(n)
               if sesquilinear_form(real, images[a], images[b]) != sesquilinear_form(real, roots[a], roots[b])]
        entry = {"relation": "form-invariance", "generators": [s], "status": "fail" if bad else "pass"}
        if bad:
            entry["witness"] = [list(p) for p in bad]
        report.entries.append(entry)
    return report


# ---------------------------------------------------------------------------
# orbit closure (group enumeration)


@dataclass
class Enumeration:
    words: list
    elements: list
    complete: bool

    def __len__(self):
        return len(self.elements)


def enumerate_group(generators, multiply_right: Callable, key: Callable[[object], Hashable],
                    identity, cap: int = GROUP_SIZE_CAP, max_length=None) -> Enumeration:
    """Breadth-first closure of ``identity`` under right multiplication.

    ``multiply_right(x, g)`` must return the element for ``word(x) + [g]``.
    Words are minimal length and lexicographically first within a length.
    ``complete`` is False when ``cap`` elements or ``max_length`` were hit
    while new elements were still appearing.
    """
    seen = {key(identity)}
    words, elements = [()], [identity]
    frontier = [((), identity)]
    length = 0
    while frontier:
        if max_length is not None and length >= max_length:
            return Enumeration(words, elements, False)
        nxt = []
        for word, elem in frontier:
            for g, gen in enumerate(generators):
                cand = multiply_right(elem, gen)
                k = key(cand)
                if k in seen:
                    continue
                if len(elements) >= cap:
                    return Enumeration(words, elements, False)
                seen.add(k)
                w = word + (g,)
                words.append(w)
                elements.append(cand)
                nxt.append((w, cand))
        frontier = nxt
        length += 1
    return Enumeration(words, elements, True)


def enumerate_realisation(real: GeometricRealisation, cap: int = GROUP_SIZE_CAP) -> Enumeration:
    """All distinct matrices ``[w]`` (with minimal words), up to ``cap``."""
    gens = [generator_matrix(real, s) for s in range(real.rank)]
    return enumerate_group(gens, lambda m, g: g @ m, RMatrix.key,
                           RMatrix.identity(real.ring, real.rank), cap)


# ---------------------------------------------------------------------------
# builders


def _factor_for_label(m, variant):
    """``(ring, index of the Cartan generator)`` or ``None`` for a trivial factor."""
    if variant == "infty_S3" and m == INF:
        return build_rep_s3(), 1
    if variant == "ty" and m in (4, 6):
        ring = build_tambara_yamagami(cyclic_group_table(m // 2), name=f"TY(Z/{m // 2})")
        return ring, ring.rank - 1
    if m == INF or m == 2:
        return None
    if variant == "even" and m % 2 == 1:
        if m == 3:
            return None
        return build_verlinde_even(m), (m - 3) // 2
    return build_verlinde(m), 1


def _trivial_entry(m, variant):
    # integer value of -r_{s,t} when the label has no factor ring
    if m == 2:
        return 0
    if m == INF:
        return 2
    if m == 3 and variant == "even":
        return 1
    raise AssertionError(f"label {m} needs a factor ring")


def build_RM_realisation(coxeter: CoxeterMatrix, variant: str = "standard") -> GeometricRealisation:
    """Type-A fusion ring ``R_M`` (or a modification) with ``r_{s,t} = -x_{m_{s,t}}``.

    Variants: ``standard`` (Verlinde ``R_m`` per label), ``even`` (odd labels
    use ``R_m^even`` and ``-Delta_{m-3}``), ``infty_S3`` (infinite labels use
    ``Rep(S3)`` and ``-V``), ``ty`` (labels 4 and 6 use ``TY(Z/2)``,
    ``TY(Z/3)`` and ``-m``).  Rank-one factors are omitted.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    factors = []   # (label, ring, generator index)
    for m in coxeter.labels():
        f = _factor_for_label(m, variant)
        if f is not None:
            factors.append((m, f[0], f[1]))

    ring = integer_ring()
    for _, fr, _ in factors:
        ring = build_tensor_product(ring, fr) if ring.rank > 1 else fr
    labels = _tensor_labels(factors) if factors else ["1"]
    suffix = ",".join(f"{_fmt_label(m)}:{fr.name}" for m, fr, _ in factors)
    ring = ring.relabel(labels, name=f"R_M[{variant}]" + (f"({suffix})" if suffix else ""))

    sizes = [fr.rank for _, fr, _ in factors]
    position = {m: i for i, (m, _, _) in enumerate(factors)}

    def factor_element(fi, idx):
        digits = [fr.unit for _, fr, _ in factors]
        digits[fi] = idx
        flat = 0
        for d, size in zip(digits, sizes):
            flat = flat * size + d
        return ring.basis(flat)

    n = coxeter.rank
    two = ring.scalar(2)
    cartan = []
    for s in range(n):
        row = []
        for t in range(n):
            if s == t:
                row.append(two)
                continue
            m = coxeter.label(s, t)
            if m in position:
                fi = position[m]
                row.append(-factor_element(fi, factors[fi][2]))
            else:
                row.append(ring.scalar(-_trivial_entry(m, variant)))
        cartan.append(row)
    return GeometricRealisation(ring, coxeter, cartan, name=f"R_M[{variant}]")


def _tensor_labels(factors):
    labels = [""]
    for m, fr, _ in factors:
        tag = _fmt_label(m)
        new = []
        for prefix in labels:
            for j, lab in enumerate(fr.basis_labels):
                part = "" if j == fr.unit else f"{lab}({tag})"
                new.append("*".join(p for p in (prefix, part) if p))
        labels = new
    return [lab or "1" for lab in labels]


def realisation_from_cartan(ring: FusionRing, coxeter: CoxeterMatrix, cartan_coeffs, name="custom"):
    """Realisation from nested integer coefficient vectors ``cartan[s][t][i]``."""
    rows = [[ring.element(vec) for vec in row] for row in cartan_coeffs]
    return GeometricRealisation(ring, coxeter, rows, name=name)
