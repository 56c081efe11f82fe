"""Real reflection representations, roots, hyperplanes and chamber orbits.

Roots live in ``Lambda_S`` (coefficients over the simple roots) and act as
linear functionals on the contragredient space: a functional ``Z`` with
coordinates ``z_s = Z(alpha_s)`` evaluates a root ``beta`` to ``beta . z``.
The hyperplane of ``beta`` therefore has normal vector ``beta`` itself.

Integer Cartan matrices are handled exactly (int64 / ``Fraction``); real ones
use float64 with explicit tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InvariantError
from .fusion_ring import fpdim, fpdim_basis
from .realisation import (
    FPDIM_CONDITION_TOL,
    INF,
    CoxeterMatrix,
    GeometricRealisation,
    enumerate_group,
    real_cartan_entry,
)

TOL = 1e-9
COXETER_ORDER_CAP = 10_000
MAX_LENGTH_BOUND = 12

FINITE, AFFINE, INDEFINITE, AMBIGUOUS = "finite", "affine", "indefinite", "ambiguous"


def _maybe_integer(mat: np.ndarray) -> np.ndarray:
    if mat.dtype.kind in "iu":
        return mat.astype(np.int64)
    if np.all(np.isfinite(mat)) and np.all(mat == np.round(mat)):
        return np.round(mat).astype(np.int64)
    return mat.astype(np.float64)


@dataclass(frozen=True)
class RealRealisation:
    """Symmetric Cartan matrix over the reals (exact when integral)."""

    cartan: np.ndarray
    names: tuple = ()

    def __post_init__(self):
        mat = _maybe_integer(np.asarray(self.cartan))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("Cartan matrix must be square")
        if not np.allclose(mat, mat.T, atol=0.0, rtol=0.0):
            raise ValueError("real Cartan matrix must be symmetric")
        if not np.all(np.diag(mat) == 2):
            raise ValueError("real Cartan matrix must have 2 on the diagonal")
        mat.setflags(write=False)
        object.__setattr__(self, "cartan", mat)
        names = tuple(self.names) or tuple(str(i) for i in range(mat.shape[0]))
        object.__setattr__(self, "names", names)

    @property
    def dimension(self) -> int:
        return self.cartan.shape[0]

    @property
    def exact(self) -> bool:
        return self.cartan.dtype.kind == "i"

    def restrict(self, component: Sequence[int]) -> "RealRealisation":
        idx = list(component)
        return RealRealisation(self.cartan[np.ix_(idx, idx)], tuple(self.names[i] for i in idx))

    def generator_matrix(self, s: int) -> np.ndarray:
        """Row-action matrix: ``[v][s] = v - B(alpha_s, v) alpha_s``."""
        m = np.eye(self.dimension, dtype=self.cartan.dtype)
        m[:, s] = m[:, s] - self.cartan[s, :]
        return m

    def reflect(self, s: int, vec: np.ndarray) -> np.ndarray:
        out = np.array(vec, copy=True)
        out[s] = out[s] - vec @ self.cartan[s, :]
        return out

    def adjacency(self):
        n = self.dimension
        return [[t for t in range(n) if t != s and self.cartan[s, t] != 0] for s in range(n)]

    @classmethod
    def from_coxeter(cls, coxeter: CoxeterMatrix) -> "RealRealisation":
        n = coxeter.rank
        mat = np.array([[real_cartan_entry(coxeter.label(s, t)) for t in range(n)] for s in range(n)])
        return cls(mat, coxeter.names)

    @classmethod
    def from_unfolded(cls, unfolded) -> "RealRealisation":
        return cls(np.array(unfolded.cartan_z, dtype=np.int64), tuple(unfolded.vertex_names()))

    @classmethod
    def folded(cls, real: GeometricRealisation, tol: float = FPDIM_CONDITION_TOL) -> "RealRealisation":
        """Cartan matrix ``FPdim(r_{s,t})`` of the folded real realisation.

        Finite labels are re-evaluated as ``-2cos(pi/m)`` after checking the
        FPdim value against them; infinite labels keep the FPdim value,
        snapped to an integer when within ``tol`` of one.
        """
        n = real.rank
        mat = np.zeros((n, n))
        for s in range(n):
            for t in range(n):
                if s == t:
                    mat[s, t] = 2.0
                    continue
                m = real.coxeter.label(s, t)
                d = fpdim(real.r(s, t))
                if m == INF:
                    if d > -2.0 + tol:
                        raise InvariantError(f"FPdim(r_{s}{t}) = {d} > -2 on an infinite label")
                    mat[s, t] = round(d) if abs(d - round(d)) <= tol else d
                else:
                    exact = real_cartan_entry(m)
                    if abs(d - exact) > tol:
                        raise InvariantError(f"FPdim(r_{s}{t}) = {d} does not match label {m}")
                    mat[s, t] = exact
        return cls(mat, real.coxeter.names)


def check_real_realisation(rr: RealRealisation, tol: float = TOL) -> list:
    """Generators must be involutions preserving the Cartan form on basis pairs."""
    problems = []
    a = rr.cartan
    eye = np.eye(rr.dimension)
    for s in range(rr.dimension):
        g = rr.generator_matrix(s)
        if np.max(np.abs(g @ g - eye)) > tol:
            problems.append({"generator": rr.names[s], "check": "involution"})
        # form on rows: B(u, v) = u A v^T, preserved iff g A g^T = A
        if np.max(np.abs(g @ a @ g.T - a)) > tol:
            problems.append({"generator": rr.names[s], "check": "form"})
    return problems


# ---------------------------------------------------------------------------
# classification


def inertia(rr: RealRealisation, tol: float = TOL):
    """Eigenvalue sign counts; exact for integer matrices."""
    if rr.exact:
        return _components_inertia(rr)
    eig = np.linalg.eigvalsh(rr.cartan.astype(float))
    return int(np.sum(eig > tol)), int(np.sum(np.abs(eig) <= tol)), int(np.sum(eig < -tol))


def _components_inertia(rr: RealRealisation):
    totals = [0, 0, 0]
    for comp in connected_components(rr):
        sub = rr.cartan[np.ix_(comp, comp)]
        counts = _sparse_inertia(sub)
        for i in range(3):
            totals[i] += counts[i]
    return tuple(totals)


def _sparse_inertia(mat: np.ndarray):
    n = mat.shape[0]
    rows = {i: {j: Fraction(int(mat[i, j])) for j in range(n) if mat[i, j] != 0} for i in range(n)}
    pos = neg = 0
    alive = set(range(n))
    while alive:
        cands = [(len(rows[i]), i) for i in alive if rows[i].get(i, 0) != 0]
        if not cands:
            # every remaining diagonal entry vanished: finish densely
            idx = sorted(alive)
            rest = np.zeros((len(idx), len(idx)), dtype=object)
            for a, i in enumerate(idx):
                for b, j in enumerate(idx):
                    rest[a, b] = rows[i].get(j, Fraction(0))
            p2, z2, n2 = _dense_fraction_inertia(rest)
            return pos + p2, z2, neg + n2
        _, p = min(cands)
        piv = rows[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        col = {i: v for i, v in rows[p].items() if i != p}
        alive.discard(p)
        del rows[p]
        for i, ai in col.items():
            row = rows[i]
            row.pop(p, None)
            for j, aj in col.items():
                val = row.get(j, 0) - ai * aj / piv
                if val:
                    row[j] = val
                else:
                    row.pop(j, None)
    return pos, 0, neg


def _dense_fraction_inertia(a):
    a = [[Fraction(x) for x in row] for row in a]
    n = len(a)
    pos = zero = neg = 0
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pr = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pr is None:
                zero += len(active)
                break
            i, j = pr
            # congruence by I + E_ij: diagonal at i becomes 2 a_ij (a_jj = 0)
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            continue
        piv = a[p][p]
        pos += piv > 0
        neg += piv < 0
        active.remove(p)
        for i in active:
            if a[i][p] != 0:
                f = a[i][p] / piv
                for j in active:
                    a[i][j] -= f * a[p][j]
                a[i][p] = Fraction(0)
        for j in active:
            a[p][j] = Fraction(0)
    return pos, zero, neg


def classify(rr: RealRealisation, tol: float = TOL) -> str:
    """``finite`` (positive definite), ``affine`` (PSD, singular), ``indefinite``.

    Non-integer matrices with an eigenvalue within ``tol`` of zero and no
    negative eigenvalue give ``ambiguous``.
    """
    pos, zero, neg = inertia(rr, tol)
    if neg == 0 and zero == 0:
        return FINITE
    if neg > 0:
        return INDEFINITE
    return AFFINE if rr.exact else AMBIGUOUS


def is_finite(rr: RealRealisation, tol: float = TOL) -> bool:
    return classify(rr, tol) == FINITE


def connected_components(rr: RealRealisation):
    """Components of the Coxeter graph (nonzero off-diagonal entries), sorted."""
    n = rr.dimension
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, nbrs in enumerate(rr.adjacency()):
        for t in nbrs:
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def _is_identity(m: np.ndarray, tol: float) -> bool:
    eye = np.eye(m.shape[0], dtype=m.dtype)
    if m.dtype.kind == "i":
        return np.array_equal(m, eye)
    return bool(np.max(np.abs(m - eye)) <= tol)


def coxeter_element(rr: RealRealisation, component=None) -> np.ndarray:
    sub = rr if component is None else rr.restrict(component)
    out = np.eye(sub.dimension, dtype=sub.cartan.dtype)
    for s in range(sub.dimension):
        out = sub.generator_matrix(s) @ out
    return out


def coxeter_number(rr: RealRealisation, component=None, tol: float = TOL, cap: int = COXETER_ORDER_CAP):
    """Order of the Coxeter element of a connected component (``INF`` if infinite)."""
    sub = rr if component is None else rr.restrict(component)
    if len(connected_components(sub)) != 1:
        raise ValueError("coxeter_number needs a connected component")
    if classify(sub, tol) != FINITE:
        return INF
    c = coxeter_element(sub)
    power = c.copy()
    for k in range(1, cap + 1):
        if _is_identity(power, tol):
            return k
        power = power @ c
    raise ConvergenceError(f"Coxeter element order exceeds {cap}")


# ---------------------------------------------------------------------------
# roots and hyperplanes


@dataclass(frozen=True)
class Root:
    coeffs: tuple
    positive: bool = True

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs)


@dataclass
class RootSystem:
    roots: list
    complete: bool
    depth: int

    def __len__(self):
        return len(self.roots)

    @property
    def truncated(self) -> bool:
        return not self.complete


def _root_key(vec: np.ndarray, exact: bool):
    if exact:
        return tuple(int(x) for x in vec)
    return tuple(int(round(x * 1e7)) for x in vec)


def positive_roots(rr: RealRealisation, depth_cap=None, tol: float = TOL) -> RootSystem:
    """Positive roots reachable from the simple ones in at most ``depth_cap`` steps.

    The closure is complete exactly when no new roots appear; for a finite
    system this always happens and the count equals the number of reflections.
    """
    n = rr.dimension
    exact = rr.exact
    dtype = np.int64 if exact else np.float64
    found = []
    buckets = {}

    def add(vec):
        key = _root_key(vec, exact)
        if exact:
            if key in buckets:
                return False
            buckets[key] = [vec]
        else:
            bucket = buckets.setdefault(key, [])
            if any(np.max(np.abs(vec - other)) <= tol for other in bucket):
                return False
            bucket.append(vec)
        found.append(vec)
        return True

    frontier = []
    for s in range(n):
        v = np.zeros(n, dtype=dtype)
        v[s] = 1
        add(v)
        frontier.append(v)
    depth = 0
    while frontier:
        if depth_cap is not None and depth >= depth_cap:
            break
        nxt = []
        for beta in frontier:
            for s in range(n):
                image = rr.reflect(s, beta)
                if np.all(image >= (0 if exact else -tol)) and add(image):
                    nxt.append(image)
        frontier = nxt
        depth += 1
    roots = [Root(tuple(int(x) for x in v) if exact else tuple(float(x) for x in v)) for v in found]
    return RootSystem(roots, complete=not frontier, depth=depth)


@dataclass(frozen=True)
class Hyperplane:
    """Linear functional ``z -> normal . z`` up to positive scaling, normalised."""

    normal: tuple
    exact: bool = False

    def vector(self) -> np.ndarray:
        return np.array(self.normal, dtype=float)

    def equals(self, other: "Hyperplane", tol: float = TOL) -> bool:
        if self.exact and other.exact:
            return self.normal == other.normal
        return bool(np.max(np.abs(self.vector() - other.vector())) <= tol)


def normalise_integer(vec) -> Hyperplane:
    ints = [int(x) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        raise InvariantError("zero functional has no hyperplane")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return Hyperplane(tuple(ints), exact=True)


def normalise_real(vec, tol: float = TOL) -> Hyperplane:
    v = np.asarray(vec, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm <= tol:
        raise InvariantError("zero functional has no hyperplane")
    v = v / norm
    lead = next(x for x in v if abs(x) > tol)
    if lead < 0:
        v = -v
    # clean signed zeros so that output is deterministic
    return Hyperplane(tuple(float(x) + 0.0 for x in v), exact=False)


def root_hyperplane(rr: RealRealisation, root: Root) -> Hyperplane:
    return normalise_integer(root.coeffs) if rr.exact else normalise_real(root.coeffs)


def restrict_functional(unfolded, root_coeffs) -> np.ndarray:
    """Coordinates over ``S`` of ``Z(beta)`` for ``Z`` an ``R``-linear functional."""
    ring = unfolded.source.ring
    q, n = ring.rank, unfolded.source.rank
    coeffs = list(root_coeffs)
    if len(coeffs) != q * n:
        raise ValueError(f"root has {len(coeffs)} coordinates, expected {q * n}")
    dims = fpdim_basis(ring)
    return np.array([sum(dims[b] * coeffs[s * q + b] for b in range(q)) for s in range(n)])


def restrict_hyperplane(unfolded, root_coeffs, tol: float = TOL) -> Hyperplane:
    """Intersect the unfolded hyperplane of ``root`` with ``Hom_R``."""
    coeffs = root_coeffs.coeffs if isinstance(root_coeffs, Root) else root_coeffs
    vec = restrict_functional(unfolded, coeffs)
    if np.max(np.abs(vec)) <= tol:
        raise InvariantError("restricted functional vanished; FPdim positivity violated")
    return normalise_real(vec, tol)


def match_hyperplane(h: Hyperplane, pool, tol: float = TOL):
    for i, other in enumerate(pool):
        if h.equals(other, tol):
            return i
    return None


def verify_hyperplane_theorem(unfolded, tol: float = TOL, depth_cap=None) -> dict:
    """Finite case: restricted unfolded hyperplanes = folded hyperplanes."""
    folded = RealRealisation.folded(unfolded.source)
    full = RealRealisation.from_unfolded(unfolded)
    f_finite, u_finite = is_finite(folded, tol), is_finite(full, tol)
    if f_finite != u_finite:
        raise InvariantError(
            f"finiteness disagrees: folded {classify(folded, tol)}, unfolded {classify(full, tol)}")
    if not f_finite:
        return {"status": "not-applicable", "ok": None, "finite": False,
                "classification": {"folded": classify(folded, tol), "unfolded": classify(full, tol)}}
    froots = positive_roots(folded, depth_cap, tol)
    uroots = positive_roots(full, depth_cap, tol)
    if not (froots.complete and uroots.complete):
        return {"status": "inconclusive", "ok": None, "finite": True,
                "detail": "root closure truncated by depth cap"}
    fplanes = []
    for r in froots.roots:
        h = normalise_real(r.coeffs, tol)
        if match_hyperplane(h, fplanes, tol) is None:
            fplanes.append(h)
    fibers = [0] * len(fplanes)
    fiber_map = [[] for _ in fplanes]
    unmatched = []
    for k, r in enumerate(uroots.roots):
        h = restrict_hyperplane(unfolded, r.coeffs, tol)
        idx = match_hyperplane(h, fplanes, tol)
        if idx is None:
            unmatched.append({"root": list(r.coeffs), "restricted": list(h.normal)})
        else:
            fibers[idx] += 1
            fiber_map[idx].append(k)
    missing = [i for i, c in enumerate(fibers) if c == 0]
    ok = not unmatched and not missing
    return {
        "status": "pass" if ok else "fail",
        "ok": ok,
        "finite": True,
        "folded": len(fplanes),
        "unfolded": len(uroots.roots),
        "fibers": fibers,
        "folded_hyperplanes": [list(h.normal) for h in fplanes],
        "unfolded_roots": [list(r.coeffs) for r in uroots.roots],
        "fiber_map": fiber_map,
        "unmatched": unmatched,
        "missing": missing,
    }


# ---------------------------------------------------------------------------
# chamber orbits


@dataclass
class ChamberOrbit:
    """Distinct chambers ``w C`` for words up to ``bound``.

    ``matrices[k]`` maps functional coordinates ``z`` of ``C`` to those of
    ``w C``; its columns are the extreme rays of the chamber.
    """

    words: list
    matrices: list
    bound: int
    complete: bool = False

    def __len__(self):
        return len(self.words)


def chamber_orbit(rr: RealRealisation, length_bound: int, tol: float = TOL) -> ChamberOrbit:
    if not 0 <= length_bound <= MAX_LENGTH_BOUND:
        raise ValueError(f"length bound must be in [0, {MAX_LENGTH_BOUND}]")
    gens = [rr.generator_matrix(s) for s in range(rr.dimension)]
    exact = rr.exact

    class _Key:
        # bucket on a coarse rounding, then compare within tolerance for reals
        __slots__ = ("m", "h")

        def __init__(self, m):
            self.m = m
            self.h = hash(m.tobytes() if exact else np.rint(m * 1e6).astype(np.int64).tobytes())

        def __hash__(self):
            return self.h

        def __eq__(self, other):
            if exact:
                return np.array_equal(self.m, other.m)
            return bool(np.max(np.abs(self.m - other.m)) <= tol)

    ident = np.eye(rr.dimension, dtype=rr.cartan.dtype)
    enum = enumerate_group(gens, lambda m, g: m @ g, _Key, ident,
                           cap=10 ** 6, max_length=length_bound)
    return ChamberOrbit([list(w) for w in enum.words], enum.elements, length_bound, enum.complete)


def hyperplane_meets_orbit(orbit: ChamberOrbit, h: Hyperplane, tol: float = TOL) -> dict:
    """Semi-decide whether ``h`` meets the union of the enumerated open chambers.

    ``yes`` with a witness if some chamber straddles ``h``, an interior sample
    vanishes on it, or interior samples of two chambers lie on opposite sides
    (the segment between them stays in the convex Tits cone).  Otherwise the
    answer is ``not-up-to-bound``.
    """
    normal = h.vector()
    ones = np.ones(len(normal))
    samples = []
    pos_witness = neg_witness = None
    for word, m in zip(orbit.words, orbit.matrices):
        rays = normal @ m
        sample = float(rays @ ones)
        samples.append(sample)
        if rays.max() > tol and rays.min() < -tol:
            return {"outcome": "yes", "witness": {"kind": "straddles", "word": word}}
        if abs(sample) <= tol:
            return {"outcome": "yes", "witness": {"kind": "vanishes", "word": word}}
        if sample > 0 and pos_witness is None:
            pos_witness = word
        if sample < 0 and neg_witness is None:
            neg_witness = word
        if pos_witness is not None and neg_witness is not None:
            return {"outcome": "yes",
                    "witness": {"kind": "separates", "positive": pos_witness, "negative": neg_witness}}
    return {"outcome": "not-up-to-bound", "bound": orbit.bound, "chambers": len(orbit.words),
            "all_samples_positive": all(x > tol for x in samples),
            "all_samples_negative": all(x < -tol for x in samples),
            "min_sample": min(samples), "max_sample": max(samples)}
