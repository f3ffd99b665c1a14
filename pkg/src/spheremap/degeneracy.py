"""Degeneracy classification via the reflection matrix and via CR jets.

The pointwise degeneracy of a sphere map equals the kernel dimension of its
reflection matrix V at the point; the generic degeneracy is m minus the rank
of V over the polynomial ring.  The jet route recomputes the same numbers
from spans of iterated CR derivatives of conj(H) and serves as an
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .scalars import ComplexRadical
from .polys import (
    BiPoly,
    PolyMatrix,
    on_unit_sphere,
    point_from_parameters,
    sphere_points,
    vanishes_on_sphere,
)
from .maps import K, SphereMap
from .reflection import ReflectionMatrix
from .linalg import (
    Span,
    _strip_monomial_content,
    bareiss_echelon,
    field_kernel,
    poly_kernel,
)


class CertificationError(RuntimeError):
    """Raised when a generic-rank witness search exhausts its budget."""


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


class VectorField:
    """First-order derivation sum a_j d/dz_j + b_j d/dzbar_j with BiPoly a, b."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != 2 * n:
            raise ValueError("need 2n coefficient polynomials")
        for c in self.coeffs:
            if c.n != n:
                raise ValueError("coefficient variable count mismatch")

    @classmethod
    def build(cls, n: int, holo: dict[int, BiPoly] | None = None,
              anti: dict[int, BiPoly] | None = None) -> VectorField:
        coeffs = [BiPoly(n) for _ in range(2 * n)]
        for j, p in (holo or {}).items():
            coeffs[j] = p
        for j, p in (anti or {}).items():
            coeffs[n + j] = p
        return cls(n, coeffs)

    def apply(self, f: BiPoly) -> BiPoly:
        out = BiPoly(self.n)
        for j in range(self.n):
            if not self.coeffs[j].is_zero():
                out = out + self.coeffs[j] * f.diff(j)
            if not self.coeffs[self.n + j].is_zero():
                out = out + self.coeffs[self.n + j] * f.diff(j, anti=True)
        return out

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: VectorField) -> VectorField:
        return VectorField(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> VectorField:
        return VectorField(self.n, [-a for a in self.coeffs])

    def scale(self, c) -> VectorField:
        return VectorField(self.n, [a.scale(c) for a in self.coeffs])

    def conjugate(self) -> VectorField:
        # conj swaps d/dz_j with d/dzbar_j and conjugates coefficients
        return VectorField(
            self.n,
            [self.coeffs[self.n + j].conjugate() for j in range(self.n)]
            + [self.coeffs[j].conjugate() for j in range(self.n)],
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        names = [f"d/dz{j+1}" for j in range(self.n)] + [
            f"d/dzb{j+1}" for j in range(self.n)
        ]
        bits = [f"({c})*{nm}" for c, nm in zip(self.coeffs, names) if not c.is_zero()]
        return " + ".join(bits) if bits else "0"


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y] = X(Y) - Y(X) acting on coefficients."""
    if x.n != y.n:
        raise ValueError("variable count mismatch")
    return VectorField(
        x.n,
        [x.apply(cy) - y.apply(cx) for cx, cy in zip(x.coeffs, y.coeffs)],
    )


def cr_field_bar(n: int, i: int, j: int) -> VectorField:
    """Lbar_ij = z_i d/dzbar_j - z_j d/dzbar_i (for n = 2 this is the field Lbar)."""
    return VectorField.build(
        n, anti={j: BiPoly.variable(n, i), i: -BiPoly.variable(n, j)}
    )


def cr_field(n: int, i: int, j: int) -> VectorField:
    """L_ij, the conjugate of Lbar_ij."""
    return cr_field_bar(n, i, j).conjugate()


def t_field(n: int, k: int, j: int) -> VectorField:
    """T_kj = -zbar_k d/dzbar_j + z_j d/dz_k."""
    return VectorField.build(
        n,
        holo={k: BiPoly.variable(n, j)},
        anti={j: -BiPoly.anti_variable(n, k)},
    )


def s_field(n: int, i: int, j: int) -> VectorField:
    """S_ij = -z_i d/dz_i - z_j d/dz_j + zbar_i d/dzbar_i + zbar_j d/dzbar_j."""
    return VectorField.build(
        n,
        holo={i: -BiPoly.variable(n, i), j: -BiPoly.variable(n, j)},
        anti={i: BiPoly.anti_variable(n, i), j: BiPoly.anti_variable(n, j)},
    )


def s_field_2d() -> VectorField:
    """S = z d/dz + w d/dw - zbar d/dzbar - wbar d/dwbar on the 3-sphere."""
    return VectorField.build(
        2,
        holo={0: BiPoly.variable(2, 0), 1: BiPoly.variable(2, 1)},
        anti={0: -BiPoly.anti_variable(2, 0), 1: -BiPoly.anti_variable(2, 1)},
    )


def cr_basis_bar(n: int) -> list[VectorField]:
    """Generating CR fields Lbar_ij, i < j; a single field for n = 2."""
    return [cr_field_bar(n, i, j) for i in range(n) for j in range(i + 1, n)]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class DegeneracyReport:
    point: tuple | str
    kernel_dim: int
    rank: int
    finite_nondegenerate: bool
    method: str
    jet_order: int | None = None
    conclusive: bool = True

    def to_json(self) -> dict:
        pt = self.point if isinstance(self.point, str) else [str(c) for c in self.point]
        return {
            "point": pt,
            "kernel_dim": self.kernel_dim,
            "rank": self.rank,
            "finite_nondegenerate": self.finite_nondegenerate,
            "jet_order": self.jet_order,
            "method": self.method,
            "conclusive": self.conclusive,
        }


@dataclass
class Stratum:
    degeneracy: int
    minor_size: int
    equations: list[BiPoly]
    witnesses: list[tuple]

    def to_json(self) -> dict:
        return {
            "degeneracy": self.degeneracy,
            "minor_size": self.minor_size,
            "equations": [e.to_json() for e in self.equations],
            "witnesses": [[str(c) for c in p] for p in self.witnesses],
        }


@dataclass
class StratificationReport:
    generic_degeneracy: int
    generic_rank: int
    strata: list[Stratum] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "generic_degeneracy": self.generic_degeneracy,
            "generic_rank": self.generic_rank,
            "strata": [s.to_json() for s in self.strata],
        }


@dataclass
class Classification:
    holomorphically_nondegenerate: bool
    generic_degeneracy: int
    generic_rank: int
    size_shortcut: bool  # K(n,d) < m forces degeneracy without elimination

    def to_json(self) -> dict:
        return {
            "holomorphically_nondegenerate": self.holomorphically_nondegenerate,
            "generic_degeneracy": self.generic_degeneracy,
            "generic_rank": self.generic_rank,
            "size_shortcut": self.size_shortcut,
        }


# ---------------------------------------------------------------------------
# reflection-matrix route
# ---------------------------------------------------------------------------


def kernel_at_point(r: ReflectionMatrix, point) -> DegeneracyReport:
    """Exact kernel dimension of V at a sphere point."""
    if not on_unit_sphere(point):
        raise ValueError("point is not exactly on the unit sphere")
    rows = r.v.evaluate(point)
    m = r.map.m
    rank, _ = field_kernel(rows, m, ComplexRadical())
    s = m - rank
    return DegeneracyReport(
        point=tuple(point),
        kernel_dim=s,
        rank=rank,
        finite_nondegenerate=(s == 0),
        method="reflection",
    )


def generic_rank(r: ReflectionMatrix, witness_budget: int = 40, seed: int = 0) -> int:
    """Rank of V over the polynomial ring, certified by a sphere-point witness."""
    rows = [list(row) for row in r.v.rows]
    rank = len(bareiss_echelon(rows)[1])
    for pt in sphere_points(r.map.n, witness_budget, seed=seed):
        rep = kernel_at_point(r, pt)
        if rep.rank == rank:
            return rank
    raise CertificationError(
        f"no rational sphere point of rank {rank} found in budget {witness_budget}"
    )


def classify_map(h: SphereMap, reflection: ReflectionMatrix | None = None) -> Classification:
    """Holomorphic (non)degeneracy and generic degeneracy of a sphere map."""
    from .reflection import build_reflection

    if K(h.n, h.degree) < h.m:
        shortcut = True
    else:
        shortcut = False
    r = reflection if reflection is not None else build_reflection(h)
    rank = generic_rank(r)
    s = h.m - rank
    return Classification(
        holomorphically_nondegenerate=(s == 0),
        generic_degeneracy=s,
        generic_rank=rank,
        size_shortcut=shortcut,
    )


def degeneracy_witness(r: ReflectionMatrix):
    """Nonzero holomorphic polynomial Y with V Y = 0 identically, or None.

    The returned vector is verified: Y . conj(P) vanishes on the sphere.
    """
    rows = [list(row) for row in r.v.rows]
    rank, basis = poly_kernel(rows)
    if rank == r.map.m:
        return None
    y = basis[0]
    pairing = BiPoly(r.map.n)
    for a, b in zip(y, r.map.numerator):
        pairing = pairing + a * b.conjugate()
    if not vanishes_on_sphere(pairing):
        raise ArithmeticError("degeneracy witness failed its sphere identity")
    return y


# ---------------------------------------------------------------------------
# jet route
# ---------------------------------------------------------------------------


def jet_degeneracy(h: SphereMap, point, max_order: int | None = None) -> DegeneracyReport:
    """Degeneracy via spans of iterated CR derivatives of conj(H) at a point.

    Rational maps are handled by tracking numerators over powers of conj(Q);
    scaling individual vectors does not change spans.  The report is
    conclusive when the span fills C^m or every next-level derivative is
    identically zero; hitting the order cap leaves it inconclusive.
    """
    if not on_unit_sphere(point):
        raise ValueError("point is not exactly on the unit sphere")
    n, m = h.n, h.m
    if max_order is None:
        max_order = 2 * (h.degree + m)
    qbar = h.denominator.conjugate()
    if qbar.evaluate(point).is_zero():
        raise ZeroDivisionError("denominator vanishes at the point")
    gens = cr_basis_bar(n)
    ngens = len(gens)

    span = Span()
    dims: list[int] = []

    def add_vector(values) -> None:
        vec = {i: v for i, v in enumerate(values) if not v.is_zero()}
        if vec:
            span.add(vec)

    # level 0: conj(H) itself (numerator conj(P), denominator qbar)
    level = {(): [p.conjugate() for p in h.numerator]}
    add_vector([p.evaluate(point) for p in level[()]])
    dims.append(span.dim)
    k = 0
    conclusive = span.dim == m
    while not conclusive and k < max_order:
        k += 1
        e = k  # current numerators sit over qbar**e
        new_level: dict[tuple, list[BiPoly]] = {}
        for key, vec in level.items():
            start = key[-1] if key else 0
            for g in range(start, ngens):
                nkey = key + (g,)
                gen = gens[g]
                lq = gen.apply(qbar)
                out = []
                for comp in vec:
                    num = gen.apply(comp) * qbar - comp.scale(e) * lq
                    out.append(num)
                new_level[nkey] = out
        all_zero = True
        for vec in new_level.values():
            if any(not c.is_zero() for c in vec):
                all_zero = False
            add_vector([c.evaluate(point) for c in vec])
        dims.append(span.dim)
        level = new_level
        if span.dim == m or all_zero:
            conclusive = True
    final_dim = dims[-1]
    k0 = dims.index(final_dim)
    s = m - final_dim
    return DegeneracyReport(
        point=tuple(point),
        kernel_dim=s,
        rank=final_dim,
        finite_nondegenerate=(s == 0),
        method="jet",
        jet_order=k0,
        conclusive=conclusive,
    )


# ---------------------------------------------------------------------------
# stratification and the X-variety
# ---------------------------------------------------------------------------


def _poly_det(rows) -> BiPoly:
    """Determinant of a square BiPoly matrix by fraction-free elimination."""
    k = len(rows)
    n = rows[0][0].n
    ech, pivots = bareiss_echelon([list(r) for r in rows])
    if len(pivots) < k:
        return BiPoly(n)
    # Bareiss: the last pivot is the determinant up to row-swap sign; the sign
    # is irrelevant for zero-locus purposes, so normalize is not attempted.
    r, c = pivots[-1]
    return ech[r][c]


def _candidate_points(n: int, per_mode: int, seed: int):
    """Generic sphere points, axis points, and points on coordinate subspheres."""
    pts = list(sphere_points(n, per_mode, seed=seed))
    for j in range(n):
        coords = [ComplexRadical.from_rational(1 if i == j else 0) for i in range(n)]
        pts.append(tuple(coords))
    if n >= 2:
        for j in range(n):
            for q in sphere_points(n - 1, per_mode, seed=seed + 17 + j):
                coords = list(q)
                coords.insert(j, ComplexRadical())
                pts.append(tuple(coords))
    return pts


def stratify(r: ReflectionMatrix, seed: int = 0, per_mode: int = 6) -> StratificationReport:
    """Generic degeneracy plus minor equations and witnesses for each stratum."""
    m = r.map.m
    rank = generic_rank(r, seed=seed)
    s_generic = m - rank
    report = StratificationReport(generic_degeneracy=s_generic, generic_rank=rank)
    # witness search over generic and subsphere points
    seen: dict[int, list[tuple]] = {}
    for pt in _candidate_points(r.map.n, per_mode, seed):
        try:
            rep = kernel_at_point(r, pt)
        except ZeroDivisionError:
            continue
        if rep.kernel_dim > s_generic:
            seen.setdefault(rep.kernel_dim, [])
            if len(seen[rep.kernel_dim]) < 3:
                if pt not in seen[rep.kernel_dim]:
                    seen[rep.kernel_dim].append(pt)
    for s_val in sorted(seen):
        drop_rank = m - s_val  # rank at the stratum
        size = drop_rank + 1  # minors of this size all vanish on the stratum
        eqs = _minor_equations(r, size)
        report.strata.append(
            Stratum(
                degeneracy=s_val,
                minor_size=size,
                equations=eqs,
                witnesses=seen[s_val],
            )
        )
    return report


def _minor_equations(r: ReflectionMatrix, size: int, cap: int = 600) -> list[BiPoly]:
    rows = r.v.rows
    nr, nc = r.v.shape
    if size > min(nr, nc):
        return []
    eqs = []
    count = 0
    seen = set()
    for ri in combinations(range(nr), size):
        for ci in combinations(range(nc), size):
            count += 1
            if count > cap:
                return eqs
            sub = [[rows[i][j] for j in ci] for i in ri]
            det = _poly_det(sub)
            if det.is_zero():
                continue
            lead = det.terms[max(det.terms)]
            det = det.scale(lead.inverse())
            key = frozenset(det.terms)
            if key not in seen:
                seen.add(key)
                eqs.append(det)
    return eqs


@dataclass
class XFiber:
    base: tuple
    kernel_basis: list
    dimension: int

    def to_json(self) -> dict:
        return {
            "base": [str(c) for c in self.base],
            "dimension": self.dimension,
            "kernel_basis": [[str(c) for c in v] for v in self.kernel_basis],
        }


def x_fiber(r: ReflectionMatrix, point) -> XFiber:
    """The fiber {H(z)} + ker V(z) of the X-variety over a point z != 0."""
    if all(ComplexRadical._coerce(c).is_zero() for c in point):
        raise ValueError("fibers are defined over nonzero points only")
    qv = r.map.denominator.evaluate(point)
    if qv.is_zero():
        raise ZeroDivisionError("point is a pole of the map")
    base = r.map.evaluate(point)
    rows = r.v.evaluate(point)
    rank, basis = field_kernel(rows, r.map.m, ComplexRadical())
    return XFiber(base=base, kernel_basis=basis, dimension=r.map.m - rank)


@dataclass
class XVarietyVerdict:
    kind: str  # "graph" | "affine_bundle" | "exceptional" | "inconclusive"
    generic_degeneracy: int
    exceptional: StratificationReport | None = None
    certified: bool = False

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "generic_degeneracy": self.generic_degeneracy,
            "certified": self.certified,
        }
        if self.exceptional is not None:
            out["exceptional"] = self.exceptional.to_json()
        return out


def _constant_rank_certificate(r: ReflectionMatrix, rank: int, cap: int = 800) -> bool:
    """Sufficient check that V has rank >= its generic rank on the whole sphere.

    Looks for minors of size = rank that are single monomials; if some minor
    is a nonzero constant, or every variable carries a pure-power minor, the
    minors cannot all vanish at a sphere point.
    """
    nr, nc = r.v.shape
    if rank > min(nr, nc) or rank == 0:
        return rank == 0
    rows = r.v.rows
    covered: set[int] = set()
    count = 0
    for ri in combinations(range(nr), rank):
        for ci in combinations(range(nc), rank):
            count += 1
            if count > cap:
                return False
            sub = [[rows[i][j] for j in ci] for i in ri]
            det = _poly_det(sub)
            if det.is_zero() or len(det.terms) != 1:
                continue
            (holo, anti), _ = next(iter(det.terms.items()))
            support = [j for j, e in enumerate(holo) if e]
            if not support:
                return True  # constant nonzero minor
            if len(support) == 1:
                covered.add(support[0])
                if len(covered) == r.map.n:
                    return True
    return False


def x_classify(r: ReflectionMatrix, seed: int = 0) -> XVarietyVerdict:
    """Graph / affine bundle / exceptional-fiber verdict for the X-variety."""
    strat = stratify(r, seed=seed)
    s = strat.generic_degeneracy
    if strat.strata:
        return XVarietyVerdict(
            kind="exceptional",
            generic_degeneracy=s,
            exceptional=strat,
            certified=True,
        )
    if _constant_rank_certificate(r, strat.generic_rank):
        kind = "graph" if s == 0 else "affine_bundle"
        return XVarietyVerdict(kind=kind, generic_degeneracy=s, certified=True)
    return XVarietyVerdict(kind="inconclusive", generic_degeneracy=s, certified=False)
