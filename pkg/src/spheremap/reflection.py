"""Reflection matrices of rational sphere maps.

For H = P/Q of degree d, each target component contributes
W_j = sum_k conj(P_j^k) ||z||^(2(d-k)); every term has antiholomorphic degree
exactly d, so W_j = sum_alpha c_alpha(z) zbar^alpha over |alpha| = d.  Row
alpha of the matrix is c_alpha / a_alpha where a_alpha is the coefficient of
the homogeneous map, making X . Wbar-pairing equal (V_H X) . conj(H_n^d) as an
exact polynomial identity.  V = Q V_H.
"""

from __future__ import annotations

from .scalars import ComplexRadical
from .polys import (
    BiPoly,
    PolyMatrix,
    homogenize_on_sphere,
    vanishes_on_sphere,
)
from .maps import SphereMap, homogeneous_map, multiindices, multinomial, K
from .scalars import RadicalReal
from . import linalg


class ReflectionMatrix:
    """The K(n,d) x m matrices V_H and V = Q V_H of a sphere map."""

    __slots__ = ("map", "d", "basis", "basis_coeffs", "vh", "v")

    def __init__(self, map_: SphereMap, d: int, basis, basis_coeffs, vh: PolyMatrix):
        self.map = map_
        self.d = d
        self.basis = basis
        self.basis_coeffs = basis_coeffs
        self.vh = vh
        q = map_.denominator
        self.v = PolyMatrix([[q * e for e in row] for row in vh.rows])

    @property
    def shape(self) -> tuple[int, int]:
        return self.vh.shape

    def homogeneous_reference(self) -> SphereMap:
        return homogeneous_map(self.map.n, self.d)

    def to_json(self) -> dict:
        return {
            "map": self.map.name,
            "degree": self.d,
            "rows": [list(alpha) for alpha in self.basis],
            "vh": self.vh.to_json(),
            "v": self.v.to_json(),
        }


def _homogeneous_parts(p: BiPoly) -> dict[int, BiPoly]:
    parts: dict[int, BiPoly] = {}
    for (h, a), c in p.terms.items():
        parts.setdefault(sum(h), BiPoly(p.n)).terms[(h, a)] = c
    return parts


def build_reflection(h: SphereMap) -> ReflectionMatrix:
    """Construct V_H and V, re-verifying the defining identity exactly."""
    n, m, d = h.n, h.m, h.degree
    basis = multiindices(n, d)
    index_of = {alpha: i for i, alpha in enumerate(basis)}
    coeffs = [ComplexRadical(RadicalReal.sqrt(multinomial(d, a))) for a in basis]
    zero_anti = (0,) * n
    rows = [[BiPoly(n) for _ in range(m)] for _ in basis]
    for j, p in enumerate(h.numerator):
        w = BiPoly(n)
        for k, part in _homogeneous_parts(p).items():
            w = w + part.conjugate() * _norm_power(n, d - k)
        for (holo, anti), c in w.terms.items():
            i = index_of.get(anti)
            if i is None:
                raise ArithmeticError("unexpected antiholomorphic degree")
            entry = BiPoly(n, {(holo, zero_anti): c})
            rows[i][j] = rows[i][j] + entry
    for i, alpha in enumerate(basis):
        inv = coeffs[i].inverse()
        rows[i] = [e.scale(inv) for e in rows[i]]
    vh = PolyMatrix(rows)
    r = ReflectionMatrix(h, d, basis, coeffs, vh)
    if not _defining_identity_holds(r):
        raise ArithmeticError("reflection matrix failed its defining identity")
    return r


def _norm_power(n: int, k: int) -> BiPoly:
    from .polys import norm_squared_poly

    out = BiPoly.constant(n, 1)
    base = norm_squared_poly(n)
    for _ in range(k):
        out = out * base
    return out


def _defining_identity_holds(r: ReflectionMatrix) -> bool:
    """X . W == (V_H X) . conj(H_n^d) as exact polynomials, for X = e_j."""
    h = r.map
    n, d = h.n, r.d
    zero_anti = (0,) * n
    for j, p in enumerate(h.numerator):
        w = BiPoly(n)
        for k, part in _homogeneous_parts(p).items():
            w = w + part.conjugate() * _norm_power(n, d - k)
        rhs = BiPoly(n)
        for i, alpha in enumerate(r.basis):
            conj_mono = BiPoly(n, {(zero_anti, alpha): r.basis_coeffs[i].conjugate()})
            rhs = rhs + r.vh.rows[i][j] * conj_mono
        if w != rhs:
            return False
    return True


def verify_fundamental_identity(r: ReflectionMatrix) -> bool:
    """|Q|^2 (e_j . conj(H)) - (V e_j) . conj(H_n^d) vanishes on the sphere."""
    h = r.map
    n = h.n
    zero_anti = (0,) * n
    q = h.denominator
    for j, p in enumerate(h.numerator):
        lhs = q * p.conjugate()
        rhs = BiPoly(n)
        for i, alpha in enumerate(r.basis):
            conj_mono = BiPoly(n, {(zero_anti, alpha): r.basis_coeffs[i].conjugate()})
            rhs = rhs + r.v.rows[i][j] * conj_mono
        if not vanishes_on_sphere(lhs - rhs):
            return False
    return True


def map_identities(r: ReflectionMatrix) -> tuple[bool, bool]:
    """(V_H P == H_n^d exactly, each comp of tVbar_H H_n^d - P vanishes on sphere).

    Only defined for polynomial maps.
    """
    h = r.map
    if not h.is_polynomial():
        raise ValueError("map identities require a polynomial map")
    ref = r.homogeneous_reference()
    image = r.vh.apply(list(h.numerator))
    first = all(a == b for a, b in zip(image, ref.numerator))
    back = r.vh.transpose_conjugate_apply(list(ref.numerator))
    second = all(
        vanishes_on_sphere(a - b) for a, b in zip(back, h.numerator)
    )
    return first, second


def transpose_conjugate_apply(r: ReflectionMatrix, y) -> tuple[BiPoly, ...]:
    """The m-vector (t Vbar_H) y; entries generally mix z and zbar."""
    return r.vh.transpose_conjugate_apply(list(y))


def holomorphic_extension_on_sphere(vec, degree_bound: int):
    """Holomorphic polynomial vector agreeing with vec on the sphere, or None.

    Works per component and per Fourier degree: the degree-s piece of a
    holomorphic candidate can only match the Fourier-degree-s part of the
    input, so each part yields a small independent linear system.
    """
    out = []
    for comp in vec:
        ext = _extend_component(comp, degree_bound)
        if ext is None:
            return None
        out.append(ext)
    return tuple(out)


def _extend_component(f: BiPoly, degree_bound: int):
    n = f.n
    result = BiPoly(n)
    for s, part in sorted(f.fourier_split().items()):
        if s < 0 or s > degree_bound:
            if not vanishes_on_sphere(part):
                return None
            continue
        fitted = _fit_holomorphic_piece(part, s)
        if fitted is None:
            return None
        result = result + fitted
    return result


def _fit_holomorphic_piece(part: BiPoly, s: int):
    """Solve part == (degree-s holomorphic piece) on the sphere, if possible."""
    n = part.n
    target = homogenize_on_sphere(part)
    # every term of a Fourier-degree-s part has holo degree >= s
    a_top = max((sum(h) for h, _ in target.terms), default=s)
    monos = multiindices(n, s)
    cols = [BiPoly.monomial(n, g) * _norm_power(n, a_top - s) for g in monos]
    keys = set(target.terms)
    for c in cols:
        keys.update(c.terms)
    keys = sorted(keys, reverse=True)
    rows = []
    rhs = []
    for key in keys:
        rows.append([c.terms.get(key, ComplexRadical()) for c in cols])
        rhs.append(target.terms.get(key, ComplexRadical()))
    sol = _complex_solve(rows, rhs)
    if sol is None:
        return None
    out = BiPoly(n)
    for gamma, x in zip(monos, sol):
        out = out + BiPoly.monomial(n, gamma, None, x)
    return out


def _complex_solve(rows, rhs):
    """Solve an overdetermined complex-linear system exactly; None if inconsistent."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [rows[i][:] + [rhs[i]] for i in range(m)]
    prow = 0
    pivots = []
    for c in range(ncols):
        pr = next((r for r in range(prow, m) if not aug[r][c].is_zero()), None)
        if pr is None:
            continue
        aug[prow], aug[pr] = aug[pr], aug[prow]
        inv = aug[prow][c].inverse()
        aug[prow] = [x * inv for x in aug[prow]]
        for rr in range(m):
            if rr != prow and not aug[rr][c].is_zero():
                fac = aug[rr][c]
                aug[rr] = [x - fac * y for x, y in zip(aug[rr], aug[prow])]
        pivots.append((prow, c))
        prow += 1
    for rr in range(prow, m):
        if not aug[rr][ncols].is_zero():
            return None
    sol = [ComplexRadical() for _ in range(ncols)]
    for rr, c in pivots:
        sol[c] = aug[rr][ncols]
    return sol
