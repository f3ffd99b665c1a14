"""Rational sphere maps and the constructions that produce them.

A sphere map is stored as a numerator vector P of holomorphic polynomials
over a single holomorphic denominator Q; the defining property is that
||P||^2 - |Q|^2 vanishes on the unit sphere.  Constructors cover the
homogeneous maps, the group-invariant family, tensoring on a subspace,
juxtaposition, unitary images and the one-parameter family that deforms the
odd-degree homogeneous map.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .scalars import ComplexRadical, RadicalReal, Rational
from .polys import (
    BiPoly,
    hermitian_pairing,
    poly_vector,
    vanishes_on_sphere,
)


def multiindices(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length n and weight d, lex-descending."""
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in multiindices(n - 1, d - first):
            out.append((first,) + rest)
    return out


def K(n: int, d: int) -> int:
    """Number of degree-d monomials in n variables."""
    return comb(n + d - 1, d)


def multinomial(d: int, alpha) -> int:
    v = factorial(d)
    for a in alpha:
        v //= factorial(a)
    return v


class SphereMap:
    """Rational map P/Q from C^n to C^m, nominally sending S^(2n-1) to S^(2m-1)."""

    __slots__ = ("n", "m", "numerator", "denominator", "name")

    def __init__(self, numerator, denominator: BiPoly | None = None, name: str = ""):
        self.numerator = poly_vector(numerator)
        if not self.numerator:
            raise ValueError("sphere map needs at least one component")
        self.n = self.numerator[0].n
        self.m = len(self.numerator)
        q = denominator if denominator is not None else BiPoly.constant(self.n, 1)
        if q.n != self.n:
            raise ValueError("denominator variable count mismatch")
        for p in self.numerator:
            if not p.is_holomorphic():
                raise ValueError("numerator components must be holomorphic")
        if not q.is_holomorphic():
            raise ValueError("denominator must be holomorphic")
        if q.is_zero():
            raise ValueError("denominator must be nonzero")
        self.denominator = q
        self.name = name

    # basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return max(max(p.holo_degree() for p in self.numerator),
                   self.denominator.holo_degree())

    def is_polynomial(self) -> bool:
        return self.denominator == BiPoly.constant(self.n, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SphereMap):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __repr__(self) -> str:
        tag = self.name or f"map C^{self.n}->C^{self.m}"
        return f"SphereMap({tag}, degree {self.degree})"

    # analysis ------------------------------------------------------------

    def validate(self) -> bool:
        """True iff ||P||^2 - |Q|^2 vanishes on the unit sphere."""
        qq = self.denominator * self.denominator.conjugate()
        return vanishes_on_sphere(
            hermitian_pairing(self.numerator, self.numerator) - qq
        )

    def denominator_certificate(self) -> bool:
        """Certify Q != 0 on the closed unit ball.

        Uses |Q(z) - Q(0)| <= sum of coefficient bounds on the sphere; true
        when that sum is strictly below |Q(0)|.  Constant denominators pass
        immediately.
        """
        q = self.denominator
        const = ComplexRadical()
        tail = Fraction(0)
        zero = (0,) * self.n
        for (h, a), c in q.terms.items():
            if h == zero and a == zero:
                const = c
            else:
                tail += _abs_upper_bound(c)
        if const.is_zero():
            return False
        lo, _ = const.abs_squared().interval(64)
        return lo > tail * tail

    def evaluate(self, point) -> tuple[ComplexRadical, ...]:
        qv = self.denominator.evaluate(point)
        if qv.is_zero():
            raise ZeroDivisionError("denominator vanishes at the point")
        inv = qv.inverse()
        return tuple(p.evaluate(point) * inv for p in self.numerator)

    def component_coefficients(self) -> list[list[ComplexRadical]]:
        return [[c for _, c in p.sorted_terms()] for p in self.numerator]

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "degree": self.degree,
            "name": self.name,
            "numerator": [p.to_json() for p in self.numerator],
            "denominator": self.denominator.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> SphereMap:
        n = data["n"]
        num = [BiPoly.from_json(n, t) for t in data["numerator"]]
        den = BiPoly.from_json(n, data["denominator"])
        return cls(num, den, data.get("name", ""))


def _abs_upper_bound(c: ComplexRadical) -> Fraction:
    out = Fraction(0)
    for part in (c.re, c.im):
        lo, hi = part.interval(32)
        out += max(abs(lo), abs(hi))
    return out


def validate_sphere_map(h: SphereMap) -> bool:
    return h.validate()


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def monomial_map(n: int, spec, name: str = "") -> SphereMap:
    """Build a polynomial map from (coefficient, exponent-vector) pairs."""
    comps = [BiPoly.monomial(n, exps, None, coeff) for coeff, exps in spec]
    return SphereMap(comps, None, name)


def homogeneous_map(n: int, d: int) -> SphereMap:
    """All degree-d monomials with square-root-of-multinomial coefficients."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    comps = []
    for alpha in multiindices(n, d):
        coeff = RadicalReal.sqrt(multinomial(d, alpha))
        comps.append(BiPoly.monomial(n, alpha, None, coeff))
    h = SphereMap(comps, None, f"H({n},{d})")
    return h


def group_invariant_map(ell: int) -> SphereMap:
    """The invariant map S^3 -> S^(2l+3) with derived nonnegative coefficients.

    Exponents follow the fixed staircase pattern; the squared coefficients
    solve the linear system obtained from ||G||^2 = 1 on |z|^2 + |w|^2 = 1 by
    substituting |w|^2 = 1 - |z|^2.
    """
    if ell < 0:
        raise ValueError("need ell >= 0")
    exps = [(2 * (ell - k) + 3, k - 1) for k in range(1, ell + 2)]
    exps.append((0, 2 * ell + 1))
    deg = 2 * ell + 1
    ncomp = len(exps)
    # coefficient of x^j in x^a (1-x)^b is (-1)^(j-a) binom(b, j-a)
    rows = []
    for j in range(deg + 1):
        rows.append(
            [
                Fraction((-1) ** (j - a) * comb(b, j - a)) if 0 <= j - a <= b else Fraction(0)
                for a, b in exps
            ]
        )
    rhs = [Fraction(1)] + [Fraction(0)] * deg
    sol = _solve_overdetermined(rows, rhs)
    if sol is None:
        raise ArithmeticError("group-invariant coefficient system is infeasible")
    comps = []
    for (a, b), u in zip(exps, sol):
        if u < 0:
            raise ArithmeticError("negative squared coefficient in invariant map")
        comps.append(BiPoly.monomial(2, (a, b), None, RadicalReal.sqrt(u)))
    return SphereMap(comps, None, f"G({ell})")


def _solve_overdetermined(rows, rhs):
    """Solve a consistent overdetermined rational system with unique solution."""
    m, n = len(rows), len(rows[0])
    a = [rows[i][:] + [rhs[i]] for i in range(m)]
    prow = 0
    pivots = []
    for c in range(n):
        pr = next((r for r in range(prow, m) if a[r][c] != 0), None)
        if pr is None:
            continue
        a[prow], a[pr] = a[pr], a[prow]
        inv = 1 / a[prow][c]
        a[prow] = [x * inv for x in a[prow]]
        for r in range(m):
            if r != prow and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[prow])]
        pivots.append((prow, c))
        prow += 1
    if len(pivots) < n:
        return None  # underdetermined
    for r in range(prow, m):
        if a[r][n] != 0:
            return None  # inconsistent
    sol = [Fraction(0)] * n
    for r, c in pivots:
        sol[c] = a[r][n]
    return sol


class SubspaceSelector:
    """A subspace A of C^m given by coordinate indices or orthonormal data.

    The general form carries exact orthonormal spanning columns for A and for
    its orthocomplement; the coordinate shorthand covers every catalog use.
    """

    def __init__(self, m: int, indices=None, basis=None, complement=None):
        self.m = m
        if indices is not None:
            self.indices = tuple(sorted(indices))
            if any(i < 0 or i >= m for i in self.indices):
                raise ValueError("subspace index out of range")
            self.basis = None
            self.complement = None
        else:
            self.indices = None
            self.basis = [list(col) for col in basis] if basis else []
            self.complement = [list(col) for col in complement] if complement else []
            cols = self.basis + self.complement
            if len(cols) != m:
                raise ValueError("basis plus complement must span C^m")
            for i, u in enumerate(cols):
                for j, v in enumerate(cols):
                    ip = ComplexRadical()
                    for a, b in zip(u, v):
                        ip = ip + a * b.conjugate()
                    want = ComplexRadical.from_rational(1 if i == j else 0)
                    if ip != want:
                        raise ValueError("spanning set is not orthonormal")

    @property
    def dim(self) -> int:
        return len(self.indices) if self.indices is not None else len(self.basis)

    def split(self, vec):
        """Coordinates of vec (list of BiPoly) along A and along A-perp."""
        if self.indices is not None:
            sel = set(self.indices)
            a_part = [vec[i] for i in self.indices]
            b_part = [vec[i] for i in range(self.m) if i not in sel]
            return a_part, b_part
        n = vec[0].n
        def coords(cols):
            out = []
            for col in cols:
                acc = BiPoly(n)
                for comp, u in zip(vec, col):
                    acc = acc + comp.scale(u.conjugate())
                out.append(acc)
            return out
        return coords(self.basis), coords(self.complement)


def tensor_map(h: SphereMap, a: SubspaceSelector, g: SphereMap) -> SphereMap:
    """Tensor h by g on the subspace a of the target of h."""
    if h.n != g.n:
        raise ValueError("tensor factors must share the source dimension")
    if a.m != h.m:
        raise ValueError("subspace lives in the wrong target")
    a_part, b_part = a.split(list(h.numerator))
    comps = []
    for pa in a_part:
        for r in g.numerator:
            comps.append(pa * r)
    for pb in b_part:
        comps.append(pb * g.denominator)
    den = h.denominator * g.denominator
    return SphereMap(comps, den, f"tensor({h.name or '?'},{g.name or '?'})")


def juxtapose(h: SphereMap, g: SphereMap, t) -> SphereMap:
    """Scaled direct sum sqrt(1-t^2) h + t g; always holomorphically degenerate."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if h.n != g.n:
        raise ValueError("juxtaposed maps must share the source dimension")
    c = RadicalReal.sqrt(1 - t * t)
    comps = [p.scale(c) * g.denominator for p in h.numerator]
    comps += [p.scale(t) * h.denominator for p in g.numerator]
    den = h.denominator * g.denominator
    return SphereMap(comps, den, f"juxt({h.name or '?'},{g.name or '?'},{t})")


def juxtaposition_witness(h: SphereMap, g: SphereMap, t) -> tuple[BiPoly, ...]:
    """The holomorphic vector -t h + sqrt(1-t^2) g annihilating the juxtaposition."""
    t = Fraction(t)
    c = RadicalReal.sqrt(1 - t * t)
    vec = [p.scale(-t) * g.denominator for p in h.numerator]
    vec += [p.scale(c) * h.denominator for p in g.numerator]
    return poly_vector(vec)


def zero_pad(h: SphereMap, extra: int) -> SphereMap:
    """Append zero components; the result is holomorphically degenerate."""
    comps = list(h.numerator) + [BiPoly(h.n) for _ in range(extra)]
    return SphereMap(comps, h.denominator, f"pad({h.name or '?'},{extra})")


def sphere_automorphism_numerators(s) -> tuple[BiPoly, BiPoly, BiPoly]:
    """Numerators (N1, N2) and denominator Q of the S^3 automorphism T_s."""
    s = Fraction(s)
    u = 1 - s
    z = BiPoly.variable(2, 0)
    w = BiPoly.variable(2, 1)
    one = BiPoly.constant(2, 1)
    n1 = z.scale(1 + u * u) + one.scale(u * u - 1)
    n2 = w.scale(2 * u)
    q = z.scale(u * u - 1) + one.scale(u * u + 1)
    return n1, n2, q


def family_map(k: int, s) -> SphereMap:
    """The rational family F^k_s deforming the degree-(2k+1) homogeneous map.

    Components away from slots k, k+1 are the homogeneous monomials; those two
    slots carry z^k w^k times the automorphism T_s.  s = 1 is rejected (T_s
    degenerates there).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    s = Fraction(s)
    if s == 1:
        raise ValueError("s = 1 does not give an automorphism")
    d = 2 * k + 1
    n1, n2, q = sphere_automorphism_numerators(s)
    comps = []
    for ell in range(d + 1):
        c = RadicalReal.sqrt(comb(d, ell))
        mono = BiPoly.monomial(2, (d - ell, ell), None, c)
        if ell == k:
            comps.append(BiPoly.monomial(2, (k, k), None, c) * n1)
        elif ell == k + 1:
            comps.append(BiPoly.monomial(2, (k, k), None, c) * n2)
        else:
            comps.append(mono * q)
    # constant denominator (s = 0) normalizes away
    if q.holo_degree() == 0:
        cq = q.terms[((0, 0), (0, 0))]
        inv = cq.inverse()
        comps = [p.scale(inv) for p in comps]
        return SphereMap(comps, None, f"F({k},s={s})")
    return SphereMap(comps, q, f"F({k},s={s})")


def apply_unitary(h: SphereMap, u) -> SphereMap:
    """Compose with an exactly unitary matrix on the target."""
    m = h.m
    if len(u) != m or any(len(row) != m for row in u):
        raise ValueError("unitary matrix has the wrong shape")
    for i in range(m):
        for j in range(m):
            ip = ComplexRadical()
            for r in range(m):
                ip = ip + u[r][i].conjugate() * u[r][j]
            want = ComplexRadical.from_rational(1 if i == j else 0)
            if ip != want:
                raise ValueError("matrix is not unitary")
    comps = []
    for i in range(m):
        acc = BiPoly(h.n)
        for j in range(m):
            acc = acc + h.numerator[j].scale(u[i][j])
        comps.append(acc)
    return SphereMap(comps, h.denominator, f"U*{h.name or '?'}")


# ---------------------------------------------------------------------------
# the worked example maps
# ---------------------------------------------------------------------------


def example_44() -> SphereMap:
    return monomial_map(
        2,
        [
            (1, (4, 0)),
            (1, (3, 1)),
            (RadicalReal.sqrt(3), (1, 1)),
            (1, (0, 3)),
        ],
        "example-4.4",
    )


def example_46(a=None, b=None) -> SphereMap:
    """The map ((az-bzw)z, (az-bzw)w, conj(b)z + conj(a)zw, w^2)."""
    if a is None:
        a = ComplexRadical(RadicalReal.sqrt(Fraction(1, 2)))
    if b is None:
        b = ComplexRadical(RadicalReal.sqrt(Fraction(1, 2)))
    if a.abs_squared() + b.abs_squared() != RadicalReal.from_rational(1):
        raise ValueError("need |a|^2 + |b|^2 = 1")
    z = BiPoly.variable(2, 0)
    w = BiPoly.variable(2, 1)
    inner = z.scale(a) - (z * w).scale(b)
    comps = [
        inner * z,
        inner * w,
        z.scale(b.conjugate()) + (z * w).scale(a.conjugate()),
        w * w,
    ]
    return SphereMap(comps, None, "example-4.6")


def example_47(cos_t=Fraction(3, 5), sin_t=Fraction(4, 5)) -> SphereMap:
    """(z, cos(t) w, sin(t) zw, sin(t) w^2) for an exact rational cos/sin pair."""
    cos_t, sin_t = Fraction(cos_t), Fraction(sin_t)
    if cos_t * cos_t + sin_t * sin_t != 1:
        raise ValueError("need cos^2 + sin^2 = 1")
    return monomial_map(
        2,
        [
            (1, (1, 0)),
            (cos_t, (0, 1)),
            (sin_t, (1, 1)),
            (sin_t, (0, 2)),
        ],
        "example-4.7",
    )


def whitney_map() -> SphereMap:
    return monomial_map(2, [(1, (1, 0)), (1, (1, 1)), (1, (0, 2))], "whitney")


def tensor_source_map() -> SphereMap:
    """(z, zw, zw^2, w^3), the nondegenerate map whose tensor drops rank."""
    return monomial_map(
        2, [(1, (1, 0)), (1, (1, 1)), (1, (1, 2)), (1, (0, 3))], "tensor-source"
    )


def degenerate_five_map() -> SphereMap:
    """(z^2, z^2 w, sqrt(2) zw^2, zw, w^3): tensor-source tensored on its first
    component, with the two equal slots rotated together and the zero dropped.
    Annihilated by the holomorphic vector (0, z, w/sqrt(2), -1, 0)."""
    return monomial_map(
        2,
        [
            (1, (2, 0)),
            (1, (2, 1)),
            (RadicalReal.sqrt(2), (1, 2)),
            (1, (1, 1)),
            (1, (0, 3)),
        ],
        "degenerate-5",
    )
