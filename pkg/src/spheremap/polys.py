"""Sparse polynomials in z = (z_1..z_n) and zbar with ComplexRadical coefficients.

A monomial is a pair of exponent tuples (holomorphic, antiholomorphic).  The
Fourier degree of a term is holo degree minus anti degree; splitting by it and
homogenizing with powers of ||z||^2 decides vanishing on the unit sphere by
pure linear algebra: a bihomogeneous polynomial vanishing on the sphere
vanishes identically.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
import random

from .scalars import ComplexRadical, RadicalReal

Monomial = tuple[tuple[int, ...], tuple[int, ...]]


def _coerce_coeff(c) -> ComplexRadical:
    if isinstance(c, ComplexRadical):
        return c
    if isinstance(c, RadicalReal):
        return ComplexRadical(c)
    if isinstance(c, (int, Fraction)):
        return ComplexRadical.from_rational(c)
    raise TypeError(f"cannot use {type(c).__name__} as coefficient")


class BiPoly:
    """Polynomial in z and zbar, stored as {(holo_exp, anti_exp): coeff}."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Monomial, ComplexRadical] | None = None):
        self.n = n
        self.terms = terms if terms is not None else {}

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> BiPoly:
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> BiPoly:
        c = _coerce_coeff(c)
        zero = (0,) * n
        return cls(n, {(zero, zero): c} if not c.is_zero() else {})

    @classmethod
    def monomial(cls, n: int, holo, anti=None, coeff=1) -> BiPoly:
        holo = tuple(holo)
        anti = (0,) * n if anti is None else tuple(anti)
        if len(holo) != n or len(anti) != n:
            raise ValueError("exponent vector length must equal variable count")
        c = _coerce_coeff(coeff)
        return cls(n, {(holo, anti): c} if not c.is_zero() else {})

    @classmethod
    def variable(cls, n: int, j: int) -> BiPoly:
        e = tuple(1 if i == j else 0 for i in range(n))
        return cls.monomial(n, e)

    @classmethod
    def anti_variable(cls, n: int, j: int) -> BiPoly:
        e = tuple(1 if i == j else 0 for i in range(n))
        return cls.monomial(n, (0,) * n, e)

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_holomorphic(self) -> bool:
        return all(not any(anti) for _, anti in self.terms)

    def holo_degree(self) -> int:
        return max((sum(h) for h, _ in self.terms), default=0)

    def anti_degree(self) -> int:
        return max((sum(a) for _, a in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(h) + sum(a) for h, a in self.terms), default=0)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: BiPoly):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: BiPoly) -> BiPoly:
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return BiPoly(self.n, terms)

    def __neg__(self) -> BiPoly:
        return BiPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: BiPoly) -> BiPoly:
        return self + (-other)

    def __mul__(self, other) -> BiPoly:
        if not isinstance(other, BiPoly):
            return self.scale(other)
        self._check(other)
        terms: dict[Monomial, ComplexRadical] = {}
        for (h1, a1), c1 in self.terms.items():
            for (h2, a2), c2 in other.terms.items():
                m = (
                    tuple(x + y for x, y in zip(h1, h2)),
                    tuple(x + y for x, y in zip(a1, a2)),
                )
                c = c1 * c2
                s = terms.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return BiPoly(self.n, terms)

    def __rmul__(self, other) -> BiPoly:
        return self.scale(other)

    def scale(self, c) -> BiPoly:
        c = _coerce_coeff(c)
        if c.is_zero():
            return BiPoly(self.n)
        return BiPoly(self.n, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> BiPoly:
        out = BiPoly.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # calculus and conjugation ---------------------------------------------

    def conjugate(self) -> BiPoly:
        return BiPoly(
            self.n, {(a, h): c.conjugate() for (h, a), c in self.terms.items()}
        )

    def diff(self, j: int, anti: bool = False) -> BiPoly:
        """Formal partial derivative with respect to z_j (or zbar_j)."""
        terms: dict[Monomial, ComplexRadical] = {}
        for (h, a), c in self.terms.items():
            e = a[j] if anti else h[j]
            if e == 0:
                continue
            if anti:
                m = (h, a[:j] + (e - 1,) + a[j + 1 :])
            else:
                m = (h[:j] + (e - 1,) + h[j + 1 :], a)
            s = terms.get(m)
            add = c * e
            s = add if s is None else s + add
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return BiPoly(self.n, terms)

    def evaluate(self, point) -> ComplexRadical:
        """Exact value at a point; zbar is evaluated at coordinate conjugates."""
        pt = [_coerce_coeff(p) for p in point]
        if len(pt) != self.n:
            raise ValueError("coordinate count must equal variable count")
        conj = [p.conjugate() for p in pt]
        powcache: dict[tuple[int, int, int], ComplexRadical] = {}

        def power(base_idx: int, is_anti: int, e: int) -> ComplexRadical:
            key = (base_idx, is_anti, e)
            got = powcache.get(key)
            if got is None:
                base = conj[base_idx] if is_anti else pt[base_idx]
                got = ComplexRadical.from_rational(1)
                for _ in range(e):
                    got = got * base
                powcache[key] = got
            return got

        total = ComplexRadical()
        for (h, a), c in self.terms.items():
            v = c
            for j, e in enumerate(h):
                if e:
                    v = v * power(j, 0, e)
            for j, e in enumerate(a):
                if e:
                    v = v * power(j, 1, e)
            total = total + v
        return total

    def permute_variables(self, perm) -> BiPoly:
        """Substitute z_j -> z_perm[j] (and the same for zbar)."""
        terms = {}
        for (h, a), c in self.terms.items():
            nh, na = [0] * self.n, [0] * self.n
            for j in range(self.n):
                nh[perm[j]] += h[j]
                na[perm[j]] += a[j]
            terms[(tuple(nh), tuple(na))] = c
        return BiPoly(self.n, terms)

    # Fourier / sphere machinery ---------------------------------------------

    def fourier_split(self) -> dict[int, BiPoly]:
        """Partition terms by Fourier degree |holo| - |anti|; parts sum to self."""
        parts: dict[int, BiPoly] = {}
        for (h, a), c in self.terms.items():
            s = sum(h) - sum(a)
            parts.setdefault(s, BiPoly(self.n)).terms[(h, a)] = c
        return parts

    def sorted_terms(self) -> list[tuple[Monomial, ComplexRadical]]:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        def monstr(m: Monomial) -> str:
            h, a = m
            bits = [f"z{j+1}^{e}" if e > 1 else f"z{j+1}" for j, e in enumerate(h) if e]
            bits += [
                f"zb{j+1}^{e}" if e > 1 else f"zb{j+1}" for j, e in enumerate(a) if e
            ]
            return "*".join(bits) if bits else "1"

        return " + ".join(f"({c})*{monstr(m)}" for m, c in self.sorted_terms())

    __repr__ = __str__

    # serialization -----------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"holo": list(h), "anti": list(a), "coeff": c.to_json()}
            for (h, a), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, n: int, data: list[dict]) -> BiPoly:
        out = cls(n)
        for t in data:
            out = out + cls.monomial(
                n, t["holo"], t["anti"], ComplexRadical.from_json(t["coeff"])
            )
        return out


# ---------------------------------------------------------------------------
# sphere predicates
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _norm_power_expansion(n: int, k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Multinomial expansion of (z1 zb1 + ... + zn zbn)**k as (gamma, coeff)."""
    out = []
    for gamma in _compositions(k, n):
        coeff = factorial(k)
        for g in gamma:
            coeff //= factorial(g)
        out.append((gamma, coeff))
    return tuple(out)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def norm_squared_poly(n: int) -> BiPoly:
    """||z||^2 as a BiPoly."""
    out = BiPoly(n)
    for j in range(n):
        out = out + BiPoly.variable(n, j) * BiPoly.anti_variable(n, j)
    return out


def homogenize_on_sphere(r: BiPoly) -> BiPoly:
    """Make a single-Fourier-degree polynomial bihomogeneous.

    Each bidegree-(a, a-s) piece is multiplied by ||z||^(2(A-a)) where A is
    the largest holomorphic degree present; the result agrees with the input
    on the unit sphere.
    """
    if r.is_zero():
        return r
    degrees = {sum(h) - sum(a) for h, a in r.terms}
    if len(degrees) > 1:
        raise ValueError(f"mixed Fourier degrees {sorted(degrees)}")
    top = max(sum(h) for h, _ in r.terms)
    out = BiPoly(r.n)
    for (h, a), c in r.terms.items():
        k = top - sum(h)
        if k == 0:
            cur = out.terms.get((h, a))
            cur = c if cur is None else cur + c
            if cur.is_zero():
                out.terms.pop((h, a), None)
            else:
                out.terms[(h, a)] = cur
            continue
        for gamma, mult in _norm_power_expansion(r.n, k):
            m = (
                tuple(x + g for x, g in zip(h, gamma)),
                tuple(x + g for x, g in zip(a, gamma)),
            )
            add = c * mult
            cur = out.terms.get(m)
            cur = add if cur is None else cur + add
            if cur.is_zero():
                out.terms.pop(m, None)
            else:
                out.terms[m] = cur
    return out


def vanishes_on_sphere(r: BiPoly) -> bool:
    """True iff r restricted to the unit sphere is identically zero."""
    for part in r.fourier_split().values():
        if not homogenize_on_sphere(part).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# exact division (used by fraction-free elimination)
# ---------------------------------------------------------------------------


def exact_div(f: BiPoly, g: BiPoly) -> BiPoly:
    """Divide f by g, asserting the division is exact."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return f
    f._check(g)
    gl = max(g.terms)
    glc = g.terms[gl]
    rem = BiPoly(f.n, dict(f.terms))
    quo = BiPoly(f.n)
    while not rem.is_zero():
        fl = max(rem.terms)
        dh = tuple(x - y for x, y in zip(fl[0], gl[0]))
        da = tuple(x - y for x, y in zip(fl[1], gl[1]))
        if any(e < 0 for e in dh) or any(e < 0 for e in da):
            raise ArithmeticError("inexact polynomial division")
        t = BiPoly(f.n, {(dh, da): rem.terms[fl] / glc})
        quo = quo + t
        rem = rem - t * g
    return quo


# ---------------------------------------------------------------------------
# vectors and matrices of polynomials
# ---------------------------------------------------------------------------


def poly_vector(entries) -> tuple[BiPoly, ...]:
    vec = tuple(entries)
    if vec:
        n = vec[0].n
        for p in vec:
            if p.n != n:
                raise ValueError("mixed variable counts in vector")
    return vec


def vec_dot(u, v) -> BiPoly:
    """Plain bilinear dot product sum u_i v_i (no conjugation)."""
    out = BiPoly(u[0].n)
    for a, b in zip(u, v, strict=True):
        out = out + a * b
    return out


def vec_conj(u) -> tuple[BiPoly, ...]:
    return tuple(p.conjugate() for p in u)


def hermitian_pairing(u, v) -> BiPoly:
    """sum u_i * conj(v_i); equals ||u||^2 for v = u."""
    return vec_dot(u, vec_conj(v))


class PolyMatrix:
    """Rectangular matrix of BiPoly entries with a fixed shape."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise ValueError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def entry(self, i: int, j: int) -> BiPoly:
        return self.rows[i][j]

    def apply(self, vec) -> tuple[BiPoly, ...]:
        """Matrix times a vector of BiPoly (or coercible scalars)."""
        n = self.rows[0][0].n
        vec = [
            v if isinstance(v, BiPoly) else BiPoly.constant(n, v) for v in vec
        ]
        if len(vec) != self.shape[1]:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(vec_dot(row, vec) for row in self.rows)

    def transpose_conjugate_apply(self, vec) -> tuple[BiPoly, ...]:
        """Conjugate-transpose times a vector: (t Vbar) y."""
        rows, cols = self.shape
        n = self.rows[0][0].n
        vec = [v if isinstance(v, BiPoly) else BiPoly.constant(n, v) for v in vec]
        if len(vec) != rows:
            raise ValueError("shape mismatch")
        out = []
        for j in range(cols):
            acc = BiPoly(n)
            for i in range(rows):
                acc = acc + self.rows[i][j].conjugate() * vec[i]
            out.append(acc)
        return tuple(out)

    def evaluate(self, point) -> list[list[ComplexRadical]]:
        return [[e.evaluate(point) for e in row] for row in self.rows]

    def to_json(self) -> list[list[list[dict]]]:
        return [[e.to_json() for e in row] for row in self.rows]


# ---------------------------------------------------------------------------
# rational points on the unit sphere
# ---------------------------------------------------------------------------


def point_from_parameters(n: int, params) -> tuple[ComplexRadical, ...]:
    """Map u in Q^(2n-1) to an exact point of S^(2n-1) (inverse stereographic)."""
    u = [Fraction(p) for p in params]
    if len(u) != 2 * n - 1:
        raise ValueError("need 2n-1 rational parameters")
    s = sum(x * x for x in u)
    denom = s + 1
    coords = [2 * x / denom for x in u] + [(s - 1) / denom]
    return tuple(
        ComplexRadical.from_rational(coords[2 * j], coords[2 * j + 1])
        for j in range(n)
    )


def on_unit_sphere(point) -> bool:
    total = RadicalReal()
    for p in point:
        p = _coerce_coeff(p)
        total = total + p.abs_squared()
    return total == 1


def sphere_points(n: int, count: int, seed: int = 0, nonzero: bool = True):
    """Deterministic stream of exact rational sphere points.

    With nonzero=True every complex coordinate of every yielded point is
    nonzero, which is what generic-rank witness searches want.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        params = [
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2 * n - 1)
        ]
        if all(p == 0 for p in params):
            continue
        pt = point_from_parameters(n, params)
        if nonzero and any(c.is_zero() for c in pt):
            continue
        out.append(pt)
    return out


def rational_point(*coords) -> tuple[ComplexRadical, ...]:
    """Convenience: a point with rational real coordinates, e.g. (3/5, 4/5)."""
    return tuple(ComplexRadical.from_rational(Fraction(c)) for c in coords)
