"""Exact scalar arithmetic for the coefficient field.

Values are finite Q-linear combinations of square roots of squarefree
naturals (``RadicalReal``), plus complex numbers built from two such reals
(``ComplexRadical``).  The representation is canonical: square parts of
radicands are always extracted, so equal values compare structurally equal.
No floating point is used anywhere; signs are decided by exact interval
refinement.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

Rational = Fraction

#: Radicands beyond this bound abort factorization instead of stalling.
RADICAND_LIMIT = 2**63


class RadicandOverflowError(ValueError):
    """Radicand exceeds the configured factorization bound."""


# --------------------------------------------------------------------------
# integer factorization helpers (trial division + Pollard rho)
# --------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24 with these witnesses
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise RadicandOverflowError(f"failed to factor {n}")


def _factor(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 41
    while p * p <= n and p < 100_000:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack.extend((d, m // d))
    return factors


@lru_cache(maxsize=None)
def split_square(n: int) -> tuple[int, int]:
    """Write n = g**2 * r with r squarefree; returns (g, r).  Requires n >= 1."""
    if n < 1:
        raise ValueError("radicand must be a positive integer")
    if n > RADICAND_LIMIT:
        raise RadicandOverflowError(f"radicand {n} exceeds limit {RADICAND_LIMIT}")
    g, r = 1, 1
    for p, e in _factor(n).items():
        g *= p ** (e // 2)
        if e % 2:
            r *= p
    return g, r


# --------------------------------------------------------------------------
# RadicalReal
# --------------------------------------------------------------------------


class RadicalReal:
    """A real number of the form sum_r q_r * sqrt(r), r squarefree, q_r in Q.

    The key 1 carries the rational part.  Zero coefficients are never stored,
    so the zero value has an empty term dict and representations are unique.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self._terms = {} if terms is None else terms

    # construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> RadicalReal:
        q = Fraction(q)
        return cls({} if q == 0 else {1: q})

    @classmethod
    def sqrt(cls, q) -> RadicalReal:
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("sqrt of negative rational is not real")
        if q == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        g, r = split_square(q.numerator * q.denominator)
        return cls({r: Fraction(g, q.denominator)})

    @staticmethod
    def _coerce(x) -> RadicalReal:
        if isinstance(x, RadicalReal):
            return x
        if isinstance(x, (int, Fraction)):
            return RadicalReal.from_rational(x)
        return NotImplemented  # type: ignore[return-value]

    # structure --------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def radicands(self) -> set[int]:
        return {r for r in self._terms if r != 1}

    # arithmetic -------------------------------------------------------

    def __add__(self, other) -> RadicalReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for r, q in other._terms.items():
            s = terms.get(r, 0) + q
            if s:
                terms[r] = s
            else:
                terms.pop(r, None)
        return RadicalReal(terms)

    __radd__ = __add__

    def __neg__(self) -> RadicalReal:
        return RadicalReal({r: -q for r, q in self._terms.items()})

    def __sub__(self, other) -> RadicalReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RadicalReal:
        return (-self) + other

    def __mul__(self, other) -> RadicalReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for r1, q1 in self._terms.items():
            for r2, q2 in other._terms.items():
                if r1 == r2:
                    g, r = r1, 1
                elif r1 == 1:
                    g, r = 1, r2
                elif r2 == 1:
                    g, r = 1, r1
                else:
                    g, r = split_square(r1 * r2)
                s = terms.get(r, 0) + q1 * q2 * g
                if s:
                    terms[r] = s
                else:
                    terms.pop(r, None)
        return RadicalReal(terms)

    __rmul__ = __mul__

    def inverse(self) -> RadicalReal:
        """Exact multiplicative inverse via a linear solve over Q.

        Works in the finite-dimensional Q-algebra spanned by sqrt(b) for b in
        the multiplicative closure of this value's radicands.
        """
        if not self._terms:
            raise ZeroDivisionError("inverse of zero RadicalReal")
        if self.is_rational():
            return RadicalReal({1: 1 / self._terms[1]})
        basis = {1}
        gens = self.radicands()
        frontier = {1}
        while frontier:
            new = set()
            for b in frontier:
                for r in gens:
                    _, rb = split_square(b * r)
                    if rb not in basis:
                        basis.add(rb)
                        new.add(rb)
            frontier = new
        order = sorted(basis)
        idx = {b: i for i, b in enumerate(order)}
        k = len(order)
        # column j holds the coordinates of self * sqrt(order[j])
        mat = [[Fraction(0)] * k for _ in range(k)]
        for j, b in enumerate(order):
            for r, q in self._terms.items():
                g, rb = split_square(r * b)
                mat[idx[rb]][j] += q * g
        rhs = [Fraction(0)] * k
        rhs[idx[1]] = Fraction(1)
        sol = _solve_rational(mat, rhs)
        return RadicalReal({b: sol[j] for j, b in enumerate(order) if sol[j]})

    def __truediv__(self, other) -> RadicalReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> RadicalReal:
        return self._coerce(other) * self.inverse()

    # comparison / sign ------------------------------------------------

    def interval(self, prec: int) -> tuple[Fraction, Fraction]:
        """Enclosing interval with sqrt values at 2**-prec resolution."""
        lo = hi = Fraction(0)
        scale = 1 << prec
        for r, q in self._terms.items():
            if r == 1:
                lo += q
                hi += q
                continue
            s = isqrt(r * scale * scale)
            slo, shi = Fraction(s, scale), Fraction(s + 1, scale)
            if q >= 0:
                lo += q * slo
                hi += q * shi
            else:
                lo += q * shi
                hi += q * slo
        return lo, hi

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1.

        A nonzero value is bounded away from zero, so interval refinement
        terminates.  Zero is recognized structurally from the canonical form.
        """
        if not self._terms:
            return 0
        prec = 16
        while True:
            lo, hi = self.interval(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RadicalReal.from_rational(other)
        if not isinstance(other, RadicalReal):
            return NotImplemented
        return self._terms == other._terms

    def __lt__(self, other):
        diff = self - self._coerce(other)
        return diff.sign() < 0

    def __le__(self, other):
        diff = self - self._coerce(other)
        return diff.sign() <= 0

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # rendering --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for r in sorted(self._terms):
            q = self._terms[r]
            if r == 1:
                parts.append(str(q))
            elif q == 1:
                parts.append(f"sqrt({r})")
            elif q == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{q}*sqrt({r})")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"RadicalReal({self})"

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [
                {"sqrt": r, "num": q.numerator, "den": q.denominator}
                for r, q in sorted(self._terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> RadicalReal:
        out = cls()
        for t in data["terms"]:
            out = out + cls.sqrt(t["sqrt"]) * Fraction(t["num"], t["den"])
        return out


def _solve_rational(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular rational system by Gaussian elimination."""
    k = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(k):
        p = next(r for r in range(c, k) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(k):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[r][k] for r in range(k)]


ZERO = RadicalReal()
ONE = RadicalReal.from_rational(1)


# --------------------------------------------------------------------------
# ComplexRadical
# --------------------------------------------------------------------------


class ComplexRadical:
    """Complex number with RadicalReal real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RadicalReal | None = None, im: RadicalReal | None = None):
        self.re = re if re is not None else RadicalReal()
        self.im = im if im is not None else RadicalReal()

    @classmethod
    def from_rational(cls, re, im=0) -> ComplexRadical:
        return cls(RadicalReal.from_rational(re), RadicalReal.from_rational(im))

    @classmethod
    def real(cls, x: RadicalReal) -> ComplexRadical:
        return cls(x, RadicalReal())

    @staticmethod
    def _coerce(x) -> ComplexRadical:
        if isinstance(x, ComplexRadical):
            return x
        if isinstance(x, RadicalReal):
            return ComplexRadical(x)
        if isinstance(x, (int, Fraction)):
            return ComplexRadical(RadicalReal.from_rational(x))
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def conjugate(self) -> ComplexRadical:
        return ComplexRadical(self.re, -self.im)

    def abs_squared(self) -> RadicalReal:
        return self.re * self.re + self.im * self.im

    def __add__(self, other) -> ComplexRadical:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRadical(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> ComplexRadical:
        return ComplexRadical(-self.re, -self.im)

    def __sub__(self, other) -> ComplexRadical:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRadical(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> ComplexRadical:
        return (-self) + other

    def __mul__(self, other) -> ComplexRadical:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRadical(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> ComplexRadical:
        n = self.abs_squared()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero ComplexRadical")
        inv = n.inverse()
        return ComplexRadical(self.re * inv, -(self.im * inv))

    def __truediv__(self, other) -> ComplexRadical:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if self.im.is_zero():
            return str(self.re)
        if self.re.is_zero():
            return f"({self.im})*i"
        return f"({self.re}) + ({self.im})*i"

    def __repr__(self) -> str:
        return f"ComplexRadical({self})"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> ComplexRadical:
        return cls(RadicalReal.from_json(data["re"]), RadicalReal.from_json(data["im"]))


C_ZERO = ComplexRadical()
C_ONE = ComplexRadical.from_rational(1)
C_I = ComplexRadical.from_rational(0, 1)


def sign_of(a: RadicalReal) -> int:
    """Exact sign of a RadicalReal: -1, 0 or +1."""
    return a.sign()
