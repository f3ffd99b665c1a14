"""Infinitesimal deformations of sphere maps.

A deformation of H = P/Q is carried by a holomorphic polynomial numerator
vector X' with X = X'/Q^e; membership in hol(H) means Re(X . conj(H)) = 0 on
the sphere, an exactly decidable condition.  solve_hol builds the real-linear
system for all X' of degree <= 2d by splitting Re(X' . conj(P)) into Fourier
components and homogenizing each one, then takes an exact kernel.  The
resulting dimensions reproduce the closed-form counts for the homogeneous
maps and drive the rigidity verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .scalars import C_I, C_ONE, ComplexRadical, RadicalReal
from .polys import BiPoly, vanishes_on_sphere
from .maps import K, SphereMap, SubspaceSelector, multiindices, tensor_map
from .reflection import ReflectionMatrix, build_reflection
from .linalg import (
    Span,
    SparseFieldSystem,
    SparseIntSystem,
    bareiss_echelon,
    fraction_rows_to_int,
)

INFINITE_LABEL = "truncated; dim hol(H) = infinite"


def dim_formula(n: int, d: int) -> int:
    """Closed-form real dimension of hol of the degree-d homogeneous map.

    K^2 parameters from the Fourier-degree-0 block plus 2 K binom(n+d-1, n)
    from the paired blocks; for n = 2 this collapses to (d+1)^3.
    """
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    k = K(n, d)
    return k * k + 2 * k * comb(n + d - 1, n)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def default_q_power(h: SphereMap) -> int:
    return 0 if h.is_polynomial() else 1


def in_hol(h: SphereMap, vec, q_power: int | None = None) -> bool:
    """Exact membership of X = vec / Q^q_power in hol(H)."""
    e = default_q_power(h) if q_power is None else q_power
    pairing = BiPoly(h.n)
    for x, p in zip(vec, h.numerator, strict=True):
        pairing = pairing + x * p.conjugate()
    if e >= 2:
        qbar = h.denominator.conjugate()
        for _ in range(e - 1):
            pairing = pairing * qbar
    return vanishes_on_sphere(pairing + pairing.conjugate())


def real_coords(vec) -> dict:
    """Real coordinates of a holomorphic polynomial vector, for span work."""
    out = {}
    for j, p in enumerate(vec):
        for (holo, _anti), c in p.terms.items():
            if not c.re.is_zero():
                out[(0, j, holo)] = c.re
            if not c.im.is_zero():
                out[(1, j, holo)] = c.im
    return out


# ---------------------------------------------------------------------------
# solve_hol
# ---------------------------------------------------------------------------


@dataclass
class DeformationBasis:
    map: SphereMap
    q_power: int
    basis: tuple
    real_dimension: int
    infinite: bool = False
    label: str = ""
    aut_dimension: int | None = None

    @property
    def nontrivial_dimension(self) -> int | None:
        if self.aut_dimension is None:
            return None
        return self.real_dimension - self.aut_dimension

    def to_json(self) -> dict:
        out = {
            "map": self.map.name,
            "q_power": self.q_power,
            "real_dimension": self.real_dimension,
            "infinite": self.infinite,
            "basis": [[p.to_json() for p in vec] for vec in self.basis],
        }
        if self.label:
            out["label"] = self.label
        if self.aut_dimension is not None:
            out["aut_dimension"] = self.aut_dimension
            out["nontrivial_dimension"] = self.nontrivial_dimension
        return out


def _component_radicands(h: SphereMap):
    """Per-component squarefree radicand r_j when every coefficient of P_j
    lies in sqrt(r_j) * Q(i); None when some component does not rationalize."""
    out = []
    for p in h.numerator:
        r_j = None
        for c in p.terms.values():
            for part in (c.re, c.im):
                t = part.terms
                if not t:
                    continue
                if len(t) > 1:
                    return None
                r = next(iter(t))
                if r_j is None:
                    r_j = r
                elif r_j != r:
                    return None
        out.append(1 if r_j is None else r_j)
    return out


def _scaled_conj_terms_fast(p: BiPoly, r_j: int):
    """Terms of conj(P_j) / sqrt(r_j) as (anti-exponent, (Fraction re, im))."""
    out = []
    for (beta, _a), c in p.terms.items():
        q1 = c.re.terms.get(r_j, Fraction(0))
        q2 = c.im.terms.get(r_j, Fraction(0))
        out.append((beta, (q1, -q2)))  # conjugated
    return out


def _scaled_conj_terms_exact(p: BiPoly):
    out = []
    for (beta, _a), c in p.terms.items():
        cc = c.conjugate()
        out.append((beta, (cc.re, cc.im)))
    return out


def _assemble_blocks(h: SphereMap, monos, conj_terms_by_comp, zero):
    """Fourier blocks of Re(X' . conj(P)) as linear forms in the unknowns.

    blocks[s][term_key][(j, gamma)] = [ga_re, ga_im, gb_re, gb_im] where ga
    collects the X'-side coefficient and gb the conjugate side.
    """
    blocks: dict[int, dict] = {}
    for j, cterms in enumerate(conj_terms_by_comp):
        for gamma in monos:
            sg = sum(gamma)
            u = (j, gamma)
            for beta, (cre, cim) in cterms:
                s = sg - sum(beta)
                if s >= 0:
                    row = blocks.setdefault(s, {}).setdefault((gamma, beta), {})
                    cell = row.get(u)
                    if cell is None:
                        cell = [zero, zero, zero, zero]
                        row[u] = cell
                    cell[0] = cell[0] + cre
                    cell[1] = cell[1] + cim
                if s <= 0:
                    row = blocks.setdefault(-s, {}).setdefault((beta, gamma), {})
                    cell = row.get(u)
                    if cell is None:
                        cell = [zero, zero, zero, zero]
                        row[u] = cell
                    # conjugate of the conjugated coefficient: the original
                    cell[2] = cell[2] + cre
                    cell[3] = cell[3] - cim
    return blocks


def _spread_block(n, terms, zero):
    """Homogenize one Fourier block; returns final rows keyed by monomial."""
    from .polys import _norm_power_expansion

    top = max(sum(hk) for (hk, _ak) in terms)
    final: dict = {}
    for (hk, ak), urow in terms.items():
        k = top - sum(hk)
        for gamma, mult in _norm_power_expansion(n, k):
            key = (
                tuple(x + g for x, g in zip(hk, gamma)),
                tuple(x + g for x, g in zip(ak, gamma)),
            )
            dest = final.setdefault(key, {})
            for u, (ga_re, ga_im, gb_re, gb_im) in urow.items():
                cell = dest.get(u)
                if cell is None:
                    cell = [zero, zero, zero, zero]
                    dest[u] = cell
                cell[0] = cell[0] + ga_re * mult
                cell[1] = cell[1] + ga_im * mult
                cell[2] = cell[2] + gb_re * mult
                cell[3] = cell[3] + gb_im * mult
    return final


def _emit_rows(final):
    """Real/imaginary equation rows from one homogenized block.

    For unknown x = a + i b the block coefficient is (ga + gb) on a and
    i (ga - gb) on b, split into two real rows per monomial.
    """
    for urow in final.values():
        re_row: dict = {}
        im_row: dict = {}
        for (j, gamma), (ga_re, ga_im, gb_re, gb_im) in urow.items():
            la_re, la_im = ga_re + gb_re, ga_im + gb_im
            ld_re, ld_im = ga_re - gb_re, ga_im - gb_im
            # i * (ld_re + i ld_im) = -ld_im + i ld_re
            re_row[(0, j, gamma)] = la_re
            re_row[(1, j, gamma)] = -ld_im
            im_row[(0, j, gamma)] = la_im
            im_row[(1, j, gamma)] = ld_re
        yield re_row
        yield im_row


def solve_hol(
    h: SphereMap,
    reflection: ReflectionMatrix | None = None,
    degree_bound: int | None = None,
) -> DeformationBasis:
    """Exact real basis of {X' of degree <= 2d : Re(X' . conj(P)) = 0 on sphere}.

    For holomorphically degenerate maps the space is only a truncation and
    the result is labeled as such (the full space is infinite-dimensional).
    """
    d = h.degree
    bound = 2 * d if degree_bound is None else degree_bound
    r = reflection if reflection is not None else build_reflection(h)
    rank_v = len(bareiss_echelon([list(row) for row in r.v.rows])[1])
    infinite = rank_v < h.m
    monos = [g for deg in range(bound + 1) for g in multiindices(h.n, deg)]
    radicands = _component_radicands(h)
    if radicands is not None:
        system = SparseIntSystem()
        conj_terms = [
            _scaled_conj_terms_fast(p, rj)
            for p, rj in zip(h.numerator, radicands)
        ]
        zero = Fraction(0)
    else:
        system = SparseFieldSystem(RadicalReal.from_rational(1))
        conj_terms = [_scaled_conj_terms_exact(p) for p in h.numerator]
        zero = RadicalReal()
    for j in range(h.m):
        for gamma in monos:
            system.add_column((0, j, gamma))
            system.add_column((1, j, gamma))
    blocks = _assemble_blocks(h, monos, conj_terms, zero)
    for s in sorted(blocks):
        final = _spread_block(h.n, blocks[s], zero)
        if radicands is not None:
            for row in _emit_rows(final):
                system.add_row(fraction_rows_to_int({k: v for k, v in row.items() if v}))
        else:
            for row in _emit_rows(final):
                system.add_row({k: v for k, v in row.items() if not v.is_zero()})
    rank, kernel = system.kernel()
    scale_back = None
    if radicands is not None:
        scale_back = [
            RadicalReal({rj: Fraction(1, rj)}) for rj in radicands
        ]
    basis = []
    for vec in kernel:
        comps = [BiPoly(h.n) for _ in range(h.m)]
        for (part, j, gamma), val in vec.items():
            if radicands is not None:
                rr = RadicalReal.from_rational(val) * scale_back[j]
            else:
                rr = val
            c = ComplexRadical(rr) if part == 0 else ComplexRadical(RadicalReal(), rr)
            comps[j] = comps[j] + BiPoly.monomial(h.n, gamma, None, c)
        basis.append(tuple(comps))
    return DeformationBasis(
        map=h,
        q_power=default_q_power(h),
        basis=tuple(basis),
        real_dimension=len(basis),
        infinite=infinite,
        label=INFINITE_LABEL if infinite else "",
    )


# ---------------------------------------------------------------------------
# trivial deformations: the aut(H) generators
# ---------------------------------------------------------------------------


@dataclass
class AutBasis:
    map: SphereMap
    q_power: int
    generators: tuple
    real_dimension: int
    stabilizer_dimension: int
    stabilizer_flags: dict[str, list[bool]]
    _span: Span = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {
            "map": self.map.name,
            "q_power": self.q_power,
            "real_dimension": self.real_dimension,
            "stabilizer_dimension": self.stabilizer_dimension,
            "stabilizer_flags": self.stabilizer_flags,
        }


def _jacobian_pushforward(h: SphereMap, coeff_fields) -> list[BiPoly]:
    """Numerator of H_* v over Q^2 for a holomorphic source field v.

    v has polynomial coefficients coeff_fields[j] on d/dz_j; the numerator of
    dH_i/dz_j is dP_i/dz_j Q - P_i dQ/dz_j.
    """
    n = h.n
    q = h.denominator
    dq = [q.diff(j) for j in range(n)]
    out = []
    for p in h.numerator:
        acc = BiPoly(n)
        dp = [p.diff(j) for j in range(n)]
        for j, v in enumerate(coeff_fields):
            if v.is_zero():
                continue
            acc = acc + v * (dp[j] * q - p * dq[j])
        out.append(acc)
    return out


def _aut_generator_sets(h: SphereMap):
    """Raw T1..T4 generator numerators over Q^e, e = 0 (polynomial) or 2."""
    n, m = h.n, h.m
    poly = h.is_polynomial()
    q = h.denominator
    q2 = q * q
    units = [C_ONE, C_I]

    t1 = []
    for k in range(m):
        for c in units:
            s = h.numerator[k].scale(c.conjugate())
            vec = [
                (q2.scale(c) if i == k else BiPoly(n)) - s * h.numerator[i]
                for i in range(m)
            ]
            t1.append(vec)

    t2 = []
    for k in range(m):
        vec = [BiPoly(n) for _ in range(m)]
        vec[k] = h.numerator[k].scale(C_I) * q
        t2.append(vec)
    for k in range(m):
        for l in range(k + 1, m):
            for c in units:
                # skew-Hermitian: entry (l, k) is -conj of entry (k, l)
                vec = [BiPoly(n) for _ in range(m)]
                vec[k] = h.numerator[l].scale(c) * q
                vec[l] = h.numerator[k].scale(-c.conjugate()) * q
                t2.append(vec)

    zvars = [BiPoly.variable(n, j) for j in range(n)]

    t3 = []
    for k in range(n):
        for c in units:
            # v = alpha - (conj(alpha).z) z with alpha = c e_k
            inner = zvars[k].scale(c.conjugate())
            coeffs = [
                (BiPoly.constant(n, c) if j == k else BiPoly(n)) - inner * zvars[j]
                for j in range(n)
            ]
            t3.append(_jacobian_pushforward(h, coeffs))

    t4 = []
    s2_count = 0
    for l in range(n):
        for j in range(l + 1, n):
            for c in units:
                coeffs = [BiPoly(n) for _ in range(n)]
                coeffs[j] = zvars[l].scale(c)
                coeffs[l] = -zvars[j].scale(c.conjugate())
                t4.append(_jacobian_pushforward(h, coeffs))
                s2_count += 1
    s3_start = s2_count
    for j in range(n):
        coeffs = [BiPoly(n) for _ in range(n)]
        coeffs[j] = zvars[j].scale(C_I)
        t4.append(_jacobian_pushforward(h, coeffs))

    if poly:
        return t1, t2, t3, t4, s3_start, 0
    return t1, t2, t3, t4, s3_start, 2


def aut_basis(h: SphereMap) -> AutBasis:
    """Real basis of aut(H) from the raw T1..T4 family, with stabilizer data."""
    t1, t2, t3, t4, s3_start, e = _aut_generator_sets(h)
    target_span = Span()
    for vec in t1 + t2:
        target_span.add(real_coords(vec))
    dim_target = target_span.dim

    flags_s1 = [target_span.contains(real_coords(v)) for v in t3]
    flags_s2 = [target_span.contains(real_coords(v)) for v in t4[:s3_start]]
    flags_s3 = [target_span.contains(real_coords(v)) for v in t4[s3_start:]]

    reduced = []
    probe = Span()
    for vec in t1 + t2 + t3 + t4:
        if probe.add(real_coords(vec)):
            reduced.append(tuple(vec))
    n = h.n
    dim_all = probe.dim
    stab_dim = (2 * n + n * n) - (dim_all - dim_target)
    return AutBasis(
        map=h,
        q_power=e,
        generators=tuple(reduced),
        real_dimension=dim_all,
        stabilizer_dimension=stab_dim,
        stabilizer_flags={"S1": flags_s1, "S2": flags_s2, "S3": flags_s3},
        _span=probe,
    )


def is_trivial_deformation(
    h: SphereMap, vec, q_power: int | None = None, aut: AutBasis | None = None
) -> bool:
    """Membership of X = vec / Q^q_power in the real span of aut(H)."""
    e = default_q_power(h) if q_power is None else q_power
    if not in_hol(h, vec, e):
        raise ValueError("vector is not an infinitesimal deformation of the map")
    if aut is None:
        aut = aut_basis(h)
    if aut.q_power < e:
        raise ValueError("deformation has a deeper pole than the aut generators")
    lifted = list(vec)
    for _ in range(aut.q_power - e):
        lifted = [p * h.denominator for p in lifted]
    return aut._span.contains(real_coords(lifted))


def is_infinitesimally_rigid(
    h: SphereMap,
    hol: DeformationBasis | None = None,
    aut: AutBasis | None = None,
) -> bool:
    """hol(H) = aut(H)?  Rejects holomorphically degenerate maps (never rigid)."""
    if hol is None:
        hol = solve_hol(h)
    if hol.infinite:
        raise ValueError("holomorphically degenerate maps are never rigid")
    if aut is None:
        aut = aut_basis(h)
    hol.aut_dimension = aut.real_dimension
    if hol.real_dimension != aut.real_dimension:
        return False
    if not h.is_polynomial():
        # equal dimensions only certify rigidity when the computed hol space
        # (numerators over Q) is known to absorb every aut generator
        for vec in hol.basis:
            if not is_trivial_deformation(h, vec, hol.q_power, aut):
                raise ArithmeticError(
                    "dimension tie without span agreement; rigidity undecided"
                )
    return True


# ---------------------------------------------------------------------------
# closed-form basis for n = 2 homogeneous maps
# ---------------------------------------------------------------------------


def hom_deformation_basis(d: int):
    """Independent spanning set of hol(H_2^d), (d+1)^3 vectors, closed form.

    Generator (m, k, r, c): entry m carries c z^(d-r-k+1) w^(k-1); entries
    k+l carry -conj(c) binom(r,l) z^(r-l) w^l times the m-th degree-d
    monomial; everything is then scaled by the inverse coefficient diagonal.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    mdim = d + 1
    inv_a = [RadicalReal.sqrt(comb(d, i)).inverse() for i in range(mdim)]
    gens = []
    for r in range(d + 1):
        for mi in range(1, mdim + 1):
            for k in range(1, mdim + 1 - r):
                for c in (C_ONE, C_I):
                    vec = [BiPoly(2) for _ in range(mdim)]
                    ek = (d - r - (k - 1), k - 1)
                    vec[mi - 1] = vec[mi - 1] + BiPoly.monomial(2, ek, None, c)
                    em = (d - (mi - 1), mi - 1)
                    cc = c.conjugate()
                    for l in range(r + 1):
                        pos = k + l - 1
                        ee = (r - l + em[0], l + em[1])
                        vec[pos] = vec[pos] - BiPoly.monomial(
                            2, ee, None, cc * comb(r, l)
                        )
                    vec = [p.scale(inv_a[i]) for i, p in enumerate(vec)]
                    gens.append(tuple(vec))
    span = Span()
    out = []
    for vec in gens:
        if span.add(real_coords(vec)):
            out.append(vec)
    want = (d + 1) ** 3
    if len(out) != want:
        raise ArithmeticError(
            f"closed-form family spans dimension {len(out)}, expected {want}"
        )
    return out


# ---------------------------------------------------------------------------
# transport operations
# ---------------------------------------------------------------------------


def tensor_deformation(
    vec,
    h: SphereMap,
    a: SubspaceSelector,
    g: SphereMap,
    q_power: int | None = None,
):
    """Tensor a deformation along with its map: (X_A (x) G) + X_Aperp.

    Returns (numerator vector, q_power) for the tensored map, whose
    denominator is Q_h Q_g.
    """
    e = default_q_power(h) if q_power is None else q_power
    if not in_hol(h, vec, e):
        raise ValueError("vector is not an infinitesimal deformation of the map")
    xa, xb = a.split(list(vec))
    e_out = e if g.is_polynomial() else max(e, 1)
    qg, qh = g.denominator, h.denominator
    lift_h = BiPoly.constant(h.n, 1)
    for _ in range(e_out - e):
        lift_h = lift_h * qh
    qg_a = BiPoly.constant(h.n, 1)
    for _ in range(e_out - 1):
        qg_a = qg_a * qg
    qg_b = qg_a * qg
    out = []
    for xi in xa:
        for gj in g.numerator:
            out.append(xi * gj * lift_h * qg_a)
    for xk in xb:
        out.append(xk * lift_h * qg_b)
    return tuple(out), e_out


def push_through_reflection(r: ReflectionMatrix, vec):
    """V_H applied to a polynomial vector; transports hol(H) into hol(H_n^d)."""
    return r.vh.apply(list(vec))


def family_derivative(k: int):
    """d/ds at s = 0 of the family F^k_s, an element of hol(H_2^(2k+1)).

    Computed by the quotient rule in a three-variable ring (z, w, s) and
    specialized at s = 0; the denominator there is the constant 2.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    d = 2 * k + 1
    # variables: 0 -> z, 1 -> w, 2 -> s
    z = BiPoly.variable(3, 0)
    w = BiPoly.variable(3, 1)
    s = BiPoly.variable(3, 2)
    one = BiPoly.constant(3, 1)
    u = one - s
    u2 = u * u
    n1 = z * (one + u2) + (u2 - one)
    n2 = w * u * BiPoly.constant(3, 2)
    q = z * (u2 - one) + (u2 + one)
    comps = []
    for ell in range(d + 1):
        c = RadicalReal.sqrt(comb(d, ell))
        if ell == k:
            comps.append(BiPoly.monomial(3, (k, k, 0), None, c) * n1)
        elif ell == k + 1:
            comps.append(BiPoly.monomial(3, (k, k, 0), None, c) * n2)
        else:
            comps.append(BiPoly.monomial(3, (d - ell, ell, 0), None, c) * q)
    dq = q.diff(2)
    out = []
    q0sq_inv = Fraction(1, 4)
    for comp in comps:
        num = comp.diff(2) * q - comp * dq
        out.append(_drop_s(num).scale(q0sq_inv))
    return tuple(out)


def _drop_s(p: BiPoly) -> BiPoly:
    """Specialize the third variable to 0 and return a two-variable polynomial."""
    out = BiPoly(2)
    for (h, a), c in p.terms.items():
        if h[2] or a[2]:
            continue
        key = ((h[0], h[1]), (a[0], a[1]))
        cur = out.terms.get(key)
        cur = c if cur is None else cur + c
        if cur.is_zero():
            out.terms.pop(key, None)
        else:
            out.terms[key] = cur
    return out
