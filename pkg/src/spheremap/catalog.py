"""Named catalog of the worked example maps, addressable by string key.

Keys accept a small grammar: ``H(n,d)``, ``G(l)``, ``F(k,s=1/10)``,
``juxt(KEY,KEY,t)``, ``pad(KEY,k)``, plus fixed names like ``example-4.4``
or ``whitney``.  Every entry validates as a sphere map when constructed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .scalars import ComplexRadical
from .maps import (
    SphereMap,
    apply_unitary,
    degenerate_five_map,
    example_44,
    example_46,
    example_47,
    family_map,
    group_invariant_map,
    homogeneous_map,
    juxtapose,
    tensor_map,
    tensor_source_map,
    whitney_map,
    zero_pad,
    SubspaceSelector,
)


@dataclass
class CatalogEntry:
    key: str
    constructor: Callable[[], SphereMap]
    note: str

    def build(self) -> SphereMap:
        m = self.constructor()
        if not m.validate():
            raise ValueError(f"catalog entry {self.key} is not a sphere map")
        if not m.denominator_certificate():
            raise ValueError(f"catalog entry {self.key} has an uncertified denominator")
        m.name = self.key
        return m


def _unitary_h22() -> SphereMap:
    a = ComplexRadical.from_rational(Fraction(3, 5))
    b = ComplexRadical.from_rational(Fraction(4, 5))
    zero = ComplexRadical.from_rational(0)
    one = ComplexRadical.from_rational(1)
    u = [
        [a, b, zero],
        [-b.conjugate(), a.conjugate(), zero],
        [zero, zero, one],
    ]
    return apply_unitary(homogeneous_map(2, 2), u)


def _tensor_example() -> SphereMap:
    return tensor_map(
        tensor_source_map(), SubspaceSelector(4, indices=[0]), whitney_map()
    )


DEFAULT_KEYS = [
    "H(2,1)",
    "H(2,2)",
    "H(2,3)",
    "H(2,4)",
    "H(3,1)",
    "H(3,2)",
    "G(0)",
    "G(1)",
    "G(2)",
    "G(3)",
    "G(4)",
    "example-4.4",
    "example-4.6",
    "example-4.7",
    "whitney",
    "tensor-source",
    "tensor-example",
    "degenerate-5",
    "unitary-H(2,2)",
    "F(1,s=1/10)",
    "juxt(H(2,2),G(1),3/5)",
    "pad(whitney,1)",
]

_FIXED: dict[str, CatalogEntry] = {
    "example-4.4": CatalogEntry(
        "example-4.4",
        example_44,
        "degree-4 monomial map with a rank drop on w = 0",
    ),
    "example-4.6": CatalogEntry(
        "example-4.6",
        example_46,
        "degree-3 map with an isolated point of degeneracy 2",
    ),
    "example-4.7": CatalogEntry(
        "example-4.7",
        example_47,
        "undersized target count forces holomorphic degeneracy",
    ),
    "whitney": CatalogEntry(
        "whitney", whitney_map, "(z, zw, w^2); infinitesimally rigid"
    ),
    "tensor-source": CatalogEntry(
        "tensor-source",
        tensor_source_map,
        "(z, zw, zw^2, w^3); nondegenerate, tensors to a degenerate map",
    ),
    "tensor-example": CatalogEntry(
        "tensor-example",
        _tensor_example,
        "tensor-source tensored with whitney on its first component",
    ),
    "degenerate-5": CatalogEntry(
        "degenerate-5",
        degenerate_five_map,
        "five-component degenerate map with an explicit annihilating vector",
    ),
    "unitary-H(2,2)": CatalogEntry(
        "unitary-H(2,2)",
        _unitary_h22,
        "nontrivial unitary image of H(2,2); same deformation dimension",
    ),
}

_H_RE = re.compile(r"^H\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_G_RE = re.compile(r"^G\(\s*(\d+)\s*\)$")
_F_RE = re.compile(r"^F\(\s*(\d+)\s*,\s*s\s*=\s*(-?[0-9/.]+)\s*\)$")
_JUXT_RE = re.compile(r"^juxt\((.*)\)$")
_PAD_RE = re.compile(r"^pad\((.*),\s*(\d+)\)$")


def _split_args(body: str) -> list[str]:
    """Split on top-level commas only (keys may contain parentheses)."""
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return parts


def resolve(key: str) -> SphereMap:
    """Build the map a catalog key denotes; raises KeyError for unknown keys."""
    key = key.strip()
    if key in _FIXED:
        return _FIXED[key].build()
    m = _H_RE.match(key)
    if m:
        h = homogeneous_map(int(m.group(1)), int(m.group(2)))
        h.name = key
        return h
    m = _G_RE.match(key)
    if m:
        g = group_invariant_map(int(m.group(1)))
        g.name = key
        return g
    m = _F_RE.match(key)
    if m:
        f = family_map(int(m.group(1)), Fraction(m.group(2)))
        f.name = key
        return f
    m = _JUXT_RE.match(key)
    if m:
        args = _split_args(m.group(1))
        if len(args) != 3:
            raise KeyError(f"juxt needs three arguments: {key}")
        j = juxtapose(resolve(args[0]), resolve(args[1]), Fraction(args[2]))
        j.name = key
        return j
    m = _PAD_RE.match(key)
    if m:
        p = zero_pad(resolve(m.group(1)), int(m.group(2)))
        p.name = key
        return p
    raise KeyError(f"unknown catalog key: {key}")


def entry_note(key: str) -> str:
    if key in _FIXED:
        return _FIXED[key].note
    if _H_RE.match(key):
        return "homogeneous map: all degree-d monomials, multinomial coefficients"
    if _G_RE.match(key):
        return "group-invariant map with derived nonnegative coefficients"
    if _F_RE.match(key):
        return "rational family through the odd-degree homogeneous map"
    if key.startswith("juxt("):
        return "weighted direct sum; always holomorphically degenerate"
    if key.startswith("pad("):
        return "zero-padded map; always holomorphically degenerate"
    return ""


def default_catalog() -> list[tuple[str, SphereMap]]:
    """The fixed regression catalog, every entry validated on construction."""
    return [(k, resolve(k)) for k in DEFAULT_KEYS]
