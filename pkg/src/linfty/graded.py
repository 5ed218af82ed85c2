"""Graded vector spaces over Q with bounded filtrations.

Basis atoms carry a cohomological degree and a filtration weight.  Plain
`Generator` atoms span finite filtered spaces; `TensorAtom` (generator
tensor a monomial form) and `SumAtom` (tagged direct-sum component) let the
same element/word machinery run over path objects and pullbacks without a
finite basis enumeration.

Koszul signs follow the usual convention: transposing two odd letters
costs a sign, everything else commutes freely.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact_la import as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class LinftyError(ValueError):
    """Argument or validation error raised by library entry points."""


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    """Basis generator with id, cohomological degree, filtration weight."""

    gid: str
    degree: int
    weight: int = 1

    def __post_init__(self):
        if self.weight < 1:
            raise LinftyError(f"generator {self.gid}: weight must be >= 1")

    @property
    def key(self):
        return (0, self.gid)

    def __repr__(self):
        return self.gid


@dataclass(frozen=True)
class TensorAtom:
    """Generator tensor a monomial coefficient form (degree adds, weight kept)."""

    gen: Generator
    mono: tuple
    form_degree: int

    @property
    def degree(self) -> int:
        return self.gen.degree + self.form_degree

    @property
    def weight(self) -> int:
        return self.gen.weight

    @property
    def key(self):
        return (1, self.gen.gid, self.mono)

    def __repr__(self):
        return f"{self.gen.gid}*{self.mono}"


@dataclass(frozen=True)
class SumAtom:
    """Atom of a direct sum, tagged by side (0 = left, 1 = right)."""

    side: int
    atom: object

    @property
    def degree(self) -> int:
        return self.atom.degree

    @property
    def weight(self) -> int:
        return self.atom.weight

    @property
    def key(self):
        return (2, self.side, self.atom.key)

    def __repr__(self):
        return f"<{self.side}:{self.atom!r}>"


def atom_key(a):
    return a.key


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class Element:
    """Finite Q-linear combination of atoms."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for a, c in (terms.items() if isinstance(terms, dict) else terms):
                c = as_fraction(c)
                if c != 0:
                    cur = self.terms.get(a, ZERO) + c
                    if cur == 0:
                        self.terms.pop(a, None)
                    else:
                        self.terms[a] = cur

    @classmethod
    def basis(cls, atom, coeff=ONE) -> "Element":
        e = cls()
        c = as_fraction(coeff)
        if c != 0:
            e.terms[atom] = c
        return e

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        out = Element()
        out.terms = dict(self.terms)
        for a, c in other.terms.items():
            cur = out.terms.get(a, ZERO) + c
            if cur == 0:
                out.terms.pop(a, None)
            else:
                out.terms[a] = cur
        return out

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        out = Element()
        out.terms = {a: -c for a, c in self.terms.items()}
        return out

    def scale(self, c) -> "Element":
        c = as_fraction(c)
        out = Element()
        if c != 0:
            out.terms = {a: c * x for a, x in self.terms.items()}
        return out

    __rmul__ = scale
    __mul__ = scale

    def degree(self) -> int | None:
        """Common degree of the support, or None if inhomogeneous/zero."""
        degs = {a.degree for a in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def weight(self) -> int | None:
        """Filtration weight: min atom weight over the support (None for 0)."""
        if not self.terms:
            return None
        return min(a.weight for a in self.terms)

    def homogeneous(self, degree: int) -> bool:
        return all(a.degree == degree for a in self.terms)

    def restrict(self, pred) -> "Element":
        out = Element()
        out.terms = {a: c for a, c in self.terms.items() if pred(a)}
        return out

    def apply_linear(self, fn) -> "Element":
        """Extend an atom-wise map fn: atom -> Element linearly."""
        out = Element()
        for a, c in self.terms.items():
            out = out + fn(a).scale(c)
        return out

    def coeff(self, atom) -> Fraction:
        return self.terms.get(atom, ZERO)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda t: atom_key(t[0]))

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.sorted_items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{a!r}" for a, c in self.sorted_items())


# ---------------------------------------------------------------------------
# Koszul signs, shuffles, words
# ---------------------------------------------------------------------------

def koszul_sign(permutation, degrees) -> int:
    """Sign of rearranging (x_1..x_n) into (x_sigma(1)..x_sigma(n)).

    `permutation` lists the 1-based source indices sigma(1..n); the sign is
    the product of (-1) over inverted pairs whose two letters are both odd.
    """
    perm = list(permutation)
    degs = list(degrees)
    n = len(perm)
    if len(degs) != n:
        raise LinftyError("koszul_sign: permutation/degrees length mismatch")
    if sorted(perm) != list(range(1, n + 1)):
        raise LinftyError("koszul_sign: not a bijection on {1..n}")
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j] and degs[perm[i] - 1] % 2 and degs[perm[j] - 1] % 2:
                sign = -sign
    return sign


def shuffles(p: int, q: int) -> list[tuple[int, ...]]:
    """All (p,q)-shuffles of {1..p+q} as 1-based tuples (sigma(1),..).

    sigma is monotone on the first p slots and on the last q slots; there
    are binomial(p+q, p) of them, enumerated by the choice of first block.
    """
    if p < 0 or q < 0:
        raise LinftyError("shuffles: p, q must be >= 0")
    n = p + q
    out = []
    universe = list(range(1, n + 1))
    for first in itertools.combinations(universe, p):
        rest = tuple(i for i in universe if i not in set(first))
        out.append(first + rest)
    return out


@dataclass(frozen=True)
class Word:
    """Canonically ordered symmetric word with its normalization sign."""

    atoms: tuple
    sign: int = 1

    def degree(self) -> int:
        return sum(a.degree for a in self.atoms)

    def weight(self) -> int:
        return sum(a.weight for a in self.atoms)

    def __len__(self):
        return len(self.atoms)


def normalize_word(raw) -> Word | None:
    """Sort atoms into canonical order, tracking the Koszul sign.

    Returns None for the zero word (a repeated odd-degree atom).
    """
    atoms = list(raw)
    sign = 1
    # insertion sort; words are short, and we need the sign of each swap
    for i in range(1, len(atoms)):
        j = i
        while j > 0 and atom_key(atoms[j - 1]) > atom_key(atoms[j]):
            if atoms[j - 1].degree % 2 and atoms[j].degree % 2:
                sign = -sign
            atoms[j - 1], atoms[j] = atoms[j], atoms[j - 1]
            j -= 1
    for a, b in zip(atoms, atoms[1:]):
        if a == b and a.degree % 2:
            return None
    return Word(tuple(atoms), sign)


def word_degrees(atoms) -> list[int]:
    return [a.degree for a in atoms]


# ---------------------------------------------------------------------------
# finite filtered spaces
# ---------------------------------------------------------------------------

class FilteredSpace:
    """Finite Z-graded space with a bounded generator-aligned filtration.

    F_n = span of generators of weight >= n; the bound N has F_N = 0, so
    every generator weight is < N.
    """

    def __init__(self, generators, bound: int):
        gens = tuple(generators)
        if bound < 1:
            raise LinftyError("filtration bound must be >= 1")
        seen = set()
        for g in gens:
            if g.gid in seen:
                raise LinftyError(f"duplicate generator id {g.gid}")
            seen.add(g.gid)
            if g.weight >= bound:
                raise LinftyError(
                    f"generator {g.gid} has weight {g.weight} >= bound {bound}")
        self.generators = gens
        self.bound = bound
        self.by_id = {g.gid: g for g in gens}

    def basis(self, level: int = 1, degree: int | None = None):
        return [g for g in self.generators
                if g.weight >= level and (degree is None or g.degree == degree)]

    def degrees(self) -> list[int]:
        return sorted({g.degree for g in self.generators})

    def contains(self, g: Generator) -> bool:
        return self.by_id.get(g.gid) == g

    def element(self, coeffs: dict) -> Element:
        out = {}
        for gid, c in coeffs.items():
            if gid not in self.by_id:
                raise LinftyError(f"unknown generator id {gid}")
            out[self.by_id[gid]] = as_fraction(c)
        return Element(out)

    def __eq__(self, other):
        return (isinstance(other, FilteredSpace)
                and self.generators == other.generators
                and self.bound == other.bound)

    def __hash__(self):
        return hash((self.generators, self.bound))

    def __repr__(self):
        return f"FilteredSpace({[g.gid for g in self.generators]}, bound={self.bound})"


# ---------------------------------------------------------------------------
# linear maps between finite filtered spaces
# ---------------------------------------------------------------------------

class LinearMap:
    """Degree-shifting linear map given on source generators (absent = 0)."""

    def __init__(self, source: FilteredSpace, target: FilteredSpace,
                 shift: int, table: dict | None = None):
        self.source = source
        self.target = target
        self.shift = shift
        self.table = {}
        if table:
            for g, v in table.items():
                if not source.contains(g):
                    raise LinftyError(f"{g.gid} not in source space")
                if v.is_zero():
                    continue
                if not v.homogeneous(g.degree + shift):
                    raise LinftyError(
                        f"image of {g.gid} not homogeneous of degree {g.degree + shift}")
                self.table[g] = v

    @classmethod
    def identity(cls, space: FilteredSpace) -> "LinearMap":
        return cls(space, space, 0, {g: Element.basis(g) for g in space.generators})

    @classmethod
    def zero(cls, source: FilteredSpace, target: FilteredSpace, shift: int = 0):
        return cls(source, target, shift, {})

    def __call__(self, x) -> Element:
        if isinstance(x, Generator):
            return self.table.get(x, Element.zero())
        return x.apply_linear(lambda a: self.table.get(a, Element.zero()))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        table = {g: self(v) for g, v in other.table.items()}
        return LinearMap(other.source, self.target, self.shift + other.shift, table)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if other.shift != self.shift:
            raise LinftyError("cannot add maps of different shifts")
        table = dict(self.table)
        out = LinearMap(self.source, self.target, self.shift)
        for g in set(self.table) | set(other.table):
            v = self(g) + other(g)
            if not v.is_zero():
                out.table[g] = v
        return out

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.source, self.target, self.shift,
                         {g: v.scale(c) for g, v in self.table.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def filtration_violations(self) -> list[tuple[Generator, int, int]]:
        """Generators whose image drops filtration weight."""
        bad = []
        for g, v in self.table.items():
            w = v.weight()
            if w is not None and w < g.weight:
                bad.append((g, g.weight, w))
        return bad

    def is_filtered(self) -> bool:
        return not self.filtration_violations()

    def matrix(self, degree: int, level: int = 1):
        """Matrix (rows x cols) on the level-`level` piece in `degree`.

        Columns: source basis of given degree/level.  Rows: target basis of
        degree + shift at the same level.  Returns (rows, src_basis, tgt_basis).
        """
        src = self.source.basis(level, degree)
        tgt = self.target.basis(level, degree + self.shift)
        rows = [[self(g).coeff(h) for g in src] for h in tgt]
        return rows, src, tgt

    def equals(self, other: "LinearMap") -> bool:
        gens = set(self.table) | set(other.table)
        return self.shift == other.shift and all(self(g) == other(g) for g in gens)

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.source == other.source
                and self.target == other.target and self.equals(other))

    def __repr__(self):
        ent = ", ".join(f"{g.gid} -> {v!r}" for g, v in sorted(
            self.table.items(), key=lambda t: t[0].gid))
        return f"LinearMap[{self.shift}]({{{ent}}})"


def rref_solve(matrix, rhs):
    """Solve matrix * x = rhs exactly (free variables zero) or report None.

    Thin exact-linear-algebra entry point re-exported at package level; see
    `exact_la.solve` for the pivot conventions.
    """
    from . import exact_la
    return exact_la.solve([[as_fraction(x) for x in row] for row in matrix],
                          [as_fraction(b) for b in rhs])
