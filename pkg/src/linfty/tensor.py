"""Tensor products of bounded algebras with coefficient cdgas.

For a bounded filtered algebra L and a coefficient cdga B, the brackets on
L (tensor) B are

    (Q_B)^1_k(x_1 b_1, ..., x_k b_k) = (-1)^eps Q^1_k(x_1..x_k) b_1...b_k,
    eps = sum_{i<j} |b_i| |x_j|,

with the arity-1 map the tensor differential d (tensor) id + id (tensor)
delta.  Morphisms tensor the same way.  The filtration weight of x b is
the weight of x, so boundedness is preserved and all series stay finite.

Elements are Elements over TensorAtom(gen, mono); the underlying space is
infinite-dimensional in general, so this algebra is rule-backed rather
than table-backed and plugs into the same evaluation machinery through
`q1`/`comp1`.
"""
from __future__ import annotations

from fractions import Fraction

from .algebras import LInftyAlgebra, LInftyMorphism
from .coalgebra import expand_letters
from .forms import CDGA, QQ, QXQ, atom, coefficient_algebra, tensor_d
from .graded import Element, LinftyError, TensorAtom


def _mono_product(cdga: CDGA, monos) -> list:
    acc = [(Fraction(1), None)]
    first = True
    for m in monos:
        if first:
            acc = [(Fraction(1), m)]
            first = False
            continue
        nxt = []
        for c, cur in acc:
            for c2, m2 in cdga.mul(cur, m):
                nxt.append((c * c2, m2))
        acc = nxt
    return acc


class TensorAlgebra:
    """L (tensor) B with rule-backed brackets."""

    def __init__(self, L: LInftyAlgebra, B: CDGA):
        self.L = L
        self.B = B

    @property
    def bound(self) -> int:
        return self.L.bound

    def atom(self, gen, mono) -> TensorAtom:
        return atom(gen, mono, self.B)

    def embed(self, e: Element) -> Element:
        """x -> x (tensor) 1."""
        out = Element.zero()
        for g, c in e.terms.items():
            for cu, m in self.B.unit():
                out = out + Element.basis(self.atom(g, m), c * cu)
        return out

    def q1(self, k: int, atoms: tuple) -> Element:
        for a in atoms:
            if not isinstance(a, TensorAtom) or not self.L.space.contains(a.gen):
                raise LinftyError(f"atom {a!r} does not belong to this tensor algebra")
        if k == 1:
            return tensor_d(lambda g: self.L.Q.q1(1, (g,)), self.B, atoms[0])
        eps = sum(atoms[i].form_degree * atoms[j].gen.degree
                  for i in range(k) for j in range(i + 1, k))
        sign = Fraction(-1) if eps % 2 else Fraction(1)
        base = self.L.Q.q1(k, tuple(a.gen for a in atoms))
        if base.is_zero():
            return Element.zero()
        out = Element.zero()
        for cm, m in _mono_product(self.B, [a.mono for a in atoms]):
            for g, c in base.terms.items():
                out = out + Element.basis(self.atom(g, m), sign * cm * c)
        return out

    def q1_multi(self, letters) -> Element:
        out = Element.zero()
        k = len(letters)
        for atoms, c in expand_letters(letters).items():
            out = out + self.q1(k, atoms).scale(c)
        return out

    def d(self, e: Element) -> Element:
        return e.apply_linear(lambda a: self.q1(1, (a,)))

    def __repr__(self):
        return f"TensorAlgebra({self.L!r}, {self.B.name})"


class TensorMorphism:
    """Phi (tensor) B as a rule-backed morphism family between tensor algebras."""

    def __init__(self, Phi: LInftyMorphism, B: CDGA):
        self.Phi = Phi
        self.B = B
        self.source = TensorAlgebra(Phi.source, B)
        self.target = TensorAlgebra(Phi.target, B)

    @property
    def bound(self) -> int:
        return self.Phi.source.bound

    def comp1(self, k: int, atoms: tuple) -> Element:
        eps = sum(atoms[i].form_degree * atoms[j].gen.degree
                  for i in range(k) for j in range(i + 1, k))
        sign = Fraction(-1) if eps % 2 else Fraction(1)
        base = self.Phi.comp1(k, tuple(a.gen for a in atoms))
        if base.is_zero():
            return Element.zero()
        out = Element.zero()
        for cm, m in _mono_product(self.B, [a.mono for a in atoms]):
            for g, c in base.terms.items():
                out = out + Element.basis(self.target.atom(g, m), sign * cm * c)
        return out

    def comp1_multi(self, letters) -> Element:
        out = Element.zero()
        k = len(letters)
        for atoms, c in expand_letters(letters).items():
            out = out + self.comp1(k, atoms).scale(c)
        return out


def tensor_cdga(L: LInftyAlgebra, B) -> TensorAlgebra:
    """L (tensor) B for a supported coefficient algebra (name or CDGA)."""
    if isinstance(B, str):
        B = coefficient_algebra(B)
    if not isinstance(B, CDGA):
        raise LinftyError(f"unsupported coefficient algebra {B!r}")
    return TensorAlgebra(L, B)


def tensor_morphism(Phi: LInftyMorphism, B) -> TensorMorphism:
    if isinstance(B, str):
        B = coefficient_algebra(B)
    if not isinstance(B, CDGA):
        raise LinftyError(f"unsupported coefficient algebra {B!r}")
    return TensorMorphism(Phi, B)


# ---------------------------------------------------------------------------
# canonical identifications for the degenerate coefficients
# ---------------------------------------------------------------------------

def collapse_trivial(e: Element) -> Element:
    """The canonical isomorphism L (tensor) Q = L on elements."""
    out = Element.zero()
    for a, c in e.terms.items():
        out = out + Element.basis(a.gen, c)
    return out


def embed_trivial(L: LInftyAlgebra, e: Element) -> Element:
    return TensorAlgebra(L, QQ).embed(e)


def split_product_coefficients(e: Element) -> tuple[Element, Element]:
    """L (tensor) (QxQ) = L + L on elements: the two idempotent components."""
    left, right = Element.zero(), Element.zero()
    for a, c in e.terms.items():
        if a.mono == 0:
            left = left + Element.basis(a.gen, c)
        elif a.mono == 1:
            right = right + Element.basis(a.gen, c)
        else:
            raise LinftyError("not a QxQ coefficient element")
    return left, right
