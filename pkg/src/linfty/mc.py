"""Curvature, Maurer-Cartan elements, pushforward, and twisting.

All series terminate before the filtration bound, so every formula here is
a finite exact sum:

    curv(a)      = sum_{m>=1} (1/m!) Q^1_m(a...a)
    Phi_*(a)     = sum_{m>=1} (1/m!) Phi^1_m(a...a)
    (Q^a)^1_m    = sum_{k>=0} (1/k!) Q^1_{k+m}(a...a, x_1...x_m)
    (Phi^a)^1_m  = sum_{k>=0} (1/k!) Phi^1_{k+m}(a...a, x_1...x_m)

Twisting by a non-MC element is exposed as twist_raw: its output can fail
the square-zero test, exactly as the curvature identities predict, and is
the hook for testing those identities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebras import (LInftyAlgebra, LInftyMorphism, ValidationReport,
                       validate_algebra, validate_morphism)
from .coalgebra import MorphismMaps, StructureMaps, expand_letters, iter_basis_words
from .graded import Element, LinftyError


def _check_degree_zero(a: Element) -> None:
    if not a.homogeneous(0):
        raise LinftyError("expected a homogeneous degree-0 element")


def _q1_multi(alg, letters) -> Element:
    out = Element.zero()
    k = len(letters)
    for atoms, c in expand_letters(letters).items():
        out = out + alg.q1(k, atoms).scale(c)
    return out


def _comp1_multi(phi, letters) -> Element:
    out = Element.zero()
    k = len(letters)
    for atoms, c in expand_letters(letters).items():
        out = out + phi.comp1(k, atoms).scale(c)
    return out


def curvature(L, a: Element) -> Element:
    """curv(a) = da + sum_{m>=2} (1/m!) Q^1_m(a..a); terminates at the bound."""
    _check_degree_zero(a)
    out = Element.zero()
    for m in range(1, L.bound):
        term = _q1_multi(L, [a] * m)
        if not term.is_zero():
            out = out + term.scale(Fraction(1, math.factorial(m)))
    return out


def is_mc(L, a: Element):
    """(flag, residual): residual is the curvature, zero exactly when MC."""
    r = curvature(L, a)
    return r.is_zero(), r


@dataclass
class MCElement:
    """A degree-0 element with vanishing curvature, checked on construction."""
    owner: object
    value: Element

    def __post_init__(self):
        ok, residual = is_mc(self.owner, self.value)
        if not ok:
            raise LinftyError(f"not Maurer-Cartan; curvature residual {residual!r}")


def pushforward(Phi, a: Element, bound: int | None = None) -> Element:
    """Phi_*(a) = sum_{m>=1} (1/m!) Phi^1(a..a)."""
    _check_degree_zero(a)
    if bound is None:
        bound = Phi.source.bound if hasattr(Phi.source, "bound") else Phi.bound
    out = Element.zero()
    for m in range(1, bound):
        term = _comp1_multi(Phi, [a] * m)
        if not term.is_zero():
            out = out + term.scale(Fraction(1, math.factorial(m)))
    return out


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------

def twist_raw(L: LInftyAlgebra, a: Element) -> LInftyAlgebra:
    """Twist by an arbitrary degree-0 element.

    The output carries the shifted brackets but is a valid algebra only
    when a is Maurer-Cartan; validate_algebra on the result sees exactly
    the failure the curvature identities predict.
    """
    _check_degree_zero(a)
    sp = L.space
    q = StructureMaps(sp, 1)
    for m in range(1, sp.bound):
        for word in iter_basis_words(sp, m):
            acc = Element.zero()
            for k in range(0, sp.bound - m):
                letters = [a] * k + [Element.basis(g) for g in word]
                term = _q1_multi(L, letters)
                if not term.is_zero():
                    acc = acc + term.scale(Fraction(1, math.factorial(k)))
            if not acc.is_zero():
                q.set_entry(m, word, acc)
    return LInftyAlgebra(sp, q)


def twist_algebra(L: LInftyAlgebra, alpha) -> LInftyAlgebra:
    """The twisted algebra L^alpha for a Maurer-Cartan alpha."""
    value = alpha.value if isinstance(alpha, MCElement) else alpha
    ok, residual = is_mc(L, value)
    if not ok:
        raise LinftyError(f"twist requires a Maurer-Cartan element; "
                          f"curvature residual {residual!r}")
    out = twist_raw(L, value)
    rep = validate_algebra(out)
    if not rep.ok:
        raise LinftyError(f"twisted algebra failed validation: {rep.describe()}")
    return out


def twist_morphism(Phi: LInftyMorphism, alpha) -> LInftyMorphism:
    """Phi^alpha: L^alpha -> L'^{Phi_*(alpha)} for Maurer-Cartan alpha."""
    value = alpha.value if isinstance(alpha, MCElement) else alpha
    ok, residual = is_mc(Phi.source, value)
    if not ok:
        raise LinftyError(f"twist requires a Maurer-Cartan element; "
                          f"curvature residual {residual!r}")
    src = twist_algebra(Phi.source, value)
    beta = pushforward(Phi, value)
    tgt = twist_algebra(Phi.target, beta)
    maps = MorphismMaps(src.space, tgt.space)
    for m in range(1, src.bound):
        for word in iter_basis_words(src.space, m):
            acc = Element.zero()
            for k in range(0, src.bound - m):
                letters = [value] * k + [Element.basis(g) for g in word]
                term = _comp1_multi(Phi, letters)
                if not term.is_zero():
                    acc = acc + term.scale(Fraction(1, math.factorial(k)))
            if not acc.is_zero():
                maps.set_entry(m, word, acc)
    out = LInftyMorphism(src, tgt, maps)
    rep = validate_morphism(out)
    if not rep.ok:
        raise LinftyError(f"twisted morphism failed validation: {rep.describe()}")
    return out


# ---------------------------------------------------------------------------
# identity checks used by the property suites
# ---------------------------------------------------------------------------

def bianchi_residual(L, a: Element) -> Element:
    """d(curv a) + sum_m (1/m!) Q^1(a..a, curv a); zero for every a."""
    _check_degree_zero(a)
    cv = curvature(L, a)
    out = _q1_multi(L, [cv])
    for m in range(1, L.bound - 1):
        term = _q1_multi(L, [a] * m + [cv])
        if not term.is_zero():
            out = out + term.scale(Fraction(1, math.factorial(m)))
    return out


def curvature_naturality_residual(Phi, a: Element,
                                  target=None, bound=None) -> Element:
    """curv(Phi_* a) - sum_m (1/m!) Phi^1_{m+1}(a..a, curv a)."""
    if target is None:
        target = Phi.target
    if bound is None:
        bound = Phi.source.bound
    cv_src = curvature(Phi.source, a)
    lhs = curvature(target, pushforward(Phi, a, bound=bound))
    rhs = Element.zero()
    for m in range(0, bound - 1):
        term = _comp1_multi(Phi, [a] * m + [cv_src])
        if not term.is_zero():
            rhs = rhs + term.scale(Fraction(1, math.factorial(m)))
    return lhs - rhs


def twist_square_residual(L: LInftyAlgebra, a: Element, x) -> Element:
    """d^a d^a(x) + pr Q^a(curv(a).x); zero for every a and generator x."""
    ta = twist_raw(L, a)
    cv = curvature(L, a)
    lhs = ta.Q.q1_multi([ta.Q.q1_multi([Element.basis(x)])])
    rhs = ta.Q.q1_multi([cv, Element.basis(x)])
    return lhs + rhs


def twist_addition_residual(L: LInftyAlgebra, a: Element, b: Element) -> Element:
    """curv(a+b) - curv(a) - d^a(b) - sum_{m>=2} (1/m!) (Q^a)^1_m(b..b)."""
    ta = twist_raw(L, a)
    out = curvature(L, a + b) - curvature(L, a)
    for m in range(1, L.bound):
        term = _q1_multi(ta, [b] * m)
        if not term.is_zero():
            out = out - term.scale(Fraction(1, math.factorial(m)))
    return out
