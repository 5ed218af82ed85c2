"""Coefficient cdgas for tensoring: Q, QxQ, and polynomial forms on simplices.

Supported coefficient algebras: the ground field Q, the product QxQ, and
the polynomial de Rham forms Omega1, Omega2 on the geometric 1- and
2-simplex.  Monomial bases keep all arithmetic exact:

  Omega1: z^j and z^j dz, with z the barycentric coordinate t_0 (the last
          coordinate t_1 = 1 - z is eliminated); faces of the 1-simplex are
          then the evaluations d_i = ev at z = i.
  Omega2: t_0^a t_1^b dt_S for S within {0,1}; t_2 = 1 - t_0 - t_1 is
          eliminated, dt_2 = -(dt_0 + dt_1).

Faces substitute t_i = 0 and renumber; degeneracies substitute
t_i -> t_i + t_{i+1} (standard cosimplicial structure).

FormElement helpers at the bottom extend generator-wise operations to
elements over `TensorAtom`s with the usual Koszul signs.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .graded import Element, LinftyError, TensorAtom

ONE = Fraction(1)


class CDGA:
    """Monomial-basis graded-commutative dg algebra over Q."""

    name = "?"
    dim = None  # simplicial dimension, None for non-simplicial coefficients

    def mono_degree(self, m) -> int:
        raise NotImplementedError

    def mul(self, m1, m2) -> list:
        """Product of basis monomials as [(coeff, mono)]."""
        raise NotImplementedError

    def diff(self, m) -> list:
        """Differential of a basis monomial as [(coeff, mono)]."""
        raise NotImplementedError

    def unit(self) -> list:
        """The algebra unit as [(coeff, mono)]."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalsCDGA(CDGA):
    """The ground field, concentrated in degree 0."""

    name = "Q"
    dim = 0

    def mono_degree(self, m):
        return 0

    def mul(self, m1, m2):
        return [(ONE, ())]

    def diff(self, m):
        return []

    def unit(self):
        return [(ONE, ())]


class ProductCDGA(CDGA):
    """Q x Q with idempotent basis e_0, e_1 (monos 0 and 1)."""

    name = "QxQ"

    def mono_degree(self, m):
        return 0

    def mul(self, m1, m2):
        return [(ONE, m1)] if m1 == m2 else []

    def diff(self, m):
        return []

    def unit(self):
        return [(ONE, 0), (ONE, 1)]


class Omega1(CDGA):
    """Polynomial forms on the 1-simplex: monos (j, 0) = z^j, (j, 1) = z^j dz."""

    name = "Omega1"
    dim = 1

    def mono_degree(self, m):
        return m[1]

    def mul(self, m1, m2):
        (j1, d1), (j2, d2) = m1, m2
        if d1 and d2:
            return []
        return [(ONE, (j1 + j2, d1 or d2))]

    def diff(self, m):
        j, dz = m
        if dz or j == 0:
            return []
        return [(Fraction(j), (j - 1, 1))]

    def unit(self):
        return [(ONE, (0, 0))]

    def evaluate(self, m, value: Fraction) -> Fraction:
        """ev at z = value on a monomial (dz components die)."""
        j, dz = m
        if dz:
            return Fraction(0)
        return Fraction(value) ** j

    def integrate0(self, m) -> list:
        """z^j dz -> z^(j+1)/(j+1); zero on function monomials."""
        j, dz = m
        if not dz:
            return []
        return [(Fraction(1, j + 1), (j + 1, 0))]

    def reverse(self, m) -> list:
        """Pullback along z -> 1 - z (dz -> -dz)."""
        j, dz = m
        out = []
        for i in range(j + 1):
            c = Fraction(math.comb(j, i) * (-1) ** i)
            out.append((c if not dz else -c, (i, dz)))
        return out


class Omega2(CDGA):
    """Polynomial forms on the 2-simplex: monos (a, b, S) = t0^a t1^b dt_S."""

    name = "Omega2"
    dim = 2

    def mono_degree(self, m):
        return len(m[2])

    def mul(self, m1, m2):
        (a1, b1, s1), (a2, b2, s2) = m1, m2
        if set(s1) & set(s2):
            return []
        merged = s1 + s2
        sign = 1
        items = list(merged)
        for i in range(1, len(items)):
            j = i
            while j > 0 and items[j - 1] > items[j]:
                items[j - 1], items[j] = items[j], items[j - 1]
                sign = -sign
                j -= 1
        return [(Fraction(sign), (a1 + a2, b1 + b2, tuple(items)))]

    def diff(self, m):
        a, b, s = m
        out = []
        for i, exp in ((0, a), (1, b)):
            if exp == 0 or i in s:
                continue
            sign = (-1) ** sum(1 for t in s if t < i)
            mono = ((a - 1, b) if i == 0 else (a, b - 1)) + (tuple(sorted(s + (i,))),)
            out.append((Fraction(sign * exp), mono))
        return out

    def unit(self):
        return [(ONE, (0, 0, ()))]


QQ = RationalsCDGA()
QXQ = ProductCDGA()
OMEGA1 = Omega1()
OMEGA2 = Omega2()

COEFFICIENTS = {"Q": QQ, "QxQ": QXQ, "Omega1": OMEGA1, "Omega2": OMEGA2}


def coefficient_algebra(name: str) -> CDGA:
    try:
        return COEFFICIENTS[name]
    except KeyError:
        raise LinftyError(
            f"unsupported coefficient algebra {name!r}; "
            f"supported: {sorted(COEFFICIENTS)}") from None


# ---------------------------------------------------------------------------
# simplicial structure for n <= 2
# ---------------------------------------------------------------------------

def _binomial_sub(j: int, dz_part) -> list:
    # (t0 + t1)^j (optionally times dt0 + dt1) inside Omega2
    out = []
    for i in range(j + 1):
        c = Fraction(math.comb(j, i))
        if dz_part is None:
            out.append((c, (j - i, i, ())))
        else:
            out.append((c, (j - i, i, (0,))))
            out.append((c, (j - i, i, (1,))))
    return out


def face_mono(n: int, i: int, m) -> list:
    """Face map Omega_n -> Omega_{n-1}: set t_i = 0 and renumber."""
    if n == 1:
        if i not in (0, 1):
            raise LinftyError("face index out of range")
        j, dz = m
        if dz:
            return []
        return [(ONE, ())] if (i == 1 or j == 0) else []
    if n == 2:
        a, b, s = m
        if i == 0:
            if a > 0 or 0 in s:
                return []
            return [(ONE, (b, 1 if s else 0))]
        if i == 1:
            if b > 0 or 1 in s:
                return []
            return [(ONE, (a, 1 if s else 0))]
        if i == 2:
            # t1 -> 1 - t0, dt1 -> -dt0; t0 -> z
            if s == (0, 1):
                return []
            out = []
            for k in range(b + 1):
                c = Fraction(math.comb(b, k) * (-1) ** k)
                if s == ():
                    out.append((c, (a + k, 0)))
                elif s == (0,):
                    out.append((c, (a + k, 1)))
                else:  # s == (1,)
                    out.append((-c, (a + k, 1)))
            return out
    raise LinftyError(f"face: unsupported dimension {n}")


def degeneracy_mono(n: int, i: int, m) -> list:
    """Degeneracy map Omega_n -> Omega_{n+1}: t_i -> t_i + t_{i+1}."""
    if n == 0:
        if i != 0:
            raise LinftyError("degeneracy index out of range")
        return [(ONE, (0, 0))]
    if n == 1:
        j, dz = m
        if i == 0:
            # z -> t0 + t1, dz -> dt0 + dt1
            return _binomial_sub(j, dz_part=True) if dz else _binomial_sub(j, None)
        if i == 1:
            # z -> t0, dz -> dt0
            return [(ONE, (j, 0, (0,) if dz else ()))]
        raise LinftyError("degeneracy index out of range")
    raise LinftyError(f"degeneracy: unsupported dimension {n}")


def simplex_cdga(n: int) -> CDGA:
    return {0: QQ, 1: OMEGA1, 2: OMEGA2}[n]


# ---------------------------------------------------------------------------
# FormElement helpers: Elements over TensorAtom(gen, mono)
# ---------------------------------------------------------------------------

def atom(gen, mono, cdga: CDGA) -> TensorAtom:
    return TensorAtom(gen, mono, cdga.mono_degree(mono))


def embed_unit(elt: Element, cdga: CDGA) -> Element:
    """x -> x (tensor) 1."""
    out = Element.zero()
    for g, c in elt.terms.items():
        for cu, m in cdga.unit():
            out = out + Element.basis(atom(g, m, cdga), c * cu)
    return out


def tensor_d(d_fn, cdga: CDGA, a: TensorAtom) -> Element:
    """(d tensor id + id tensor delta) on a basis atom, with Koszul sign."""
    out = Element.zero()
    dv = d_fn(a.gen)
    for g, c in dv.terms.items():
        out = out + Element.basis(TensorAtom(g, a.mono, a.form_degree), c)
    sign = -1 if a.gen.degree % 2 else 1
    for c, m in cdga.diff(a.mono):
        out = out + Element.basis(atom(a.gen, m, cdga), c * sign)
    return out


def map_form(mono_fn, src_cdga: CDGA, tgt_cdga: CDGA, a: TensorAtom) -> Element:
    """id tensor (cdga morphism) on a basis atom; degree-0 algebra maps need
    no Koszul sign."""
    out = Element.zero()
    for c, m in mono_fn(a.mono):
        out = out + Element.basis(atom(a.gen, m, tgt_cdga), c)
    return out


def map_gen(lin_fn, a: TensorAtom) -> Element:
    """(linear map tensor id): apply lin_fn to the generator, keep the form."""
    out = Element.zero()
    for g, c in lin_fn(a.gen).terms.items():
        out = out + Element.basis(TensorAtom(g, a.mono, a.form_degree), c)
    return out


def evaluate_at(value: Fraction, a: TensorAtom) -> Element:
    """ev at z = value on an Omega1 atom (strict cdga morphism to Q)."""
    c = OMEGA1.evaluate(a.mono, value)
    return Element.basis(a.gen, c) if c != 0 else Element.zero()


def integrate0_atom(a: TensorAtom) -> Element:
    """Integration from 0 on the form factor, with the sign (-1)^{|gen|}.

    This is the contraction witness: on x (tensor) z^j dz it returns
    (-1)^{|x|} x (tensor) z^{j+1}/(j+1), zero on function monomials, and
    satisfies d c + c d = id - (unit embed) ev_0 exactly.
    """
    out = Element.zero()
    sign = -1 if a.gen.degree % 2 else 1
    for c, m in OMEGA1.integrate0(a.mono):
        out = out + Element.basis(atom(a.gen, m, OMEGA1), c * sign)
    return out


def reverse_path_atom(a: TensorAtom) -> Element:
    """Pullback along z -> 1 - z on an Omega1 atom (swaps the endpoints)."""
    out = Element.zero()
    for c, m in OMEGA1.reverse(a.mono):
        out = out + Element.basis(atom(a.gen, m, OMEGA1), c)
    return out
