"""Tower obstruction theory for lifting Maurer-Cartan elements.

An MC element of L/F_{n-1} lifts to L/F_n iff the curvature of any lift,
which is a 1-cocycle of the graded piece F_{n-1}L/F_nL, is a coboundary
there; the class is independent of the lift, and the fiber of lifts is a
torsor over the degree-0 cocycles of the piece.  The canonical lift choice
extends by zero on the weight-(n-1) generators, and eta is solved with
free variables zero, so every lift here is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact_la as la
from .algebras import LInftyAlgebra, quotient_truncation
from .complexes import coords, degree_window, from_coords, proj_below
from .graded import Element, LinftyError
from .mc import MCElement, curvature, is_mc


@dataclass
class ObstructionReport:
    level: int
    cocycle: Element
    class_trivial: bool
    eta: Element | None
    lifted: Element | None


@dataclass
class FirstObstruction:
    level: int
    cocycle: Element
    class_representative: Element


def _piece_basis(L: LInftyAlgebra, n: int, degree: int):
    return [g for g in L.space.generators
            if g.weight == n - 1 and g.degree == degree]


def _piece_d_matrix(L: LInftyAlgebra, n: int, degree: int):
    """Matrix of the graded-piece differential from degree to degree+1."""
    quo = quotient_truncation(L, n).algebra
    src = _piece_basis(L, n, degree)
    tgt = _piece_basis(L, n, degree + 1)
    d = quo.differential()
    rows = [[d(g).coeff(h) for g in src] for h in tgt]
    return rows, src, tgt


def _reduce_mod_image(L: LInftyAlgebra, n: int, v: Element) -> Element:
    """Canonical representative of [v] in H^1 of the graded piece."""
    rows, src, tgt = _piece_d_matrix(L, n, 0)
    if not tgt:
        return v
    img = [[rows[i][j] for i in range(len(tgt))] for j in range(len(src))]
    ech = la.row_space(img)
    vec = coords(v, tgt)
    for row in ech:
        p = next((j for j, x in enumerate(row) if x != 0), None)
        if p is not None and vec[p] != 0:
            f = vec[p] / row[p]
            vec = [x - f * y for x, y in zip(vec, row)]
    return from_coords(vec, tgt)


def obstruction_step(L: LInftyAlgebra, n: int, beta: Element,
                     lift: Element | None = None) -> ObstructionReport:
    """One tower step: lift an MC element of L/F_{n-1} into L/F_n.

    `lift` overrides the canonical choice (extend by zero on the new
    weight-(n-1) generators); it must project back to beta.  The resulting
    cocycle lives in the graded piece and its class does not depend on the
    choice.
    """
    if not 2 <= n <= L.bound:
        raise LinftyError("obstruction level out of range")
    below = quotient_truncation(L, n - 1).algebra
    if any(a.weight >= n - 1 for a in beta.terms):
        raise LinftyError("beta must live in the lower quotient")
    ok, residual = is_mc(below, beta)
    if not ok:
        raise LinftyError(f"beta is not Maurer-Cartan below; residual {residual!r}")
    quo = quotient_truncation(L, n).algebra
    a = beta if lift is None else lift
    if lift is not None and proj_below(lift, n - 1) != beta:
        raise LinftyError("lift does not project to beta")
    if any(a_.weight >= n for a_ in a.terms):
        raise LinftyError("lift must live in the level-n quotient")
    cocycle = curvature(quo, a)
    if any(at.weight != n - 1 for at in cocycle.terms):
        raise LinftyError("curvature left the graded piece")
    dq = quo.differential()
    if not proj_below(dq(cocycle), n).is_zero():
        raise LinftyError("obstruction cocycle is not closed")
    rows, src, tgt = _piece_d_matrix(L, n, 0)
    rhs = coords(cocycle, tgt)
    sol = la.solve(rows, rhs) if tgt else ([] if cocycle.is_zero() else None)
    if sol is None:
        return ObstructionReport(n, cocycle, False, None, None)
    eta = from_coords(sol, src)
    alpha = a - eta
    ok, residual = is_mc(quo, alpha)
    if not ok:
        raise LinftyError(f"lift verification failed; residual {residual!r}")
    return ObstructionReport(n, cocycle, True, eta, alpha)


def obstruction_class(L: LInftyAlgebra, n: int, beta: Element,
                      lift: Element | None = None) -> Element:
    """Canonical representative of the obstruction class at level n."""
    rep = obstruction_step(L, n, beta, lift=lift)
    return _reduce_mod_image(L, n, rep.cocycle)


def lift_mc_full(L: LInftyAlgebra, seed: Element):
    """Lift an MC element of the abelian quotient L/F_2 all the way up.

    Returns an MCElement of L, or the FirstObstruction met on the way.
    """
    if any(a.weight >= 2 for a in seed.terms):
        raise LinftyError("seed must live in L/F_2")
    quo2 = quotient_truncation(L, 2).algebra
    ok, residual = is_mc(quo2, seed)
    if not ok:
        raise LinftyError(f"seed is not a 0-cocycle; residual {residual!r}")
    current = seed
    for n in range(3, L.bound + 1):
        rep = obstruction_step(L, n, current)
        if not rep.class_trivial:
            return FirstObstruction(n, rep.cocycle,
                                    _reduce_mod_image(L, n, rep.cocycle))
        current = rep.lifted
    ok, residual = is_mc(L, current)
    if not ok:
        raise LinftyError(f"full lift failed verification; residual {residual!r}")
    return MCElement(L, current)


def fiber_torsor(L: LInftyAlgebra, n: int, beta: Element):
    """(base lift or None, echelon basis of Z^0 of the graded piece).

    When a lift exists, every alpha + eta with eta in the span is MC and
    every MC lift of beta arises this way.
    """
    rep = obstruction_step(L, n, beta)
    rows, src, _ = _piece_d_matrix(L, n, 0)
    if not src:
        basis = []
    elif not rows:
        basis = [Element.basis(g) for g in src]
    else:
        basis = [from_coords(v, src) for v in la.nullspace(rows)]
    return (rep.lifted if rep.class_trivial else None), basis
