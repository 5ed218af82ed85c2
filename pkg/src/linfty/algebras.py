"""Bounded filtered shifted L-infinity algebras and weak morphisms.

An algebra is a finite filtered space with a degree +1 bracket family
Q^1_k (k = 1 is the differential) whose coderivation extension squares to
zero and respects weight additivity.  Morphisms are coalgebra-morphism
corestrictions Phi^1_k compatible with the codifferentials and weights.
Validation is report-valued; every constructor stays usable on raw data so
that deliberately broken structures (perturbation tests, raw twists) can
be inspected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import complexes as cx
from . import exact_la as la
from .coalgebra import (MorphismMaps, StructureMaps, check_filtration_compat,
                        coderivation_after_morphism_comp1,
                        coderivation_square_comp1, compose_morphisms,
                        iter_basis_words, morphism_after_coderivation_comp1,
                        morphism_component)
from .graded import (Element, FilteredSpace, Generator, LinearMap,
                     LinftyError)


class LInftyAlgebra:
    """Filtered space plus degree +1 brackets; arity 1 is the differential."""

    def __init__(self, space: FilteredSpace, brackets: StructureMaps):
        if brackets.space != space:
            raise LinftyError("brackets must live on the algebra's space")
        if brackets.degree != 1:
            raise LinftyError("brackets must have degree +1")
        self.space = space
        self.Q = brackets

    @property
    def bound(self) -> int:
        return self.space.bound

    def q1(self, k: int, atoms) -> Element:
        return self.Q.q1(k, atoms)

    def differential(self) -> LinearMap:
        table = {}
        for g in self.space.generators:
            v = self.Q.q1(1, (g,))
            if not v.is_zero():
                table[g] = v
        return LinearMap(self.space, self.space, 1, table)

    def complex(self) -> cx.FilteredComplex:
        return cx.FilteredComplex(self.space, self.differential())

    def is_abelian(self) -> bool:
        return all(k == 1 for k in self.Q.arities())

    def element(self, coeffs: dict) -> Element:
        return self.space.element(coeffs)

    def __eq__(self, other):
        return (isinstance(other, LInftyAlgebra)
                and self.space == other.space and self.Q == other.Q)

    def __repr__(self):
        return f"LInftyAlgebra({self.space!r})"


class LInftyMorphism:
    """Weak morphism between algebras, stored by its corestriction family."""

    def __init__(self, source: LInftyAlgebra, target: LInftyAlgebra,
                 maps: MorphismMaps):
        if maps.space != source.space or maps.target != target.space:
            raise LinftyError("morphism tables must match source/target spaces")
        self.source = source
        self.target = target
        self.maps = maps

    def comp1(self, k: int, atoms) -> Element:
        return self.maps.comp1(k, atoms)

    def linear_map(self) -> LinearMap:
        table = {}
        for g in self.source.space.generators:
            v = self.maps.comp1(1, (g,))
            if not v.is_zero():
                table[g] = v
        return LinearMap(self.source.space, self.target.space, 0, table)

    def chain_map(self) -> cx.ChainMap:
        return cx.ChainMap(self.source.complex(), self.target.complex(),
                           self.linear_map())

    def is_strict(self) -> bool:
        return all(k == 1 for k in self.maps.arities())

    @classmethod
    def strict(cls, source, target, linear_table) -> "LInftyMorphism":
        return cls(source, target,
                   MorphismMaps.strict(source.space, target.space, linear_table))

    @classmethod
    def identity(cls, algebra: LInftyAlgebra) -> "LInftyMorphism":
        return cls(algebra, algebra, MorphismMaps.identity(algebra.space))

    def compose(self, other: "LInftyMorphism") -> "LInftyMorphism":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise LinftyError("composition spaces do not match")
        return LInftyMorphism(other.source, self.target,
                              compose_morphisms(self.maps, other.maps))

    def __eq__(self, other):
        return (isinstance(other, LInftyMorphism) and self.maps == other.maps)

    def __repr__(self):
        return f"LInftyMorphism({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "pass"
        lines = [f"{kind} at arity {k} on word ({'.'.join(a.gid for a in w)}): {detail}"
                 for kind, k, w, detail in self.failures]
        return "fail\n" + "\n".join(lines)


def validate_algebra(L: LInftyAlgebra) -> ValidationReport:
    """Check Q.Q = 0 arity by arity, degrees, and weight additivity."""
    failures = []
    compat = check_filtration_compat(L.Q)
    for k, atoms, need, got in compat.violations:
        failures.append(("weight", k, atoms, f"word weight {need}, value weight {got}"))
    for n in range(1, L.bound):
        for word in iter_basis_words(L.space, n):
            sq = coderivation_square_comp1(L.Q, n, word)
            if not sq.is_zero():
                failures.append(("square", n, word, f"(QQ)^1 = {sq!r}"))
    return ValidationReport(not failures, failures)


def validate_morphism(Phi: LInftyMorphism) -> ValidationReport:
    """Check Phi Q = Q' Phi componentwise plus weight additivity."""
    failures = []
    compat = check_filtration_compat(Phi.maps)
    for k, atoms, need, got in compat.violations:
        failures.append(("weight", k, atoms, f"word weight {need}, value weight {got}"))
    for n in range(1, Phi.source.bound):
        for word in iter_basis_words(Phi.source.space, n):
            lhs = morphism_after_coderivation_comp1(Phi.maps, Phi.source.Q, n, word)
            rhs = coderivation_after_morphism_comp1(Phi.target.Q, Phi.maps, n, word)
            if lhs != rhs:
                failures.append(("morphism", n, word,
                                 f"(Phi Q)^1 = {lhs!r}, (Q' Phi)^1 = {rhs!r}"))
    return ValidationReport(not failures, failures)


def abelian_algebra(C: cx.FilteredComplex) -> LInftyAlgebra:
    """A complex viewed as an abelian algebra (differential only)."""
    q = StructureMaps(C.space, 1)
    for g in C.space.generators:
        v = C.d(g)
        if not v.is_zero():
            q.set_entry(1, (g,), v)
    return LInftyAlgebra(C.space, q)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

@dataclass
class ProductResult:
    algebra: LInftyAlgebra
    proj_left: LInftyMorphism
    proj_right: LInftyMorphism
    incl_left: LInftyMorphism
    incl_right: LInftyMorphism
    left_at: dict
    right_at: dict


def product(L: LInftyAlgebra, R: LInftyAlgebra,
            left_prefix: str = "l.", right_prefix: str = "r.") -> ProductResult:
    """Direct sum with componentwise brackets; mixed words bracket to zero."""
    left_at = {g: Generator(left_prefix + g.gid, g.degree, g.weight)
               for g in L.space.generators}
    right_at = {g: Generator(right_prefix + g.gid, g.degree, g.weight)
                for g in R.space.generators}
    bound = max(L.bound, R.bound)
    sp = FilteredSpace(list(left_at.values()) + list(right_at.values()), bound)
    q = StructureMaps(sp, 1)
    for at, alg in ((left_at, L), (right_at, R)):
        def emb(e, at=at):
            return Element({at[g]: c for g, c in e.terms.items()})
        for k, atoms, v in alg.Q.entries():
            q.set_entry(k, tuple(at[a] for a in atoms), emb(v))
    P = LInftyAlgebra(sp, q)
    pl = LInftyMorphism.strict(P, L, {v: Element.basis(g) for g, v in left_at.items()})
    prr = LInftyMorphism.strict(P, R, {v: Element.basis(g) for g, v in right_at.items()})
    il = LInftyMorphism.strict(L, P, {g: Element.basis(v) for g, v in left_at.items()})
    ir = LInftyMorphism.strict(R, P, {g: Element.basis(v) for g, v in right_at.items()})
    return ProductResult(P, pl, prr, il, ir, left_at, right_at)


def pair_into_product(prod: ProductResult, A: LInftyMorphism,
                      B: LInftyMorphism) -> LInftyMorphism:
    """The universal morphism (A, B): Z -> L + R for a shared source."""
    if A.source is not B.source and A.source.space != B.source.space:
        raise LinftyError("paired morphisms must share a source")
    maps = MorphismMaps(A.source.space, prod.algebra.space)
    for k in range(1, A.source.bound):
        for word in iter_basis_words(A.source.space, k):
            va = A.comp1(k, word)
            vb = B.comp1(k, word)
            v = Element({prod.left_at[g]: c for g, c in va.terms.items()}) + \
                Element({prod.right_at[g]: c for g, c in vb.terms.items()})
            if not v.is_zero():
                maps.set_entry(k, word, v)
    return LInftyMorphism(A.source, prod.algebra, maps)


# ---------------------------------------------------------------------------
# quotient towers
# ---------------------------------------------------------------------------

@dataclass
class QuotientResult:
    algebra: LInftyAlgebra
    projection: LInftyMorphism          # p_(n): L -> L/F_n
    graded_piece: LInftyAlgebra         # F_{n-1}L / F_nL as an abelian algebra
    piece_embedding: LInftyMorphism     # strict inclusion of the piece


def quotient_truncation(L: LInftyAlgebra, n: int) -> QuotientResult:
    """L/F_n as an algebra bounded at n, with the tower data around it."""
    if not 1 <= n <= L.bound:
        raise LinftyError("truncation level out of range")
    kept = [g for g in L.space.generators if g.weight < n]
    sp = FilteredSpace(kept, n)
    q = StructureMaps(sp, 1)
    for k, atoms, v in L.Q.entries():
        if k >= n:
            continue
        if any(a.weight >= n for a in atoms):
            continue
        pv = cx.proj_below(v, n)
        if not pv.is_zero():
            q.set_entry(k, atoms, pv)
    quo = LInftyAlgebra(sp, q)
    proj = LInftyMorphism.strict(
        L, quo, {g: Element.basis(g) for g in kept})
    piece_gens = [g for g in kept if g.weight == n - 1]
    psp = FilteredSpace(piece_gens, max(n, 2))
    pq = StructureMaps(psp, 1)
    for g in piece_gens:
        v = cx.proj_below(L.Q.q1(1, (g,)), n).restrict(lambda a: a.weight == n - 1)
        if not v.is_zero():
            pq.set_entry(1, (g,), v)
    piece = LInftyAlgebra(psp, pq)
    emb = LInftyMorphism.strict(piece, quo,
                                {g: Element.basis(g) for g in piece_gens})
    return QuotientResult(quo, proj, piece, emb)


def step_projection(L: LInftyAlgebra, n: int) -> LInftyMorphism:
    """The tower step L/F_{n+1} -> L/F_n."""
    top = quotient_truncation(L, n + 1).algebra
    bot = quotient_truncation(L, n).algebra
    return LInftyMorphism.strict(
        top, bot, {g: Element.basis(g) for g in bot.space.generators})


def quotient_morphism(Phi: LInftyMorphism, n: int) -> LInftyMorphism:
    """Phi_(n): L/F_n -> L'/F_n induced on the truncations."""
    src = quotient_truncation(Phi.source, n).algebra
    tgt = quotient_truncation(Phi.target, n).algebra
    maps = MorphismMaps(src.space, tgt.space)
    for k, atoms, v in Phi.maps.entries():
        if k >= n or any(a.weight >= n for a in atoms):
            continue
        pv = cx.proj_below(v, n)
        if not pv.is_zero():
            maps.set_entry(k, atoms, pv)
    return LInftyMorphism(src, tgt, maps)


# ---------------------------------------------------------------------------
# lower central series
# ---------------------------------------------------------------------------

@dataclass
class LCSResult:
    subspaces: list          # subspaces[k-1] = list of Elements spanning Gamma_k
    nilpotency_index: int    # first k with Gamma_k = 0

    def dimension(self, k: int) -> int:
        return len(self.subspaces[k - 1]) if k <= len(self.subspaces) else 0


def lower_central_series(L: LInftyAlgebra) -> LCSResult:
    """Gamma_1 = L; Gamma_k = sum of bracket images per the inductive formula."""
    gammas = [[Element.basis(g) for g in L.space.generators]]
    k = 2
    while True:
        spans_by_degree: dict[int, list] = {}
        vectors: list[Element] = []
        arities = [m for m in L.Q.arities() if m >= 2]
        import itertools as it
        for m in arities:
            for idxs in it.product(range(1, k), repeat=m):
                if sum(idxs) < k:
                    continue
                pools = [gammas[i - 1] for i in idxs]
                for letters in it.product(*pools):
                    v = L.Q.q1_multi(list(letters))
                    if not v.is_zero():
                        vectors.append(v)
        basis: list[Element] = []
        for v in vectors:
            deg = v.degree()
            amb = [g for g in L.space.generators if g.degree == deg]
            vec = cx.coords(v, amb)
            span = spans_by_degree.setdefault(deg, [])
            if not la.in_span(span, vec):
                basis.append(v)
                spans_by_degree[deg] = la.row_space(span + [vec])
        gammas.append(basis)
        if not basis:
            return LCSResult(gammas, k)
        k += 1
        if k > L.bound + 1:
            # weight additivity forces Gamma_k inside F_k, hence zero by now
            raise LinftyError("lower central series failed to terminate")


def lcs_contained_in_filtration(L: LInftyAlgebra, lcs: LCSResult) -> bool:
    """Gamma_k inside F_k, checked weight-wise on the spanning vectors."""
    for k, basis in enumerate(lcs.subspaces, start=1):
        for v in basis:
            w = v.weight()
            if w is not None and w < min(k, L.bound):
                return False
    return True


# ---------------------------------------------------------------------------
# classification and inversion
# ---------------------------------------------------------------------------

def classify_linfty_morphism(Phi: LInftyMorphism) -> cx.ChainClassification:
    """Weak equivalence / fibration via the linear term, level by level."""
    return cx.classify_chain_map(Phi.chain_map())


def invert_linear_term(Phi: LInftyMorphism) -> LinearMap | None:
    """Filtered inverse of Phi^1_1, or None when not a filtered isomorphism."""
    f = Phi.linear_map()
    src, tgt = Phi.source.space, Phi.target.space
    table = {}
    for k in cx.degree_window(src, tgt):
        sb = [g for g in src.generators if g.degree == k]
        tb = [g for g in tgt.generators if g.degree == k]
        if not sb and not tb:
            continue
        if len(sb) != len(tb):
            return None
        rows = [[f(g).coeff(h) for g in sb] for h in tb]
        if la.rank(rows) != len(tb):
            return None
        for h in tb:
            rhs = [Fraction(1) if t == h else Fraction(0) for t in tb]
            sol = la.solve(rows, rhs)
            if sol is None:
                return None
            table[h] = Element({g: c for g, c in zip(sb, sol)})
    inv = LinearMap(tgt, src, 0, {g: v for g, v in table.items() if not v.is_zero()})
    if not inv.is_filtered():
        return None
    return inv


def invert_morphism(Phi: LInftyMorphism) -> LInftyMorphism:
    """Inverse of an isomorphism, built arity by arity.

    Requires a filtered linear inverse psi of the linear term; the higher
    components follow the usual recursion Xi^1_m = -psi(sum_{t>=2}
    Phi^1_t Xi^t_m) and are forced zero at and beyond the bound.
    """
    psi = invert_linear_term(Phi)
    if psi is None:
        raise LinftyError("linear term has no filtered inverse")
    src = Phi.target  # the inverse runs backwards
    tgt = Phi.source
    maps = MorphismMaps(src.space, tgt.space)
    for g in src.space.generators:
        v = psi(g)
        if not v.is_zero():
            maps.set_entry(1, (g,), v)
    for m in range(2, src.bound):
        for word in iter_basis_words(src.space, m):
            acc = Element.zero()
            for t in range(2, m + 1):
                for w, c in morphism_component(maps, t, m, word).items():
                    acc = acc + Phi.comp1(t, w).scale(c)
            v = psi(acc).scale(-1)
            if not v.is_zero():
                maps.set_entry(m, word, v)
    inv = LInftyMorphism(src, tgt, maps)
    ident = LInftyMorphism.identity(Phi.source)
    if inv.compose(Phi) != ident or Phi.compose(inv) != LInftyMorphism.identity(src):
        raise LinftyError("inverse verification failed")
    return inv


def is_isomorphism(Phi: LInftyMorphism) -> bool:
    return invert_linear_term(Phi) is not None
