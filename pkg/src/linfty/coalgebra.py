"""Symmetric-coalgebra calculus on S(V).

A coderivation Q of S(V) is determined by its corestriction, the family
Q^1_k : S^k(V) -> V; likewise a coalgebra morphism Phi by Phi^1_k.  This
module evaluates the induced components

    Q^t_n  = sum over (n-t+1, t-1)-shuffles of  eps * Q^1(block) . rest,
    Phi^p_m = sum over ordered block partitions (minima increasing) of
              eps * Phi^1(block_1) ... Phi^1(block_p),

and the corestrictions of composites

    (Psi Phi)^1_n = sum_t Psi^1_t Phi^t_n,
    (Phi Q)^1_n   = sum_t Phi^1_t Q^t_n,      (Q' Phi)^1_n = sum_t Q'^1_t Phi^t_n.

Families are duck-typed: anything with `q1(k, atoms) -> Element` acts as a
coderivation corestriction and anything with `comp1(k, atoms) -> Element`
as a morphism corestriction, so rule-backed families (tensor algebras,
pullbacks) reuse the same evaluation code as the sparse tables here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_la import as_fraction
from .graded import (Element, FilteredSpace, Generator, LinftyError, Word,
                     koszul_sign, normalize_word, shuffles, word_degrees)

# A WordSum is a finite combination of canonical words: {atom-tuple: coeff}.
WordSum = dict


def wordsum_add(ws: WordSum, atoms: tuple, coeff: Fraction) -> None:
    if coeff == 0:
        return
    cur = ws.get(atoms, Fraction(0)) + coeff
    if cur == 0:
        ws.pop(atoms, None)
    else:
        ws[atoms] = cur


def expand_letters(letters) -> WordSum:
    """Multilinear expansion of a word whose letters are Elements or atoms.

    Slot order is preserved before normalization, so Koszul signs come only
    from the final sort of each atom tuple.
    """
    factors = []
    for x in letters:
        factors.append(list(x.terms.items()) if isinstance(x, Element)
                       else [(x, Fraction(1))])
    out: WordSum = {}
    for choice in itertools.product(*factors):
        coeff = Fraction(1)
        for _, c in choice:
            coeff *= c
        w = normalize_word([a for a, _ in choice])
        if w is not None:
            wordsum_add(out, w.atoms, coeff * w.sign)
    return out


def _word_atoms(word) -> tuple:
    if isinstance(word, Word):
        if word.sign != 1:
            raise LinftyError("expected a canonical (sign +1) word")
        return word.atoms
    return tuple(word)


# ---------------------------------------------------------------------------
# sparse corestriction tables
# ---------------------------------------------------------------------------

class _Table:
    """Shared storage/validation for arity-indexed word tables."""

    def __init__(self, space: FilteredSpace, degree: int, table=None):
        self.space = space
        self.degree = degree
        self.table: dict[int, dict[tuple, Element]] = {}
        if table:
            for k, entries in table.items():
                for word, value in entries.items():
                    self.set_entry(k, word, value)

    def _value_space(self) -> FilteredSpace:
        return self.space

    def set_entry(self, k: int, word, value: Element) -> None:
        atoms = _word_atoms(word)
        if len(atoms) != k:
            raise LinftyError(f"arity {k} entry keyed by a length-{len(atoms)} word")
        if k >= self.space.bound:
            raise LinftyError(
                f"arity {k} >= bound {self.space.bound} is forced to zero by weight additivity")
        for a in atoms:
            if not self.space.contains(a):
                raise LinftyError(f"word letter {a!r} not in the space")
        vs = self._value_space()
        for a in value.terms:
            if not vs.contains(a):
                raise LinftyError(f"value atom {a!r} not in the value space")
        w = normalize_word(atoms)
        if w is None:
            if not value.is_zero():
                raise LinftyError("nonzero value on a zero word (odd repeat)")
            return
        value = value.scale(w.sign)
        if value.is_zero():
            return
        want = sum(a.degree for a in w.atoms) + self.degree
        if not value.homogeneous(want):
            raise LinftyError(
                f"value on {w.atoms} must be homogeneous of degree {want}")
        self.table.setdefault(k, {})[w.atoms] = value

    def entry(self, k: int, atoms: tuple) -> Element:
        w = normalize_word(atoms)
        if w is None:
            return Element.zero()
        v = self.table.get(k, {}).get(w.atoms)
        return v.scale(w.sign) if v is not None else Element.zero()

    def arities(self):
        return sorted(self.table)

    def entries(self):
        for k in self.arities():
            for atoms, v in sorted(self.table[k].items(),
                                   key=lambda t: tuple(a.key for a in t[0])):
                yield k, atoms, v

    def _eq_table(self, other) -> bool:
        ks = set(self.table) | set(other.table)
        for k in ks:
            words = set(self.table.get(k, {})) | set(other.table.get(k, {}))
            for w in words:
                if self.entry(k, w) != other.entry(k, w):
                    return False
        return True


class StructureMaps(_Table):
    """Corestriction family Q^1_k of a coderivation (degree +1 for codifferentials)."""

    def q1(self, k: int, atoms: tuple) -> Element:
        return self.entry(k, atoms)

    def q1_multi(self, letters) -> Element:
        """Evaluate Q^1 on a word of Elements by multilinear expansion."""
        out = Element.zero()
        k = len(letters)
        for atoms, c in expand_letters(letters).items():
            out = out + self.q1(k, atoms).scale(c)
        return out

    def __eq__(self, other):
        return (isinstance(other, StructureMaps) and self.space == other.space
                and self.degree == other.degree and self._eq_table(other))


class MorphismMaps(_Table):
    """Corestriction family Phi^1_k of a coalgebra morphism (degree 0)."""

    def __init__(self, source: FilteredSpace, target: FilteredSpace, table=None):
        self.target = target
        super().__init__(source, 0, table)

    def _value_space(self):
        return self.target

    def comp1(self, k: int, atoms: tuple) -> Element:
        return self.entry(k, atoms)

    def comp1_multi(self, letters) -> Element:
        out = Element.zero()
        k = len(letters)
        for atoms, c in expand_letters(letters).items():
            out = out + self.comp1(k, atoms).scale(c)
        return out

    @classmethod
    def strict(cls, source, target, linear_table) -> "MorphismMaps":
        return cls(source, target, {1: {(g,): v for g, v in linear_table.items()}})

    @classmethod
    def identity(cls, space) -> "MorphismMaps":
        return cls.strict(space, space,
                          {g: Element.basis(g) for g in space.generators})

    def __eq__(self, other):
        return (isinstance(other, MorphismMaps) and self.space == other.space
                and self.target == other.target and self._eq_table(other))


# ---------------------------------------------------------------------------
# induced components
# ---------------------------------------------------------------------------

def coderivation_component(Q, t: int, n: int, word) -> WordSum:
    """Q^t_n on a length-n word: shuffle sum feeding Q^1_{n-t+1} one block."""
    atoms = _word_atoms(word)
    if len(atoms) != n:
        raise LinftyError(f"word has length {len(atoms)}, expected n={n}")
    if not 1 <= t <= n:
        raise LinftyError(f"need 1 <= t <= n, got t={t}, n={n}")
    p = n - t + 1
    degs = word_degrees(atoms)
    out: WordSum = {}
    for sigma in shuffles(p, t - 1):
        eps = koszul_sign(sigma, degs)
        block = tuple(atoms[i - 1] for i in sigma[:p])
        rest = [atoms[i - 1] for i in sigma[p:]]
        val = Q.q1(p, block)
        if val.is_zero():
            continue
        for watoms, c in expand_letters([val] + rest).items():
            wordsum_add(out, watoms, c * eps)
    return out


def _block_partitions(m: int, p: int):
    """Set partitions of {0..m-1} into p blocks, each ascending, minima increasing."""
    def rec(remaining, blocks):
        if not remaining:
            if len(blocks) == p:
                yield [tuple(b) for b in blocks]
            return
        if len(blocks) > p:
            return
        x = remaining[0]
        rest = remaining[1:]
        # x joins an existing block (keeps minima order) or opens a new one;
        # blocks are created in order of their minima automatically.
        for b in blocks:
            b.append(x)
            yield from rec(rest, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(rest, blocks)
        blocks.pop()
    yield from rec(list(range(m)), [])


def morphism_component(Phi, p: int, m: int, word) -> WordSum:
    """Phi^p_m on a length-m word: ordered-block-partition sum (Sh^> blocks)."""
    atoms = _word_atoms(word)
    if len(atoms) != m:
        raise LinftyError(f"word has length {len(atoms)}, expected m={m}")
    if not 1 <= p <= m:
        raise LinftyError(f"need 1 <= p <= m, got p={p}, m={m}")
    degs = word_degrees(atoms)
    out: WordSum = {}
    for blocks in _block_partitions(m, p):
        flat = [i + 1 for b in blocks for i in b]
        eps = koszul_sign(flat, degs)
        vals = []
        for b in blocks:
            v = Phi.comp1(len(b), tuple(atoms[i] for i in b))
            if v.is_zero():
                vals = None
                break
            vals.append(v)
        if vals is None:
            continue
        for watoms, c in expand_letters(vals).items():
            wordsum_add(out, watoms, c * eps)
    return out


def expand_coderivation(Q, word) -> WordSum:
    """Full coderivation value Q(word) = sum_t Q^t_n(word) in S(V)."""
    atoms = _word_atoms(word)
    n = len(atoms)
    out: WordSum = {}
    for t in range(1, n + 1):
        for w, c in coderivation_component(Q, t, n, atoms).items():
            wordsum_add(out, w, c)
    return out


def expand_morphism(Phi, word) -> WordSum:
    """Full coalgebra-morphism value Phi(word) = sum_p Phi^p_m(word)."""
    atoms = _word_atoms(word)
    m = len(atoms)
    out: WordSum = {}
    for p in range(1, m + 1):
        for w, c in morphism_component(Phi, p, m, atoms).items():
            wordsum_add(out, w, c)
    return out


# ---------------------------------------------------------------------------
# compositions (corestrictions only, which determine everything)
# ---------------------------------------------------------------------------

def composed_morphism_comp1(Psi, Phi, n: int, word) -> Element:
    """(Psi Phi)^1_n(word) = sum_t Psi^1_t(Phi^t_n(word))."""
    out = Element.zero()
    for t in range(1, n + 1):
        for w, c in morphism_component(Phi, t, n, word).items():
            out = out + Psi.comp1(t, w).scale(c)
    return out


def coderivation_after_morphism_comp1(Qprime, Phi, n: int, word) -> Element:
    """(Q' Phi)^1_n(word) = sum_t Q'^1_t(Phi^t_n(word))."""
    out = Element.zero()
    for t in range(1, n + 1):
        for w, c in morphism_component(Phi, t, n, word).items():
            out = out + Qprime.q1(t, w).scale(c)
    return out


def morphism_after_coderivation_comp1(Phi, Q, n: int, word) -> Element:
    """(Phi Q)^1_n(word) = sum_t Phi^1_t(Q^t_n(word))."""
    out = Element.zero()
    for t in range(1, n + 1):
        for w, c in coderivation_component(Q, t, n, word).items():
            out = out + Phi.comp1(t, w).scale(c)
    return out


def coderivation_square_comp1(Q, n: int, word) -> Element:
    """(Q Q)^1_n(word) = sum_t Q^1_t(Q^t_n(word))."""
    out = Element.zero()
    for t in range(1, n + 1):
        for w, c in coderivation_component(Q, t, n, word).items():
            out = out + Q.q1(t, w).scale(c)
    return out


def conjugated_q1(J, Q, H, n: int, word) -> Element:
    """Corestriction of J . Q . H on S^n: sum_{t<=p<=n} J^1_t Q^t_p H^p_n."""
    out = Element.zero()
    for p in range(1, n + 1):
        for wp, cp in morphism_component(H, p, n, word).items():
            for t in range(1, p + 1):
                for wt, ct in coderivation_component(Q, t, p, wp).items():
                    out = out + J.comp1(t, wt).scale(cp * ct)
    return out


def compose_morphisms(Psi, Phi) -> MorphismMaps:
    """Tabulated composite of table-backed morphisms with matching spaces."""
    if Phi.target != Psi.space:
        raise LinftyError("compose_morphisms: target(Phi) != source(Psi)")
    out = MorphismMaps(Phi.space, Psi.target)
    space = Phi.space
    for k in range(1, space.bound):
        for atoms in iter_basis_words(space, k):
            v = composed_morphism_comp1(Psi, Phi, k, atoms)
            if not v.is_zero():
                out.set_entry(k, atoms, v)
    return out


def compose_coderivation(Phi, Q, side: str) -> StructureMaps:
    """Tabulate (Phi Q)^1 (side='pre') or (Q Phi)^1 (side='post').

    The result is a degree-(deg Q) table on the relevant source space; for
    side='pre' the values land in Phi's target, for side='post' Q must act
    on Phi's target.
    """
    if side not in ("pre", "post"):
        raise LinftyError("side must be 'pre' or 'post'")
    space = Phi.space
    out = StructureMaps.__new__(StructureMaps)
    _Table.__init__(out, space, Q.degree)
    # values live in Phi's target space for both variants; bypass the
    # same-space letter check by writing into the dict after validation
    for k in range(1, space.bound):
        for atoms in iter_basis_words(space, k):
            if side == "pre":
                v = morphism_after_coderivation_comp1(Phi, Q, k, atoms)
            else:
                v = coderivation_after_morphism_comp1(Q, Phi, k, atoms)
            if not v.is_zero():
                want = sum(a.degree for a in atoms) + Q.degree
                if not v.homogeneous(want):
                    raise LinftyError("composition produced an inhomogeneous value")
                out.table.setdefault(k, {})[atoms] = v
    return out


def iter_basis_words(space: FilteredSpace, k: int):
    """Canonical arity-k basis words of S^k(space), zero words skipped."""
    gens = sorted(space.generators, key=lambda g: g.key)
    for combo in itertools.combinations_with_replacement(gens, k):
        if any(a == b and a.degree % 2 for a, b in zip(combo, combo[1:])):
            continue
        yield combo


# ---------------------------------------------------------------------------
# coproduct (for oracle checks)
# ---------------------------------------------------------------------------

def reduced_coproduct(word) -> dict:
    """Deconcatenation coproduct on S(V) as a shuffle sum.

    Returns {(left_atoms, right_atoms): coeff} over splittings into two
    nonempty blocks, with Koszul signs; stated on positions, so repeated
    letters contribute multiplicities. No symmetry-factor division.
    """
    atoms = _word_atoms(word)
    n = len(atoms)
    degs = word_degrees(atoms)
    out: dict = {}
    for p in range(1, n):
        for sigma in shuffles(p, n - p):
            eps = koszul_sign(sigma, degs)
            left = normalize_word(atoms[i - 1] for i in sigma[:p])
            right = normalize_word(atoms[i - 1] for i in sigma[p:])
            if left is None or right is None:
                continue
            key = (left.atoms, right.atoms)
            cur = out.get(key, Fraction(0)) + eps * left.sign * right.sign
            if cur == 0:
                out.pop(key, None)
            else:
                out[key] = cur
    return out


# ---------------------------------------------------------------------------
# filtration-compatibility report
# ---------------------------------------------------------------------------

@dataclass
class CompatReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_filtration_compat(maps) -> CompatReport:
    """Weight additivity on every stored entry: value weight >= word weight."""
    bad = []
    for k, atoms, v in maps.entries():
        need = sum(a.weight for a in atoms)
        got = v.weight()
        if got is not None and got < need:
            bad.append((k, atoms, need, got))
    return CompatReport(not bad, bad)
