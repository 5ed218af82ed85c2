"""Algebra/morphism validation, products, quotient towers, LCS, inversion."""
from fractions import Fraction

import pytest

from linfty import algebras as al
from linfty import fixtures_io
from linfty.graded import Element, LinftyError

F = Fraction


ALGEBRA_NAMES = ["f1", "f0", "f3", "of3", "f5", "f6", "f7", "f3f1", "f3f0", "f6f1",
                 "fh_total", "fh_base", "a1", "f3q2"]
MORPHISM_NAMES = ["phi_fib", "phi_fib6", "phi_iso", "phi5", "phi_inc",
                  "p2_f3", "theta_a", "phi_fp", "theta_f0", "phi_fh"]


def test_all_core_algebras_validate(core):
    for name in ALGEBRA_NAMES:
        rep = al.validate_algebra(core.algebra(name))
        assert rep.ok, f"{name}: {rep.describe()}"


def test_all_core_morphisms_validate(core):
    for name in MORPHISM_NAMES:
        rep = al.validate_morphism(core.morphism(name))
        assert rep.ok, f"{name}: {rep.describe()}"


def test_perturbed_weight_fails_with_witness(perturbations):
    rep = al.validate_algebra(perturbations.algebra("perturb_weight"))
    assert not rep.ok
    kinds = {(kind, tuple(a.gid for a in w)) for kind, k, w, _ in rep.failures}
    assert ("weight", ("e", "u")) in kinds


def test_perturbed_square_fails_with_witness(perturbations):
    rep = al.validate_algebra(perturbations.algebra("perturb_qsq"))
    assert not rep.ok
    kinds = {(kind, tuple(a.gid for a in w)) for kind, k, w, _ in rep.failures}
    assert ("square", ("e", "e")) in kinds


def test_perturbed_degree_rejected_at_parse():
    import os
    from tests.conftest import fixture_path
    with pytest.raises(LinftyError, match="e, e"):
        fixtures_io.load_document(fixture_path("perturb_degree.json"))


def test_abelian_from_complex(core):
    L = core.algebra("f1")
    assert L.is_abelian()
    assert al.validate_algebra(L).ok


def test_broken_morphism_reported(core):
    f3 = core.algebra("f3")
    f3f1 = core.algebra("f3f1")
    from linfty.coalgebra import MorphismMaps
    maps = MorphismMaps(f3f1.space, f3.space)
    sp = f3f1.space
    for gid in ("e", "u", "c"):
        maps.set_entry(1, (sp.by_id[gid],), Element.basis(f3.space.by_id[gid]))
    # a bad quadratic entry: violates the arity-2 morphism equation
    maps.set_entry(2, (sp.by_id["e"], sp.by_id["x"]),
                   Element.basis(f3.space.by_id["u"], 5))
    bad = al.LInftyMorphism(f3f1, f3, maps)
    rep = al.validate_morphism(bad)
    assert not rep.ok
    assert any(kind == "morphism" for kind, *_ in rep.failures)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def test_product_structure(core):
    f3 = core.algebra("f3")
    f1 = core.algebra("f1")
    prod = al.product(f3, f1)
    assert al.validate_algebra(prod.algebra).ok
    for m in (prod.proj_left, prod.proj_right, prod.incl_left, prod.incl_right):
        assert al.validate_morphism(m).ok
    # mixed words bracket to zero
    le = prod.left_at[f3.space.by_id["e"]]
    rx = prod.right_at[f1.space.by_id["x"]]
    assert prod.algebra.q1(2, (le, rx)).is_zero()
    # single-factor words recover the factor bracket
    lc = prod.left_at[f3.space.by_id["c"]]
    assert prod.algebra.q1(2, (le, le)) == Element.basis(lc)


def test_product_with_zero_factor(core):
    from linfty.complexes import FilteredComplex
    from linfty.graded import FilteredSpace, LinearMap
    f3 = core.algebra("f3")
    zsp = FilteredSpace([], 1)
    zero = al.abelian_algebra(FilteredComplex(zsp, LinearMap(zsp, zsp, 1)))
    prod = al.product(f3, zero)
    assert len(prod.algebra.space.generators) == 3
    assert al.validate_algebra(prod.algebra).ok


def test_pair_into_product(core):
    f3 = core.algebra("f3")
    prod = al.product(f3, f3)
    ident = al.LInftyMorphism.identity(f3)
    diag = al.pair_into_product(prod, ident, ident)
    assert al.validate_morphism(diag).ok
    assert prod.proj_left.compose(diag) == ident
    assert prod.proj_right.compose(diag) == ident


# ---------------------------------------------------------------------------
# quotient towers
# ---------------------------------------------------------------------------

def test_quotient_full_bound_is_identity_shaped(core):
    f3 = core.algebra("f3")
    q = al.quotient_truncation(f3, 3)
    assert q.algebra.space.generators == f3.space.generators
    assert q.algebra.Q == f3.Q


def test_quotient_level_one_is_zero(core):
    f3 = core.algebra("f3")
    q = al.quotient_truncation(f3, 1)
    assert not q.algebra.space.generators


def test_quotient_level_two_drops_brackets(core):
    f3 = core.algebra("f3")
    q = al.quotient_truncation(f3, 2)
    assert [g.gid for g in q.algebra.space.generators] == ["e"]
    assert q.algebra.is_abelian()
    assert al.validate_morphism(q.projection).ok
    from linfty.complexes import classify_chain_map
    assert classify_chain_map(q.projection.chain_map()).is_fibration


def test_quotient_graded_piece_is_abelian_subalgebra(core):
    f3 = core.algebra("f3")
    q = al.quotient_truncation(f3, 3)
    piece = q.graded_piece
    assert sorted(g.gid for g in piece.space.generators) == ["c", "u"]
    assert piece.is_abelian()
    assert al.validate_morphism(q.piece_embedding).ok


def test_quotient_commutes_with_morphisms(core):
    # p'_(n) . Phi = Phi_(n) . p_(n)
    phi = core.morphism("phi_fib")
    for n in (2, 3):
        qs = al.quotient_truncation(phi.source, n)
        qt = al.quotient_truncation(phi.target, n)
        phin = al.quotient_morphism(phi, n)
        lhs = qt.projection.compose(phi)
        rhs = phin.compose(qs.projection)
        assert lhs == rhs, n


def test_step_projection_strict_fibration(core):
    f3 = core.algebra("f3")
    p = al.step_projection(f3, 2)
    assert al.validate_morphism(p).ok
    from linfty.complexes import classify_chain_map
    assert classify_chain_map(p.chain_map()).is_fibration


# ---------------------------------------------------------------------------
# lower central series
# ---------------------------------------------------------------------------

def test_lcs_abelian(core):
    lcs = al.lower_central_series(core.algebra("f1"))
    assert lcs.nilpotency_index == 2
    assert lcs.dimension(2) == 0


def test_lcs_f3(core):
    f3 = core.algebra("f3")
    lcs = al.lower_central_series(f3)
    # Gamma_2 = span{c} (strictly smaller than F_2 = span{u, c}); Gamma_3 = 0
    assert lcs.nilpotency_index == 3
    assert lcs.dimension(2) == 1
    (v,) = lcs.subspaces[1]
    assert v == Element.basis(f3.space.by_id["c"])
    assert al.lcs_contained_in_filtration(f3, lcs)


def test_lcs_inside_filtration_everywhere(core):
    for name in ("f3", "of3", "f5", "f6", "f3f1", "f6f1"):
        L = core.algebra(name)
        lcs = al.lower_central_series(L)
        assert al.lcs_contained_in_filtration(L, lcs), name


# ---------------------------------------------------------------------------
# classification and inversion
# ---------------------------------------------------------------------------

def test_classify_identity_both(core):
    f3 = core.algebra("f3")
    cl = al.classify_linfty_morphism(al.LInftyMorphism.identity(f3))
    assert cl.is_weak_equivalence and cl.is_fibration


def test_classify_tower_projection(core):
    cl = al.classify_linfty_morphism(core.morphism("p2_f3"))
    assert cl.is_fibration


def test_classify_inclusion_weq_not_fib(core):
    cl = al.classify_linfty_morphism(core.morphism("phi_inc"))
    assert cl.is_weak_equivalence
    assert not cl.is_fibration


def test_classify_nonstrict_fibration(core):
    cl = al.classify_linfty_morphism(core.morphism("phi_fib"))
    assert cl.is_fibration and cl.is_weak_equivalence


def test_invert_iso_roundtrip(core):
    phi = core.morphism("phi_iso")
    assert al.is_isomorphism(phi)
    inv = al.invert_morphism(phi)
    assert al.validate_morphism(inv).ok
    assert inv.compose(phi) == al.LInftyMorphism.identity(phi.source)
    assert phi.compose(inv) == al.LInftyMorphism.identity(phi.target)
    # the inverse genuinely needs higher components
    assert not inv.is_strict()


def test_invert_not_iso_errors(core):
    with pytest.raises(LinftyError):
        al.invert_morphism(core.morphism("p2_f3"))


# ---------------------------------------------------------------------------
# fixture document round trip
# ---------------------------------------------------------------------------

def test_fixture_round_trip(core):
    data = fixtures_io.serialize_document(core)
    again = fixtures_io.parse_document(data)
    assert again == core
    assert fixtures_io.serialize_document(again) == data


def test_fixture_deterministic_serialization(core):
    s1 = fixtures_io.dumps_document(core)
    s2 = fixtures_io.dumps_document(
        fixtures_io.parse_document(fixtures_io.serialize_document(core)))
    assert s1 == s2
