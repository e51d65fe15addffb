import pytest

from bioperad.models import (LawFailure, _LP_RELS, _relations,
                             alpha_distributive_law, apply_distributive_law,
                             boundary_identities, builtin_model,
                             h0sc_dual_dg, h0sc_dual_presentation,
                             h0sc_presentation, identity_distributive_law,
                             lambda_c_oc_presentation, lp_presentation,
                             palpha_presentation,
                             psi_commutes_with_differentials,
                             whistle_distributive_law, DistributiveLaw)
from bioperad.presentation import (Presentation, quotient_dims,
                                   relation_span, truncation)
from bioperad.trees import CLOSED, OPEN, parse_term, sig


def test_builtin_model_names():
    pres = builtin_model("LP")
    assert len(pres.collection.spaces) == 3
    assert len(pres.relations) == 4
    dg = builtin_model("OCinf", 3)
    assert dg.name == "OCinf"
    with pytest.raises(KeyError) as err:
        builtin_model("nonsense")
    assert "available" in str(err.value)


def test_h0sc_has_four_generators_and_ql_relations():
    pres = builtin_model("H0SC")
    assert sorted(s.name for s in pres.collection) == ["al", "e02", "e11", "f2"]
    mixed = [r for r in pres.relations if r.weights() == [1, 2]]
    assert len(mixed) == 2


def test_ocinf_generators_include_whistles():
    dg = builtin_model("OCinf", 4)
    names = {s.name for s in dg.collection}
    assert {"l2", "l3", "l4", "n10", "n20", "n30", "n11", "n02"} <= names
    lp = builtin_model("LPinf", 4)
    lp_names = {s.name for s in lp.collection}
    assert "n10" not in lp_names and "n20" not in lp_names


def test_h0sc_dual_quotient_dims():
    tr = truncation(h0sc_dual_presentation(), 3)
    assert tr.dims_by_degree(sig(1, 1, OPEN)) == {0: 1, -1: 2}
    assert tr.dims_by_degree(sig(2, 0, OPEN)) == {-1: 2, -2: 2}
    assert tr.dims_by_degree(sig(1, 0, OPEN)) == {-1: 1}


def test_lambda_c_oc_dims():
    dims = quotient_dims(lambda_c_oc_presentation(), 3)
    assert dims[(sig(1, 1, OPEN), -1)] == 1
    assert (sig(1, 1, OPEN), 0) not in dims
    assert dims[(sig(2, 0, OPEN), -1)] == 1
    assert dims[(sig(2, 0, OPEN), -2)] == 1


def test_alpha_law_matches_composite():
    law = alpha_distributive_law(3)
    trunc = apply_distributive_law(law, 3)
    assert trunc.dims_by_degree(sig(2, 0, OPEN)) == {0: 1}


def test_whistle_law_matches_composite():
    law = whistle_distributive_law(3)
    trunc = apply_distributive_law(law, 3)
    assert trunc.dims_by_degree(sig(1, 1, OPEN)) == {0: 1, -1: 2}


def test_identity_law():
    apply_distributive_law(identity_distributive_law(palpha_presentation(), 3), 3)


def test_broken_law_reports_witness():
    # drop the eye relation: the quotient is too big for the composite
    from bioperad.models import _lp_generators
    from bioperad.trees import Collection
    coll = Collection(_lp_generators(with_whistle=True))
    broken = Presentation(coll, _relations(coll, _LP_RELS), "broken")
    good = whistle_distributive_law(3)
    law = DistributiveLaw("broken", broken, good.composite_dims)
    with pytest.raises(LawFailure) as err:
        apply_distributive_law(law, 3)
    assert err.value.witnesses


def test_psi_commutes():
    assert psi_commutes_with_differentials(3) == []


def test_boundary_identities():
    assert boundary_identities(3) == []


def test_tampered_builtin_detected():
    # corrupt one sign in the derivation relation: the dual no longer
    # matches the commutative-acting presentation
    from bioperad.duality import quadratic_dual
    from bioperad.models import _lp_generators, h0scvor_presentation
    from bioperad.trees import Collection
    coll = Collection(_lp_generators())
    rels = _relations(coll, _LP_RELS)
    tampered_rels = rels[:2] + [
        parse_term(coll, "n11(c1,n02(o1,o2))")
        - parse_term(coll, "n02(n11(c1,o1),o2)")
        + parse_term(coll, "n02(o1,n11(c1,o2))")  # flipped sign
    ] + rels[3:]
    tampered = Presentation(coll, tampered_rels, "tampered")
    ren = {"l2": "f2", "n02": "e02", "n11": "e11"}
    dual = quadratic_dual(tampered, rename=lambda n: ren[n])
    vor = h0scvor_presentation()
    assert any(relation_span(dual, s, 2) != relation_span(vor, s, 2)
               for s in [sig(1, 2, OPEN)])


def test_homology_composition_matches_target_representatives():
    # products of homology classes of the open-closed truncation behave
    # like the color-suspended top operad: the two whistle products at
    # (2,0;o) agree up to a boundary, and the whistle of a bracket is a
    # nonzero class
    from fractions import Fraction

    from bioperad.linalg import Echelon
    from bioperad.models import ocinf_dg
    from bioperad.trees import corolla_element, graft, parse_term

    dg = ocinf_dg(3)
    coll = dg.collection
    s = sig(2, 0, OPEN)

    def chain_vector(elem, degree):
        basis = dg.chain_basis(s, degree)
        index = {t: i for i, t in enumerate(basis)}
        return {index[t]: c for t, c in elem.terms.items()}

    # boundaries into degree -2
    boundaries = Echelon()
    for t in dg.chain_basis(s, -1):
        img = dg.derivation.apply_tree(t)
        if not img.is_zero():
            boundaries.add(chain_vector(img, -2))
    boundaries.finalize()

    n10 = corolla_element(coll["n10"])
    # the two whistle products; the second parses with a crossing sign, so
    # the class identity [f(c1)f(c2)] = [f(c2)f(c1)] is their SUM
    prod1 = parse_term(coll, "n02(n10(c1),n10(c2))")
    prod2 = parse_term(coll, "n02(n10(c2),n10(c1))")
    diff = prod1 + prod2
    assert boundaries.reduce(chain_vector(diff, -2)) == {}
    assert boundaries.reduce(chain_vector(prod1, -2)) != {}

    # the whistle of a bracket: a nonzero degree -1 class
    l2 = corolla_element(coll["l2"])
    eye_cycle = graft(n10, CLOSED, 1, l2)
    d_img = dg.derivation.apply(eye_cycle)
    assert d_img.is_zero()
    b1 = Echelon()
    for t in dg.chain_basis(s, 0):
        img = dg.derivation.apply_tree(t)
        if not img.is_zero():
            b1.add(chain_vector(img, -1))
    b1.finalize()
    assert b1.reduce(chain_vector(eye_cycle, -1)) != {}
