import itertools
import random
from dataclasses import replace

import pytest

from matcons.catalog import B2, CL2, L3, NU
from matcons.conformity import SearchBudget
from matcons.extension import (
    LiftedConsequence,
    conservativity_check,
    lifted_entails,
    shared_atlas_check,
    validate_wojcicki_witness,
    wojcicki_entails,
)
from matcons.language import (
    Formula,
    Fragment,
    Language,
    Signature,
    Substitution,
    apply_substitution,
    enumerate_fragment,
    extend_language,
)
from matcons.matrix import FiniteMatrix, MatrixClass, entails_class

from conftest import SIG, P, S, random_formula

BASE = Language(SIG, ("p", "q"))
EXT = extend_language(BASE, ["r1", "r2"])
BUDGET = SearchBudget(max_vars=2, max_depth=1, max_set_size=2, samples=5000)


def lift(M, base=BASE, ext=EXT, **kw):
    return LiftedConsequence(M, base, ext, **kw)


class TestLifted:
    def test_modus_ponens_new_variables(self):
        assert lifted_entails(lift(CL2), S("r1", "(imp r1 r2)"), P("r2"))

    def test_excluded_middle(self):
        assert not lifted_entails(lift(L3), (), P("(or r1 (neg r1))"))

    def test_agrees_on_base_formulas(self):
        fs = enumerate_fragment(Fragment(("p", "q"), 1), SIG)
        lc = lift([CL2, L3])
        for a, b in itertools.product(fs, repeat=2):
            assert lifted_entails(lc, [a], b) == entails_class([CL2, L3], [a], b)

    def test_rejects_foreign_formulas(self):
        with pytest.raises(ValueError):
            lifted_entails(lift(CL2), S("zz"), P("p"))

    def test_requires_primitive_extension(self):
        other = Language(Signature.of("neg/1"), ("p", "q"))
        with pytest.raises(ValueError):
            LiftedConsequence(CL2, BASE, other)

    def test_renaming_invariance(self):
        rng = random.Random(5)
        rho = {"p": Formula.var("r2"), "q": Formula.var("r1")}
        lc = lift([CL2, L3])
        for _ in range(200):
            X = [random_formula(rng, "pq", 2) for _ in range(rng.randint(0, 2))]
            a = random_formula(rng, "pq", 2)
            moved = [apply_substitution(rho, x) for x in X]
            assert entails_class([CL2, L3], X, a) == lifted_entails(
                lc, moved, apply_substitution(rho, a))


class TestWojcicki:
    def test_modus_ponens(self):
        lc = lift(CL2)
        X, a = S("r1", "(imp r1 r2)"), P("r2")
        res = wojcicki_entails(lc, X, a, BUDGET)
        assert res.found
        assert set(res.Y) == set(S("p", "(imp p q)")) and res.beta == P("q")
        assert dict(res.sigma) == {"p": P("r1"), "q": P("r2")}
        assert validate_wojcicki_witness(lc, X, a, res)

    def test_reflexivity(self):
        lc = lift(CL2)
        a = P("(and r1 (neg r2))")
        res = wojcicki_entails(lc, [a], a, BUDGET)
        assert res.found and res.Y == S("p") and res.beta == P("p")
        assert dict(res.sigma) == {"p": a}

    def test_variable_is_not_a_theorem(self):
        res = wojcicki_entails(lift(CL2), (), P("r1"), BUDGET)
        assert not res.found and not res.exhausted

    def test_theorem_instance(self):
        res = wojcicki_entails(lift(CL2), (), P("(imp (and r1 r2) (and r1 r2))"), BUDGET)
        assert res.found and res.Y == () and res.beta == P("(imp p p)")

    def test_witness_uses_base_variables(self):
        res = wojcicki_entails(lift(CL2), S("(and r1 (neg r2))"), P("(neg r2)"), BUDGET)
        assert res.found
        assert all(BASE.owns(y) for y in res.Y + (res.beta,))

    def test_pattern_beyond_named_variables_uses_pool(self):
        # inconsistent premises: the conclusion pattern is a third variable
        X = S("r1", "r2", "(and r1 (neg r2))")
        a = P("(and (and r1 r2) r1)")
        res = wojcicki_entails(lift(CL2), X, a, BUDGET)
        assert res.found and res.beta == Formula.var("v0")
        assert validate_wojcicki_witness(lift(CL2), X, a, res)

    def test_soundness_on_random_instances(self):
        rng = random.Random(11)
        lc = lift([CL2, L3])
        hits = 0
        for _ in range(150):
            X = [random_formula(rng, ["r1", "r2", "p"], 2) for _ in range(rng.randint(0, 2))]
            a = random_formula(rng, ["r1", "r2", "p"], 2)
            res = wojcicki_entails(lc, X, a, SearchBudget(samples=500))
            if res.found:
                hits += 1
                assert validate_wojcicki_witness(lc, X, a, res)
                assert lifted_entails(lc, X, a)
        assert hits > 10

    def test_invalid_witness_is_rejected(self):
        lc = lift(CL2)
        X, a = S("r1", "(imp r1 r2)"), P("r2")
        res = wojcicki_entails(lc, X, a, BUDGET)
        assert not validate_wojcicki_witness(lc, X, a, replace(res, beta=P("p")))
        assert not validate_wojcicki_witness(
            lc, X, a, replace(res, sigma=Substitution({"p": P("r2"), "q": P("r1")})))
        assert not validate_wojcicki_witness(lc, X, a, replace(res, Y=S("q")))


class TestConservativity:
    def test_classical_exhaustive_count(self):
        v = conservativity_check(lift(CL2), Fragment(("p",), 1), BUDGET)
        assert not v.found
        # 5 formulas: (empty + 5 singletons + 10 pairs) premise sets x 5 conclusions
        assert v.stats["exhaustive"] and v.stats["candidates"] == 16 * 5

    @pytest.mark.parametrize("M", [[CL2], [L3], [CL2, L3], NU], ids=["CL2", "L3", "CL2+L3", "NU"])
    def test_no_counterexample(self, M):
        v = conservativity_check(lift(M), Fragment(("p", "q"), 1), BUDGET)
        assert not v.found and v.stats["exhaustive"]

    def test_corrupted_lift_is_caught(self):
        broken = MatrixClass((FiniteMatrix(B2, frozenset({0})),))
        v = conservativity_check(lift(CL2, lifted_class=broken), Fragment(("p",), 1), BUDGET)
        assert v.found and v.witness["base"] != v.witness["lifted"]


class TestSharedAtlas:
    def test_classical(self):
        ext = extend_language(BASE, ["r1"])
        v = shared_atlas_check(lift(CL2, ext=ext), Fragment(("p",), 1), Fragment(("p", "r1"), 1),
                               SearchBudget(2, 1, 1, 2, samples=600), pair_samples=150)
        assert not v.found, v.witness

    def test_nonuniform_atlas_fails_third_subcheck(self):
        ext = extend_language(BASE, ["r1"])
        v = shared_atlas_check(lift(NU, ext=ext), Fragment(("p", "q"), 1),
                               Fragment(("p", "r1"), 1), SearchBudget(2, 1, 2, 2, samples=600),
                               pair_samples=100)
        assert v.found and v.witness["subcheck"] == "uniform-base"

    def test_identity_extension(self):
        v = shared_atlas_check(lift(CL2, ext=BASE), Fragment(("p",), 1), Fragment(("p",), 1),
                               SearchBudget(1, 1, 1, 2, samples=300), pair_samples=100)
        assert not v.found
