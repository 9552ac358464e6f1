import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matcons.errors import FormulaSyntaxError, ResourceLimitError
from matcons.language import (
    Formula,
    Fragment,
    Language,
    Signature,
    Substitution,
    apply_substitution,
    dedupe,
    enumerate_fragment,
    extend_language,
    format_formula_set,
    fragment_size,
    is_primitive_extension,
    parse_formula,
    parse_formula_set,
    print_formula,
    variables_of,
)

from conftest import SIG, P
from oracle import fragment_set

NEG = Signature.of("neg/1")
NEG_AND = Signature.of("neg/1 and/2")
WITH_BOT = Signature.of("bot/0 neg/1 imp/2")
V, A = Formula.var, Formula.app


class TestParsing:
    def test_variable(self):
        f = P("p")
        assert f.is_var and f.symbol == "p"

    def test_nested(self):
        assert P("(imp p (neg q))") == A("imp", V("p"), A("neg", V("q")))

    def test_arity_mismatch(self):
        with pytest.raises(FormulaSyntaxError, match="arity"):
            P("(neg p q)")

    @pytest.mark.parametrize("text, pos", [
        ("(foo p)", 1),
        ("(imp p", 6),
        ("p q", 2),
        ("(neg p))", 7),
        ("neg", 0),
        ("()", 1),
    ])
    def test_error_positions(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as info:
            P(text)
        assert info.value.position == pos

    def test_whitespace_tolerated(self):
        assert P("  ( imp  p\n q )") == P("(imp p q)")

    def test_nullary(self):
        f = parse_formula("(imp bot p)", WITH_BOT)
        assert f.args[0] == A("bot")
        assert print_formula(A("bot")) == "bot"

    def test_printing(self):
        assert print_formula(V("p")) == "p"
        assert print_formula(A("imp", V("p"), A("neg", V("q")))) == "(imp p (neg q))"

    def test_formula_sets(self):
        fs = parse_formula_set("{p, (imp p q)}", SIG)
        assert fs == (P("p"), P("(imp p q)"))
        assert parse_formula_set("p,(and p q),q", SIG)[1] == P("(and p q)")
        assert format_formula_set(fs) == "{p, (imp p q)}"
        assert parse_formula_set("{}", SIG) == ()

    def test_language_rejects_foreign_variable(self):
        lang = Language(SIG, ("p", "q"), pool_unbounded=False)
        with pytest.raises(FormulaSyntaxError):
            parse_formula("(imp p z)", lang)


class TestVariables:
    @pytest.mark.parametrize("texts, expected", [
        (["(imp p q)"], {"p", "q"}),
        ([], set()),
        (["(neg p)", "q", "(imp p p)"], {"p", "q"}),
    ])
    def test_examples(self, texts, expected):
        assert variables_of(P(t) for t in texts) == expected

    def test_dedupe_keeps_first_order(self):
        assert dedupe([P("q"), P("p"), P("q")]) == (P("q"), P("p"))


class TestFragment:
    def test_depth_zero(self):
        assert enumerate_fragment(Fragment(("p",), 0), NEG) == (V("p"),)

    def test_neg_depth_one(self):
        assert enumerate_fragment(Fragment(("p",), 1), NEG) == (V("p"), A("neg", V("p")))

    def test_neg_and_count(self):
        assert len(enumerate_fragment(Fragment(("p", "q"), 1), NEG_AND)) == 8

    def test_classical_count(self):
        assert len(enumerate_fragment(Fragment(("p", "q"), 1), SIG)) == 16

    @pytest.mark.parametrize("sig", [NEG, NEG_AND, SIG, WITH_BOT])
    @pytest.mark.parametrize("vars_, depth", [(("p",), 0), (("p",), 2), (("p", "q"), 1),
                                              (("p", "q", "r"), 1), (("p", "q"), 2)])
    def test_matches_independent_generator(self, sig, vars_, depth):
        frag = Fragment(vars_, depth)
        if fragment_size(frag, sig) > 5000:
            pytest.skip("beyond the default cap")
        got = enumerate_fragment(frag, sig)
        assert len(got) == len(set(got)) == fragment_size(frag, sig)
        assert set(got) == fragment_set(vars_, sig.connectives, depth, V, A)
        # depth never decreases along the enumeration
        depths = [f.depth for f in got]
        assert depths == sorted(depths)

    def test_monotone_in_depth_and_vars(self):
        small = set(enumerate_fragment(Fragment(("p",), 1), SIG))
        assert small <= set(enumerate_fragment(Fragment(("p",), 2), SIG))
        assert small <= set(enumerate_fragment(Fragment(("p", "q"), 1), SIG))

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            enumerate_fragment(Fragment(("p", "q", "r"), 2), SIG, cap=100)


class TestSubstitution:
    def test_replacement(self):
        s = Substitution({"p": P("(and r s)")})
        assert s(P("(neg p)")) == P("(neg (and r s))")

    def test_identity(self):
        f = P("(imp (neg p) (or q p))")
        assert apply_substitution({}, f) == f
        assert Substitution({"p": V("p")}).support == frozenset()

    def test_simultaneous(self):
        assert apply_substitution({"p": V("q"), "q": V("p")}, P("(imp p q)")) == P("(imp q p)")


class TestExtension:
    def test_add(self):
        base = Language(SIG, ("p", "q"))
        ext = extend_language(base, ["r1", "r2"])
        assert ext.named_vars == ("p", "q", "r1", "r2") and ext.signature == SIG
        assert extend_language(base, []) == base

    def test_clash(self):
        with pytest.raises(ValueError):
            extend_language(Language(SIG, ("p", "q")), ["p"])

    def test_primitive(self):
        base = Language(SIG, ("p", "q"))
        assert is_primitive_extension(base, extend_language(base, ["r"]))
        assert is_primitive_extension(base, base)
        bigger = Signature.of("neg/1 and/2 or/2 imp/2 box/1")
        assert not is_primitive_extension(base, Language(bigger, ("p", "q")))


# ---- properties -------------------------------------------------------------

NAMES = st.sampled_from(["p", "q", "r", "s"])


def formulas(sig=SIG):
    leaves = NAMES.map(V)

    def extend(children):
        return st.one_of([st.tuples(*[children] * k).map(lambda args, c=c: A(c, *args))
                          for c, k in sig.connectives])

    return st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f), SIG) == f


@settings(max_examples=200, deadline=None)
@given(formulas(), st.dictionaries(NAMES, formulas(), max_size=3))
def test_substitution_variables(f, sigma):
    g = apply_substitution(sigma, f)
    expected = set()
    for v in f.variables:
        expected |= sigma[v].variables if v in sigma else {v}
    assert g.variables == expected


@settings(max_examples=200, deadline=None)
@given(formulas(), st.dictionaries(NAMES, formulas(), max_size=3),
       st.dictionaries(NAMES, formulas(), max_size=3))
def test_substitution_composes(f, s1, s2):
    composed = {v: apply_substitution(s2, apply_substitution(s1, V(v))) for v in "pqrs"}
    assert apply_substitution(s2, apply_substitution(s1, f)) == apply_substitution(composed, f)
