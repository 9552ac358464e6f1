"""Primitive language extensions and the consequence they inherit.

Two lifted relations live on an extended language ``L+``:

* :func:`lifted_entails` -- the base matrices read over the larger variable pool;
* :func:`wojcicki_entails` -- substitution instances of base inferences:
  ``X |- a`` when some base ``Y |- b`` and substitution ``s`` have
  ``s(Y) <= X`` and ``s(b) = a``.

The substitution search generalizes the query.  Every candidate pattern cuts
the query formulas at some frontier of subterm positions, replacing each cut
subterm by a placeholder variable; equal subterms share a placeholder.
Patterns go from most general to least general, so the last patterns tried
are plain variable renamings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from matcons.conformity import (
    SearchBudget,
    Verdict,
    _bounded_search,
    check_couniform_syntactic,
    check_uniform_syntactic,
)
from matcons.language import (
    Formula,
    Fragment,
    Language,
    Substitution,
    apply_substitution,
    dedupe,
    enumerate_fragment,
    is_primitive_extension,
    ordered_variables,
)
from matcons.matrix import LIMITS, Limits, MatrixClass, as_class, entails_class


@dataclass(frozen=True)
class LiftedConsequence:
    """A matrix class read in a primitive extension of its base language.

    ``lifted_class`` replaces ``base_class`` when interpreting the extended
    language.  It exists for fault-injection tests and is normally None.
    """

    base_class: MatrixClass
    base_lang: Language
    extended_lang: Language
    lifted_class: MatrixClass | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base_class", as_class(self.base_class))
        if not is_primitive_extension(self.base_lang, self.extended_lang):
            raise ValueError("extended language is not a primitive extension of the base")
        if self.base_class.signature != self.base_lang.signature:
            raise ValueError("class signature differs from the base language signature")

    @property
    def interpretation(self) -> MatrixClass:
        return self.lifted_class if self.lifted_class is not None else self.base_class


def _require(lang: Language, fs: Iterable[Formula], what: str) -> None:
    for f in fs:
        if not lang.owns(f):
            raise ValueError(f"{f} is not a formula of the {what} language")


def lifted_entails(lc: LiftedConsequence, X: Iterable[Formula], alpha: Formula,
                   limits: Limits = LIMITS) -> bool:
    X = dedupe(X)
    _require(lc.extended_lang, X + (alpha,), "extended")
    return entails_class(lc.interpretation, X, alpha, limits)


@dataclass(frozen=True)
class WojcickiResult:
    found: bool
    Y: tuple[Formula, ...] = ()
    beta: Formula | None = None
    sigma: Substitution | None = None
    candidates: int = 0
    exhausted: bool = False  # budget ran out before the pattern space did

    def __bool__(self):
        return self.found


def _generalizations(f: Formula, hole) -> Iterator[Formula]:
    """Patterns of ``f``: the placeholder first, then patterns keeping the root."""
    yield hole(f)
    if f.is_var:
        return
    if not f.args:
        yield f
        return
    for combo in itertools.product(*(list(_generalizations(a, hole)) for a in f.args)):
        yield Formula.app(f.symbol, *combo)


def wojcicki_entails(lc: LiftedConsequence, X: Iterable[Formula], alpha: Formula,
                     budget: SearchBudget | None = None, limits: Limits = LIMITS) -> WojcickiResult:
    """Search base inferences ``Y |- b`` whose instance under some ``s`` fits
    ``s(Y) <= X, s(b) = a``.

    Premise patterns come from subsets of ``X`` of size at most
    ``budget.max_set_size``; at most ``budget.samples`` pattern combinations
    are tested.  A negative answer means none was found within that budget.
    """
    budget = budget or SearchBudget()
    X = dedupe(X)
    _require(lc.extended_lang, X + (alpha,), "extended")
    holes: dict[Formula, Formula] = {}

    def hole(t: Formula) -> Formula:
        if t not in holes:
            holes[t] = Formula.var(f"?{len(holes)}")
        return holes[t]

    betas = list(_generalizations(alpha, hole))
    gens = {x: list(_generalizations(x, hole)) for x in X}
    count = 0
    for size in range(0, min(budget.max_set_size, len(X)) + 1):
        for beta in betas:
            for subset in itertools.combinations(X, size):
                for ys in itertools.product(*(gens[x] for x in subset)):
                    count += 1
                    if count > budget.samples:
                        return WojcickiResult(False, candidates=count - 1, exhausted=True)
                    if entails_class(lc.base_class, ys, beta, limits):
                        return _canonical(lc, ys, beta, holes, count)
    return WojcickiResult(False, candidates=count)


def _canonical(lc, ys, beta, holes, count) -> WojcickiResult:
    back = {h.symbol: t for t, h in holes.items()}
    used = ordered_variables(tuple(ys) + (beta,))
    lang = lc.base_lang
    supply = itertools.chain(lang.named_vars, lang.fresh_variables(avoid=lang.named_vars))
    names = [next(supply) for _ in used]
    rename = Substitution({h: Formula.var(n) for h, n in zip(used, names)})
    Y = dedupe(apply_substitution(rename, y) for y in ys)
    b = apply_substitution(rename, beta)
    sigma = Substitution({n: back[h] for h, n in zip(used, names)})
    return WojcickiResult(True, Y, b, sigma, count)


def validate_wojcicki_witness(lc: LiftedConsequence, X: Iterable[Formula], alpha: Formula,
                              res: WojcickiResult, limits: Limits = LIMITS) -> bool:
    """Recheck a found witness: base membership, ``Y |- b``, ``s(Y) <= X``, ``s(b) = a``."""
    if not res.found:
        return False
    X = set(X)
    if not all(lc.base_lang.owns(f) for f in res.Y + (res.beta,)):
        return False
    if not entails_class(lc.base_class, res.Y, res.beta, limits):
        return False
    return (all(apply_substitution(res.sigma, y) in X for y in res.Y)
            and apply_substitution(res.sigma, res.beta) == alpha)


def _pairs(formulas: tuple[Formula, ...], S: int):
    n = len(formulas)

    def ordered():
        for size in range(S + 1):
            for xs in itertools.combinations(range(n), size):
                for a in range(n):
                    yield xs, a

    def sample(rng):
        size = rng.randint(0, min(S, n))
        return tuple(sorted(rng.sample(range(n), size))), rng.randrange(n)

    return ordered, sample


def conservativity_check(lc: LiftedConsequence, frag: Fragment, budget: SearchBudget | None = None,
                         limits: Limits = LIMITS) -> Verdict:
    """Compare base and lifted entailment on ``(X, a)`` pairs from a base fragment."""
    budget = budget or SearchBudget()
    formulas = enumerate_fragment(frag, lc.base_lang, cap=limits.fragment)
    ordered, sample = _pairs(formulas, budget.max_set_size)

    def test(cand):
        xs, a = cand
        X = [formulas[i] for i in xs]
        return (entails_class(lc.base_class, X, formulas[a], limits)
                != lifted_entails(lc, X, formulas[a], limits))

    hit, stats = _bounded_search(ordered, sample, test, budget)
    if hit is None:
        return Verdict("conservativity", "no-counterexample", None, stats)
    xs, a = hit[0]
    X = tuple(formulas[i] for i in xs)
    witness = {"X": X, "alpha": formulas[a],
               "base": entails_class(lc.base_class, X, formulas[a], limits),
               "lifted": lifted_entails(lc, X, formulas[a], limits)}
    return Verdict("conservativity", "counterexample", witness, stats)


def shared_atlas_check(lc: LiftedConsequence, frag_base: Fragment, frag_ext: Fragment,
                       budget: SearchBudget | None = None, pair_samples: int = 300,
                       limits: Limits = LIMITS) -> Verdict:
    """Behavioral check that base and Wojcicki consequence share one uniform,
    couniform atlas.

    Sub-checks, in order: (i) every Wojcicki witness found on ``frag_ext``
    pairs is valid and the lifted relation agrees; (ii) lifted-true pairs get
    a witness within budget; (iii) conservativity on ``frag_base`` and the
    syntactic uniformity/couniformity searches on both fragments come up empty.
    Pairs for (i)/(ii) are limited to ``pair_samples``.
    """
    budget = budget or SearchBudget()
    formulas = enumerate_fragment(frag_ext, lc.extended_lang, cap=limits.fragment)
    ordered, sample = _pairs(formulas, budget.max_set_size)
    pair_budget = SearchBudget(budget.max_vars, budget.max_depth, budget.max_set_size,
                               budget.max_family_size, pair_samples, budget.seed)
    inner = SearchBudget(budget.max_vars, budget.max_depth, budget.max_set_size,
                         budget.max_family_size, 2_000, budget.seed)
    stats: dict = {"found_witnesses": 0}

    def test(cand):
        xs, a = cand
        X = tuple(formulas[i] for i in xs)
        res = wojcicki_entails(lc, X, formulas[a], inner, limits)
        lifted = lifted_entails(lc, X, formulas[a], limits)
        if res.found:
            stats["found_witnesses"] += 1
            if not (validate_wojcicki_witness(lc, X, formulas[a], res, limits) and lifted):
                return ("soundness", X, formulas[a], res)
        elif lifted:
            return ("completeness", X, formulas[a], res)
        return None

    hit, pair_stats = _bounded_search(ordered, sample, test, pair_budget)
    stats.update({f"pairs.{k}": v for k, v in pair_stats.items()})
    if hit is not None:
        name, X, a, res = hit[1]
        witness = {"subcheck": name, "X": X, "alpha": a}
        if res.found:
            witness.update({"Y": res.Y, "beta": res.beta, "sigma": dict(res.sigma)})
        return Verdict("shared-atlas", "counterexample", witness, stats)

    subs = [
        ("conservativity", conservativity_check(lc, frag_base, budget, limits)),
        ("uniform-base", check_uniform_syntactic(lc.base_class, budget, frag_base, limits)),
        ("couniform-base", check_couniform_syntactic(lc.base_class, budget, frag_base, limits)),
        ("uniform-lifted", check_uniform_syntactic(lc.interpretation, budget, frag_ext, limits)),
        ("couniform-lifted", check_couniform_syntactic(lc.interpretation, budget, frag_ext, limits)),
    ]
    for name, v in subs:
        stats[f"{name}.outcome"] = v.outcome
        if v.found:
            witness = {"subcheck": name}
            witness.update(v.witness)
            return Verdict("shared-atlas", "counterexample", witness, stats)
    return Verdict("shared-atlas", "no-counterexample", None, stats,
                   ("bounded search; the atlas itself is not constructed",))
