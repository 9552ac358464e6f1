"""Bounded searches for failures of uniformity and couniformity.

Four searches, each returning a :class:`Verdict`:

* :func:`check_uniform_syntactic` -- ``X, Y |- a`` with ``Y`` consistent and
  variable-disjoint from ``X, a`` but ``X |/- a``;
* :func:`check_couniform_syntactic` -- pairwise variable-disjoint consistent
  sets with an inconsistent union;
* :func:`check_uniform_bundle` -- the truth-set condition on an atlas;
* :func:`check_couniform_class` -- the truth-set condition on a class.

A search walks candidates smallest-first in a fixed order.  When the space
holds more than ``budget.samples`` candidates, the first half of the budget
goes to the ordered prefix and the rest to seeded random draws.  A
no-counterexample verdict only covers what was examined.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from matcons.atlas import Atlas, as_atlas, product_atlas
from matcons.errors import ResourceLimitError
from matcons.language import (
    Formula,
    Fragment,
    enumerate_fragment,
    format_formula_set,
    print_formula,
    variables_of,
)
from matcons.matrix import (
    LIMITS,
    Limits,
    MatrixClass,
    as_class,
    entails_class,
    is_inconsistent,
    sigma_family,
)

DEFAULT_VARS = ("p", "q", "r", "s", "t", "u")

BOUNDED_CAVEAT = "bounded search: no-counterexample certifies only the examined candidates"
POOL_NOTE = "variables of the union never exhaust the (unbounded) variable pool"


@dataclass(frozen=True)
class SearchBudget:
    max_vars: int = 2
    max_depth: int = 1
    max_set_size: int = 2
    max_family_size: int = 3
    samples: int = 10_000
    seed: int = 0

    def __post_init__(self):
        for name in ("max_vars", "max_set_size", "max_family_size", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")

    def fragment(self, names: Iterable[str] = DEFAULT_VARS) -> Fragment:
        names = list(names)
        if len(names) < self.max_vars:
            names += [f"v{i}" for i in range(self.max_vars - len(names))]
        return Fragment(tuple(names[: self.max_vars]), self.max_depth)

    def records(self) -> list[tuple[str, str]]:
        return [(f"budget.{k}", str(getattr(self, k))) for k in
                ("max_vars", "max_depth", "max_set_size", "max_family_size", "samples", "seed")]


@dataclass
class Verdict:
    check: str
    outcome: str  # "counterexample" | "no-counterexample"
    witness: dict[str, Any] | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.outcome == "counterexample"

    def records(self) -> list[tuple[str, str]]:
        out = [("check", self.check), ("outcome", self.outcome)]
        for k, v in (self.witness or {}).items():
            out.append((f"witness.{k}", render(v)))
        for k, v in self.stats.items():
            out.append((f"stats.{k}", render(v)))
        for note in self.notes:
            out.append(("note", note))
        return out


def render(v: Any) -> str:
    if isinstance(v, Formula):
        return print_formula(v)
    if isinstance(v, Fragment):
        return f"vars={','.join(v.vars)} depth={v.depth}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list, frozenset, set)):
        items = list(v)
        if all(isinstance(x, Formula) for x in items):
            return format_formula_set(items)
        return "[" + "; ".join(render(x) for x in items) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k} -> {render(x)}" for k, x in v.items()) + "}"
    return str(v)


def _bounded_search(
    ordered: Callable[[], Iterator],
    sample: Callable[[random.Random], Any],
    test: Callable[[Any], Any],
    budget: SearchBudget,
) -> tuple[tuple | None, dict]:
    """Run ``test`` over candidates; return ``((candidate, result), stats)`` for
    the first truthy result, else ``(None, stats)``."""
    space = sum(1 for _ in itertools.islice(ordered(), budget.samples + 1))
    exhaustive = space <= budget.samples
    limit = budget.samples if exhaustive else budget.samples // 2
    stats = {"ordered": 0, "sampled": 0, "rejected_samples": 0, "exhaustive": exhaustive}
    for cand in itertools.islice(ordered(), limit):
        stats["ordered"] += 1
        res = test(cand)
        if res:
            stats["candidates"] = stats["ordered"]
            return (cand, res), stats
    if not exhaustive:
        rng = random.Random(budget.seed)
        for _ in range(budget.samples - limit):
            cand = sample(rng)
            if cand is None:
                stats["rejected_samples"] += 1
                continue
            stats["sampled"] += 1
            res = test(cand)
            if res:
                break
        else:
            res = None
        if res:
            stats["candidates"] = stats["ordered"] + stats["sampled"]
            return (cand, res), stats
    stats["candidates"] = stats["ordered"] + stats["sampled"]
    return None, stats


class _Space:
    """Fragment formulas with per-formula variable bitmasks."""

    def __init__(self, formulas: tuple[Formula, ...], frag: Fragment):
        self.formulas = formulas
        self.frag = frag
        bit = {v: 1 << i for i, v in enumerate(frag.vars)}
        self.vm = [sum(bit[v] for v in f.variables) for f in formulas]
        self.full = (1 << len(frag.vars)) - 1
        self.within = {}
        for sub in range(self.full + 1):
            self.within[sub] = [i for i, m in enumerate(self.vm) if m & ~sub == 0]

    def varmask(self, idx: Iterable[int]) -> int:
        out = 0
        for i in idx:
            out |= self.vm[i]
        return out

    def get(self, idx: Iterable[int]) -> tuple[Formula, ...]:
        return tuple(self.formulas[i] for i in idx)


def _space(M: MatrixClass, frag: Fragment, limits: Limits) -> _Space:
    return _Space(enumerate_fragment(frag, M.signature, cap=limits.fragment), frag)


def _families(sp: _Space, S: int, F: int):
    """Families of >= 2 nonempty, pairwise variable-disjoint index sets.

    Order: total size, family size, sorted member sizes, then lexicographic.
    """

    def sizes_for(total: int, m: int, lo: int):
        if m == 0:
            if total == 0:
                yield ()
            return
        for k in range(lo, min(S, total) + 1):
            for rest in sizes_for(total - k, m - 1, k):
                yield (k,) + rest

    def build(sizes, used, prev):
        if not sizes:
            yield ()
            return
        k = sizes[0]
        for combo in itertools.combinations(sp.within[sp.full & ~used], k):
            if prev is not None and len(prev) == k and combo <= prev:
                continue
            for rest in build(sizes[1:], used | sp.varmask(combo), combo):
                yield (combo,) + rest

    for total in range(2, S * F + 1):
        for m in range(2, F + 1):
            for sizes in sizes_for(total, m, 1):
                yield from build(sizes, 0, None)


def _random_groups(sp: _Space, rng: random.Random, m: int) -> list[int]:
    """``m`` pairwise disjoint variable masks; each nonempty while variables last."""
    nv = len(sp.frag.vars)
    order = list(range(nv))
    rng.shuffle(order)
    groups = [0] * m
    for g, i in enumerate(order[:m]):
        groups[g] |= 1 << i
    for i in order[m:]:
        g = rng.randrange(m + 1)
        if g < m:
            groups[g] |= 1 << i
    return groups


def _random_family(sp: _Space, rng: random.Random, S: int, F: int,
                   pick: Callable[[random.Random, int], list[int] | None] | None = None):
    m = rng.randint(2, F)
    fam = []
    for g in _random_groups(sp, rng, m):
        cands = pick(rng, g) if pick else sp.within[g]
        if not cands:
            return None
        fam.append(tuple(sorted(rng.sample(cands, rng.randint(1, min(S, len(cands)))))))
    return tuple(sorted(fam, key=lambda c: (len(c), c)))


# ---------------------------------------------------------------------------
# syntactic checks


def check_uniform_syntactic(M, budget: SearchBudget | None = None, frag: Fragment | None = None,
                            limits: Limits = LIMITS) -> Verdict:
    """Search for ``X, Y |- a`` with ``Y`` consistent, ``V(Y)`` disjoint from
    ``V(X, a)``, and ``X |/- a``.

    Candidates are ordered by ``|X| + |Y|``, then the conclusion's fragment
    position, then ``|X|``, ``X`` and ``Y`` lexicographically.
    """
    M = as_class(M)
    budget = budget or SearchBudget()
    frag = frag or budget.fragment()
    sp = _space(M, frag, limits)
    N, S = len(sp.formulas), budget.max_set_size
    entail_cache: dict = {}
    incons_cache: dict = {}

    def entails(xs, a):
        key = (xs, a)
        if key not in entail_cache:
            entail_cache[key] = entails_class(M, sp.get(xs), sp.formulas[a], limits)
        return entail_cache[key]

    def ordered():
        for s in range(1, 2 * S + 1):
            for a in range(N):
                for nx in range(0, min(s - 1, S) + 1):
                    ny = s - nx
                    if ny > S:
                        continue
                    for xs in itertools.combinations(range(N), nx):
                        if a in xs:
                            continue
                        ys_pool = sp.within[sp.full & ~(sp.vm[a] | sp.varmask(xs))]
                        for ys in itertools.combinations(ys_pool, ny):
                            yield xs, ys, a

    def sample(rng):
        wy, wa = _random_groups(sp, rng, 2)
        ycands, acands = sp.within[wy], sp.within[sp.full & ~wy]
        if not ycands or not acands:
            return None
        a = rng.choice(acands)
        ys = tuple(sorted(rng.sample(ycands, rng.randint(1, min(S, len(ycands))))))
        xcands = [i for i in sp.within[sp.full & ~sp.varmask(ys)] if i != a]
        xs = tuple(sorted(rng.sample(xcands, rng.randint(0, min(S, len(xcands))))))
        return xs, ys, a

    def test(cand):
        xs, ys, a = cand
        if not entails(tuple(sorted(set(xs) | set(ys))), a) or entails(xs, a):
            return False
        if ys not in incons_cache:
            incons_cache[ys] = is_inconsistent(M, sp.get(ys), limits)
        return not incons_cache[ys]

    hit, stats = _bounded_search(ordered, sample, test, budget)
    if hit is None:
        return Verdict("uniform-syntactic", "no-counterexample", None, stats, (BOUNDED_CAVEAT,))
    xs, ys, a = hit[0]
    witness = {"X": sp.get(xs), "Y": sp.get(ys), "alpha": sp.formulas[a]}
    return Verdict("uniform-syntactic", "counterexample", witness, stats, _filter_notes(M))


def check_couniform_syntactic(M, budget: SearchBudget | None = None, frag: Fragment | None = None,
                              limits: Limits = LIMITS) -> Verdict:
    """Search for pairwise variable-disjoint consistent sets with an inconsistent union.

    Families have at least two members; a single consistent set can never be
    a counterexample.
    """
    M = as_class(M)
    budget = budget or SearchBudget()
    frag = frag or budget.fragment()
    sp = _space(M, frag, limits)
    S, F = budget.max_set_size, budget.max_family_size
    cache: dict = {}

    def inconsistent(xs):
        if xs not in cache:
            cache[xs] = is_inconsistent(M, sp.get(xs), limits)
        return cache[xs]

    def test(fam):
        union = tuple(sorted(set().union(*fam)))
        return inconsistent(union) and not any(inconsistent(x) for x in fam)

    hit, stats = _bounded_search(
        lambda: _families(sp, S, F),
        lambda rng: _random_family(sp, rng, S, F),
        test, budget)
    notes = (BOUNDED_CAVEAT, POOL_NOTE)
    if hit is None:
        return Verdict("couniform-syntactic", "no-counterexample", None, stats, notes)
    fam = hit[0]
    witness = {f"X_{i + 1}": sp.get(x) for i, x in enumerate(fam)}
    return Verdict("couniform-syntactic", "counterexample", witness, stats,
                   (POOL_NOTE,) + _filter_notes(M))


def _filter_notes(M: MatrixClass) -> tuple[str, ...]:
    if any(not m.filter for m in M):
        return ("class uses an empty filter",)
    return ()


# ---------------------------------------------------------------------------
# semantic checks


def _coerce_atlas(a) -> Atlas:
    atlas = as_atlas(a)
    if atlas is None:
        raise ValueError("members do not share one algebra; not a bundle")
    return atlas


def _uniform_obstruction(fams, sp: _Space, w: int, zj: int):
    """A chart/truth set ``(i, Z_i)`` with no matching ``Z_k`` for this ``Z_j``, or None."""
    out = sum(1 << f for f in sp.within[sp.full & ~w])
    inside = sum(1 << f for f in sp.within[w])
    need = zj & inside
    ok_keys = set()
    for fam in fams:
        for zk in fam.masks:
            if need & ~zk == 0:
                ok_keys.add(zk & out)
    for i, fam in enumerate(fams):
        for zi in fam.masks:
            if zi & out not in ok_keys:
                return i, zi
    return None


def check_uniform_bundle(a, frag: Fragment, budget: SearchBudget | None = None,
                         limits: Limits = LIMITS) -> Verdict:
    """Search the truth-set form of uniformity on an atlas.

    Looks for ``Y`` and a proper-extendable truth set ``Z_j`` of chart ``j``
    containing it, plus any truth set ``Z_i`` of chart ``i``, such that no
    truth set ``Z_k`` of any chart agrees with ``Z_i`` on formulas avoiding
    ``V(Y)`` while containing ``Z_j``'s formulas over ``V(Y)``.  The premise
    set ``X`` only has to sit inside ``Z_i``; ``X`` empty is the weakest
    choice and is the one reported.
    """
    atlas = _coerce_atlas(a)
    budget = budget or SearchBudget()
    M = atlas.as_class()
    fams = [sigma_family(m, frag, limits) for m in M]
    sp = _Space(fams[0].formulas, frag)
    N, S = len(sp.formulas), budget.max_set_size
    proper = [(j, z) for j, fam in enumerate(fams) if fam.properly_extendable for z in fam.masks]
    obstruction: dict = {}

    def test(ys):
        ymask = sum(1 << i for i in ys)
        w = sp.varmask(ys)
        for j, zj in proper:
            if ymask & ~zj:
                continue
            key = (w, zj)
            if key not in obstruction:
                obstruction[key] = _uniform_obstruction(fams, sp, w, zj)
            if obstruction[key] is not None:
                return (j, zj) + obstruction[key]
        return None

    def ordered():
        for k in range(0, S + 1):
            yield from itertools.combinations(range(N), k)

    def sample(rng):
        if not proper:
            return None
        _, zj = rng.choice(proper)
        members = [i for i in range(N) if zj >> i & 1]
        if not members:
            return None
        return tuple(sorted(rng.sample(members, rng.randint(1, min(S, len(members))))))

    hit, stats = _bounded_search(ordered, sample, test, budget)
    notes = (BOUNDED_CAVEAT,) + _filter_notes(M)
    if hit is None:
        return Verdict("uniform-bundle", "no-counterexample", None, stats, notes)
    ys, (j, zj, i, zi) = hit
    witness = {
        "X": (), "Y": sp.get(ys),
        "i": i, "Z_i": _sorted_set(fams[i], zi),
        "j": j, "Z_j": _sorted_set(fams[j], zj),
        "fragment": frag,
    }
    return Verdict("uniform-bundle", "counterexample", witness, stats, notes)


def _sorted_set(fam, mask: int) -> tuple[Formula, ...]:
    return tuple(f for i, f in enumerate(fam.formulas) if mask >> i & 1)


def check_couniform_class(M, frag: Fragment, budget: SearchBudget | None = None,
                          limits: Limits = LIMITS) -> Verdict:
    """Search for variable-disjoint sets each inside a proper-extendable truth
    set of some member, whose union is inside none."""
    M = as_class(M)
    budget = budget or SearchBudget()
    fams = [sigma_family(m, frag, limits) for m in M]
    sp = _Space(fams[0].formulas, frag)
    S, F = budget.max_set_size, budget.max_family_size
    proper = [(k, z) for k, fam in enumerate(fams) if fam.properly_extendable for z in fam.masks]

    def realizer(xs):
        xm = sum(1 << i for i in xs)
        for k, z in proper:
            if xm & ~z == 0:
                return k, z
        return None

    def test(fam):
        union = tuple(sorted(set().union(*fam)))
        if realizer(union) is not None:
            return None
        parts = [realizer(x) for x in fam]
        return parts if all(p is not None for p in parts) else None

    def pick(rng, g):
        if not proper:
            return None
        _, z = rng.choice(proper)
        return [i for i in sp.within[g] if z >> i & 1]

    hit, stats = _bounded_search(
        lambda: _families(sp, S, F),
        lambda rng: _random_family(sp, rng, S, F, pick),
        test, budget)
    notes = (BOUNDED_CAVEAT, POOL_NOTE) + _filter_notes(M)
    if hit is None:
        return Verdict("couniform-class", "no-counterexample", None, stats, notes)
    fam, parts = hit
    witness = {}
    for n, (x, (k, z)) in enumerate(zip(fam, parts), 1):
        witness[f"X_{n}"] = sp.get(x)
        witness[f"X_{n}.member"] = k
        witness[f"X_{n}.Z"] = _sorted_set(fams[k], z)
    witness["fragment"] = frag
    return Verdict("couniform-class", "counterexample", witness, stats, notes)


# ---------------------------------------------------------------------------
# replay


def _family_of(w: dict) -> list[tuple[Formula, ...]]:
    keys = sorted((k for k in w if k.startswith("X_") and "." not in k), key=lambda k: int(k[2:]))
    return [tuple(w[k]) for k in keys]


def revalidate(verdict: Verdict, subject, limits: Limits = LIMITS) -> bool:
    """Recheck a counterexample from scratch through the base operations."""
    if not verdict.found:
        return False
    w = verdict.witness
    if verdict.check == "uniform-syntactic":
        M = as_class(subject)
        X, Y, a = tuple(w["X"]), tuple(w["Y"]), w["alpha"]
        if variables_of(Y) & variables_of(X + (a,)):
            return False
        return (entails_class(M, X + Y, a, limits) and not entails_class(M, X, a, limits)
                and not is_inconsistent(M, Y, limits))
    if verdict.check == "couniform-syntactic":
        M = as_class(subject)
        fam = _family_of(w)
        if len(fam) < 2 or not _pairwise_disjoint(fam):
            return False
        union = tuple(f for x in fam for f in x)
        return is_inconsistent(M, union, limits) and not any(
            is_inconsistent(M, x, limits) for x in fam)
    if verdict.check == "uniform-bundle":
        return _replay_uniform_bundle(_coerce_atlas(subject), w, limits)
    if verdict.check == "couniform-class":
        return _replay_couniform_class(as_class(subject), w, limits)
    raise ValueError(f"no replay for check {verdict.check!r}")


def _pairwise_disjoint(fam) -> bool:
    seen: set = set()
    for x in fam:
        v = variables_of(x)
        if v & seen:
            return False
        seen |= v
    return True


def _replay_uniform_bundle(atlas: Atlas, w: dict, limits: Limits) -> bool:
    frag = w["fragment"]
    fams = [sigma_family(m, frag, limits) for m in atlas.as_class()]
    truth = [fam.members for fam in fams]
    X, Y = frozenset(w["X"]), frozenset(w["Y"])
    zi, zj = frozenset(w["Z_i"]), frozenset(w["Z_j"])
    i, j = w["i"], w["j"]
    if (zi, True) not in truth[i] and (zi, False) not in truth[i]:
        return False
    if (zj, True) not in truth[j]:
        return False
    vy = variables_of(Y)
    if variables_of(X) & vy or not (X <= zi and Y <= zj):
        return False
    outside = {f for f in fams[0].formulas if not f.variables & vy}
    inside = {f for f in fams[0].formulas if f.variables <= vy}
    for members in truth:
        for zk, _ in members:
            if zk & outside == zi & outside and zj & inside <= zk:
                return False
    return True


def _replay_couniform_class(M: MatrixClass, w: dict, limits: Limits) -> bool:
    frag = w["fragment"]
    proper = []
    for m in M:
        fam = sigma_family(m, frag, limits)
        proper += [z for z, ext in fam.members if ext]
    fam = _family_of(w)
    if len(fam) < 2 or not _pairwise_disjoint(fam):
        return False
    union = frozenset(f for x in fam for f in x)
    if any(union <= z for z in proper):
        return False
    return all(any(frozenset(x) <= z for z in proper) for x in fam)


# ---------------------------------------------------------------------------
# combined report


@dataclass
class SingleMatrixReport:
    verdicts: dict[str, Verdict]
    product: dict[str, Any]
    classification: str

    @property
    def positive(self) -> bool:
        return self.classification.startswith("consistent")

    def records(self) -> list[tuple[str, str]]:
        out = [("classification", self.classification)]
        for k, v in self.product.items():
            out.append((f"product.{k}", render(v)))
        for name, v in self.verdicts.items():
            if v is None:
                out.append((f"{name}.outcome", "not-applicable"))
                continue
            out += [(f"{name}.{k}", val) for k, val in v.records() if k != "check"]
        return out


def single_matrix_report(M, frag: Fragment, budget: SearchBudget | None = None,
                         limits: Limits = LIMITS) -> SingleMatrixReport:
    """Run all four searches; positive iff none finds a counterexample."""
    M = as_class(M)
    budget = budget or SearchBudget()
    verdicts: dict[str, Verdict | None] = {
        "uniform-syntactic": check_uniform_syntactic(M, budget, frag, limits),
        "couniform-syntactic": check_couniform_syntactic(M, budget, frag, limits),
    }
    atlas = as_atlas(M)
    verdicts["uniform-bundle"] = (check_uniform_bundle(atlas, frag, budget, limits)
                                  if atlas is not None else None)
    verdicts["couniform-class"] = check_couniform_class(M, frag, budget, limits)
    try:
        prod = product_atlas(M)
        product = {"carrier": prod.algebra.size,
                   "filter_sizes": ",".join(str(len(d)) for d in prod.filters)}
    except ResourceLimitError as exc:
        product = {"error": str(exc)}
    bad = [k for k, v in verdicts.items() if v is not None and v.found]
    if bad:
        classification = "not single-matrix determinable: counterexample in " + ",".join(bad)
    else:
        classification = "consistent with single-matrix determinability within budget"
    return SingleMatrixReport(verdicts, product, classification)
