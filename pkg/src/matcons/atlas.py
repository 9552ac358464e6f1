"""Atlases, the product atlas of a matrix class, and Lindenbaum theories.

An atlas is one finite algebra with several filters; its consequence is the
class consequence of the matrices ``<A, D_i>``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

from matcons.errors import ResourceLimitError
from matcons.language import (
    Formula,
    Fragment,
    Substitution,
    apply_substitution,
    enumerate_fragment,
)
from matcons.matrix import (
    LIMITS,
    FiniteAlgebra,
    FiniteMatrix,
    Limits,
    MatrixClass,
    as_class,
    entails_class,
    sigma_family,
)

DEFAULT_PRODUCT_CAP = 10**6  # entries of the largest product operation table
DEFAULT_THEORY_CAP = 1 << 20


@dataclass(frozen=True)
class Atlas:
    algebra: FiniteAlgebra
    filters: tuple[frozenset[int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        filters = tuple(frozenset(int(x) for x in d) for d in self.filters)
        if not filters:
            raise ValueError("an atlas needs at least one filter")
        for d in filters:
            bad = [x for x in d if not 0 <= x < self.algebra.size]
            if bad:
                raise ValueError(
                    f"filter elements {sorted(bad)} outside carrier of size {self.algebra.size}")
        object.__setattr__(self, "filters", filters)

    @property
    def signature(self):
        return self.algebra.signature

    @property
    def charts(self) -> tuple[FiniteMatrix, ...]:
        return tuple(FiniteMatrix(self.algebra, d, f"{self.name}[{i}]")
                     for i, d in enumerate(self.filters))

    def as_class(self) -> MatrixClass:
        return MatrixClass(self.charts)


def make_atlas(algebra: FiniteAlgebra, filters: Iterable[Iterable[int]], name: str = "") -> Atlas:
    return Atlas(algebra, tuple(frozenset(d) for d in filters), name)


def as_atlas(M) -> Atlas | None:
    """View a class as an atlas when all members share one algebra, else None."""
    if isinstance(M, Atlas):
        return M
    M = as_class(M)
    alg = M.members[0].algebra
    if any(m.algebra != alg for m in M):
        return None
    return Atlas(alg, tuple(m.filter for m in M))


def atlas_entails(a: Atlas, X: Iterable[Formula], alpha: Formula, limits: Limits = LIMITS) -> bool:
    return entails_class(a.as_class(), X, alpha, limits)


def product_element(sizes: Sequence[int], coords: Sequence[int]) -> int:
    e = 0
    for n, c in zip(sizes, coords):
        e = e * n + c
    return e


def product_coordinates(sizes: Sequence[int], e: int) -> tuple[int, ...]:
    out = []
    for n in reversed(sizes):
        e, c = divmod(e, n)
        out.append(c)
    return tuple(reversed(out))


def product_atlas(M, cap: int = DEFAULT_PRODUCT_CAP) -> Atlas:
    """The direct product of the class's algebras with one filter per member.

    Filter ``i`` holds the tuples whose ``i``-th coordinate is designated in
    member ``i``; the other coordinates are unrestricted.
    """
    M = as_class(M)
    sizes = [m.algebra.size for m in M]
    total = reduce(lambda a, b: a * b, sizes, 1)
    sig = M.signature
    if total ** max(1, sig.max_arity) > cap:
        raise ResourceLimitError(f"product carrier {total} too large for cap {cap}")
    coords = [product_coordinates(sizes, e) for e in range(total)]
    tables = {}
    for conn, k in sig.connectives:
        table = []
        for args in itertools.product(range(total), repeat=k):
            table.append(product_element(sizes, [
                m.algebra.op(conn, *(coords[a][i] for a in args)) for i, m in enumerate(M)]))
        tables[conn] = tuple(table)
    alg = FiniteAlgebra(sig, total, tables, "x".join(m.algebra.name or "?" for m in M))
    filters = [frozenset(e for e in range(total) if coords[e][i] in m.filter)
               for i, m in enumerate(M)]
    return Atlas(alg, tuple(filters), "product")


# ---------------------------------------------------------------------------
# Lindenbaum theories over a fragment


@dataclass(frozen=True)
class TheoryFamily:
    """Fragment-closed sets of the class consequence, as bitmasks over ``formulas``."""

    fragment: Fragment
    formulas: tuple[Formula, ...]
    masks: tuple[int, ...]

    @property
    def theories(self) -> list[frozenset[Formula]]:
        return [frozenset(f for i, f in enumerate(self.formulas) if m >> i & 1)
                for m in self.masks]

    def __len__(self):
        return len(self.masks)

    def __contains__(self, fs) -> bool:
        idx = {f: i for i, f in enumerate(self.formulas)}
        try:
            mask = sum(1 << idx[f] for f in set(fs))
        except KeyError:
            return False
        return mask in set(self.masks)


def _sigma_masks(M: MatrixClass, frag: Fragment, limits: Limits) -> tuple[tuple[Formula, ...], set[int]]:
    fams = [sigma_family(m, frag, limits) for m in M]
    masks = set()
    for fam in fams:
        masks.update(fam.masks)
    return fams[0].formulas, masks


def closure_mask(truth_masks: Iterable[int], x: int, full: int) -> int:
    """Intersection of the truth sets containing ``x`` (the fragment if none)."""
    out = full
    for t in truth_masks:
        if x & ~t == 0:
            out &= t
    return out


def lindenbaum_theories(M, frag: Fragment, method: str = "closure",
                        limits: Limits = LIMITS, cap: int = DEFAULT_THEORY_CAP) -> TheoryFamily:
    """All subsets ``T`` of the fragment with ``Cn(T)`` restricted to the fragment equal to ``T``.

    Restricted to a fragment, ``Cn(T)`` is the intersection of the truth sets
    (over all members) that contain ``T``.  ``method="closure"`` therefore
    closes the truth sets and the whole fragment under intersection;
    ``method="brute"`` closes each of the ``2^N`` subsets.
    """
    M = as_class(M)
    formulas, truths = _sigma_masks(M, frag, limits)
    full = (1 << len(formulas)) - 1
    if method == "brute":
        if 1 << len(formulas) > cap:
            raise ResourceLimitError(f"2^{len(formulas)} candidate sets exceeds cap {cap}")
        found = {x for x in range(full + 1) if closure_mask(truths, x, full) == x}
    elif method == "closure":
        found = {full}
        frontier = set(truths) - found
        while frontier:
            found |= frontier
            if len(found) > cap:
                raise ResourceLimitError(f"more than {cap} theories")
            frontier = {a & b for a in frontier for b in found} - found
    else:
        raise ValueError(f"unknown method {method!r}")
    return TheoryFamily(frag, formulas, tuple(sorted(found)))


def lindenbaum_sigma_sets(M, frag: Fragment, sub_depth: int, limits: Limits = LIMITS,
                          cap: int = DEFAULT_THEORY_CAP) -> set[frozenset[Formula]]:
    """Truth sets of the Lindenbaum matrices ``<Fm, T>`` seen through the fragment.

    A valuation into the formula algebra is a substitution.  Only substitutions
    sending each fragment variable to a fragment formula of depth at most
    ``sub_depth`` are tried, so the result under-approximates the true family.
    """
    M = as_class(M)
    fam = lindenbaum_theories(M, frag, limits=limits, cap=cap)
    formulas = fam.formulas
    index = {f: i for i, f in enumerate(formulas)}
    images = [f for f in formulas if f.depth <= sub_depth]
    n_subs = len(images) ** len(frag.vars)
    if n_subs * len(fam) > cap:
        raise ResourceLimitError(f"{n_subs} substitutions x {len(fam)} theories exceeds cap {cap}")
    out: set[int] = set()
    for choice in itertools.product(images, repeat=len(frag.vars)):
        sigma = Substitution(zip(frag.vars, choice))
        pre = [index.get(apply_substitution(sigma, f)) for f in formulas]
        for t in fam.masks:
            mask = 0
            for i, j in enumerate(pre):
                if j is not None and t >> j & 1:
                    mask |= 1 << i
            out.add(mask)
    return {frozenset(f for i, f in enumerate(formulas) if m >> i & 1) for m in out}


def fragment_formulas(M, frag: Fragment, limits: Limits = LIMITS) -> tuple[Formula, ...]:
    return enumerate_fragment(frag, as_class(M).signature, cap=limits.fragment)
