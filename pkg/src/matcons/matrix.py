"""Finite logical matrices and matrix consequence.

A :class:`FiniteMatrix` is an algebra on ``{0, ..., n-1}`` with a designated
subset.  Entailment ``X |= a`` is decided by enumerating valuations of the
variables that occur in ``X`` and ``a``; evaluation only looks at occurring
variables, so nothing is lost by the restriction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from matcons import kernels
from matcons.errors import SignatureMismatch
from matcons.language import (
    Formula,
    Fragment,
    Signature,
    dedupe,
    enumerate_fragment,
    ordered_variables,
)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Operation tables over the carrier ``range(size)``.

    ``tables[c]`` is the flat row-major table of connective ``c``: the entry
    for arguments ``(a1, ..., ak)`` sits at ``a1*n^(k-1) + ... + ak``.
    """

    signature: Signature
    size: int
    tables: Mapping[str, tuple[int, ...]]
    name: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("carrier must be nonempty")
        tabs = {}
        for conn, k in self.signature.connectives:
            if conn not in self.tables:
                raise SignatureMismatch(f"no table for connective {conn}")
            t = tuple(int(x) for x in self.tables[conn])
            if len(t) != self.size**k:
                raise ValueError(f"table of {conn}/{k} needs {self.size**k} entries, has {len(t)}")
            if any(not 0 <= x < self.size for x in t):
                raise ValueError(f"table of {conn} has a value outside the carrier")
            tabs[conn] = t
        extra = set(self.tables) - set(tabs)
        if extra:
            raise SignatureMismatch(f"tables for undeclared connectives {sorted(extra)}")
        object.__setattr__(self, "tables", tabs)

    @classmethod
    def from_functions(cls, signature: Signature, size: int, ops: Mapping, name: str = ""):
        """Tabulate Python callables, one per connective."""
        tables = {}
        for conn, k in signature.connectives:
            fn = ops[conn]
            tables[conn] = tuple(fn(*args) for args in itertools.product(range(size), repeat=k))
        return cls(signature, size, tables, name)

    def op(self, conn: str, *args: int) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.tables[conn][idx]

    @cached_property
    def flat_tables(self) -> tuple[np.ndarray, dict[str, int]]:
        offsets, chunks, pos = {}, [], 0
        for conn, _ in self.signature.connectives:
            offsets[conn] = pos
            chunks.extend(self.tables[conn])
            pos += len(self.tables[conn])
        return np.asarray(chunks, dtype=np.int32), offsets

    def _key(self):
        return (self.signature, self.size, tuple(self.tables[c] for c in self.signature.names))

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True)
class FiniteMatrix:
    algebra: FiniteAlgebra
    filter: frozenset[int]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        d = frozenset(int(x) for x in self.filter)
        bad = [x for x in d if not 0 <= x < self.algebra.size]
        if bad:
            raise ValueError(f"filter elements {sorted(bad)} outside carrier of size {self.algebra.size}")
        object.__setattr__(self, "filter", d)

    @property
    def signature(self) -> Signature:
        return self.algebra.signature

    @property
    def full_filter(self) -> bool:
        return len(self.filter) == self.algebra.size

    def as_class(self) -> "MatrixClass":
        return MatrixClass((self,))


@dataclass(frozen=True)
class MatrixClass:
    members: tuple[FiniteMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a matrix class must be nonempty")
        sig = self.members[0].signature
        if any(m.signature != sig for m in self.members):
            raise SignatureMismatch("class members have different signatures")

    @property
    def signature(self) -> Signature:
        return self.members[0].signature

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def as_class(self) -> "MatrixClass":
        return self


def as_class(obj) -> MatrixClass:
    """Coerce a matrix, atlas, class, or sequence of matrices to a MatrixClass."""
    if hasattr(obj, "as_class"):
        return obj.as_class()
    members = []
    for x in obj:
        members.extend(as_class(x).members)
    return MatrixClass(tuple(members))


@dataclass(frozen=True)
class Limits:
    fragment: int = 5_000
    valuations: int = kernels.DEFAULT_VALUATION_CAP


LIMITS = Limits()


# ---------------------------------------------------------------------------
# evaluation and entailment


def evaluate(m: FiniteMatrix | FiniteAlgebra, v: Mapping[str, int], f: Formula) -> int:
    alg = m.algebra if isinstance(m, FiniteMatrix) else m

    def go(g: Formula) -> int:
        if g.is_var:
            if g.symbol not in v:
                raise ValueError(f"unbound variable {g.symbol}")
            return v[g.symbol]
        if g.symbol not in alg.signature or alg.signature.arity(g.symbol) != len(g.args):
            raise SignatureMismatch(f"connective {g.symbol}/{len(g.args)} not in signature")
        return alg.op(g.symbol, *(go(a) for a in g.args))

    return go(f)


def entails_matrix(m: FiniteMatrix, X: Iterable[Formula], alpha: Formula,
                   limits: Limits = LIMITS) -> bool:
    return countermodel(m, X, alpha, limits) is None


def countermodel(m: FiniteMatrix, X: Iterable[Formula], alpha: Formula,
                 limits: Limits = LIMITS) -> dict[str, int] | None:
    """A valuation designating all of ``X`` but not ``alpha``, if any."""
    X = dedupe(X)
    prog = kernels.compile_program(m.algebra, X + (alpha,), ordered_variables(X + (alpha,)))
    hit = kernels.find_valuation(prog, m.filter, prog.roots[:-1], prog.roots[-1:],
                                 cap=limits.valuations)
    return None if hit < 0 else kernels.decode_valuation(prog, hit)


def entails_class(M, X: Iterable[Formula], alpha: Formula, limits: Limits = LIMITS) -> bool:
    M = as_class(M)
    X = dedupe(X)
    return all(entails_matrix(m, X, alpha, limits) for m in M)


def satisfiable(m: FiniteMatrix, X: Iterable[Formula], limits: Limits = LIMITS) -> bool:
    """Some valuation designates every member of ``X``."""
    X = dedupe(X)
    if not m.filter:
        return not X
    prog = kernels.compile_program(m.algebra, X, ordered_variables(X))
    return kernels.find_valuation(prog, m.filter, prog.roots, (), cap=limits.valuations) >= 0


def is_inconsistent(M, X: Iterable[Formula], limits: Limits = LIMITS) -> bool:
    """Whether ``X`` entails every formula, i.e. ``X`` entails a fresh variable."""
    M = as_class(M)
    X = dedupe(X)
    return all(m.full_filter or not satisfiable(m, X, limits) for m in M)


def _fragment(frag: Fragment, sig: Signature, limits: Limits) -> tuple[Formula, ...]:
    return enumerate_fragment(frag, sig, cap=limits.fragment)


def _designations(m: FiniteMatrix, formulas: Sequence[Formula], variables: Sequence[str],
                  limits: Limits) -> np.ndarray:
    prog = kernels.compile_program(m.algebra, formulas, variables)
    return kernels.designation_table(prog, m.filter, prog.roots, cap=limits.valuations)


def cn_restricted(M, X: Iterable[Formula], frag: Fragment,
                  limits: Limits = LIMITS) -> tuple[Formula, ...]:
    """Fragment members entailed by ``X``, in fragment order."""
    M = as_class(M)
    X = dedupe(X)
    formulas = _fragment(frag, M.signature, limits)
    extra = [v for v in ordered_variables(X) if v not in frag.vars]
    if extra:
        raise ValueError(f"premise variables {extra} are outside the fragment")
    keep = np.ones(len(formulas), dtype=bool)
    for m in M:
        table = _designations(m, formulas + X, frag.vars, limits)
        rows = table[:, len(formulas):].all(axis=1)
        keep &= table[rows, :len(formulas)].all(axis=0)
    return tuple(f for f, k in zip(formulas, keep) if k)


# ---------------------------------------------------------------------------
# truth-set families


@dataclass(frozen=True)
class SigmaFamily:
    """Distinct truth sets of one matrix over a fragment.

    Truth sets are stored as bitmasks over ``formulas`` (bit i = formula i).
    ``properly_extendable`` says whether each truth set is the trace of a
    proper truth set on the whole formula algebra; that holds exactly when the
    filter is not the whole carrier, since a fresh variable can always be sent
    outside the filter.
    """

    fragment: Fragment
    formulas: tuple[Formula, ...]
    masks: tuple[int, ...]
    properly_extendable: bool

    @cached_property
    def index(self) -> dict[Formula, int]:
        return {f: i for i, f in enumerate(self.formulas)}

    def mask_of(self, fs: Iterable[Formula]) -> int:
        out = 0
        for f in fs:
            i = self.index.get(f)
            if i is None:
                raise ValueError(f"{f} is outside the fragment")
            out |= 1 << i
        return out

    def unmask(self, mask: int) -> frozenset[Formula]:
        return frozenset(f for i, f in enumerate(self.formulas) if mask >> i & 1)

    @property
    def members(self) -> list[tuple[frozenset[Formula], bool]]:
        return [(self.unmask(m), self.properly_extendable) for m in self.masks]

    def __len__(self):
        return len(self.masks)


def rows_to_masks(table: np.ndarray) -> list[int]:
    """Each uint8 row of a designation table as an int bitmask (bit i = column i)."""
    if table.shape[1] == 0:
        return [0] * table.shape[0]
    packed = np.packbits(table, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def sigma_family(m: FiniteMatrix, frag: Fragment, limits: Limits = LIMITS) -> SigmaFamily:
    formulas = _fragment(frag, m.signature, limits)
    table = _designations(m, formulas, frag.vars, limits)
    masks = tuple(dict.fromkeys(rows_to_masks(table)))
    return SigmaFamily(frag, formulas, masks, not m.full_filter)


def entails_via_sigma(families: Iterable[SigmaFamily], X: Iterable[Formula],
                      alpha: Formula) -> bool:
    """``X |- alpha`` iff every truth set containing ``X`` contains ``alpha``."""
    for fam in families:
        xm = fam.mask_of(X)
        am = fam.mask_of((alpha,))
        for t in fam.masks:
            if xm & ~t == 0 and not t & am:
                return False
    return True


def is_model(m: FiniteMatrix, M, frag: Fragment, budget=None,
             limits: Limits = LIMITS) -> tuple[bool, tuple | None]:
    """Search ``frag`` for ``(X, a)`` with ``X |-_M a`` but not ``X |=_m a``.

    Returns ``(True, None)`` when the searched space has no such pair and
    ``(False, (X, a))`` otherwise.  Premise sets are enumerated by size up to
    ``budget.max_set_size`` (smallest first), then conclusions in fragment
    order.  A true answer covers only the searched space.
    """
    from matcons.conformity import SearchBudget, _bounded_search

    M = as_class(M)
    budget = budget or SearchBudget()
    formulas = _fragment(frag, M.signature, limits)
    fams_m = sigma_family(m, frag, limits)
    fams_M = [sigma_family(x, frag, limits) for x in M]
    n = len(formulas)

    def ordered():
        for size in range(budget.max_set_size + 1):
            for xs in itertools.combinations(range(n), size):
                for a in range(n):
                    if a not in xs:
                        yield xs, a

    def sample(rng):
        size = rng.randint(0, min(budget.max_set_size, n))
        return tuple(sorted(rng.sample(range(n), size))), rng.randrange(n)

    def test(cand):
        xs, a = cand
        X = [formulas[i] for i in xs]
        return entails_via_sigma(fams_M, X, formulas[a]) and not entails_via_sigma(
            [fams_m], X, formulas[a])

    hit, _ = _bounded_search(ordered, sample, test, budget)
    if hit is None:
        return True, None
    (xs, a), _ = hit
    return False, (tuple(formulas[i] for i in xs), formulas[a])
