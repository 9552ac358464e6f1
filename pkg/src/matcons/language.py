"""Propositional languages: signatures, formulas, fragments and substitutions.

Formulas are immutable term trees.  Text syntax is a prefix s-expression::

    p                 variable
    bot               nullary connective
    (imp p (neg q))   compound

Any bare identifier that is not a connective name reads as a variable; whether
the variable belongs to a particular :class:`Language` is a separate question
answered by :meth:`Language.has_variable`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from matcons.errors import FormulaSyntaxError, ResourceLimitError

DEFAULT_FRAGMENT_CAP = 5_000

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_POOL = re.compile(r"v[0-9]+")


def is_identifier(name: str) -> bool:
    return bool(_IDENT.fullmatch(name))


def is_pool_name(name: str) -> bool:
    return bool(_POOL.fullmatch(name))


@dataclass(frozen=True)
class Signature:
    """Ordered connective declarations ``(name, arity)``; arity 0 is a constant."""

    connectives: tuple[tuple[str, int], ...]
    _arity: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        conns = tuple((str(n), int(a)) for n, a in self.connectives)
        object.__setattr__(self, "connectives", conns)
        arity = {}
        for name, k in conns:
            if not is_identifier(name):
                raise ValueError(f"connective name {name!r} is not an identifier")
            if k < 0:
                raise ValueError(f"connective {name} has negative arity")
            if name in arity:
                raise ValueError(f"duplicate connective {name}")
            arity[name] = k
        object.__setattr__(self, "_arity", arity)

    @classmethod
    def of(cls, text: str | Iterable[tuple[str, int]]) -> "Signature":
        """Build from ``"neg/1 imp/2"`` or from ``(name, arity)`` pairs."""
        if isinstance(text, str):
            pairs = []
            for tok in text.split():
                name, _, k = tok.partition("/")
                if not k.isdigit():
                    raise ValueError(f"bad connective declaration {tok!r}")
                pairs.append((name, int(k)))
            return cls(tuple(pairs))
        return cls(tuple(text))

    def __contains__(self, name: object) -> bool:
        return name in self._arity

    def arity(self, name: str) -> int:
        return self._arity[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.connectives)

    @property
    def max_arity(self) -> int:
        return max((k for _, k in self.connectives), default=0)

    def __str__(self) -> str:
        return " ".join(f"{n}/{k}" for n, k in self.connectives)


class Formula:
    """A term over some signature.  Leaves are variables or nullary connectives.

    Equality and hashing are structural; the hash is computed once.
    """

    __slots__ = ("symbol", "args", "is_var", "depth", "_hash", "_vars")

    def __init__(self, symbol: str, args: tuple["Formula", ...] = (), is_var: bool = False):
        if is_var and args:
            raise ValueError("a variable has no arguments")
        self.symbol = symbol
        self.args = tuple(args)
        self.is_var = is_var
        self.depth = 1 + max(a.depth for a in self.args) if self.args else 0
        self._hash = hash((symbol, is_var, self.args))
        self._vars = None

    @classmethod
    def var(cls, name: str) -> "Formula":
        return cls(name, (), True)

    @classmethod
    def app(cls, conn: str, *args: "Formula") -> "Formula":
        return cls(conn, tuple(args), False)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula) or self._hash != other._hash:
            return False
        return (
            self.is_var == other.is_var
            and self.symbol == other.symbol
            and self.args == other.args
        )

    def __repr__(self) -> str:
        return f"Formula({print_formula(self)!r})"

    def __str__(self) -> str:
        return print_formula(self)

    @property
    def variables(self) -> frozenset[str]:
        if self._vars is None:
            if self.is_var:
                self._vars = frozenset((self.symbol,))
            else:
                self._vars = frozenset().union(*(a.variables for a in self.args))
        return self._vars

    def subformulas(self) -> Iterator["Formula"]:
        """Post-order traversal (children before parents, repeats included)."""
        for a in self.args:
            yield from a.subformulas()
        yield self

    @property
    def size(self) -> int:
        return 1 + sum(a.size for a in self.args)


@dataclass(frozen=True)
class Language:
    """A signature plus variables.

    ``named_vars`` are explicit variable names; with ``pool_unbounded`` the
    fresh names ``v0, v1, ...`` are also variables of the language.
    """

    signature: Signature
    named_vars: tuple[str, ...] = ()
    pool_unbounded: bool = True

    def __post_init__(self):
        object.__setattr__(self, "named_vars", tuple(self.named_vars))
        seen = set()
        for v in self.named_vars:
            if not is_identifier(v):
                raise ValueError(f"variable name {v!r} is not an identifier")
            if v in self.signature:
                raise ValueError(f"variable {v} clashes with a connective name")
            if v in seen:
                raise ValueError(f"duplicate variable {v}")
            if self.pool_unbounded and is_pool_name(v):
                raise ValueError(f"variable {v} collides with the fresh-variable pool")
            seen.add(v)

    def has_variable(self, name: str) -> bool:
        return name in self.named_vars or (self.pool_unbounded and is_pool_name(name))

    def owns(self, f: Formula) -> bool:
        """True iff ``f`` is a formula of this language."""
        if f.is_var:
            return self.has_variable(f.symbol)
        if f.symbol not in self.signature or self.signature.arity(f.symbol) != len(f.args):
            return False
        return all(self.owns(a) for a in f.args)

    def fresh_variables(self, avoid: Iterable[str] = ()) -> Iterator[str]:
        if not self.pool_unbounded:
            raise ValueError("language has a bounded variable pool")
        avoid = set(avoid)
        for i in itertools.count():
            name = f"v{i}"
            if name not in avoid:
                yield name


# ---------------------------------------------------------------------------
# text syntax


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            m = _IDENT.match(text, i)
            if not m:
                raise FormulaSyntaxError(f"unexpected character {c!r}", i)
            tokens.append((m.group(), i))
            i = m.end()
    return tokens


def parse_formula(text: str, lang: Language | Signature) -> Formula:
    """Parse a prefix s-expression over the connectives of ``lang``.

    Given a bare Signature any non-connective identifier is a variable; given
    a Language, only that language's variables are accepted.
    """
    sig = lang.signature if isinstance(lang, Language) else lang
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula", 0)
    pos = 0

    def parse() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == ")":
            raise FormulaSyntaxError("unbalanced ')'", at)
        if tok != "(":
            if tok in sig:
                if sig.arity(tok) != 0:
                    raise FormulaSyntaxError(
                        f"connective {tok}/{sig.arity(tok)} used as a variable", at)
                return Formula.app(tok)
            if isinstance(lang, Language) and not lang.has_variable(tok):
                raise FormulaSyntaxError(f"{tok} is not a variable of the language", at)
            return Formula.var(tok)
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input", len(text))
        head, head_at = tokens[pos]
        pos += 1
        if head in "()":
            raise FormulaSyntaxError("expected a connective name", head_at)
        if head not in sig:
            raise FormulaSyntaxError(f"unknown connective {head}", head_at)
        args = []
        while pos < len(tokens) and tokens[pos][0] != ")":
            args.append(parse())
        if pos >= len(tokens):
            raise FormulaSyntaxError("missing ')'", len(text))
        pos += 1
        k = sig.arity(head)
        if len(args) != k:
            raise FormulaSyntaxError(
                f"arity mismatch: {head} takes {k} argument(s), got {len(args)}", head_at)
        return Formula.app(head, *args)

    f = parse()
    if pos != len(tokens):
        raise FormulaSyntaxError("trailing input", tokens[pos][1])
    return f


def print_formula(f: Formula) -> str:
    if not f.args:
        return f.symbol
    return "(" + f.symbol + " " + " ".join(print_formula(a) for a in f.args) + ")"


def split_formula_list(text: str) -> list[str]:
    """Split ``"p,(imp p q)"`` at top-level commas; braces are optional."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    parts, depth, cur = [], 0, []
    for c in text:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        if c == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(c)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    if any(not p for p in parts):
        raise FormulaSyntaxError("empty item in formula list", 0)
    return parts


def parse_formula_set(text: str, lang: Language | Signature) -> tuple[Formula, ...]:
    return dedupe(parse_formula(t, lang) for t in split_formula_list(text))


def format_formula_set(fs: Iterable[Formula]) -> str:
    return "{" + ", ".join(print_formula(f) for f in fs) + "}"


def dedupe(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(dict.fromkeys(fs))


# ---------------------------------------------------------------------------
# variables, fragments


def variables_of(fs: Iterable[Formula]) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for f in fs:
        out = out | f.variables
    return out


def ordered_variables(fs: Iterable[Formula]) -> tuple[str, ...]:
    """Variables in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}
    for f in fs:
        for g in f.subformulas():
            if g.is_var:
                seen.setdefault(g.symbol)
    return tuple(seen)


@dataclass(frozen=True)
class Fragment:
    """Formulas over ``vars`` with nesting depth at most ``depth``."""

    vars: tuple[str, ...]
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("fragment variables must be distinct")
        if self.depth < 0:
            raise ValueError("fragment depth must be nonnegative")


def fragment_size(frag: Fragment, signature: Signature) -> int:
    base = len(frag.vars) + sum(1 for _, k in signature.connectives if k == 0)
    cur = base
    for _ in range(frag.depth):
        cur = base + sum(cur**k for _, k in signature.connectives if k > 0)
    return cur


def enumerate_fragment(
    frag: Fragment, lang: Language | Signature, cap: int = DEFAULT_FRAGMENT_CAP
) -> tuple[Formula, ...]:
    """All formulas of the fragment in the canonical order.

    Variables first (declaration order), then nullary connectives, then
    compounds by depth, connective declaration order and lexicographic order
    of the children's positions in this same listing.
    """
    if isinstance(lang, Language):
        for v in frag.vars:
            if not lang.has_variable(v):
                raise ValueError(f"variable {v} is not in the language")
        sig = lang.signature
    else:
        sig = lang
        for v in frag.vars:
            if v in sig:
                raise ValueError(f"variable {v} clashes with a connective name")
    size = fragment_size(frag, sig)
    if size > cap:
        raise ResourceLimitError(f"fragment has {size} formulas, cap is {cap}")
    return _enumerate(frag, sig)


@lru_cache(maxsize=64)
def _enumerate(frag: Fragment, sig: Signature) -> tuple[Formula, ...]:
    out = [Formula.var(v) for v in frag.vars]
    out += [Formula.app(n) for n, k in sig.connectives if k == 0]
    prev = 0
    for _ in range(frag.depth):
        cur = len(out)
        layer = []
        for name, k in sig.connectives:
            if k == 0:
                continue
            for idx in itertools.product(range(cur), repeat=k):
                if max(idx) >= prev:
                    layer.append(Formula.app(name, *(out[i] for i in idx)))
        prev = cur
        out.extend(layer)
    return tuple(out)


# ---------------------------------------------------------------------------
# substitutions and extensions


class Substitution(Mapping[str, Formula]):
    """Simultaneous replacement of finitely many variables; identity elsewhere."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[str, Formula] | Iterable[tuple[str, Formula]] = ()):
        items = dict(mapping)
        self._map = {v: f for v, f in items.items() if not (f.is_var and f.symbol == v)}

    def __getitem__(self, key: str) -> Formula:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        body = ", ".join(f"{v} -> {print_formula(f)}" for v, f in self._map.items())
        return "{" + body + "}"

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._map)

    def __call__(self, f: Formula) -> Formula:
        return apply_substitution(self, f)


def apply_substitution(sigma: Mapping[str, Formula], f: Formula) -> Formula:
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if g.is_var:
            res = sigma.get(g.symbol, g)
        elif not g.args:
            res = g
        else:
            res = Formula.app(g.symbol, *(go(a) for a in g.args))
        memo[g] = res
        return res

    return go(f)


def extend_language(lang: Language, new_vars: Sequence[str]) -> Language:
    """Primitive extension: same signature, more variables."""
    for v in new_vars:
        if v in lang.signature or lang.has_variable(v):
            raise ValueError(f"name clash: {v} already belongs to the language")
    if len(set(new_vars)) != len(new_vars):
        raise ValueError("duplicate new variables")
    return Language(lang.signature, lang.named_vars + tuple(new_vars), lang.pool_unbounded)


def is_primitive_extension(lang: Language, lang2: Language) -> bool:
    if lang.signature != lang2.signature:
        return False
    if lang.pool_unbounded and not lang2.pool_unbounded:
        return False
    return all(lang2.has_variable(v) for v in lang.named_vars)
