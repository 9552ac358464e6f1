"""Line-oriented matrix files.

Grammar (one declaration per line, ``#`` starts a comment)::

    signature neg/1 imp/2
    algebra B2 carrier 2
    op B2 neg 0:1 1:0
    op B2 imp 0,0:1 0,1:1 1,0:0 1,1:1
    matrix CL2 algebra B2 filter 1
    matrix B2E algebra B2 filter -
    atlas NU algebra B2 filters {1};{}

An ``op`` entry is ``tuple:value`` with arity-many comma-separated arguments
(``:v`` for a nullary connective).  ``op`` lines for one connective may be
split across several lines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from matcons.atlas import Atlas
from matcons.errors import MatrixFileError
from matcons.language import Signature, is_identifier
from matcons.matrix import FiniteAlgebra, FiniteMatrix


@dataclass
class Catalog:
    signature: Signature | None = None
    algebras: dict[str, FiniteAlgebra] = field(default_factory=dict)
    entries: dict[str, FiniteMatrix | Atlas] = field(default_factory=dict)
    # declaration name of each entry's algebra, for printing
    algebra_of: dict[str, str] = field(default_factory=dict)


def _ints(text: str, line: int) -> list[int]:
    if text == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise MatrixFileError(f"expected comma-separated integers, got {text!r}", line) from None


def _filter(text: str, line: int) -> frozenset[int]:
    return frozenset() if text == "-" else frozenset(_ints(text, line))


def parse_matrix_text(text: str) -> Catalog:
    cat = Catalog()
    pending: dict[str, dict] = {}  # algebra name -> {"size", "line", "entries": {conn: {tuple: v}}}

    def finish(name: str) -> FiniteAlgebra:
        if name in cat.algebras:
            return cat.algebras[name]
        decl = pending[name]
        n, tables = decl["size"], {}
        for conn, k in cat.signature.connectives:
            got = decl["entries"].get(conn, {})
            table = []
            for args in itertools.product(range(n), repeat=k):
                if args not in got:
                    raise MatrixFileError(
                        f"algebra {name}: table of {conn} is missing the tuple "
                        f"{','.join(map(str, args)) or '()'}", decl["line"])
                table.append(got[args])
            tables[conn] = tuple(table)
        try:
            cat.algebras[name] = FiniteAlgebra(cat.signature, n, tables, name)
        except ValueError as exc:
            raise MatrixFileError(f"algebra {name}: {exc}", decl["line"]) from None
        return cat.algebras[name]

    def new_name(name: str, lineno: int, table) -> None:
        if not is_identifier(name):
            raise MatrixFileError(f"bad name {name!r}", lineno)
        if name in table:
            raise MatrixFileError(f"duplicate name {name}", lineno)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        kw = words[0]
        if kw == "signature":
            if cat.signature is not None:
                raise MatrixFileError("second signature declaration", lineno)
            try:
                cat.signature = Signature.of(" ".join(words[1:]))
            except ValueError as exc:
                raise MatrixFileError(str(exc), lineno) from None
            continue
        if cat.signature is None:
            raise MatrixFileError(f"'{kw}' before the signature declaration", lineno)
        if kw == "algebra":
            if len(words) != 4 or words[2] != "carrier" or not words[3].isdigit():
                raise MatrixFileError("expected: algebra NAME carrier N", lineno)
            new_name(words[1], lineno, pending)
            pending[words[1]] = {"size": int(words[3]), "line": lineno, "entries": {}}
        elif kw == "op":
            if len(words) < 3:
                raise MatrixFileError("expected: op ALGEBRA CONNECTIVE tuple:value ...", lineno)
            alg, conn = words[1], words[2]
            if alg not in pending:
                raise MatrixFileError(f"unknown algebra {alg}", lineno)
            if alg in cat.algebras:
                raise MatrixFileError(f"algebra {alg} is already in use; op lines must come first", lineno)
            if conn not in cat.signature:
                raise MatrixFileError(f"unknown connective {conn}", lineno)
            k = cat.signature.arity(conn)
            table = pending[alg]["entries"].setdefault(conn, {})
            for item in words[3:]:
                args_text, sep, val = item.partition(":")
                if not sep:
                    raise MatrixFileError(f"entry {item!r} lacks ':'", lineno)
                args = tuple(_ints(args_text, lineno))
                if len(args) != k:
                    raise MatrixFileError(f"{conn} takes {k} argument(s), entry {item!r}", lineno)
                if args in table:
                    raise MatrixFileError(f"{conn}{args} defined twice", lineno)
                vals = _ints(val, lineno)
                if len(vals) != 1:
                    raise MatrixFileError(f"entry {item!r} needs one value", lineno)
                n = pending[alg]["size"]
                if not all(0 <= x < n for x in args + (vals[0],)):
                    raise MatrixFileError(f"entry {item!r} is outside the carrier 0..{n - 1}", lineno)
                table[args] = vals[0]
        elif kw == "matrix":
            if len(words) != 6 or words[2] != "algebra" or words[4] != "filter":
                raise MatrixFileError("expected: matrix NAME algebra ANAME filter e1,e2,...", lineno)
            new_name(words[1], lineno, cat.entries)
            if words[3] not in pending:
                raise MatrixFileError(f"unknown algebra {words[3]}", lineno)
            alg = finish(words[3])
            try:
                cat.entries[words[1]] = FiniteMatrix(alg, _filter(words[5], lineno), words[1])
            except ValueError as exc:
                raise MatrixFileError(str(exc), lineno) from None
            cat.algebra_of[words[1]] = words[3]
        elif kw == "atlas":
            if len(words) != 6 or words[2] != "algebra" or words[4] != "filters":
                raise MatrixFileError("expected: atlas NAME algebra ANAME filters {e...};{e...}", lineno)
            new_name(words[1], lineno, cat.entries)
            if words[3] not in pending:
                raise MatrixFileError(f"unknown algebra {words[3]}", lineno)
            alg = finish(words[3])
            filters = []
            for part in words[5].split(";"):
                if not (part.startswith("{") and part.endswith("}")):
                    raise MatrixFileError(f"filter {part!r} must be written {{e,...}}", lineno)
                filters.append(frozenset(_ints(part[1:-1], lineno)))
            try:
                cat.entries[words[1]] = Atlas(alg, tuple(filters), words[1])
            except ValueError as exc:
                raise MatrixFileError(str(exc), lineno) from None
            cat.algebra_of[words[1]] = words[3]
        else:
            raise MatrixFileError(f"unknown declaration '{kw}'", lineno)

    for name in pending:
        finish(name)
    return cat


def load_matrix_file(path: str | Path) -> Catalog:
    return parse_matrix_text(Path(path).read_text())


def dump_catalog(cat: Catalog) -> str:
    """Canonical text for a catalog; parsing it back yields an equal catalog."""
    if cat.signature is None:
        return ""
    lines = [f"signature {cat.signature}"]
    for name, alg in cat.algebras.items():
        lines.append(f"algebra {name} carrier {alg.size}")
        for conn, k in cat.signature.connectives:
            items = [f"{','.join(map(str, args))}:{alg.op(conn, *args)}"
                     for args in itertools.product(range(alg.size), repeat=k)]
            lines.append(f"op {name} {conn} " + " ".join(items))
    for name, entry in cat.entries.items():
        alg = cat.algebra_of[name]
        if isinstance(entry, Atlas):
            fs = ";".join("{" + ",".join(map(str, sorted(d))) + "}" for d in entry.filters)
            lines.append(f"atlas {name} algebra {alg} filters {fs}")
        else:
            d = ",".join(map(str, sorted(entry.filter))) or "-"
            lines.append(f"matrix {name} algebra {alg} filter {d}")
    return "\n".join(lines) + "\n"
