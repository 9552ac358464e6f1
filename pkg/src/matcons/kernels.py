"""Valuation-enumeration kernels.

A batch of formulas is compiled against a finite algebra into a flat
post-order program (shared subterms appear once).  Two backends run such a
program over every valuation of its variables:

* ``matcons._ckernel`` -- compiled Cython, scalar odometer loop with early exit;
* ``matcons._pykernel`` -- numpy, evaluates chunks of valuations as arrays.

The compiled backend is used when importable, unless ``MATCONS_PURE=1``.
Valuations are numbered in mixed radix: the first variable is the most
significant digit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from matcons.errors import ResourceLimitError, SignatureMismatch
from matcons.language import Formula

from matcons import _pykernel

try:
    if os.environ.get("MATCONS_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from matcons import _ckernel as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernel
    BACKEND = "python"

DEFAULT_VALUATION_CAP = 10**7

KIND_VAR = 0
KIND_OP = 1


@dataclass(frozen=True)
class Program:
    kinds: np.ndarray       # int32[N]
    slots: np.ndarray       # int32[N]: variable position, or table offset
    arities: np.ndarray     # int32[N]
    children: np.ndarray    # int32[N, max(1, max arity)]
    tables: np.ndarray      # int32[*]: all operation tables, row-major
    n: int
    nvars: int
    variables: tuple[str, ...]
    roots: tuple[int, ...]  # node index of each compiled input formula

    @property
    def valuation_count(self) -> int:
        return self.n**self.nvars


def compile_program(algebra, formulas: Sequence[Formula], variables: Sequence[str]) -> Program:
    """Compile ``formulas`` for evaluation in ``algebra`` over ``variables``."""
    flat, offsets = algebra.flat_tables
    var_pos = {v: i for i, v in enumerate(variables)}
    index: dict[Formula, int] = {}
    kinds, slots, arities, kids = [], [], [], []
    width = max(1, algebra.signature.max_arity)

    def add(f: Formula) -> int:
        hit = index.get(f)
        if hit is not None:
            return hit
        if f.is_var:
            if f.symbol not in var_pos:
                raise ValueError(f"unbound variable {f.symbol}")
            kinds.append(KIND_VAR)
            slots.append(var_pos[f.symbol])
            arities.append(0)
            kids.append([0] * width)
        else:
            off = offsets.get(f.symbol)
            if off is None or algebra.signature.arity(f.symbol) != len(f.args):
                raise SignatureMismatch(f"connective {f.symbol}/{len(f.args)} not in signature")
            ch = [add(a) for a in f.args]
            kinds.append(KIND_OP)
            slots.append(off)
            arities.append(len(ch))
            kids.append(ch + [0] * (width - len(ch)))
        index[f] = len(kinds) - 1
        return index[f]

    roots = tuple(add(f) for f in formulas)
    return Program(
        kinds=np.asarray(kinds, dtype=np.int32),
        slots=np.asarray(slots, dtype=np.int32),
        arities=np.asarray(arities, dtype=np.int32),
        children=np.asarray(kids, dtype=np.int32).reshape(len(kinds), width),
        tables=flat,
        n=algebra.size,
        nvars=len(variables),
        variables=tuple(variables),
        roots=roots,
    )


def _check_cap(prog: Program, cap: int) -> None:
    if prog.valuation_count > cap:
        raise ResourceLimitError(
            f"{prog.n}^{prog.nvars} = {prog.valuation_count} valuations exceeds cap {cap}")


def _mask(designated, n: int) -> np.ndarray:
    m = np.zeros(n, dtype=np.uint8)
    for d in designated:
        m[d] = 1
    return m


def find_valuation(
    prog: Program,
    designated,
    must_in: Sequence[int],
    must_out: Sequence[int] = (),
    cap: int = DEFAULT_VALUATION_CAP,
    impl=None,
) -> int:
    """Index of the first valuation designating every ``must_in`` node and no
    ``must_out`` node, or -1.  Node indices refer to ``prog`` nodes."""
    _check_cap(prog, cap)
    impl = impl or _impl
    return int(impl.find_valuation(
        prog.kinds, prog.slots, prog.arities, prog.children, prog.tables,
        prog.n, prog.nvars, _mask(designated, prog.n),
        np.asarray(must_in, dtype=np.int32), np.asarray(must_out, dtype=np.int32)))


def designation_table(
    prog: Program,
    designated,
    targets: Sequence[int],
    cap: int = DEFAULT_VALUATION_CAP,
    impl=None,
) -> np.ndarray:
    """uint8[valuations, len(targets)]: 1 where the target node is designated."""
    _check_cap(prog, cap)
    impl = impl or _impl
    return np.asarray(impl.designation_table(
        prog.kinds, prog.slots, prog.arities, prog.children, prog.tables,
        prog.n, prog.nvars, _mask(designated, prog.n),
        np.asarray(targets, dtype=np.int32)))


def decode_valuation(prog: Program, index: int) -> dict[str, int]:
    digits = []
    for _ in range(prog.nvars):
        index, d = divmod(index, prog.n)
        digits.append(d)
    return dict(zip(prog.variables, reversed(digits)))
