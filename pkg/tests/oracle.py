"""Independent reference implementations used as test oracles.

Nothing here touches the kernels, the program compiler or FiniteAlgebra
tables: operations are plain Python functions and formulas are walked
recursively with no caching.
"""

import itertools

CL2_OPS = {
    "neg": lambda x: 1 - x,
    "and": lambda x, y: min(x, y),
    "or": lambda x, y: max(x, y),
    "imp": lambda x, y: max(1 - x, y),
}
L3_OPS = {
    "neg": lambda x: 2 - x,
    "and": lambda x, y: min(x, y),
    "or": lambda x, y: max(x, y),
    "imp": lambda x, y: min(2, 2 - x + y),
}


def value(ops, v, f):
    if f.is_var:
        return v[f.symbol]
    return ops[f.symbol](*[value(ops, v, a) for a in f.args])


def variables(f):
    if f.is_var:
        return {f.symbol}
    out = set()
    for a in f.args:
        out |= variables(a)
    return out


def entails(ops, size, designated, X, alpha):
    vs = sorted(set().union(variables(alpha), *[variables(x) for x in X]))
    for vals in itertools.product(range(size), repeat=len(vs)):
        v = dict(zip(vs, vals))
        if all(value(ops, v, x) in designated for x in X) and value(ops, v, alpha) not in designated:
            return False
    return True


def table_ops(algebra_tables, size, signature):
    """Python callables reading raw table tuples (for randomly generated algebras)."""
    ops = {}
    for conn, k in signature:
        table = algebra_tables[conn]

        def op(*args, table=table):
            idx = 0
            for a in args:
                idx = idx * size + a
            return table[idx]

        ops[conn] = op
    return ops


def fragment_set(vars_, signature, depth, make_var, make_app):
    """Every formula over ``vars_`` of depth <= ``depth``, as a set."""
    level = {make_var(v) for v in vars_} | {make_app(c) for c, k in signature if k == 0}
    for _ in range(depth):
        nxt = set(level)
        for c, k in signature:
            if k == 0:
                continue
            for args in itertools.product(sorted(level, key=str), repeat=k):
                nxt.add(make_app(c, *args))
        level = nxt
    return level


def truth_sets(ops, size, designated, vars_, formulas):
    out = set()
    for vals in itertools.product(range(size), repeat=len(vars_)):
        v = dict(zip(vars_, vals))
        out.add(frozenset(f for f in formulas if value(ops, v, f) in designated))
    return out


def brute_theories(entails_fn, formulas):
    """Every subset T of ``formulas`` with {a : T |- a} = T (2^N closures)."""
    out = set()
    for r in range(len(formulas) + 1):
        for T in itertools.combinations(formulas, r):
            closed = frozenset(a for a in formulas if entails_fn(list(T), a))
            if closed == frozenset(T):
                out.add(closed)
    return out
