import random

import pytest

from matcons import catalog
from matcons.language import Formula, Signature, parse_formula
from matcons.matrix import FiniteAlgebra, FiniteMatrix

SIG = catalog.CLASSICAL_SIGNATURE


def P(text, sig=SIG):
    return parse_formula(text, sig)


def S(*texts, sig=SIG):
    return tuple(P(t, sig) for t in texts)


def random_matrix(rng: random.Random, sig: Signature = SIG, max_size: int = 3) -> FiniteMatrix:
    n = rng.randint(1, max_size)
    tables = {c: tuple(rng.randrange(n) for _ in range(n**k)) for c, k in sig.connectives}
    d = frozenset(x for x in range(n) if rng.random() < 0.5)
    return FiniteMatrix(FiniteAlgebra(sig, n, tables), d)


def random_formula(rng: random.Random, vars_, depth: int, sig: Signature = SIG) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return Formula.var(rng.choice(vars_))
    conn, k = rng.choice(sig.connectives)
    return Formula.app(conn, *(random_formula(rng, vars_, depth - 1, sig) for _ in range(k)))


@pytest.fixture
def rng():
    return random.Random(20261018)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("[")[1].split("]")[0])):
        terminalreporter.write_line(line)
