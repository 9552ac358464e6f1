"""Built-in matrices.

All classical and three-valued matrices share the signature
``neg/1 and/2 or/2 imp/2``.

========  ==========  =========================================  ==========
name      carrier     operations                                 filter
========  ==========  =========================================  ==========
CL2       {0,1}       neg=1-x, and=min, or=max, imp=max(1-x,y)   {1}
L3        {0,1,2}     neg=2-x, and=min, or=max, imp=min(2,2-x+y) {2}
K3        {0,1,2}     neg=2-x, and=min, or=max, imp=max(2-x,y)   {2}
B2E       {0,1}       as CL2                                     {} (empty)
NU        {0,1}       atlas on the CL2 algebra                   {1} and {}
FG1       {0,1}       f=id, g=const 0   (signature f/1 g/1)      {1}
FG2       {0,1}       f=const 0, g=id   (signature f/1 g/1)      {1}
========  ==========  =========================================  ==========

``NU`` is a two-chart atlas whose consequence is not uniform; ``FG1,FG2``
together give a consequence that is not couniform.
"""

from __future__ import annotations

from matcons.atlas import Atlas, make_atlas
from matcons.language import Signature
from matcons.matrix import FiniteAlgebra, FiniteMatrix

CLASSICAL_SIGNATURE = Signature.of("neg/1 and/2 or/2 imp/2")
FG_SIGNATURE = Signature.of("f/1 g/1")

B2 = FiniteAlgebra.from_functions(
    CLASSICAL_SIGNATURE, 2,
    {"neg": lambda x: 1 - x, "and": min, "or": max, "imp": lambda x, y: max(1 - x, y)},
    name="B2",
)

LUKASIEWICZ3 = FiniteAlgebra.from_functions(
    CLASSICAL_SIGNATURE, 3,
    {"neg": lambda x: 2 - x, "and": min, "or": max, "imp": lambda x, y: min(2, 2 - x + y)},
    name="L3",
)

KLEENE3 = FiniteAlgebra.from_functions(
    CLASSICAL_SIGNATURE, 3,
    {"neg": lambda x: 2 - x, "and": min, "or": max, "imp": lambda x, y: max(2 - x, y)},
    name="K3",
)

FG_A1 = FiniteAlgebra.from_functions(FG_SIGNATURE, 2, {"f": lambda x: x, "g": lambda x: 0}, "A1")
FG_A2 = FiniteAlgebra.from_functions(FG_SIGNATURE, 2, {"f": lambda x: 0, "g": lambda x: x}, "A2")

CL2 = FiniteMatrix(B2, frozenset({1}), "CL2")
L3 = FiniteMatrix(LUKASIEWICZ3, frozenset({2}), "L3")
K3 = FiniteMatrix(KLEENE3, frozenset({2}), "K3")
B2E = FiniteMatrix(B2, frozenset(), "B2E")
NU: Atlas = make_atlas(B2, [{1}, set()], name="NU")
FG1 = FiniteMatrix(FG_A1, frozenset({1}), "FG1")
FG2 = FiniteMatrix(FG_A2, frozenset({1}), "FG2")


def builtins() -> dict[str, FiniteMatrix | Atlas]:
    return {"CL2": CL2, "L3": L3, "K3": K3, "B2E": B2E, "NU": NU, "FG1": FG1, "FG2": FG2}


BUILTIN_ALGEBRAS = {"B2": B2, "L3": LUKASIEWICZ3, "K3": KLEENE3, "A1": FG_A1, "A2": FG_A2}
