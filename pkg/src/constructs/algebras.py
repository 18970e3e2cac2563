"""Preset combinator/composer pairs and their identity constructs.

Supported instance tags: sum-prod, prod-exp, prod-baseexp, max-plus,
min-plus, union-intersect, intersect-union, or-and, and-or, dirsum-tensor.
Tropical kinds use ``math.inf`` as the absorbing sentinel.  Set values are
frozensets over a finite integer universe declared by the caller;
complement is relative to that universe.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Any, Iterable, Sequence

from .hypermatrix import AlgebraSpec, Hypermatrix, cprod2

INSTANCE_KINDS = (
    "sum-prod",
    "prod-exp",
    "prod-baseexp",
    "max-plus",
    "min-plus",
    "union-intersect",
    "intersect-union",
    "or-and",
    "and-or",
    "dirsum-tensor",
)


def _prod(xs: Sequence) -> Any:
    return reduce(lambda u, v: u * v, xs)


def _guarded_pow(x, y):
    # zero-guard matching the elementwise x^z map: 0 stays 0
    return 0 if x == 0 else x ** y


# --- block values (dirsum-tensor) ------------------------------------------
#
# Entries of the direct-sum/tensor instance are rectangular matrices given
# as nested lists; shapes must agree per contraction slot.

def tensor_product(a, b):
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    return [
        [a[i][j] * b[k][l] for j in range(ca) for l in range(cb)]
        for i in range(ra)
        for k in range(rb)
    ]


def direct_sum(blocks: Sequence) -> Any:
    rows = sum(len(b) for b in blocks)
    cols = sum(len(b[0]) for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r = c = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[r + i][c + j] = v
        r += len(b)
        c += len(b[0])
    return out


def block_trace(b) -> Any:
    if len(b) != len(b[0]):
        raise ValueError(f"non-square block {len(b)}x{len(b[0])}")
    return sum(b[i][i] for i in range(len(b)))


_ALGEBRAS = {
    "sum-prod": AlgebraSpec(sum, lambda x, y: x * y, "sum-prod"),
    "prod-exp": AlgebraSpec(_prod, _guarded_pow, "prod-exp"),
    "prod-baseexp": AlgebraSpec(_prod, lambda x, y: y ** x, "prod-baseexp"),
    "max-plus": AlgebraSpec(max, lambda x, y: x + y, "max-plus"),
    "min-plus": AlgebraSpec(min, lambda x, y: x + y, "min-plus"),
    "union-intersect": AlgebraSpec(
        lambda xs: frozenset().union(*xs), lambda x, y: frozenset(x) & frozenset(y),
        "union-intersect",
    ),
    "intersect-union": AlgebraSpec(
        lambda xs: reduce(lambda u, v: u & v, xs),
        lambda x, y: frozenset(x) | frozenset(y),
        "intersect-union",
    ),
    "or-and": AlgebraSpec(any, lambda x, y: x and y, "or-and"),
    "and-or": AlgebraSpec(all, lambda x, y: x or y, "and-or"),
    "dirsum-tensor": AlgebraSpec(direct_sum, tensor_product, "dirsum-tensor"),
}


def make_algebra(kind: str) -> AlgebraSpec:
    if kind not in _ALGEBRAS:
        raise ValueError(f"unknown instance kind {kind!r}; choose from {INSTANCE_KINDS}")
    return _ALGEBRAS[kind]


def identity_construct(
    kind: str, n: int, universe: Iterable[int] | None = None
) -> Hypermatrix:
    """Two-sided identity for the kind's second-order product.

    prod-exp, prod-baseexp and dirsum-tensor have no two-sided identity and
    raise.  Set kinds require the universe.
    """
    if kind == "sum-prod":
        diag, off = 1, 0
    elif kind == "min-plus":
        diag, off = 0, math.inf
    elif kind == "max-plus":
        diag, off = 0, -math.inf
    elif kind == "union-intersect":
        if universe is None:
            raise ValueError("set kinds need a universe")
        diag, off = frozenset(universe), frozenset()
    elif kind == "intersect-union":
        if universe is None:
            raise ValueError("set kinds need a universe")
        diag, off = frozenset(), frozenset(universe)
    elif kind == "or-and":
        diag, off = True, False
    elif kind == "and-or":
        diag, off = False, True
    else:
        raise ValueError(f"no two-sided identity construct for kind {kind!r}")
    return Hypermatrix(
        (n, n), [diag if i == j else off for i in range(n) for j in range(n)]
    )


def complement_entries(h: Hypermatrix, universe: Iterable[int]) -> Hypermatrix:
    universe = frozenset(universe)
    return h.map(lambda s: universe - frozenset(s))


def elementwise_exp(a: Hypermatrix, z) -> Hypermatrix:
    """Entrywise a_ij^z with the zero-guard: 0 entries stay 0."""
    return a.map(lambda x: 0 if x == 0 else x ** z)


def elementwise_baseexp(z, a: Hypermatrix) -> Hypermatrix:
    """Entrywise z^{a_ij} (principal branch); z must be nonzero."""
    if z == 0:
        raise ValueError("base z must be nonzero")
    return a.map(lambda x: z ** x)


def trace_collapse(c: Hypermatrix) -> Hypermatrix:
    """Entrywise trace of a block-valued construct."""
    return c.map(block_trace)


def check_duality(a: Hypermatrix, b: Hypermatrix, z: complex = 1.7) -> dict[str, float]:
    """Residuals of the three external/internal composer duality identities.

    (i)   CProd_{sum,*}(A,B)        = CProd_{sum,o}(A z, B)
    (ii)  CProd_{prod,exp}(A,B)     = CProd_{prod,o}(A^{oz}, B)
    (iii) CProd_{prod,baseexp}(A,B) = CProd_{prod,o}(z^{oA}, B)

    where o composes entry functions and the right-hand operand holds
    constant functions; both sides are evaluated numerically.
    """
    compose = AlgebraSpec(
        lambda fs: (lambda w: sum(f(w) for f in fs)),
        lambda f, g: lambda w: f(g(w)),
        "sum-compose",
    )
    compose_prod = AlgebraSpec(
        lambda fs: (lambda w: _prod([f(w) for f in fs])),
        lambda f, g: lambda w: f(g(w)),
        "prod-compose",
    )
    consts = b.map(lambda v: (lambda w, _v=v: _v))

    def max_err(lhs: Hypermatrix, rhs_funcs: Hypermatrix) -> float:
        return max(
            abs(lhs[idx] - rhs_funcs[idx](z)) for idx in lhs.indices()
        )

    lin = a.map(lambda v: (lambda w, _v=v: _v * w))
    res_linear = max_err(cprod2(a, b, _ALGEBRAS["sum-prod"]), cprod2(lin, consts, compose))

    powf = a.map(lambda v: (lambda w, _v=v: 0 if _v == 0 else _v ** w))
    res_exp = max_err(cprod2(a, b, _ALGEBRAS["prod-exp"]), cprod2(powf, consts, compose_prod))

    basef = a.map(lambda v: (lambda w, _v=v: w ** _v))
    res_baseexp = max_err(
        cprod2(a, b, _ALGEBRAS["prod-baseexp"]), cprod2(basef, consts, compose_prod)
    )
    return {"sum-prod": res_linear, "prod-exp": res_exp, "prod-baseexp": res_baseexp}
