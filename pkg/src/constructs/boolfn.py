"""Boolean formula enumeration, lexicographic numbering, and the
multilinear polynomial conversion.

Formulas are trees over AND/OR (binary) and NOT (unary); enumeration-mode
formulas contain only variables, with indices forming a contiguous prefix.
The lexicographic number of an arity-n function F is

    lex(F) = sum_{0<i<n} 2^(2^i) + sum_b F(b) * prod_j 2^(b_j 2^j),

which is arity-sensitive: the same point function gets different numbers
at different arities.  "Is new" during enumeration means the lex number
has not been produced before, globally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional


@dataclass(frozen=True)
class BVar:
    index: int


@dataclass(frozen=True)
class BConst:
    value: bool  # evaluation only; never enumerated


@dataclass(frozen=True)
class Not:
    a: object


@dataclass(frozen=True)
class And:
    a: object
    b: object


@dataclass(frozen=True)
class Or:
    a: object
    b: object


def bsize(f) -> int:
    """Token count: one per gate or variable occurrence."""
    if isinstance(f, (BVar, BConst)):
        return 1
    if isinstance(f, Not):
        return 1 + bsize(f.a)
    return 1 + bsize(f.a) + bsize(f.b)


def arity(f) -> int:
    """max variable index + 1 (0 for variable-free formulas)."""
    if isinstance(f, BVar):
        return f.index + 1
    if isinstance(f, BConst):
        return 0
    if isinstance(f, Not):
        return arity(f.a)
    return max(arity(f.a), arity(f.b))


def beval(f, assignment) -> bool:
    if isinstance(f, BVar):
        return bool(assignment[f.index])
    if isinstance(f, BConst):
        return f.value
    if isinstance(f, Not):
        return not beval(f.a, assignment)
    if isinstance(f, And):
        return beval(f.a, assignment) and beval(f.b, assignment)
    return beval(f.a, assignment) or beval(f.b, assignment)


def increment_var_index(f, j: int):
    """Add j to every variable index."""
    if isinstance(f, BVar):
        return BVar(f.index + j)
    if isinstance(f, BConst):
        return f
    if isinstance(f, Not):
        return Not(increment_var_index(f.a, j))
    if isinstance(f, And):
        return And(increment_var_index(f.a, j), increment_var_index(f.b, j))
    return Or(increment_var_index(f.a, j), increment_var_index(f.b, j))


def truth_table(f, n: Optional[int] = None) -> list[int]:
    """F(b) for assignments b ordered by the integer sum_j b_j 2^j."""
    n = arity(f) if n is None else n
    out = []
    for k in range(2 ** n):
        assignment = [(k >> j) & 1 for j in range(n)]
        out.append(int(beval(f, assignment)))
    return out


def lex_offset(n: int) -> int:
    return sum(2 ** (2 ** i) for i in range(1, n))


def lex_number(f) -> int:
    """The displayed lexicographic integer; variable-free constants map to
    lex(0)=0, lex(1)=1."""
    n = arity(f)
    if n == 0:
        return int(beval(f, []))
    total = lex_offset(n)
    for k in range(2 ** n):
        assignment = [(k >> j) & 1 for j in range(n)]
        if beval(f, assignment):
            term = 1
            for j in range(n):
                term *= 2 ** (assignment[j] * 2 ** j)
            total += term
    return total


def lex_number_from_table(f) -> int:
    """Independent path: offset plus the truth table packed in binary."""
    n = arity(f)
    if n == 0:
        return int(beval(f, []))
    bits = truth_table(f, n)
    return lex_offset(n) + sum(bit << k for k, bit in enumerate(bits))


# --- enumeration ---------------------------------------------------------------

@dataclass
class BoolEnumeration:
    strata: list[list]  # strata[n] = admitted formulas of size n, in order
    lex_list: list[int]  # concatenated lex numbers in generation order

    def formulas(self, n: int) -> list:
        return list(self.strata[n])


def _candidates(stratum_sizes, strata, n):
    """Deterministic candidate order: AND, OR, then NOT; within a gate
    group ascending (i, s, t, j)."""
    cands = []
    for ctor in (And, Or):
        for i in range(1, n - 1):
            j_size = n - 1 - i
            if j_size < 1 or j_size >= len(strata):
                continue
            for s in strata[i]:
                nvars = arity(s)
                for t in strata[j_size]:
                    for j in range(0, nvars + 1):
                        cands.append(ctor(s, increment_var_index(t, j)))
    if n - 1 >= 1 and n - 1 < len(strata):
        for s in strata[n - 1]:
            cands.append(Not(s))
    return cands


def enumerate_bool(max_size: int, candidate_order: Optional[Callable] = None) -> BoolEnumeration:
    """Size-stratified enumeration; a candidate is admitted iff its lex
    number is globally unseen."""
    strata: list[list] = [[], [BVar(0)]]
    seen = {lex_number(BVar(0))}
    lex_list = [lex_number(BVar(0))]
    for n in range(2, max_size + 1):
        cands = _candidates(None, strata, n)
        if candidate_order is not None:
            cands = candidate_order(cands)
        admitted = []
        for f in cands:
            key = lex_number(f)
            if key in seen:
                continue
            seen.add(key)
            admitted.append(f)
            lex_list.append(key)
        strata.append(admitted)
    return BoolEnumeration(strata, lex_list)


# --- multilinear polynomials ---------------------------------------------------
#
# Raw substitution polynomials keep powers (True->1, False->0, NOT->1-p,
# AND->p*q, OR->p+q-p*q); monomials are tuples of (var, exponent) pairs.
# Reduction applies x_i^2 = x_i, turning keys into variable subsets.

Poly = dict  # monomial tuple -> int coefficient


def _poly_const(c: int) -> Poly:
    return {(): c} if c else {}


def _poly_var(i: int) -> Poly:
    return {((i, 1),): 1}


def _poly_add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for mono, c in q.items():
        c2 = out.get(mono, 0) + c
        if c2:
            out[mono] = c2
        else:
            out.pop(mono, None)
    return out


def _poly_scale(p: Poly, c: int) -> Poly:
    return {m: c * v for m, v in p.items()} if c else {}


def _mono_mul(m1, m2):
    exps: dict[int, int] = {}
    for var, e in m1 + m2:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            c = out.get(m, 0) + c1 * c2
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def to_multilinear(f, reduce: bool = True) -> Poly:
    """Integer polynomial of the formula; with reduce=True the canonical
    multilinear representative (mod x_i^2 = x_i)."""
    if isinstance(f, BVar):
        p = _poly_var(f.index)
    elif isinstance(f, BConst):
        p = _poly_const(int(f.value))
    elif isinstance(f, Not):
        p = _poly_add(_poly_const(1), _poly_scale(to_multilinear(f.a, False), -1))
    elif isinstance(f, And):
        p = _poly_mul(to_multilinear(f.a, False), to_multilinear(f.b, False))
    else:
        pa, pb = to_multilinear(f.a, False), to_multilinear(f.b, False)
        p = _poly_add(_poly_add(pa, pb), _poly_scale(_poly_mul(pa, pb), -1))
    if not reduce:
        return p
    out: Poly = {}
    for mono, c in p.items():
        flat = tuple(sorted((var, 1) for var, _ in mono))
        c2 = out.get(flat, 0) + c
        if c2:
            out[flat] = c2
        else:
            out.pop(flat, None)
    return out


def poly_eval(p: Poly, assignment) -> int:
    total = 0
    for mono, c in p.items():
        term = c
        for var, e in mono:
            term *= assignment[var] ** e
        total += term
    return total


def poly_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for mono, c in sorted(p.items(), key=lambda kv: (len(kv[0]), kv[0])):
        vars_s = "*".join(
            f"x{var}" if e == 1 else f"x{var}^{e}" for var, e in mono
        )
        if not vars_s:
            parts.append(f"{c}")
        elif c == 1:
            parts.append(vars_s)
        elif c == -1:
            parts.append(f"-{vars_s}")
        else:
            parts.append(f"{c}*{vars_s}")
    return " + ".join(parts).replace("+ -", "- ")


# --- serialization --------------------------------------------------------------

def bool_to_prefix(f) -> str:
    out = []

    def emit(node):
        if isinstance(node, BVar):
            out.append(f"x{node.index}")
        elif isinstance(node, BConst):
            out.append("true" if node.value else "false")
        elif isinstance(node, Not):
            out.append("not")
            emit(node.a)
        elif isinstance(node, And):
            out.append("and")
            emit(node.a)
            emit(node.b)
        else:
            out.append("or")
            emit(node.a)
            emit(node.b)

    emit(f)
    return " ".join(out)


def bool_from_prefix(text: str):
    tokens = text.split()
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated prefix stream at token {pos}")
        tok = tokens[pos]
        pos += 1
        if tok.startswith("x") and tok[1:].isdigit():
            return BVar(int(tok[1:]))
        if tok in ("true", "false"):
            return BConst(tok == "true")
        if tok == "not":
            return Not(parse())
        if tok == "and":
            return And(parse(), parse())
        if tok == "or":
            return Or(parse(), parse())
        raise ValueError(f"bad token {tok!r} at position {pos - 1}")

    f = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens at position {pos}")
    return f


def bool_repr(f) -> str:
    """Bracketed rendering mirroring ['AND', x0, ['NOT', x1]] style."""
    if isinstance(f, BVar):
        return f"x{f.index}"
    if isinstance(f, BConst):
        return "True" if f.value else "False"
    if isinstance(f, Not):
        return f"['NOT', {bool_repr(f.a)}]"
    tag = "AND" if isinstance(f, And) else "OR"
    return f"['{tag}', {bool_repr(f.a)}, {bool_repr(f.b)}]"
