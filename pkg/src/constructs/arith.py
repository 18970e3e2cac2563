"""Arithmetic formulas over {-1, 1}, their prefix encoding, rewrite rules,
and the stratified enumeration of values by minimal reduced-formula size.

Values are exact Gaussian rationals where representable and high-precision
complex otherwise (precision from CONSTRUCT_PRECISION_BITS, default 256
bits).  Dedup compares exact values exactly and everything else at 1e-30
relative tolerance; near-collisions between distinct exact forms are
logged, never merged.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import mpmath

log = logging.getLogger(__name__)

PRECISION_BITS = int(os.environ.get("CONSTRUCT_PRECISION_BITS", "256"))
mpmath.mp.prec = max(PRECISION_BITS, 64)

REL_TOL = mpmath.mpf("1e-30")
ZERO_EPS = mpmath.mpf("1e-40")


class InvalidFormulaError(ArithmeticError):
    """The formula hits a forbidden class (0^0, 0^neg, log/mod degeneracies)."""


class RewriteMismatch(ValueError):
    """The requested rule does not match at the requested position."""


# --- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    value: int  # +1 or -1

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError("leaves are -1 or 1")


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Gate:
    op: str  # one of + * ^ log mod D
    left: object
    right: object

    def __post_init__(self):
        if self.op not in ("+", "*", "^", "log", "mod", "D"):
            raise ValueError(f"unknown gate {self.op!r}")


def size(f) -> int:
    if isinstance(f, (Leaf, Var)):
        return 1
    return 1 + size(f.left) + size(f.right)


def encode_prefix(f) -> str:
    out: list[str] = []

    def emit(node):
        if isinstance(node, Leaf):
            out.append(str(node.value))
        elif isinstance(node, Var):
            out.append(f"x{node.index}")
        else:
            out.append(node.op)
            emit(node.left)
            emit(node.right)

    emit(f)
    return " ".join(out)


def decode_prefix(text: str):
    tokens = text.split()
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated prefix stream at token {pos}")
        tok = tokens[pos]
        pos += 1
        if tok in ("1", "-1"):
            return Leaf(int(tok))
        if tok.startswith("x") and tok[1:].isdigit():
            return Var(int(tok[1:]))
        if tok in ("+", "*", "^", "log", "mod", "D"):
            return Gate(tok, parse(), parse())
        raise ValueError(f"bad token {tok!r} at position {pos - 1}")

    f = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens at position {pos}")
    return f


# --- values ------------------------------------------------------------------

def _mpc_from_exact(re: Fraction, im: Fraction) -> mpmath.mpc:
    return mpmath.mpc(
        mpmath.mpf(re.numerator) / re.denominator,
        mpmath.mpf(im.numerator) / im.denominator,
    )


class CValue:
    """Exact Gaussian rational when representable, else high-precision complex."""

    __slots__ = ("exact", "approx")

    def __init__(self, exact: Optional[tuple], approx: mpmath.mpc):
        self.exact = exact
        self.approx = approx

    @classmethod
    def from_exact(cls, re, im=0) -> "CValue":
        re, im = Fraction(re), Fraction(im)
        return cls((re, im), _mpc_from_exact(re, im))

    @classmethod
    def from_approx(cls, c) -> "CValue":
        return cls(None, mpmath.mpc(c))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def is_zero(self) -> bool:
        if self.exact is not None:
            return self.exact == (0, 0)
        return mpmath.fabs(self.approx) < ZERO_EPS

    def integer_value(self) -> Optional[int]:
        if self.exact is not None:
            re, im = self.exact
            if im == 0 and re.denominator == 1:
                return int(re)
        return None

    def exact_str(self) -> Optional[str]:
        if self.exact is None:
            return None
        re, im = self.exact
        if im == 0:
            return str(re)
        im_s = f"{im}i" if im >= 0 else f"({im})i"
        if re == 0:
            return im_s
        return f"{re}+{im_s}" if im >= 0 else f"{re}{im}i"

    def __complex__(self):
        return complex(float(self.approx.real), float(self.approx.imag))

    def __repr__(self):
        if self.exact is not None:
            return f"CValue({self.exact_str()})"
        return f"CValue~({mpmath.nstr(self.approx, 20)})"


ZERO = CValue.from_exact(0)
ONE = CValue.from_exact(1)


def cv_equal(u: CValue, v: CValue) -> bool:
    """Exact comparison when both sides are exact, else 1e-30 relative."""
    if u.exact is not None and v.exact is not None:
        return u.exact == v.exact
    diff = mpmath.fabs(u.approx - v.approx)
    scale = max(mpmath.mpf(1), mpmath.fabs(u.approx), mpmath.fabs(v.approx))
    return diff <= REL_TOL * scale


def cv_add(u: CValue, v: CValue) -> CValue:
    if u.exact is not None and v.exact is not None:
        return CValue.from_exact(u.exact[0] + v.exact[0], u.exact[1] + v.exact[1])
    return CValue.from_approx(u.approx + v.approx)


def cv_mul(u: CValue, v: CValue) -> CValue:
    if u.exact is not None and v.exact is not None:
        (a, b), (c, d) = u.exact, v.exact
        return CValue.from_exact(a * c - b * d, a * d + b * c)
    return CValue.from_approx(u.approx * v.approx)


def _gaussian_int_pow(re: Fraction, im: Fraction, k: int) -> tuple:
    if k < 0:
        norm = re * re + im * im
        re, im, k = re / norm, -im / norm, -k
    out = (Fraction(1), Fraction(0))
    base = (re, im)
    while k:
        if k & 1:
            out = (out[0] * base[0] - out[1] * base[1], out[0] * base[1] + out[1] * base[0])
        base = (base[0] * base[0] - base[1] * base[1], 2 * base[0] * base[1])
        k >>= 1
    return out


def cv_pow(s: CValue, t: CValue) -> CValue:
    """Principal-branch power with the model's forbidden classes."""
    if s.is_zero():
        if t.is_zero():
            raise InvalidFormulaError("0 ^ 0")
        if t.exact is not None and t.exact[1] == 0 and t.exact[0] > 0:
            return ZERO
        if t.exact is None and mpmath.fabs(t.approx.imag) < ZERO_EPS and t.approx.real > 0:
            return ZERO
        raise InvalidFormulaError("0 raised to a non-positive or complex power")
    if s.exact is not None and t.exact is not None and t.exact[1] == 0:
        e = t.exact[0]
        if e.denominator == 1:
            return CValue.from_exact(*_gaussian_int_pow(s.exact[0], s.exact[1], int(e)))
        if s.exact == (Fraction(-1), Fraction(0)) and e.denominator == 2:
            # e^{i pi p/2} for odd p stays a Gaussian unit
            return CValue.from_exact(0, 1 if e.numerator % 4 == 1 else -1)
    return CValue.from_approx(mpmath.power(s.approx, t.approx))


def cv_log(base: CValue, value: CValue) -> CValue:
    """log base `base` of `value` (principal): ln(value)/ln(base)."""
    if value.is_zero() or base.is_zero():
        raise InvalidFormulaError("log with zero argument or base")
    ln_base = mpmath.log(base.approx)
    if mpmath.fabs(ln_base) < ZERO_EPS:
        raise InvalidFormulaError("log with base 1")
    return CValue.from_approx(mpmath.log(value.approx) / ln_base)


def cv_mod(u: CValue, v: CValue) -> CValue:
    a, b = u.integer_value(), v.integer_value()
    if a is None or b is None:
        raise InvalidFormulaError("mod needs integer operands")
    if b == 0:
        raise InvalidFormulaError("mod by zero")
    return CValue.from_exact(a % abs(b))


def evaluate(f, env: Optional[dict] = None) -> CValue:
    """Evaluate a formula; env maps variable indices to CValues."""
    if isinstance(f, Leaf):
        return CValue.from_exact(f.value)
    if isinstance(f, Var):
        if env is None or f.index not in env:
            raise InvalidFormulaError(f"unbound variable x{f.index}")
        return env[f.index]
    lv = evaluate(f.left, env)
    rv = evaluate(f.right, env)
    if f.op == "+":
        return cv_add(lv, rv)
    if f.op == "*":
        return cv_mul(lv, rv)
    if f.op == "^":
        return cv_pow(lv, rv)
    if f.op == "log":
        return cv_log(lv, rv)
    if f.op == "mod":
        return cv_mod(lv, rv)
    raise InvalidFormulaError("derivative gate has no variable-free value")


def _collect_gate_values(f, env, acc: list) -> CValue:
    """Evaluate f, appending every gate node's value to acc."""
    if isinstance(f, (Leaf, Var)):
        return evaluate(f, env)
    lv = _collect_gate_values(f.left, env, acc)
    rv = _collect_gate_values(f.right, env, acc)
    if f.op == "+":
        v = cv_add(lv, rv)
    elif f.op == "*":
        v = cv_mul(lv, rv)
    elif f.op == "^":
        v = cv_pow(lv, rv)
    elif f.op == "log":
        v = cv_log(lv, rv)
    elif f.op == "mod":
        v = cv_mod(lv, rv)
    else:
        raise InvalidFormulaError("derivative gate has no variable-free value")
    acc.append(v)
    return v


def is_reduced(f) -> bool:
    """No sub-formula of size > 2 evaluates to 0 or 1 (variable-free only).

    Evaluation errors propagate as not-reduced.
    """
    values: list[CValue] = []
    try:
        _collect_gate_values(f, None, values)
    except InvalidFormulaError:
        return False
    return not any(cv_equal(v, ZERO) or cv_equal(v, ONE) for v in values)


def is_monotone(f) -> bool:
    """The formula never uses the input -1."""
    if isinstance(f, Leaf):
        return f.value == 1
    if isinstance(f, Var):
        return True
    return is_monotone(f.left) and is_monotone(f.right)


# --- rewrite rules -----------------------------------------------------------

_MINUS_ONE_PLUS_ONE = Gate("+", Leaf(-1), Leaf(1))


def _subtree(f, path):
    node = f
    for step in path:
        if not isinstance(node, Gate):
            raise RewriteMismatch(f"path {path} leaves the tree")
        node = node.left if step == 0 else node.right
    return node


def _replace(f, path, new):
    if not path:
        return new
    if not isinstance(f, Gate):
        raise RewriteMismatch(f"path {path} leaves the tree")
    if path[0] == 0:
        return Gate(f.op, _replace(f.left, path[1:], new), f.right)
    return Gate(f.op, f.left, _replace(f.right, path[1:], new))


def _rule_comm(op):
    def fwd(n):
        if isinstance(n, Gate) and n.op == op:
            return Gate(op, n.right, n.left)
        raise RewriteMismatch(f"not a {op} gate")

    return fwd, fwd


def _rule_assoc(op):
    def fwd(n):
        if isinstance(n, Gate) and n.op == op and isinstance(n.left, Gate) and n.left.op == op:
            return Gate(op, n.left.left, Gate(op, n.left.right, n.right))
        raise RewriteMismatch("left child is not the same gate")

    def rev(n):
        if isinstance(n, Gate) and n.op == op and isinstance(n.right, Gate) and n.right.op == op:
            return Gate(op, Gate(op, n.left, n.right.left), n.right.right)
        raise RewriteMismatch("right child is not the same gate")

    return fwd, rev


def _rule_dist(outer, inner, result_outer):
    # outer(f, inner(g, h)) <-> result_outer(outer(f,g), outer(f,h))
    def fwd(n):
        if (
            isinstance(n, Gate)
            and n.op == outer
            and isinstance(n.right, Gate)
            and n.right.op == inner
        ):
            f, g, h = n.left, n.right.left, n.right.right
            return Gate(result_outer, Gate(outer, f, g), Gate(outer, f, h))
        raise RewriteMismatch("distributivity pattern mismatch")

    def rev(n):
        if (
            isinstance(n, Gate)
            and n.op == result_outer
            and isinstance(n.left, Gate)
            and n.left.op == outer
            and isinstance(n.right, Gate)
            and n.right.op == outer
            and n.left.left == n.right.left
        ):
            return Gate(outer, n.left.left, Gate(inner, n.left.right, n.right.right))
        raise RewriteMismatch("factoring pattern mismatch")

    return fwd, rev


def _rule_powbase_dist():
    # (f*g)^h <-> f^h * g^h
    def fwd(n):
        if isinstance(n, Gate) and n.op == "^" and isinstance(n.left, Gate) and n.left.op == "*":
            f, g, h = n.left.left, n.left.right, n.right
            return Gate("*", Gate("^", f, h), Gate("^", g, h))
        raise RewriteMismatch("base-distributivity pattern mismatch")

    def rev(n):
        if (
            isinstance(n, Gate)
            and n.op == "*"
            and isinstance(n.left, Gate)
            and n.left.op == "^"
            and isinstance(n.right, Gate)
            and n.right.op == "^"
            and n.left.right == n.right.right
        ):
            return Gate("^", Gate("*", n.left.left, n.right.left), n.left.right)
        raise RewriteMismatch("base-factoring pattern mismatch")

    return fwd, rev


def _simple(fwd, rev=None):
    return fwd, rev


def _fwd_only(name, pattern):
    def missing(n):
        raise RewriteMismatch(f"rule {name} has no reverse direction")

    return pattern, missing


def _make_rules():
    rules = {}
    rules["comm-add"] = _rule_comm("+")
    rules["comm-mul"] = _rule_comm("*")
    rules["assoc-add"] = _rule_assoc("+")
    rules["assoc-mul"] = _rule_assoc("*")
    rules["dist-mul-add"] = _rule_dist("*", "+", "+")
    rules["dist-pow-add"] = _rule_dist("^", "+", "*")
    rules["dist-mul-pow"] = _rule_powbase_dist()

    def unit_mul(n):
        if isinstance(n, Gate) and n.op == "*" and n.right == Leaf(1):
            return n.left
        raise RewriteMismatch("not f*1")

    rules["unit-mul"] = _simple(unit_mul, lambda n: Gate("*", n, Leaf(1)))

    def unit_pow(n):
        if isinstance(n, Gate) and n.op == "^" and n.right == Leaf(1):
            return n.left
        raise RewriteMismatch("not f^1")

    rules["unit-pow"] = _simple(unit_pow, lambda n: Gate("^", n, Leaf(1)))

    def one_pow(n):
        if isinstance(n, Gate) and n.op == "^" and n.left == Leaf(1):
            return Leaf(1)
        raise RewriteMismatch("not 1^f")

    rules["one-pow"] = _fwd_only("one-pow", one_pow)

    def add_zero(n):
        if isinstance(n, Gate) and n.op == "+" and n.right == _MINUS_ONE_PLUS_ONE:
            return n.left
        raise RewriteMismatch("not f+(-1+1)")

    rules["add-zero"] = _simple(add_zero, lambda n: Gate("+", n, _MINUS_ONE_PLUS_ONE))

    def mul_zero(n):
        if isinstance(n, Gate) and n.op == "*" and n.right == _MINUS_ONE_PLUS_ONE:
            return _MINUS_ONE_PLUS_ONE
        raise RewriteMismatch("not f*(-1+1)")

    rules["mul-zero"] = _fwd_only("mul-zero", mul_zero)

    def pow_zero(n):
        if isinstance(n, Gate) and n.op == "^" and n.right == _MINUS_ONE_PLUS_ONE:
            return Leaf(1)
        raise RewriteMismatch("not f^(-1+1)")

    rules["pow-zero"] = _fwd_only("pow-zero", pow_zero)

    # log gate carries (base, value); the rule rows are stated accordingly.
    def log_prod(n):
        if (
            isinstance(n, Gate)
            and n.op == "log"
            and isinstance(n.right, Gate)
            and n.right.op == "*"
            and isinstance(n.right.left, Gate)
            and n.right.left.op == "^"
            and isinstance(n.right.right, Gate)
            and n.right.right.op == "^"
            and n.right.left.left == n.left
            and n.right.right.left == n.left
        ):
            return Gate("+", n.right.left.right, n.right.right.right)
        raise RewriteMismatch("not log(h, h^f * h^g)")

    rules["log-prod"] = _fwd_only("log-prod", log_prod)

    def log_pow(n):
        if (
            isinstance(n, Gate)
            and n.op == "log"
            and isinstance(n.right, Gate)
            and n.right.op == "^"
            and n.right.left == n.left
        ):
            return n.right.right
        raise RewriteMismatch("not log(f, f^g)")

    rules["log-pow"] = _fwd_only("log-pow", log_pow)

    def log_one(n):
        if isinstance(n, Gate) and n.op == "log" and n.right == Leaf(1):
            return _MINUS_ONE_PLUS_ONE
        raise RewriteMismatch("not log(f, 1)")

    rules["log-one"] = _fwd_only("log-one", log_one)

    def mod_add_fwd(n):
        if (
            isinstance(n, Gate)
            and n.op == "mod"
            and isinstance(n.left, Gate)
            and n.left.op == "+"
            and isinstance(n.left.left, Gate)
            and n.left.left.op == "mod"
            and isinstance(n.left.right, Gate)
            and n.left.right.op == "mod"
            and n.left.left.right == n.right
            and n.left.right.right == n.right
        ):
            return Gate("mod", Gate("+", n.left.left.left, n.left.right.left), n.right)
        raise RewriteMismatch("not mod(mod(f,h)+mod(g,h), h)")

    def mod_add_rev(n):
        if isinstance(n, Gate) and n.op == "mod" and isinstance(n.left, Gate) and n.left.op == "+":
            h = n.right
            return Gate(
                "mod",
                Gate("+", Gate("mod", n.left.left, h), Gate("mod", n.left.right, h)),
                h,
            )
        raise RewriteMismatch("not mod(f+g, h)")

    rules["mod-add"] = _simple(mod_add_fwd, mod_add_rev)

    def mod_mul_fwd(n):
        if (
            isinstance(n, Gate)
            and n.op == "mod"
            and isinstance(n.left, Gate)
            and n.left.op == "*"
            and isinstance(n.left.left, Gate)
            and n.left.left.op == "mod"
            and isinstance(n.left.right, Gate)
            and n.left.right.op == "mod"
            and n.left.left.right == n.right
            and n.left.right.right == n.right
        ):
            return Gate("mod", Gate("*", n.left.left.left, n.left.right.left), n.right)
        raise RewriteMismatch("not mod(mod(f,h)*mod(g,h), h)")

    def mod_mul_rev(n):
        if isinstance(n, Gate) and n.op == "mod" and isinstance(n.left, Gate) and n.left.op == "*":
            h = n.right
            return Gate(
                "mod",
                Gate("*", Gate("mod", n.left.left, h), Gate("mod", n.left.right, h)),
                h,
            )
        raise RewriteMismatch("not mod(f*g, h)")

    rules["mod-mul"] = _simple(mod_mul_fwd, mod_mul_rev)

    def mod_zero(n):
        if isinstance(n, Gate) and n.op == "mod" and n.left == _MINUS_ONE_PLUS_ONE:
            return _MINUS_ONE_PLUS_ONE
        raise RewriteMismatch("not mod(-1+1, f)")

    rules["mod-zero"] = _fwd_only("mod-zero", mod_zero)

    def d_add_fwd(n):
        if isinstance(n, Gate) and n.op == "D" and isinstance(n.right, Gate) and n.right.op == "+":
            return Gate("+", Gate("D", n.left, n.right.left), Gate("D", n.left, n.right.right))
        raise RewriteMismatch("not D(k, f+g)")

    def d_add_rev(n):
        if (
            isinstance(n, Gate)
            and n.op == "+"
            and isinstance(n.left, Gate)
            and n.left.op == "D"
            and isinstance(n.right, Gate)
            and n.right.op == "D"
            and n.left.left == n.right.left
        ):
            return Gate("D", n.left.left, Gate("+", n.left.right, n.right.right))
        raise RewriteMismatch("not D(k,f)+D(k,g)")

    rules["d-add"] = _simple(d_add_fwd, d_add_rev)

    def d_mul(n):
        if (
            isinstance(n, Gate)
            and n.op == "D"
            and n.left == Leaf(1)
            and isinstance(n.right, Gate)
            and n.right.op == "*"
        ):
            f, g = n.right.left, n.right.right
            return Gate(
                "+",
                Gate("*", g, Gate("D", Leaf(1), f)),
                Gate("*", f, Gate("D", Leaf(1), g)),
            )
        raise RewriteMismatch("not D(1, f*g)")

    rules["d-mul"] = _fwd_only("d-mul", d_mul)
    return rules


RULES = _make_rules()
RULE_IDS = tuple(sorted(RULES))


def apply_rewrite(f, rule: str, path: tuple = (), direction: str = "fwd"):
    """Apply one transformation rule at the node addressed by path."""
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; choose from {RULE_IDS}")
    fwd, rev = RULES[rule]
    transform = fwd if direction == "fwd" else rev
    target = _subtree(f, tuple(path))
    return _replace(f, tuple(path), transform(target))


def all_positions(f):
    yield ()
    if isinstance(f, Gate):
        for p in all_positions(f.left):
            yield (0,) + p
        for p in all_positions(f.right):
            yield (1,) + p


# --- stratified enumeration ----------------------------------------------------

_QUANTUM = mpmath.mpf("1e-22")


class ValueTable:
    """Tolerance-aware value->payload map with neighbor-bucket probing."""

    def __init__(self):
        self._buckets: dict[tuple[int, int], list] = {}

    @staticmethod
    def _key(v: CValue) -> tuple[int, int]:
        return (
            int(mpmath.floor(v.approx.real / _QUANTUM)),
            int(mpmath.floor(v.approx.imag / _QUANTUM)),
        )

    def lookup(self, v: CValue):
        kr, ki = self._key(v)
        for dr in (-1, 0, 1):
            for di in (-1, 0, 1):
                for stored, payload in self._buckets.get((kr + dr, ki + di), ()):
                    if cv_equal(stored, v):
                        return stored, payload
                    if (
                        stored.exact is not None
                        and v.exact is not None
                        and stored.exact != v.exact
                    ):
                        diff = mpmath.fabs(stored.approx - v.approx)
                        scale = max(
                            mpmath.mpf(1),
                            mpmath.fabs(stored.approx),
                            mpmath.fabs(v.approx),
                        )
                        if diff <= REL_TOL * scale:
                            log.warning(
                                "precision collision: %s vs %s agree within tolerance "
                                "but differ in exact form; kept distinct",
                                stored,
                                v,
                            )
        return None

    def insert(self, v: CValue, payload):
        self._buckets.setdefault(self._key(v), []).append((v, payload))

    def __contains__(self, v: CValue):
        return self.lookup(v) is not None


@dataclass
class StratumEntry:
    value: CValue
    witness: object  # an ArithFormula attaining the value at this size


class Stratification:
    """Strata A_1..A_N: stratum n holds the values of minimal reduced size n."""

    def __init__(self, monotone: bool = False):
        self.monotone = monotone
        self.strata: list[list[StratumEntry]] = [[]]  # index 0 unused
        self.table = ValueTable()
        self._extend_first()

    def _extend_first(self):
        leaves = [Leaf(1)] if self.monotone else [Leaf(1), Leaf(-1)]
        entries = []
        for leaf in leaves:
            v = evaluate(leaf)
            entries.append(StratumEntry(v, leaf))
            self.table.insert(v, 1)
        self.strata.append(entries)

    @property
    def max_size(self) -> int:
        return len(self.strata) - 1

    def values(self, n: int) -> list[CValue]:
        if n > self.max_size:
            raise ValueError(f"stratification only computed to {self.max_size}")
        return [e.value for e in self.strata[n]]

    def entries(self, n: int) -> list[StratumEntry]:
        return list(self.strata[n])

    def find(self, v: CValue) -> Optional[int]:
        hit = self.table.lookup(v)
        return None if hit is None else hit[1]

    def extend_to(self, n: int, candidate_order=None):
        """Grow strata through size n.  candidate_order optionally permutes
        the candidate list of each stratum (order-independence testing)."""
        while self.max_size < n:
            self._extend_one(candidate_order)

    def _extend_one(self, candidate_order=None):
        n = self.max_size + 1
        if n % 2 == 0:
            self.strata.append([])
            return
        candidates = []
        for i in range(1, n - 1, 2):
            j = n - 1 - i
            if j < 1 or j > self.max_size:
                continue
            for s in self.strata[i]:
                for t in self.strata[j]:
                    for op in ("+", "*", "^"):
                        candidates.append((op, s, t))
        if candidate_order is not None:
            candidates = candidate_order(candidates)
        entries = []
        for op, s, t in candidates:
            try:
                if op == "+":
                    v = cv_add(s.value, t.value)
                    if cv_equal(v, ZERO):
                        continue
                elif op == "*":
                    v = cv_mul(s.value, t.value)
                    if cv_equal(v, ONE):
                        continue
                else:
                    v = cv_pow(s.value, t.value)
                    if cv_equal(v, ONE):
                        continue
            except InvalidFormulaError:
                continue
            if v in self.table:
                continue
            witness = Gate(op, s.witness, t.witness)
            entries.append(StratumEntry(v, witness))
            self.table.insert(v, n)
        self.strata.append(entries)


def enumerate_strata(max_size: int, monotone: bool = False) -> Stratification:
    s = Stratification(monotone=monotone)
    s.extend_to(max_size)
    return s


def complexity(v, max_size: int, strata: Optional[Stratification] = None) -> Optional[int]:
    """Least n <= max_size with v in A_n, or None if not found."""
    if not isinstance(v, CValue):
        if isinstance(v, (int, Fraction)):
            v = CValue.from_exact(v)
        else:
            v = CValue.from_approx(v)
    if strata is None:
        strata = enumerate_strata(max_size)
    else:
        strata.extend_to(max_size)
    n = strata.find(v)
    return n if (n is not None and n <= max_size) else None


def cardinality_bounds(strata: Stratification) -> list[dict]:
    """Check |A_n| = 0 for even n and the displayed bounds for odd n > 2."""
    from math import comb

    report = []
    for n in range(1, strata.max_size + 1):
        count = len(strata.strata[n])
        if n % 2 == 0:
            report.append({"n": n, "count": count, "ok": count == 0})
        elif n > 2:
            lower = Fraction(2, n + 1) * comb(n - 1, (n - 1) // 2)
            upper = 5 ** n
            report.append(
                {
                    "n": n,
                    "count": count,
                    "lower": lower,
                    "upper": upper,
                    "ok": lower < count < upper,
                }
            )
        else:
            report.append({"n": n, "count": count, "ok": True})
    return report


# --- tower sequence -----------------------------------------------------------

def tower_sequence(n: int) -> int:
    """a_0 = 1, a_{k+1} = 2^(1 + a_k) - 1."""
    a = 1
    for _ in range(n):
        a = 2 ** (1 + a) - 1
    return a


def tower_formula(n: int):
    """Explicit size-(4(n+1)+1) formula for a_n: nested (1+1)^(...) minus one."""
    g = Gate("+", Leaf(1), Leaf(1))  # value 1 + a_0 = 2
    for _ in range(n):
        g = Gate("^", Gate("+", Leaf(1), Leaf(1)), g)
    return Gate("+", g, Leaf(-1))


def tower_bound_check(n: int) -> dict:
    f = tower_formula(n)
    value = evaluate(f)
    a_n = tower_sequence(n)
    formula_size = size(f)
    bound = 4 * (n + 1) + 1
    return {
        "n": n,
        "a_n": a_n,
        "formula_size": formula_size,
        "bound": bound,
        "ok": value.integer_value() == a_n and formula_size <= bound,
    }
