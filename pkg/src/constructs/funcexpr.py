"""Expression language for functions of one complex variable.

Construct entries in the functional setting are small ASTs over the
morphism variable z, closed under composition.  The primal composer is
f o g (apply g first), its dual is g o f.  All identities are checked by
sampling inside a declared branch-safe :class:`SampleDomain`; log and pow
use principal branches.

Prefix token grammar (one expression per line):

    expr := "z" | "c:" literal | "neg" expr | "exp" expr | "log" expr
          | "add" expr expr | "mul" expr expr | "pow" expr expr
          | "comp" expr expr

literal is a rational "p/q" or anything Python's complex() accepts.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .hypermatrix import AlgebraSpec, Hypermatrix, cprod2


class BranchCutError(ArithmeticError):
    """Evaluation landed on (or too close to) a principal branch cut."""


@dataclass(frozen=True)
class Const:
    value: Any

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True)
class Z:
    pass


@dataclass(frozen=True)
class Neg:
    a: Any


@dataclass(frozen=True)
class Add:
    a: Any
    b: Any


@dataclass(frozen=True)
class Mul:
    a: Any
    b: Any


@dataclass(frozen=True)
class Exp:
    a: Any


@dataclass(frozen=True)
class Log:
    a: Any


@dataclass(frozen=True)
class Pow:
    a: Any
    b: Any


@dataclass(frozen=True)
class Comp:
    f: Any
    g: Any


FuncExpr = (Const, Z, Neg, Add, Mul, Exp, Log, Pow, Comp)

_CUT_EPS = 1e-9


def is_zero(e) -> bool:
    """Structural zero-function test (used for the absorbing convention)."""
    if isinstance(e, Const):
        return e.value == 0
    if isinstance(e, Neg):
        return is_zero(e.a)
    if isinstance(e, Mul):
        return is_zero(e.a) or is_zero(e.b)
    if isinstance(e, Add):
        return is_zero(e.a) and is_zero(e.b)
    if isinstance(e, Comp):
        return is_zero(e.f)
    return False


def _as_int_exponent(e):
    if isinstance(e, Const):
        v = e.value
        if isinstance(v, int):
            return v
        if isinstance(v, Fraction) and v.denominator == 1:
            return int(v)
        if isinstance(v, float) and v.is_integer():
            return int(v)
        if isinstance(v, complex) and v.imag == 0 and float(v.real).is_integer():
            return int(v.real)
    return None


def _check_log_arg(w):
    c = complex(w)
    if abs(c.imag) < _CUT_EPS and c.real <= _CUT_EPS:
        raise BranchCutError(f"log argument {c} on or near the branch cut")
    return c


def evaluate(e, z):
    """Evaluate at z.  Add/Mul/Neg keep exact types (e.g. Fraction) alive;
    exp/log/pow coerce to complex and use principal branches."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Z):
        return z
    if isinstance(e, Neg):
        return -evaluate(e.a, z)
    if isinstance(e, Add):
        return evaluate(e.a, z) + evaluate(e.b, z)
    if isinstance(e, Mul):
        return evaluate(e.a, z) * evaluate(e.b, z)
    if isinstance(e, Exp):
        return cmath.exp(complex(evaluate(e.a, z)))
    if isinstance(e, Log):
        return cmath.log(_check_log_arg(evaluate(e.a, z)))
    if isinstance(e, Pow):
        base = evaluate(e.a, z)
        k = _as_int_exponent(e.b)
        if k is not None and k >= 0:
            out = 1
            for _ in range(k):
                out = out * base
            return out
        expo = evaluate(e.b, z)
        if base == 0:
            ec = complex(expo)
            if ec.imag == 0 and ec.real > 0:
                return 0
            raise BranchCutError(f"0 ** {expo} undefined")
        return cmath.exp(complex(expo) * cmath.log(_check_log_arg(base)))
    if isinstance(e, Comp):
        return evaluate(e.f, evaluate(e.g, z))
    raise TypeError(f"not a FuncExpr node: {e!r}")


# --- serialization ----------------------------------------------------------

def _format_literal(v) -> str:
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    c = complex(v)
    if c.imag == 0:
        return repr(c.real)
    return repr(c).strip("()")


def _parse_literal(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return complex(text)


def format_funcexpr(e) -> str:
    out: list[str] = []

    def emit(node):
        if isinstance(node, Const):
            out.append("c:" + _format_literal(node.value))
        elif isinstance(node, Z):
            out.append("z")
        elif isinstance(node, Neg):
            out.append("neg")
            emit(node.a)
        elif isinstance(node, Exp):
            out.append("exp")
            emit(node.a)
        elif isinstance(node, Log):
            out.append("log")
            emit(node.a)
        elif isinstance(node, Add):
            out.append("add")
            emit(node.a)
            emit(node.b)
        elif isinstance(node, Mul):
            out.append("mul")
            emit(node.a)
            emit(node.b)
        elif isinstance(node, Pow):
            out.append("pow")
            emit(node.a)
            emit(node.b)
        elif isinstance(node, Comp):
            out.append("comp")
            emit(node.f)
            emit(node.g)
        else:
            raise TypeError(f"not a FuncExpr node: {node!r}")

    emit(e)
    return " ".join(out)


def parse_funcexpr(text: str):
    tokens = text.split()
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated expression at token {pos}")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse():
        tok = take()
        if tok == "z":
            return Z()
        if tok.startswith("c:"):
            return Const(_parse_literal(tok[2:]))
        if tok == "neg":
            return Neg(parse())
        if tok == "exp":
            return Exp(parse())
        if tok == "log":
            return Log(parse())
        if tok == "add":
            return Add(parse(), parse())
        if tok == "mul":
            return Mul(parse(), parse())
        if tok == "pow":
            return Pow(parse(), parse())
        if tok == "comp":
            return Comp(parse(), parse())
        raise ValueError(f"unknown token {tok!r} at position {pos - 1}")

    expr = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens from position {pos}")
    return expr


# --- composition and products ----------------------------------------------

def compose_primal(f, g):
    """The composer F: (f, g) -> f o g.  No rewriting; identity morphisms
    collapse structurally."""
    if isinstance(f, Z):
        return g
    if isinstance(g, Z):
        return f
    return Comp(f, g)


def compose_dual(f, g):
    """The dual composer G: (f, g) -> g o f."""
    return compose_primal(g, f)


def cprod_functional(
    a: Hypermatrix,
    b: Hypermatrix,
    combinator: str = "sum",
    composer: str = "primal",
) -> Hypermatrix:
    """Construct product over function-valued entries.

    Zero-function entries are absorbing for both composers: a zero operand
    kills its term, which the sum skips and which collapses a product entry
    to the zero function.
    """
    if combinator not in ("sum", "prod"):
        raise ValueError("combinator must be 'sum' or 'prod'")
    comp = compose_primal if composer == "primal" else compose_dual
    if a.shape[-1] != b.shape[0] or a.order != 2 or b.order != 2:
        from .hypermatrix import ConformabilityError

        raise ConformabilityError(f"shapes {a.shape} x {b.shape} not conformable")
    ell = a.shape[1]
    entries = []
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            terms = []
            dead = False
            for t in range(ell):
                f, g = a[i, t], b[t, j]
                if is_zero(f) or is_zero(g):
                    if combinator == "prod":
                        dead = True
                        break
                    continue
                terms.append(comp(f, g))
            if dead or not terms:
                entries.append(Const(0))
            elif combinator == "sum":
                acc = terms[0]
                for term in terms[1:]:
                    acc = Add(acc, term)
                entries.append(acc)
            else:
                acc = terms[0]
                for term in terms[1:]:
                    acc = Mul(acc, term)
                entries.append(acc)
    return Hypermatrix((a.shape[0], b.shape[1]), entries)


# --- sampling ---------------------------------------------------------------

@dataclass(frozen=True)
class SampleDomain:
    """Rectangle in C with the real-axis branch cuts excluded.

    Im z magnitude is drawn from ``im_range`` (the upper end defaults to
    pi - margin so ln(e^z) = z stays on the principal branch); the sign is
    random unless ``signed_im`` is False.
    """

    re_range: tuple[float, float] = (-2.0, 2.0)
    im_range: tuple[float, float] = (0.1, math.pi - 0.1)
    signed_im: bool = True

    def sample(self, rng: random.Random) -> complex:
        re = rng.uniform(*self.re_range)
        im = rng.uniform(*self.im_range)
        if self.signed_im and rng.random() < 0.5:
            im = -im
        return complex(re, im)


def evaluate_hypermatrix(h: Hypermatrix, z):
    return [[evaluate(h[i, j], z) for j in range(h.shape[1])] for i in range(h.shape[0])]


def _sampled_max_residual(fn, dom: SampleDomain, samples: int, rng, retries: int = 50):
    worst = 0.0
    for _ in range(samples):
        for attempt in range(retries):
            z = dom.sample(rng)
            try:
                worst = max(worst, fn(z))
                break
            except BranchCutError:
                if attempt == retries - 1:
                    raise
    return worst


def verify_pseudo_inverse(
    u: Hypermatrix,
    v: Hypermatrix,
    dom: SampleDomain | None = None,
    samples: int = 100,
    rng: random.Random | None = None,
) -> float:
    """Max over samples of || eval(cprod(U,V)) - z*I ||_inf."""
    if u.shape[0] != u.shape[1] or u.shape != v.shape:
        raise ValueError("pseudo-inverse pair must be square and same-shaped")
    dom = dom or SampleDomain()
    rng = rng or random.Random(0)
    prod = cprod_functional(u, v, "sum", "primal")
    n = u.shape[0]

    def residual(z):
        vals = evaluate_hypermatrix(prod, z)
        return max(
            abs(vals[i][j] - (z if i == j else 0)) for i in range(n) for j in range(n)
        )

    return _sampled_max_residual(residual, dom, samples, rng)


def diag_construct(funcs: Sequence) -> Hypermatrix:
    n = len(funcs)
    return Hypermatrix(
        (n, n), [funcs[i] if i == j else Const(0) for i in range(n) for j in range(n)]
    )


def z_identity(n: int) -> Hypermatrix:
    return diag_construct([Z() for _ in range(n)])


@dataclass(frozen=True)
class SpectralSynthesis:
    """Both association orders of U o diag(lambda) o V under (sum, primal)."""

    inner_first: Hypermatrix  # U o (diag o V)
    outer_first: Hypermatrix  # (U o diag) o V

    @property
    def matrix(self) -> Hypermatrix:
        return self.inner_first


def spectral_synthesize(
    u: Hypermatrix, v: Hypermatrix, lambdas: Sequence
) -> SpectralSynthesis:
    if len(lambdas) != u.shape[0]:
        raise ValueError("need one eigenfunction per dimension")
    lam = diag_construct(list(lambdas))
    inner = cprod_functional(u, cprod_functional(lam, v))
    outer = cprod_functional(cprod_functional(u, lam), v)
    return SpectralSynthesis(inner, outer)


def association_gap(
    synth: SpectralSynthesis,
    dom: SampleDomain | None = None,
    samples: int = 100,
    rng: random.Random | None = None,
) -> float:
    dom = dom or SampleDomain()
    rng = rng or random.Random(0)
    n, m = synth.inner_first.shape

    def gap(z):
        a = evaluate_hypermatrix(synth.inner_first, z)
        b = evaluate_hypermatrix(synth.outer_first, z)
        return max(abs(a[i][j] - b[i][j]) for i in range(n) for j in range(m))

    return _sampled_max_residual(gap, dom, samples, rng)


def verify_eigen(
    a: Hypermatrix,
    v: Hypermatrix,
    lam,
    side: str = "dual",
    dom: SampleDomain | None = None,
    samples: int = 100,
    rng: random.Random | None = None,
) -> float:
    """Residual of cprod(A, v) against cprod(diag(lam,..), v) where the
    diagonal product uses the dual composer G (or F when side='primal')."""
    if a.shape[0] != a.shape[1] or v.shape != (a.shape[0], 1):
        raise ValueError("need square A and a conforming column v")
    if side not in ("primal", "dual"):
        raise ValueError("side must be 'primal' or 'dual'")
    dom = dom or SampleDomain()
    rng = rng or random.Random(0)
    n = a.shape[0]
    lhs = cprod_functional(a, v, "sum", "primal")
    rhs = cprod_functional(diag_construct([lam] * n), v, "sum", side)

    def residual(z):
        lv = evaluate_hypermatrix(lhs, z)
        rv = evaluate_hypermatrix(rhs, z)
        return max(abs(lv[i][0] - rv[i][0]) for i in range(n))

    return _sampled_max_residual(residual, dom, samples, rng)


# --- affine constructs -------------------------------------------------------

def affine_entry(a, b):
    """The degree-one entry a*z + b (trivial terms kept implicit)."""
    if b == 0:
        return Mul(Const(a), Z()) if a != 1 else Z()
    if a == 0:
        return Const(b)
    lin = Mul(Const(a), Z()) if a != 1 else Z()
    return Add(lin, Const(b))


def affine_construct(a_rows, b_rows) -> Hypermatrix:
    """Construct M(z) = A z + B from coefficient grids (nested lists)."""
    m, n = len(a_rows), len(a_rows[0])
    return Hypermatrix(
        (m, n),
        [affine_entry(a_rows[i][j], b_rows[i][j]) for i in range(m) for j in range(n)],
    )


def _exact_inverse(mat):
    """Inverse of a small exact matrix (nested lists of Fractions)."""
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular coefficient matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [u - f * v for u, v in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def affine_right_identity(a_rows, b_rows) -> Hypermatrix:
    """Right identity for M(z) = A z + B: rId(z) = z*I - A^{-1} B (J - I).

    Generalizes the displayed 2x2 instance; cprod(M, rId) == M.
    """
    n = len(a_rows)
    ainv = _exact_inverse(a_rows)
    q = [
        [
            sum(ainv[i][k] * sum(Fraction(b_rows[k][t]) * int(t != j) for t in range(n)) for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    # rId[t,j] = delta_tj * z - q[t][j]
    entries = []
    for t in range(n):
        for j in range(n):
            entries.append(affine_entry(Fraction(int(t == j)), -q[t][j]))
    return Hypermatrix((n, n), entries)


def reference_pair() -> tuple[Hypermatrix, Hypermatrix]:
    """The worked 2x2 pseudo-inverse pair:

    U = [[e^z/2, ln(z)/2], [-e^z/2, ln(z)/2]],
    V = [[ln z, ln(-z)], [e^z, e^z]].
    """
    half = Fraction(1, 2)
    u = Hypermatrix(
        (2, 2),
        [
            Mul(Const(half), Exp(Z())),
            Mul(Const(half), Log(Z())),
            Neg(Mul(Const(half), Exp(Z()))),
            Mul(Const(half), Log(Z())),
        ],
    )
    v = Hypermatrix(
        (2, 2),
        [Log(Z()), Log(Neg(Z())), Exp(Z()), Exp(Z())],
    )
    return u, v
