"""Solvers for the three construct system types.

Type 1: linear systems (coefficient construct a_ij z - b_i/n), exact over
the rationals, with a division-ring path for skew entries (quaternions)
and a fixed-point expansion for 2x2 mixed systems.  Type 2: log-linear
(exponent construct z^{a_ij}/b_i^{1/n}).  Type 3: base-exponent
(a_ij^z/b_i^{1/n}).  Branches are parameterized by integer vectors k via
e^{2 pi i k}; the default is the principal branch k = 0.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .funcexpr import Add, Comp, Const, Exp, Log, Mul, Neg, Pow, Z, affine_entry
from .hypermatrix import Hypermatrix
from .quaternion import Quaternion


class SingularSystemError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    def __init__(self, msg, witness_row=None):
        super().__init__(msg)
        self.witness_row = witness_row


class BranchingError(ArithmeticError):
    """A zero right side in a type-2 system: some monomial factor must
    vanish, and the 2^n choices of vanishing subsets branch combinatorially."""


class UnboundedError(ArithmeticError):
    """A zero right side in a type-3 system admits no bounded solution."""


class DivergenceError(ArithmeticError):
    def __init__(self, msg, norms=None):
        super().__init__(msg)
        self.norms = norms or []


# --- system data -------------------------------------------------------------

@dataclass
class Type1System:
    a: list  # m x n coefficients
    b: list  # length m
    ring: str = "rational"  # rational | complex | quaternion


@dataclass
class Type2System:
    exponents: list  # m x n rational exponents
    b: list  # length m, complex, zero only to trigger the branching error
    branch: Optional[list] = None


@dataclass
class Type3System:
    bases: list  # m x n complex bases, nonzero
    b: list
    branch: Optional[list] = None


def load_system(text: str):
    doc = json.loads(text)

    def num(v):
        if isinstance(v, str):
            return Fraction(v)
        if isinstance(v, list):
            return complex(float(v[0]), float(v[1]))
        return v

    kind = doc["type"]
    b = [num(v) for v in doc["b"]]
    branch = doc.get("branch")
    if kind == 1:
        return Type1System([[num(v) for v in row] for row in doc["a"]], b,
                           doc.get("ring", "rational"))
    if kind == 2:
        return Type2System([[num(v) for v in row] for row in doc["E"]], b, branch)
    if kind == 3:
        return Type3System([[num(v) for v in row] for row in doc["a"]], b, branch)
    raise ValueError(f"unknown system type {kind!r}")


# --- canonical constructs ------------------------------------------------------

def _root_scale(b, n: int):
    """b^(-1/n) on the principal branch."""
    if b == 0:
        raise ZeroDivisionError("zero right side has no canonical scale")
    c = complex(b)
    return cmath.exp(-cmath.log(c) / n)


def build_construct(system) -> Hypermatrix:
    """The canonical coefficient/exponent/base construct of a system."""
    if isinstance(system, Type1System):
        m, n = len(system.a), len(system.a[0])
        entries = [
            affine_entry(system.a[i][j], -Fraction(system.b[i], n)
                         if isinstance(system.b[i], (int, Fraction))
                         else -system.b[i] / n)
            for i in range(m)
            for j in range(n)
        ]
        return Hypermatrix((m, n), entries)
    if isinstance(system, Type2System):
        m, n = len(system.exponents), len(system.exponents[0])
        entries = [
            Mul(Const(_root_scale(system.b[i], n)), Pow(Z(), Const(system.exponents[i][j])))
            for i in range(m)
            for j in range(n)
        ]
        return Hypermatrix((m, n), entries)
    if isinstance(system, Type3System):
        m, n = len(system.bases), len(system.bases[0])
        entries = [
            Mul(Const(_root_scale(system.b[i], n)), Pow(Const(system.bases[i][j]), Z()))
            for i in range(m)
            for j in range(n)
        ]
        return Hypermatrix((m, n), entries)
    raise TypeError(f"not a system: {system!r}")


def variable_column(xs) -> Hypermatrix:
    return Hypermatrix((len(xs), 1), [Const(x) for x in xs])


# --- type 1: exact commutative elimination -------------------------------------

@dataclass
class Type1Solution:
    status: str  # unique | parametric | inconsistent
    x: Optional[list] = None  # particular solution
    basis: list = field(default_factory=list)  # free-variable nullspace basis
    free_columns: list = field(default_factory=list)
    witness_row: Optional[int] = None

    def specialize(self, params: Sequence) -> list:
        if self.x is None:
            raise InconsistentSystemError("no solution", self.witness_row)
        out = list(self.x)
        for p, vec in zip(params, self.basis):
            out = [xi + p * vi for xi, vi in zip(out, vec)]
        return out


def _rref(rows, rhs, is_zero):
    m, n = len(rows), len(rows[0])
    rows = [list(r) for r in rows]
    rhs = list(rhs)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / rows[r][c] if not isinstance(rows[r][c], Fraction) else Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        rhs[r] = rhs[r] * inv
        for i in range(m):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[r])]
                rhs[i] = rhs[i] - f * rhs[r]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, rhs, pivots


def solve_type1(system: Type1System) -> Type1Solution:
    """RREF-based exact solve; parametric solutions carry a nullspace basis."""
    if system.ring == "rational":
        a = [[Fraction(v) for v in row] for row in system.a]
        b = [Fraction(v) for v in system.b]
        is_zero = lambda v: v == 0
        zero, one = Fraction(0), Fraction(1)
    else:
        a = [[complex(v) for v in row] for row in system.a]
        b = [complex(v) for v in system.b]
        is_zero = lambda v: abs(v) < 1e-12
        zero, one = 0j, 1 + 0j
    m, n = len(a), len(a[0])
    rows, rhs, pivots = _rref(a, b, is_zero)
    rank = len(pivots)
    for i in range(rank, m):
        if not is_zero(rhs[i]):
            return Type1Solution(status="inconsistent", witness_row=i)
    x = [zero] * n
    for r, c in enumerate(pivots):
        x[c] = rhs[r]
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return Type1Solution(status="unique", x=x)
    basis = []
    for fc in free:
        vec = [zero] * n
        vec[fc] = one
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][fc]
        basis.append(vec)
    return Type1Solution(status="parametric", x=x, basis=basis, free_columns=free)


def type1_residual(system: Type1System, x) -> list:
    return [
        sum(aij * xj for aij, xj in zip(row, x)) - bi
        for row, bi in zip(system.a, system.b)
    ]


# --- type 1 over a division ring ------------------------------------------------

def solve_type1_skew(a, c, side: str = "left") -> list:
    """Solve a square system over a division ring (reference: quaternions).

    side='left': sum_j a[i][j] x_j = c_i (coefficients multiply on the left).
    side='right': sum_j x_j a[i][j] = c_i.  Elimination uses alpha R_i beta
    + R_j row operations; scaling happens implicitly in back-substitution.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    n = len(a)
    rows = [list(r) for r in a]
    rhs = list(c)
    for col in range(n):
        piv = next((i for i in range(col, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            raise SingularSystemError(
                f"no invertible pivot in column {col}; row exchange cannot remedy"
            )
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        pinv = rows[col][col].inverse()
        for i in range(col + 1, n):
            if rows[i][col].is_zero():
                continue
            if side == "left":
                alpha = rows[i][col] * pinv
                rows[i] = [u - alpha * v for u, v in zip(rows[i], rows[col])]
                rhs[i] = rhs[i] - alpha * rhs[col]
            else:
                beta = pinv * rows[i][col]
                rows[i] = [u - v * beta for u, v in zip(rows[i], rows[col])]
                rhs[i] = rhs[i] - rhs[col] * beta
    x = [None] * n
    for col in range(n - 1, -1, -1):
        acc = rhs[col]
        for j in range(col + 1, n):
            if side == "left":
                acc = acc - rows[col][j] * x[j]
            else:
                acc = acc - x[j] * rows[col][j]
        if side == "left":
            x[col] = rows[col][col].inverse() * acc
        else:
            x[col] = acc * rows[col][col].inverse()
    return x


def skew_residual(a, c, x, side: str = "left") -> list:
    out = []
    for i, row in enumerate(a):
        acc = None
        for j, aij in enumerate(row):
            term = aij * x[j] if side == "left" else x[j] * aij
            acc = term if acc is None else acc + term
        out.append(acc - c[i])
    return out


def right_system_closed_form_2x2(b, c) -> dict:
    """RREF data (d0, d1) and the solution of the 2x2 right system

        x0 b00 + x1 b10 = c0,   x0 b01 + x1 b11 = c1.

    The source display's d1 carries a sign typo; this is the substitution-
    verified form d1 = -c0 b00^-1 b01 + c1.
    """
    b00, b10 = b[0]
    b01, b11 = b[1]
    s = -b10 * b00.inverse() * b01 + b11
    d1 = -c[0] * b00.inverse() * b01 + c[1]
    d0 = c[0] - d1 * (s.inverse() * b10)
    x1 = d1 * s.inverse()
    x0 = d0 * b00.inverse()
    return {"d0": d0, "d1": d1, "x": [x0, x1]}


# --- Sylvester ------------------------------------------------------------------

@dataclass
class SylvesterSolution:
    x: np.ndarray
    x_cramer: np.ndarray
    residual: float
    path_gap: float


def solve_sylvester(a, b, c, tol: float = 1e-9) -> SylvesterSolution:
    """Solve ax + xb = c via the vectorized operator, cross-checked entry by
    entry with the Cramer determinant quotient."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    p, q = a.shape[0], b.shape[0]
    alpha = np.linalg.eigvals(a)
    beta = np.linalg.eigvals(b)
    scale = max(1.0, np.abs(alpha).max(), np.abs(beta).max())
    gaps = np.abs(alpha[:, None] + beta[None, :])
    if gaps.min() < tol * scale:
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        raise SingularSystemError(
            f"spectra of a and -b intersect near {alpha[i]:.6g}: "
            "the resultant condition fails and the solution is not unique"
        )
    # row-major vec: vec(ax + xb) = (a (x) I_q + I_p (x) b^T) vec(x)
    op = np.kron(a, np.eye(q)) + np.kron(np.eye(p), b.T)
    vec_c = c.reshape(-1)
    x = np.linalg.solve(op, vec_c).reshape(p, q)
    det_op = np.linalg.det(op)
    x_cramer = np.empty((p, q), dtype=complex)
    for s in range(p):
        for t in range(q):
            m_st = op.copy()
            m_st[:, q * s + t] = vec_c
            x_cramer[s, t] = np.linalg.det(m_st) / det_op
    residual = float(np.abs(a @ x + x @ b - c).max())
    path_gap = float(np.abs(x - x_cramer).max())
    return SylvesterSolution(x, x_cramer, residual, path_gap)


# --- 2x2 mixed systems via the fixed-point expansion ----------------------------

@dataclass
class MixedFixedPointResult:
    x0: np.ndarray
    x1: np.ndarray
    f: np.ndarray
    iterations: int
    residual: float


def mixed_fixed_point(a, b, c, t_max: int = 10_000, tol: float = 1e-12) -> MixedFixedPointResult:
    """Solve the 2x2 mixed system over a matrix algebra

        a00 x0 b00 + a01 x1 b10 = c0
        a10 x0 b01 + a11 x1 b11 = c1

    by iterating the rational-series recurrence for f = a10 x0 b01 from
    f_0 = 0.  (The source recurrence omits the a01 and b10 factors, which
    only matches systems normalized to a01 = -1, b10 = 1; the factors are
    kept so back-substitution satisfies the general system.)
    """
    (a00, a01), (a10, a11) = [[np.asarray(m, dtype=complex) for m in row] for row in a]
    (b00, b01), (b10, b11) = [[np.asarray(m, dtype=complex) for m in row] for row in b]
    c0, c1 = [np.asarray(v, dtype=complex) for v in c]
    inv = np.linalg.inv
    const = a10 @ inv(a00) @ c0 @ inv(b00) @ b01
    left = a10 @ inv(a00) @ a01 @ inv(a11)
    right = inv(b11) @ b10 @ inv(b00) @ b01

    f = np.zeros_like(c0)
    norms = []
    for it in range(1, t_max + 1):
        f_next = const - left @ (c1 - f) @ right
        step = float(np.abs(f_next - f).max())
        norms.append(float(np.abs(f_next).max()))
        f = f_next
        if step < tol:
            break
        if not np.isfinite(step) or norms[-1] > 1e12:
            raise DivergenceError(
                f"fixed-point iterate norm grew to {norms[-1]:.3g} by step {it}",
                norms[-10:],
            )
    else:
        raise DivergenceError(
            f"no convergence in {t_max} steps; last norms {norms[-5:]}", norms[-10:]
        )
    x1 = inv(a11) @ (c1 - f) @ inv(b11)
    x0 = inv(a00) @ (c0 - a01 @ x1 @ b10) @ inv(b00)
    residual = max(
        float(np.abs(a00 @ x0 @ b00 + a01 @ x1 @ b10 - c0).max()),
        float(np.abs(a10 @ x0 @ b01 + a11 @ x1 @ b11 - c1).max()),
    )
    return MixedFixedPointResult(x0, x1, f, it, residual)


# --- types 2 and 3 ---------------------------------------------------------------

TWO_PI_I = 2j * math.pi


@dataclass
class ProductSolveResult:
    x: list
    residual: float
    closed_form: Optional[dict] = None  # 2x2 elimination data (d0, d1, x)
    trace: list = field(default_factory=list)  # constructs after each stage


def _monomial_residual(exponents, b, x) -> float:
    worst = 0.0
    for row, bi in zip(exponents, b):
        prod = 1 + 0j
        for e, xj in zip(row, x):
            prod *= complex(xj) ** complex(e)
        worst = max(worst, abs(prod / complex(bi) - 1))
    return worst


def _base_residual(bases, b, x) -> float:
    worst = 0.0
    for row, bi in zip(bases, b):
        prod = 1 + 0j
        for a, xj in zip(row, x):
            prod *= complex(a) ** complex(xj)
        worst = max(worst, abs(prod / complex(bi) - 1))
    return worst


def _branch_vector(system, k):
    m = len(system.b)
    if k is None:
        k = system.branch
    if k is None:
        k = [0] * m
    if isinstance(k, int):
        k = [k] * m
    if len(k) != m:
        raise ValueError("branch vector length must match the number of equations")
    return list(k)


def _rref_construct_2x2(d0, d1) -> Hypermatrix:
    def entry(deg, d):
        scale = Const(_root_scale(d, 2))
        return Mul(scale, Pow(Z(), Const(deg)))

    return Hypermatrix(
        (2, 2), [entry(1, d0), entry(0, d0), entry(0, d1), entry(1, d1)]
    )


def eliminate_2x2_type2(exponents, b, k) -> dict:
    """The explicit row log-linear elimination for a 2x2 type-2 system;
    returns the RREF data (d0, d1), the solution, and the final construct."""
    (a00, a01), (a10, a11) = [[complex(v) for v in row] for row in exponents]
    b0, b1 = complex(b[0]), complex(b[1])
    k0, k1 = k
    if a00 == 0:
        raise SingularSystemError("zero pivot exponent a00")
    e1 = a11 - a10 * a01 / a00
    if e1 == 0:
        raise SingularSystemError("elimination leaves a zero pivot exponent")
    b0k = b0 * cmath.exp(TWO_PI_I * k0)
    d1 = b1 * b0k ** (-a10 / a00)
    x1 = (d1 * cmath.exp(TWO_PI_I * k1)) ** (1 / e1)
    d0 = b0k * x1 ** (-a01)
    x0 = d0 ** (1 / a00)
    return {"d0": d0, "d1": d1, "x": [x0, x1], "construct": _rref_construct_2x2(d0, d1)}


def solve_type2(system: Type2System, branch=None) -> ProductSolveResult:
    """Solve prod_j x_j^{E_ij} = b_i via E log x = Log b + 2 pi i k."""
    for i, bi in enumerate(system.b):
        if bi == 0:
            raise BranchingError(
                f"b[{i}] = 0: the constraint can only hold if some monomial factor "
                "vanishes, and the 2^n choices of vanishing factor subsets branch "
                "combinatorially"
            )
    k = _branch_vector(system, branch)
    e = np.asarray(system.exponents, dtype=complex)
    m, n = e.shape
    rhs = np.array(
        [cmath.log(complex(bi)) + TWO_PI_I * ki for bi, ki in zip(system.b, k)]
    )
    if m != n:
        raise ValueError("square system required; use log_least_squares otherwise")
    try:
        lvec = np.linalg.solve(e, rhs)
    except np.linalg.LinAlgError:
        raise SingularSystemError("exponent matrix is singular") from None
    x = [cmath.exp(v) for v in lvec]
    result = ProductSolveResult(x, _monomial_residual(system.exponents, system.b, x))
    if (m, n) == (2, 2):
        result.closed_form = eliminate_2x2_type2(system.exponents, system.b, k)
        result.trace = [build_construct(system), result.closed_form["construct"]]
    return result


def eliminate_2x2_type3(bases, b, k) -> dict:
    (a00, a01), (a10, a11) = [[complex(v) for v in row] for row in bases]
    b0, b1 = complex(b[0]), complex(b[1])
    k0, k1 = k
    l00 = cmath.log(a00)
    if l00 == 0:
        raise SingularSystemError("pivot base a00 = 1 gives no leverage")
    alpha = -cmath.log(a10) / l00
    pivot = a01 ** alpha * a11
    lp = cmath.log(pivot)
    if lp == 0:
        raise SingularSystemError("elimination leaves pivot base 1")
    b0k = b0 * cmath.exp(TWO_PI_I * k0)
    d1 = b0k ** alpha * b1
    x1 = (cmath.log(d1) + TWO_PI_I * k1) / lp
    d0 = b0k * a01 ** (-x1)
    x0 = cmath.log(d0) / l00
    return {"d0": d0, "d1": d1, "x": [x0, x1], "construct": _rref_construct_2x2(d0, d1)}


def solve_type3(system: Type3System, branch=None, tol: float = 1e-9) -> ProductSolveResult:
    """Solve prod_j a_ij^{x_j} = b_i via sum_j x_j Log a_ij = Log b_i + 2 pi i k."""
    for i, bi in enumerate(system.b):
        if bi == 0:
            raise UnboundedError(
                f"b[{i}] = 0: no bounded solution exists for a zero right side"
            )
    for row in system.bases:
        for a in row:
            if a == 0:
                raise ValueError("zero base entry is outside the model")
    k = _branch_vector(system, branch)
    mlog = np.array([[cmath.log(complex(a)) for a in row] for row in system.bases])
    rhs = np.array(
        [cmath.log(complex(bi)) + TWO_PI_I * ki for bi, ki in zip(system.b, k)]
    )
    m, n = mlog.shape
    if m == n and abs(np.linalg.det(mlog)) > tol:
        x = list(np.linalg.solve(mlog, rhs))
    else:
        sol, _, rank, _ = np.linalg.lstsq(mlog, rhs, rcond=None)
        if np.abs(mlog @ sol - rhs).max() > tol:
            raise InconsistentSystemError(
                f"rank-{rank} base matrix cannot reach the right side"
            )
        x = list(sol)
    result = ProductSolveResult(x, _base_residual(system.bases, system.b, x))
    if (m, n) == (2, 2):
        result.closed_form = eliminate_2x2_type3(system.bases, system.b, k)
        result.trace = [build_construct(system), result.closed_form["construct"]]
    return result


# --- degree matrix ----------------------------------------------------------------

def _as_plain_number(e):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        v = _as_plain_number(e.a)
        return None if v is None else -v
    return None


def z_degree(expr) -> int:
    """Structural z-degree; base-exponent entries a^g(z) count as the
    indicator of a != 1 (matching the eliminated staircase displays)."""
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, Z):
        return 1
    if isinstance(expr, Neg):
        return z_degree(expr.a)
    if isinstance(expr, (Add,)):
        return max(z_degree(expr.a), z_degree(expr.b))
    if isinstance(expr, Mul):
        return z_degree(expr.a) + z_degree(expr.b)
    if isinstance(expr, Pow):
        base_const = _as_plain_number(expr.a)
        if base_const is not None:
            if z_degree(expr.b) == 0:
                return 0
            return 0 if base_const == 1 else 1
        expo = _as_plain_number(expr.b)
        if expo is None:
            raise ValueError(f"no z-degree for {expr!r}")
        d = z_degree(expr.a)
        if d == 0:
            return 0
        frac = Fraction(expo) if not isinstance(expo, complex) else None
        if frac is None or frac < 0 or frac.denominator != 1:
            raise ValueError(f"non-integer exponent degree in {expr!r}")
        return d * int(frac)
    if isinstance(expr, (Exp, Log)):
        if z_degree(expr.a) == 0:
            return 0
        raise ValueError(f"non-polynomial entry {expr!r} has no declared degree")
    if isinstance(expr, Comp):
        if z_degree(expr.g) == 0:
            return 0
        raise ValueError(f"composition entry {expr!r} has no declared degree")
    raise TypeError(f"not a FuncExpr: {expr!r}")


def degree_matrix(h: Hypermatrix) -> list[list[int]]:
    m, n = h.shape
    return [[z_degree(h[i, j]) for j in range(n)] for i in range(m)]


def is_ref(d: Sequence[Sequence[int]]) -> bool:
    """Pivot staircase on the integer degree matrix: the leading positive
    entry of each row sits strictly right of the one above; zero rows last."""
    last_pivot = -1
    seen_zero_row = False
    for row in d:
        pivot = next((j for j, v in enumerate(row) if v > 0), None)
        if pivot is None:
            seen_zero_row = True
            continue
        if seen_zero_row or pivot <= last_pivot:
            return False
        last_pivot = pivot
    return True


def is_rref(d: Sequence[Sequence[int]]) -> bool:
    if not is_ref(d):
        return False
    for i, row in enumerate(d):
        pivot = next((j for j, v in enumerate(row) if v > 0), None)
        if pivot is None:
            continue
        if row[pivot] != 1:
            return False
        if any(d[r][pivot] != 0 for r in range(len(d)) if r != i):
            return False
    return True


# --- algebraic-system composition ---------------------------------------------------

@dataclass
class AlgebraicSystem:
    """Canonical composed system 0 = C (x^E)."""

    exponents: list  # m x l integer exponent matrix E
    coefficients: list  # n x m coefficient matrix C


def compose_algebraic(outer: Type1System, inner: Type2System) -> AlgebraicSystem:
    """C = outer construct evaluated at z = 1; E = inner exponent matrix."""
    m = len(inner.exponents)
    if len(outer.a[0]) != m:
        raise ValueError(
            f"outer system has {len(outer.a[0])} columns but inner has {m} rows"
        )
    def scale(bj):
        return Fraction(bj, m) if isinstance(bj, (int, Fraction)) else bj / m

    c = [
        [outer.a[j][t] - scale(outer.b[j]) for t in range(m)]
        for j in range(len(outer.a))
    ]
    return AlgebraicSystem([list(row) for row in inner.exponents], c)


def algebraic_residual(system: AlgebraicSystem, x) -> list:
    monomials = []
    for row in system.exponents:
        prod = 1
        for e, xj in zip(row, x):
            if e == 0:
                continue
            if isinstance(xj, (int, Fraction)) and isinstance(e, int) and e >= 0:
                prod *= xj ** e
            else:
                prod *= complex(xj) ** complex(e)
        monomials.append(prod)
    return [
        sum(cjk * mk for cjk, mk in zip(crow, monomials)) for crow in system.coefficients
    ]


# --- least squares --------------------------------------------------------------------

def least_squares_type1(a, b) -> np.ndarray:
    """Square-completion route: spectral decomposition of a*a followed by
    the pseudo-inverse readout x = Q* (sqrt(L))^+ sqrt(L) Q A^+ b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex).reshape(-1)
    gram = a.conj().T @ a
    lam, vecs = np.linalg.eigh(gram)
    q = vecs.conj().T
    sqrt_l = np.sqrt(np.clip(lam.real, 0, None))
    cutoff = max(1.0, sqrt_l.max()) * 1e-12 if sqrt_l.size else 0.0
    pinv_sqrt = np.where(sqrt_l > cutoff, 1 / np.where(sqrt_l > cutoff, sqrt_l, 1), 0)
    projector = q.conj().T @ np.diag(pinv_sqrt * sqrt_l) @ q
    return projector @ (np.linalg.pinv(a) @ b)


def log_least_squares(system, branch=None) -> list:
    """Minimize the squared Log-residual: linear least squares in Log x
    (type 2) or in x itself (type 3)."""
    if isinstance(system, Type2System):
        for bi in system.b:
            if bi == 0:
                raise BranchingError("zero right side cannot be log-fitted")
        k = _branch_vector(system, branch)
        e = np.asarray(system.exponents, dtype=complex)
        rhs = np.array(
            [cmath.log(complex(bi)) + TWO_PI_I * ki for bi, ki in zip(system.b, k)]
        )
        lvec, *_ = np.linalg.lstsq(e, rhs, rcond=None)
        return [cmath.exp(v) for v in lvec]
    if isinstance(system, Type3System):
        for bi in system.b:
            if bi == 0:
                raise UnboundedError("zero right side cannot be log-fitted")
        k = _branch_vector(system, branch)
        mlog = np.array([[cmath.log(complex(a)) for a in row] for row in system.bases])
        rhs = np.array(
            [cmath.log(complex(bi)) + TWO_PI_I * ki for bi, ki in zip(system.b, k)]
        )
        x, *_ = np.linalg.lstsq(mlog, rhs, rcond=None)
        return list(x)
    raise TypeError("log_least_squares expects a Type2System or Type3System")
