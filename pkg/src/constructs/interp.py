"""Lagrange interpolation, its multiplicative variant, the two-point
vector-input construction, and finite-field interpolation helpers.

The 2x2 vector constructions weight the node differences by (1/2 + gamma)
and (1/2 - gamma) per coordinate and fix gamma by imposing f(0) = 0
(additive) or f(0) = 1 (multiplicative), the reading that reproduces the
worked symbolic output.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence


class DegenerateNodesError(ValueError):
    pass


# --- univariate Lagrange -----------------------------------------------------

def lagrange(points: Sequence[tuple]) -> list:
    """Coefficients (ascending) of the minimal-degree interpolant.

    Exact over exact fields: Fractions in, Fractions out.
    """
    nodes = [p[0] for p in points]
    if len(set(nodes)) != len(nodes):
        raise DegenerateNodesError("interpolation nodes must be pairwise distinct")
    n = len(points)
    coeffs = [0] * n
    for i, (ai, bi) in enumerate(points):
        # basis polynomial prod_{j != i} (x - a_j) / (a_i - a_j)
        basis = [1]
        denom = 1
        for j, (aj, _) in enumerate(points):
            if j == i:
                continue
            basis = [0] + basis
            for k in range(len(basis) - 1):
                basis[k] = basis[k] - basis[k + 1] * aj
            denom = denom * (ai - aj)
        scale = bi / denom if not isinstance(bi, int) or not isinstance(denom, int) \
            else Fraction(bi, denom)
        for k, c in enumerate(basis):
            coeffs[k] = coeffs[k] + c * scale
    return coeffs


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def lagrange_multiplicative(points: Sequence[tuple], x) -> complex:
    """f(x) = prod_i b_i^{L_i(x)} with principal powers; all b_i nonzero."""
    nodes = [p[0] for p in points]
    if len(set(nodes)) != len(nodes):
        raise DegenerateNodesError("interpolation nodes must be pairwise distinct")
    result = 1 + 0j
    for i, (ai, bi) in enumerate(points):
        if bi == 0:
            raise ValueError(f"value b[{i}] = 0 has no well-defined power")
        num = 1
        den = 1
        for j, (aj, _) in enumerate(points):
            if j == i:
                continue
            num *= x - aj
            den *= ai - aj
        weight = num / den
        result *= complex(bi) ** complex(weight)
    return result


# --- 2x2 vector-input constructions ------------------------------------------

def _weights_2x2(a):
    d0 = a[1][0] - a[0][0]
    d1 = a[1][1] - a[0][1]
    if d0 == 0 or d1 == 0:
        raise DegenerateNodesError(
            "vector construction needs a10 != a00 and a11 != a01"
        )
    return d0, d1


def linear_functional_2x2(a, b) -> tuple:
    """Coefficients (c0, c1) of the linear functional through the two rows
    of ``a``: f(a[i,:]) = b[i], built from the (1/2 +- gamma) construction
    with gamma fixed by f(0,0) = 0.

    Exact over Fractions; equals A^{-1} b.
    """
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    d0, d1 = _weights_2x2(a)
    half = Fraction(1, 2)
    # f(x) = (1/2+g) * P0 * (x0-term) + (1/2-g) * P1 * (x1-term); collect in g
    # x0 coefficient: (1/2+g)(b1-b0)/d0 ; x1 coefficient: (1/2-g)(b1-b0)/d1
    # constant: -(1/2+g)(b1 a00 - b0 a10)/d0 - (1/2-g)(b1 a01 - b0 a11)/d1
    p = (b[1] * a[0][0] - b[0] * a[1][0]) / d0
    q = (b[1] * a[0][1] - b[0] * a[1][1]) / d1
    # constant = -(half+g) p - (half-g) q = -(p+q)/2 - g (p - q)
    if p == q:
        raise DegenerateNodesError("gamma is unconstrained: f(0)=0 has no solution")
    gamma = -(p + q) / (2 * (p - q))
    c0 = (half + gamma) * (b[1] - b[0]) / d0
    c1 = (half - gamma) * (b[1] - b[0]) / d1
    return c0, c1


def multiplicative_functional_2x2(a, b, tol: float = 1e-10) -> dict:
    """Multiplicative analogue: f(x) = b1^{w0.(x - a[0])} b0^{w1.(x - a[1])}
    with gamma solved numerically from f(0,0) = 1; verifies both nodes."""
    af = [[float(v) for v in row] for row in a]
    d0, d1 = _weights_2x2(af)
    for i, bi in enumerate(b):
        if bi == 0:
            raise ValueError(f"value b[{i}] = 0 has no well-defined power")
    lb0, lb1 = cmath.log(complex(b[0])), cmath.log(complex(b[1]))

    def log_f(x, gamma):
        w_plus = 0.5 + gamma
        w_minus = 0.5 - gamma
        t1 = (x[0] - af[0][0]) * w_plus / d0 + (x[1] - af[0][1]) * w_minus / d1
        t0 = (x[0] - af[1][0]) * w_plus / -d0 + (x[1] - af[1][1]) * w_minus / -d1
        return lb1 * t1 + lb0 * t0

    # log f(0) is affine in gamma: solve coeff * gamma + const = 0
    c0 = log_f((0.0, 0.0), 0.0)
    c1 = log_f((0.0, 0.0), 1.0) - c0
    if abs(c1) < 1e-14:
        raise DegenerateNodesError("no gamma root: the constraint is degenerate")
    gamma = -c0 / c1

    def f(x):
        return cmath.exp(log_f(x, gamma))

    residuals = [abs(f(af[i]) - complex(b[i])) for i in range(2)]
    return {"gamma": gamma, "f": f, "node_residuals": residuals,
            "ok": max(residuals) < tol}


# --- finite fields -------------------------------------------------------------

def _check_prime(p: int):
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def gf_lex(v: Sequence[int], p: int) -> int:
    """Base-p numbering of a vector over F_p: sum v_i p^i."""
    _check_prime(p)
    return sum((int(vi) % p) * p ** i for i, vi in enumerate(v))


def gf_solution_count(a, b, p: int) -> int:
    """Number of solutions of Ax = b over F_p: p^{dim null A} if consistent,
    else 0."""
    _check_prime(p)
    rows = [[int(v) % p for v in row] + [int(bi) % p] for row, bi in zip(a, b)]
    m = len(rows)
    n = len(rows[0]) - 1
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(u - f * w) % p for u, w in zip(rows[r], rows[rank])]
        rank += 1
    for r in range(rank, m):
        if rows[r][n] % p:
            return 0
    return p ** (n - rank)


def smallest_prime_above(n: int) -> int:
    q = n + 1
    while True:
        if q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1)):
            return q
        q += 1


def gf_lagrange(points: Sequence[tuple], q: int) -> list:
    """Lagrange coefficients over F_q (ascending)."""
    _check_prime(q)
    n = len(points)
    nodes = [int(x) % q for x, _ in points]
    if len(set(nodes)) != len(nodes):
        raise DegenerateNodesError("nodes collide modulo q")
    coeffs = [0] * n
    for i, (ai, bi) in enumerate(points):
        ai = int(ai) % q
        basis = [1]
        denom = 1
        for j, (aj, _) in enumerate(points):
            if j == i:
                continue
            aj = int(aj) % q
            basis = [0] + basis
            for k in range(len(basis) - 1):
                basis[k] = (basis[k] - basis[k + 1] * aj) % q
            denom = (denom * (ai - aj)) % q
        scale = (int(bi) * pow(denom, -1, q)) % q
        for k, c in enumerate(basis):
            coeffs[k] = (coeffs[k] + c * scale) % q
    return coeffs


def gf_univariate_reduction(table, p: int, n: int) -> dict:
    """Reduce a function F_p^n -> F_p to univariate interpolation over the
    smallest prime field with more than p^n elements.

    ``table`` maps length-n tuples over F_p to values in F_p (a dict or a
    callable).  Returns the working prime q and the interpolant g with
    g(lex(v)) = table(v) for every v.
    """
    _check_prime(p)
    lookup: Callable = table.__getitem__ if isinstance(table, dict) else table
    q = smallest_prime_above(p ** n)
    points = []

    def vectors(k):
        if k == 0:
            yield ()
            return
        for rest in vectors(k - 1):
            for d in range(p):
                yield rest + (d,)

    for v in vectors(n):
        points.append((gf_lex(v, p), int(lookup(v)) % p))
    coeffs = gf_lagrange(points, q)
    return {"q": q, "coeffs": coeffs, "points": points}


def gf_poly_eval(coeffs: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc
