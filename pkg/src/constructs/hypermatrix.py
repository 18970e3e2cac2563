"""Dense hypermatrix container and the combinator/composer product.

A construct is a hypermatrix whose entries live in an arbitrary value
domain; its product is parameterized by an :class:`AlgebraSpec` holding a
combinator (reduction over the contraction index) and a composer (an m-ary
map applied to one entry per operand).  ``cprod2``/``cprod3`` are the
second- and third-order products; ``cprod_general`` is the order-m form.
``gprod`` is an alias for ``cprod_general`` (the two names denote the same
operation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence


class ConformabilityError(ValueError):
    """Operand shapes do not satisfy the product's contraction pattern."""


def _check_shape(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1 or any(d < 1 for d in dims):
        raise ValueError(f"invalid shape {dims}: all extents must be >= 1")
    return dims


class Hypermatrix:
    """Immutable dense order-m array, row-major (last index fastest)."""

    __slots__ = ("shape", "_data")

    def __init__(self, shape: Sequence[int], entries: Sequence[Any]):
        self.shape = _check_shape(shape)
        data = list(entries)
        size = 1
        for d in self.shape:
            size *= d
        if len(data) != size:
            raise ValueError(
                f"shape {self.shape} needs {size} entries, got {len(data)}"
            )
        self._data = data

    @property
    def order(self) -> int:
        return len(self.shape)

    @property
    def entries(self) -> tuple:
        return tuple(self._data)

    @classmethod
    def from_nested(cls, nested: Any) -> "Hypermatrix":
        """Build from nested lists, e.g. ``[[a, b], [c, d]]``."""
        dims = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            dims.append(len(probe))
            probe = probe[0]
        flat: list[Any] = []

        def walk(node, depth):
            if depth == len(dims):
                flat.append(node)
                return
            if not isinstance(node, (list, tuple)) or len(node) != dims[depth]:
                raise ValueError("ragged nested input")
            for child in node:
                walk(child, depth + 1)

        walk(nested, 0)
        return cls(dims, flat)

    def to_nested(self) -> Any:
        def build(axis, offset, stride):
            if axis == self.order:
                return self._data[offset]
            step = stride // self.shape[axis]
            return [
                build(axis + 1, offset + i * step, step)
                for i in range(self.shape[axis])
            ]

        return build(0, 0, len(self._data))

    def _flat_index(self, idx: tuple[int, ...]) -> int:
        if len(idx) != self.order:
            raise IndexError(f"expected {self.order} indices, got {len(idx)}")
        flat = 0
        for i, d in zip(idx, self.shape):
            if not 0 <= i < d:
                raise IndexError(f"index {idx} out of bounds for shape {self.shape}")
            flat = flat * d + i
        return flat

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        return self._data[self._flat_index(tuple(idx))]

    def with_entry(self, idx, value) -> "Hypermatrix":
        """Copy with one entry replaced (hypermatrices are immutable)."""
        if isinstance(idx, int):
            idx = (idx,)
        data = list(self._data)
        data[self._flat_index(tuple(idx))] = value
        return Hypermatrix(self.shape, data)

    def map(self, fn: Callable[[Any], Any]) -> "Hypermatrix":
        return Hypermatrix(self.shape, [fn(v) for v in self._data])

    def indices(self):
        def rec(axis):
            if axis == self.order:
                yield ()
                return
            for i in range(self.shape[axis]):
                for rest in rec(axis + 1):
                    yield (i,) + rest

        return rec(0)

    def __eq__(self, other):
        return (
            isinstance(other, Hypermatrix)
            and self.shape == other.shape
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.shape, tuple(map(repr, self._data))))

    def __repr__(self):
        return f"Hypermatrix(shape={self.shape}, entries={self.to_nested()!r})"


@dataclass(frozen=True)
class AlgebraSpec:
    """Combinator (reduction of a nonempty sequence) plus m-ary composer.

    The combinator always receives candidate terms in contraction-index
    order t = 0..l-1; order-sensitive combinators must document it.
    """

    combinator: Callable[[Sequence[Any]], Any]
    composer: Callable[..., Any]
    name: str = field(default="", compare=False)


def validate_conformable(shapes: Sequence[Sequence[int]]) -> int:
    """Return the shared contraction extent l for the order-m product.

    Operand t must have the output shape except that its axis
    ``(t + 1) mod m`` carries the contraction extent.
    """
    m = len(shapes)
    if m < 2:
        raise ConformabilityError("need at least two operands")
    shapes = [_check_shape(s) for s in shapes]
    for t, s in enumerate(shapes):
        if len(s) != m:
            raise ConformabilityError(
                f"operand {t} has order {len(s)}, expected {m} for an order-{m} product"
            )
    ell = shapes[0][1 % m]
    out_dims: list[int] = []
    for axis in range(m):
        # any operand whose contraction slot is elsewhere pins this axis
        owner = next(t for t in range(m) if (t + 1) % m != axis)
        out_dims.append(shapes[owner][axis])
    for t, s in enumerate(shapes):
        for axis in range(m):
            want = ell if axis == (t + 1) % m else out_dims[axis]
            if s[axis] != want:
                raise ConformabilityError(
                    f"operand {t} axis {axis}: extent {s[axis]} != expected {want} "
                    f"(shapes {[tuple(x) for x in shapes]})"
                )
    return ell


def cprod_general(operands: Sequence[Hypermatrix], alg: AlgebraSpec) -> Hypermatrix:
    """Order-m construct product over m operands of order m.

    out[i0..i_{m-1}] = combinator over j of
    composer(op0[i0,j,i2,..], .., opt[i0,..,it,j,i_{t+2},..], .., op_{m-1}[j,i1,..]).
    """
    m = len(operands)
    ell = validate_conformable([h.shape for h in operands])
    out_dims = []
    for axis in range(m):
        owner = next(t for t in range(m) if (t + 1) % m != axis)
        out_dims.append(operands[owner].shape[axis])

    out_entries = []
    for idx in _iter_indices(out_dims):
        terms = []
        for j in range(ell):
            args = []
            for t, h in enumerate(operands):
                pos = list(idx)
                pos[(t + 1) % m] = j
                args.append(h[tuple(pos)])
            terms.append(alg.composer(*args))
        out_entries.append(alg.combinator(terms))
    return Hypermatrix(out_dims, out_entries)


# The source text alternates CProd and GProd for this operation; one name,
# documented synonym.
gprod = cprod_general


def cprod2(a: Hypermatrix, b: Hypermatrix, alg: AlgebraSpec) -> Hypermatrix:
    """Second-order product: C[i,j] = Op_t composer(A[i,t], B[t,j])."""
    if a.order != 2 or b.order != 2:
        raise ConformabilityError("cprod2 expects two matrices (order 2)")
    if a.shape[1] != b.shape[0]:
        raise ConformabilityError(
            f"inner extents differ: {a.shape} x {b.shape}"
        )
    return cprod_general([a, b], alg)


def cprod3(
    a: Hypermatrix, b: Hypermatrix, c: Hypermatrix, alg: AlgebraSpec
) -> Hypermatrix:
    """Third-order product: D[i,j,k] = Op_t composer(A[i,t,k], B[i,j,t], C[t,j,k])."""
    for h in (a, b, c):
        if h.order != 3:
            raise ConformabilityError("cprod3 expects three order-3 hypermatrices")
    return cprod_general([a, b, c], alg)


def _iter_indices(dims):
    def rec(axis):
        if axis == len(dims):
            yield ()
            return
        for i in range(dims[axis]):
            for rest in rec(axis + 1):
                yield (i,) + rest

    return rec(0)


# --- text format -----------------------------------------------------------
#
# JSON document: {"shape": [...], "domain": <tag>, "entries": [...]} with
# entries row-major.  Domains: "complex" ([re, im] decimal strings),
# "rational" ("p/q" strings), "bool", "set" (sorted integer arrays),
# "funcexpr" (prefix token strings).

def _encode_entry(domain: str, v):
    if domain == "complex":
        c = complex(v)
        return [repr(c.real), repr(c.imag)]
    if domain == "rational":
        return str(Fraction(v))
    if domain == "bool":
        return bool(v)
    if domain == "set":
        return sorted(int(x) for x in v)
    if domain == "funcexpr":
        from . import funcexpr

        return funcexpr.format_funcexpr(v)
    raise ValueError(f"unknown domain {domain!r}")


def _decode_entry(domain: str, v):
    if domain == "complex":
        re, im = v
        return complex(float(re), float(im))
    if domain == "rational":
        return Fraction(v)
    if domain == "bool":
        return bool(v)
    if domain == "set":
        return frozenset(int(x) for x in v)
    if domain == "funcexpr":
        from . import funcexpr

        return funcexpr.parse_funcexpr(v)
    raise ValueError(f"unknown domain {domain!r}")


def hypermatrix_to_json(h: Hypermatrix, domain: str) -> str:
    doc = {
        "shape": list(h.shape),
        "domain": domain,
        "entries": [_encode_entry(domain, v) for v in h.entries],
    }
    return json.dumps(doc)


def hypermatrix_from_json(text: str) -> tuple[Hypermatrix, str]:
    doc = json.loads(text)
    domain = doc["domain"]
    entries = [_decode_entry(domain, v) for v in doc["entries"]]
    return Hypermatrix(doc["shape"], entries), domain
