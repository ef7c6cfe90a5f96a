"""Direction sets in AG(2,q), additive (linearized) maps, and rigidity tests.

The direction set of a point set is the set of secant slopes, with the
vertical direction tracked by a separate flag.  Functions enter either as
raw value tables (length-q arrays of encodings) or as LinearizedMap
coefficient tuples; the latter is what the searches enumerate, since for
an additive map every difference quotient collapses to f(x)/x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cosets import CosetUnion
from .errors import TooFewPoints, ZeroInD
from .field import FieldCtx


class DirectionSet:
    """Slopes as a bitset over encodings, plus a flag for the vertical direction."""

    __slots__ = ("ctx", "mask", "has_infinity")

    def __init__(self, ctx: FieldCtx, mask: np.ndarray, has_infinity: bool = False):
        self.ctx = ctx
        self.mask = mask
        self.mask.flags.writeable = False
        self.has_infinity = bool(has_infinity)

    @classmethod
    def from_encodings(cls, ctx: FieldCtx, encs, has_infinity: bool = False) -> "DirectionSet":
        mask = np.zeros(ctx.q, dtype=bool)
        for e in encs:
            mask[int(e)] = True
        return cls(ctx, mask, has_infinity)

    def encodings(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.mask)]

    @property
    def size(self) -> int:
        return int(self.mask.sum()) + (1 if self.has_infinity else 0)

    def __contains__(self, enc: int) -> bool:
        return bool(self.mask[enc])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirectionSet)
            and self.has_infinity == other.has_infinity
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self):
        return hash((self.has_infinity, self.mask.tobytes()))

    def issubset_of(self, union: CosetUnion) -> bool:
        if self.has_infinity:
            return False
        return bool(np.all(union.member_mask()[self.mask]))

    def to_dict(self) -> dict:
        return {"slopes": self.encodings(), "infinity": self.has_infinity}

    def __repr__(self):
        inf = " + inf" if self.has_infinity else ""
        return f"DirectionSet({self.encodings()}{inf})"


def directions_of_point_set(ctx: FieldCtx, points) -> DirectionSet:
    """Secant slopes over all unordered pairs; equal x-coordinates give infinity."""
    pts = [(int(x), int(y)) for x, y in points]
    if len(pts) < 2:
        raise TooFewPoints("need at least two points")
    if len(set(pts)) != len(pts):
        raise ValueError("point set contains a repeated point")
    xs = np.array([p[0] for p in pts], dtype=np.int64)
    ys = np.array([p[1] for p in pts], dtype=np.int64)
    i, j = np.triu_indices(len(pts), 1)
    dx = ctx.sub_vec(xs[i], xs[j])
    dy = ctx.sub_vec(ys[i], ys[j])
    vertical = dx == 0
    mask = np.zeros(ctx.q, dtype=bool)
    if np.any(~vertical):
        slopes = ctx.div_vec(dy[~vertical], dx[~vertical])
        mask[slopes] = True
    return DirectionSet(ctx, mask, has_infinity=bool(vertical.any()))


def directions_of_function(ctx: FieldCtx, table) -> DirectionSet:
    """Directions of the graph {(x, f(x))}; never contains infinity."""
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (ctx.q,):
        raise ValueError(f"value table must have length q = {ctx.q}")
    mask = np.zeros(ctx.q, dtype=bool)
    xs = np.arange(ctx.q, dtype=np.int64)
    # row at a time keeps memory O(q) for large fields
    for x in range(ctx.q - 1):
        ys = xs[x + 1 :]
        dx = ctx.sub_vec(np.int64(x), ys)
        dy = ctx.sub_vec(t[x], t[x + 1 :])
        mask[ctx.div_vec(dy, dx)] = True
    return DirectionSet(ctx, mask, has_infinity=False)


def is_additive(ctx: FieldCtx, table) -> bool:
    """Whether f(x+y) = f(x) + f(y) for all pairs; exits on the first failure."""
    t = np.asarray(table, dtype=np.int64)
    if t[0] != 0:
        return False
    xs = np.arange(ctx.q, dtype=np.int64)
    for x in range(1, ctx.q):
        lhs = t[ctx.add_vec(np.int64(x), xs)]
        rhs = ctx.add_vec(t[x], t)
        if not np.array_equal(lhs, rhs):
            return False
    return True


@dataclass(frozen=True)
class LinearizedMap:
    """Additive map f(x) = sum_i c_i x^(p^i), given by its coefficient tuple."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.n:
            raise ValueError(f"need {self.ctx.n} coefficients, got {len(self.coeffs)}")

    def __call__(self, x: int) -> int:
        return linearized_eval(self, x)

    @property
    def encoding(self) -> int:
        """Candidate-order key: sum_i c_i q^i."""
        q = self.ctx.q
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def nonzero_coeffs(self) -> list[tuple[int, int]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def value_table(self) -> np.ndarray:
        ctx = self.ctx
        acc = np.zeros(ctx.q, dtype=np.int64)
        for i, c in self.nonzero_coeffs():
            term = ctx.scalar_mul_table(c)[ctx.frob_table(i)]
            acc = ctx.add_vec(acc, term)
        return acc

    def scale(self, c: int) -> "LinearizedMap":
        return LinearizedMap(self.ctx, tuple(self.ctx.mul(c, ci) for ci in self.coeffs))


def linearized_eval(f: LinearizedMap, x: int) -> int:
    ctx = f.ctx
    acc = 0
    for i, c in f.nonzero_coeffs():
        acc = ctx.add(acc, ctx.mul(c, ctx.frobenius(x, i)))
    return acc


def directions_of_additive(f: LinearizedMap) -> DirectionSet:
    """For additive f the direction set is {f(x)/x : x nonzero}."""
    ctx = f.ctx
    table = f.value_table()
    xs = np.arange(1, ctx.q, dtype=np.int64)
    slopes = ctx.div_vec(table[1:], xs)
    mask = np.zeros(ctx.q, dtype=bool)
    mask[slopes] = True
    return DirectionSet(ctx, mask, has_infinity=False)


def is_frobenius_linear(ctx: FieldCtx, table):
    """Witness (a, j, b) with f(x) = a x^(p^j) + b, or None.

    Constant maps report (0, 0, b); ties are broken by the smallest j.
    """
    t = np.asarray(table, dtype=np.int64)
    b = int(t[0])
    h = ctx.sub_vec(t, np.int64(b))
    if not h.any():
        return (0, 0, b)
    a = int(h[1])
    if a == 0:
        return None
    smt = ctx.scalar_mul_table(a)
    for j in range(ctx.n):
        if np.array_equal(h, smt[ctx.frob_table(j)]):
            return (a, j, b)
    return None


def triple_quotient_size(D, ctx: FieldCtx | None = None) -> int:
    """|D D^-1 D^-1| for a coset union or an explicit nonzero element set."""
    if isinstance(D, CosetUnion):
        d = D.d
        exps = {(m1 - m2 - m3) % d for m1 in D.exponents for m2 in D.exponents for m3 in D.exponents}
        return len(exps) * (D.ctx.q - 1) // d
    if ctx is None:
        raise ValueError("explicit element sets need a field context")
    elems = sorted(set(int(x) for x in D))
    if not elems:
        raise ZeroInD("the set must be nonempty")
    if elems[0] == 0:
        raise ZeroInD("the set must avoid zero")
    logs = [int(ctx.log[x]) for x in elems]
    m = ctx.q - 1
    out = {(l1 - l2 - l3) % m for l1 in logs for l2 in logs for l3 in logs}
    return len(out)
