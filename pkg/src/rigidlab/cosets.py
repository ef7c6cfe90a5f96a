"""Multiplicative subgroups, coset unions, characters, and the indicator sum.

A coset union is stored as its subgroup index d and the sorted exponent
set M: the set is the union over m in M of g^m H, where H is the index-d
subgroup of F_q^*.  Membership is a single log lookup, and set algebra
stays O(d) no matter how large the field is.

Characters are handled as exact exponents mod d wherever possible;
complex values (within 1e-9) appear only at audit boundaries.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EmptyExponentSet, ExponentOutOfRange, IndexNotDividing, LogOfZero
from .field import FieldCtx


class CosetUnion:
    """Union of cosets g^m H of the index-d subgroup H of F_q^*."""

    __slots__ = ("ctx", "d", "exponents", "_expset", "_mask")

    def __init__(self, ctx: FieldCtx, d: int, exponents):
        if d < 1 or (ctx.q - 1) % d != 0:
            raise IndexNotDividing(f"d = {d} does not divide q - 1 = {ctx.q - 1}")
        exps = sorted(set(int(m) for m in exponents))
        if not exps:
            raise EmptyExponentSet("at least one coset exponent is required")
        if exps[0] < 0 or exps[-1] >= d:
            raise ExponentOutOfRange(f"exponents must lie in [0, {d}), got {exps}")
        self.ctx = ctx
        self.d = d
        self.exponents = tuple(exps)
        self._expset = frozenset(exps)
        self._mask = None

    @property
    def r(self) -> int:
        return len(self.exponents)

    def __len__(self) -> int:
        return self.r * (self.ctx.q - 1) // self.d

    def __contains__(self, x: int) -> bool:
        if x == 0:
            return False
        return int(self.ctx.log[x]) % self.d in self._expset

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CosetUnion)
            and self.ctx is other.ctx
            and self.d == other.d
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((id(self.ctx), self.d, self.exponents))

    def elements(self) -> list[int]:
        """Sorted element encodings; O(q), intended for small fields and audits."""
        ctx = self.ctx
        es = np.arange(ctx.q - 1, dtype=np.int64)
        keep = np.isin(es % self.d, self.exponents)
        return sorted(int(v) for v in ctx.exp[keep])

    def member_mask(self) -> np.ndarray:
        """Boolean array over all encodings; mask[0] is False."""
        if self._mask is None:
            ctx = self.ctx
            mask = np.zeros(ctx.q, dtype=bool)
            es = np.arange(ctx.q - 1, dtype=np.int64)
            mask[ctx.exp[np.isin(es % self.d, self.exponents)]] = True
            mask.flags.writeable = False
            self._mask = mask
        return self._mask

    def to_dict(self) -> dict:
        return {"d": self.d, "M": list(self.exponents)}

    def __repr__(self):
        return f"CosetUnion(d={self.d}, M={list(self.exponents)})"


def make_coset_union(ctx: FieldCtx, d: int, exponents) -> CosetUnion:
    """Build the union of the cosets g^m H for m in the exponent set."""
    return CosetUnion(ctx, d, exponents)


def coset_of(union: CosetUnion, x: int) -> int:
    """The exponent m with x in g^m H."""
    if x == 0:
        raise LogOfZero("zero lies in no coset")
    return int(union.ctx.log[x]) % union.d


def power_residue_subgroup(ctx: FieldCtx, k: int) -> CosetUnion:
    """The subgroup {x^k : x in F_q^*}, of index gcd(k, q-1)."""
    if k < 1:
        raise ExponentOutOfRange(f"power must be >= 1, got {k}")
    return CosetUnion(ctx, math.gcd(k, ctx.q - 1), (0,))


def scale_coset_union(union: CosetUnion, c: int) -> CosetUnion:
    """The set union/c, i.e. exponents shifted by -log(c) mod d."""
    if c == 0:
        raise LogOfZero("cannot scale by zero")
    shift = int(union.ctx.log[c]) % union.d
    return CosetUnion(union.ctx, union.d, ((m - shift) % union.d for m in union.exponents))


class CharacterRef:
    """The power chi^j of the order-d character chi pinned by chi(g) = exp(2*pi*i/d)."""

    __slots__ = ("ctx", "d", "j", "_theta")

    def __init__(self, ctx: FieldCtx, d: int, j: int):
        if d < 1 or (ctx.q - 1) % d != 0:
            raise IndexNotDividing(f"character order {d} does not divide q - 1")
        if not 0 <= j < d:
            raise ExponentOutOfRange(f"power index must lie in [0, {d}), got {j}")
        self.ctx = ctx
        self.d = d
        self.j = j
        self._theta = np.exp(2j * np.pi * np.arange(d) / d)

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    def exponent(self, x: int) -> int:
        """The exact theta-exponent of chi^j(x) for nonzero x."""
        if x == 0:
            raise LogOfZero("character exponent of zero")
        return (self.j * int(self.ctx.log[x])) % self.d

    def value(self, x: int) -> complex:
        """chi^j(x), with the convention chi(0) = 0 for every j."""
        if x == 0:
            return 0j
        return complex(self._theta[self.exponent(x)])

    def __repr__(self):
        return f"CharacterRef(d={self.d}, j={self.j})"


def coset_weights(d: int, exponents) -> np.ndarray:
    """The inner sums w_j = sum_k theta^(-j*m_k), j = 0..d-1."""
    ms = np.asarray(sorted(exponents), dtype=np.int64)
    js = np.arange(d, dtype=np.int64)
    theta = np.exp(2j * np.pi * np.arange(d) / d)
    return theta[(-np.outer(js, ms)) % d].sum(axis=1)


def psi_class_values(union: CosetUnion) -> np.ndarray:
    """The indicator sum evaluated on each log-class m = 0..d-1."""
    d = union.d
    w = coset_weights(d, union.exponents)
    theta = np.exp(2j * np.pi * np.arange(d) / d)
    mat = theta[np.outer(np.arange(d), np.arange(d)) % d]
    return (w @ mat) / d


def psi_indicator(union: CosetUnion, x: int) -> complex:
    """Character-sum expansion of membership; equals [x in union] within 1e-9."""
    if x == 0:
        raise LogOfZero("indicator sum is defined on nonzero elements")
    d = union.d
    ell = int(union.ctx.log[x]) % d
    w = coset_weights(d, union.exponents)
    theta = np.exp(2j * np.pi * np.arange(d) / d)
    return complex(np.dot(w, theta[(np.arange(d) * ell) % d]) / d)


def psi_audit(union: CosetUnion) -> list[tuple[int, float, float, bool]]:
    """Rows (x encoding, real, imag, member flag) over all nonzero x."""
    cls = psi_class_values(union)
    rows = []
    ctx = union.ctx
    for e in range(ctx.q - 1):
        x = int(ctx.exp[e])
        v = cls[e % union.d]
        rows.append((x, float(v.real), float(v.imag), e % union.d in union._expset))
    return sorted(rows)
