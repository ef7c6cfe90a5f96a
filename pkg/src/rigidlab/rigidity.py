"""Exhaustive desk-scale searches over additive maps with constrained directions.

The candidate space is all q^n coefficient tuples of additive maps.  For a
candidate f, the direction set is {f(x)/x : x nonzero}, and since
x^(p^i - 1) = (x^(p-1))^((p^i - 1)/(p - 1)), that set only depends on
y = x^(p-1) running over the image subgroup of the (p-1)-th power map.
Candidates are filtered against the target coset union one y at a time,
in increasing encoding order, dropping losers as soon as a value escapes;
survivors come out ordered by coefficient encoding.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cosets import CosetUnion, make_coset_union
from .directions import LinearizedMap, directions_of_function, is_additive
from .errors import NotPrimePower, ParamOutOfRange, SearchSpaceTooLarge
from .field import FieldCtx, build_field, prime_power_decomposition

DEFAULT_SEARCH_CAP = 1 << 28
_CHUNK = 1 << 20


def check_p_bound(p: int, n: int, d: int, r: int) -> bool:
    """Exact integer form of the hypothesis p >= (2n-1)^2 r d^2 / (d-r)^2."""
    if n < 2 or d < 2:
        raise ParamOutOfRange(f"need n, d >= 2, got n={n}, d={d}")
    if not 1 <= r <= d - 1:
        raise ParamOutOfRange(f"need 1 <= r <= d-1, got r={r}, d={d}")
    return p * (d - r) ** 2 >= (2 * n - 1) ** 2 * r * d * d


def p_bound_margin(p: int, n: int, d: int, r: int) -> int:
    """Signed slack p (d-r)^2 - (2n-1)^2 r d^2; >= 0 means the bound holds."""
    return p * (d - r) ** 2 - (2 * n - 1) ** 2 * r * d * d


def _power_image(ctx: FieldCtx, k: int) -> list[int]:
    """Sorted encodings of {x^k : x nonzero}."""
    step = np.gcd(k, ctx.q - 1)
    return sorted(int(v) for v in ctx.exp[::step]) if ctx.q > 2 else [1]


def _quotient_exponents(ctx: FieldCtx) -> list[int]:
    """e_i with x^(p^i - 1) = (x^(p-1))^(e_i)."""
    return [(ctx.p**i - 1) // (ctx.p - 1) for i in range(ctx.n)]


def _filter_block(ctx: FieldCtx, member: np.ndarray, lo: int, hi: int,
                  tables: list[list[np.ndarray]]) -> np.ndarray:
    """Surviving candidate indices in [lo, hi)."""
    q, n = ctx.q, ctx.n
    idx = np.arange(lo, hi, dtype=np.int64)
    cols = [(idx // q**i) % q for i in range(n)]
    for per_coeff in tables:
        vals = per_coeff[0][cols[0]]
        for i in range(1, n):
            vals = ctx.add_vec(vals, per_coeff[i][cols[i]])
        keep = member[vals]
        if not keep.all():
            idx = idx[keep]
            if idx.size == 0:
                break
            cols = [c[keep] for c in cols]
    return idx


def _y_tables(ctx: FieldCtx, ys: list[int]) -> list[list[np.ndarray]]:
    exps = _quotient_exponents(ctx)
    return [[ctx.scalar_mul_table(ctx.pow(y, e)) for e in exps] for y in ys]


def _worker_filter(args) -> list[int]:
    p, n, cap, d, exponents, lo, hi = args
    ctx = build_field(p, n, cap)
    union = make_coset_union(ctx, d, exponents)
    tables = _y_tables(ctx, _power_image(ctx, ctx.p - 1))
    return _filter_block(ctx, union.member_mask(), lo, hi, tables).tolist()


def enumerate_additive_in_D(union: CosetUnion, search_cap: int = DEFAULT_SEARCH_CAP,
                            jobs: int = 1) -> list[LinearizedMap]:
    """All nonzero additive maps whose direction set lies inside the union.

    Output is ordered by coefficient encoding.  The zero map never appears,
    because its only direction is 0 and coset unions avoid 0.
    """
    ctx = union.ctx
    total = ctx.q**ctx.n
    if total > search_cap:
        raise SearchSpaceTooLarge(f"candidate space {total} exceeds cap {search_cap}")
    member = union.member_mask()
    ys = _power_image(ctx, ctx.p - 1)
    # blocks aligned to the leading coefficient so workers can split cleanly
    lead = ctx.q ** (ctx.n - 1)
    per_task = max(lead, ((_CHUNK + lead - 1) // lead) * lead)
    spans = [(lo, min(lo + per_task, total)) for lo in range(0, total, per_task)]
    if jobs > 1 and len(spans) > 1:
        args = [(ctx.p, ctx.n, max(ctx.q, 1 << 22), union.d, union.exponents, lo, hi)
                for lo, hi in spans]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_worker_filter, args))
        survivors = [i for part in parts for i in part]
    else:
        tables = _y_tables(ctx, ys)
        survivors = []
        for lo, hi in spans:
            survivors.extend(_filter_block(ctx, member, lo, hi, tables).tolist())
    q = ctx.q
    out = []
    for idx in survivors:
        coeffs = tuple((idx // q**i) % q for i in range(ctx.n))
        out.append(LinearizedMap(ctx, coeffs))
    return out


@dataclass
class SurvivorRecord:
    coeffs: tuple[int, ...]
    classification: str  # "frobenius_linear" or "exceptional"
    witness: tuple[int, int, int] | None  # (a, j, b) with b = 0 for additive maps

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "classification": self.classification,
            "witness": list(self.witness) if self.witness else None,
        }


def classify_additive(f: LinearizedMap) -> SurvivorRecord:
    nz = f.nonzero_coeffs()
    if len(nz) == 1:
        j, a = nz[0]
        return SurvivorRecord(f.coeffs, "frobenius_linear", (a, j, 0))
    return SurvivorRecord(f.coeffs, "exceptional", None)


@dataclass
class RigidityReport:
    p: int
    n: int
    d: int
    exponents: tuple[int, ...]
    r: int
    p_bound_ok: bool
    p_bound_margin: int
    size_bound_ok: bool
    search_space: int
    survivor_count: int
    survivors: list[SurvivorRecord]
    violations: list[str]
    elapsed_s: float = 0.0

    def to_payload(self) -> dict:
        """Deterministic part of the report; timing lives outside it."""
        return {
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "cosets": list(self.exponents),
            "r": self.r,
            "p_bound_ok": self.p_bound_ok,
            "p_bound_margin": self.p_bound_margin,
            "size_bound_ok": self.size_bound_ok,
            "search_space": self.search_space,
            "survivor_count": self.survivor_count,
            "survivors": [s.to_dict() for s in self.survivors],
        }


def verify_thm_main(p: int, n: int, d: int, exponents, jobs: int = 1,
                    field_cap: int = 1 << 22,
                    search_cap: int = DEFAULT_SEARCH_CAP) -> RigidityReport:
    """Enumerate survivors for one (p, n, d, M) instance and classify them.

    Under both hypothesis flags (the p-bound and |D| <= (q+1)/2) every
    survivor must be Frobenius-linear; an exceptional survivor there is a
    theorem violation.  With either flag false, exceptional survivors are
    data, not violations.
    """
    start = time.perf_counter()
    ctx = build_field(p, n, field_cap)
    union = make_coset_union(ctx, d, exponents)
    r = union.r
    bound_ok = check_p_bound(p, n, d, r) if (n >= 2 and d >= 2 and 1 <= r <= d - 1) else False
    margin = p_bound_margin(p, n, d, r)
    size_ok = 2 * len(union) <= ctx.q + 1
    survivors = enumerate_additive_in_D(union, search_cap=search_cap, jobs=jobs)
    records = [classify_additive(f) for f in survivors]
    violations = []
    if bound_ok and size_ok:
        for rec in records:
            if rec.classification == "exceptional":
                violations.append(
                    f"THEOREM VIOLATION: exceptional survivor {list(rec.coeffs)} "
                    f"at (p={p}, n={n}, d={d}, M={sorted(exponents)}) with both hypotheses satisfied"
                )
    return RigidityReport(
        p=p, n=n, d=d, exponents=union.exponents, r=r,
        p_bound_ok=bound_ok, p_bound_margin=margin, size_bound_ok=size_ok,
        search_space=ctx.q**ctx.n, survivor_count=len(records),
        survivors=records, violations=violations,
        elapsed_s=time.perf_counter() - start,
    )


@dataclass
class DirectionTheoremReport:
    q: int
    total_functions: int
    bound_pass_count: int
    additive_pass_count: int
    violations: int

    def to_payload(self) -> dict:
        return {
            "q": self.q,
            "total_functions": self.total_functions,
            "bound_pass_count": self.bound_pass_count,
            "additive_pass_count": self.additive_pass_count,
            "violations": self.violations,
        }


def direction_theorem_survey(q: int) -> DirectionTheoremReport:
    """Iterate every f with f(0) = 0 and count small-direction non-additive maps.

    The direction bound is |directions| <= (q+1)/2; the survey reports how
    many functions meet it and how many of those fail additivity (expected
    zero).  The space is q^(q-1), so q is capped at 9.
    """
    if q > 9:
        raise SearchSpaceTooLarge(f"function space {q}^{q - 1} is beyond the q <= 9 cap")
    p, n = prime_power_decomposition(q)
    ctx = build_field(p, n)
    total = q ** (q - 1)
    limit = (q + 1) // 2  # integer form of the (q+1)/2 bound
    shift_lut = (np.uint32(1) << np.arange(q, dtype=np.uint32)).astype(np.uint32)
    popcount = np.bitwise_count(np.arange(1 << q, dtype=np.uint32)).astype(np.uint8)
    pairs = [(a, b) for a in range(q) for b in range(a + 1, q)]
    inv_dx = {(a, b): ctx.inv(ctx.sub(a, b)) for a, b in pairs}
    qm1 = q - 1
    bound_pass = 0
    additive_pass = 0
    violations = 0
    chunk = 1 << 17
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        slots = [None] + [((idx // q**i) % q) for i in range(q - 1)]  # slots[x] = f(x)
        bm = np.zeros(hi - lo, dtype=np.uint32)
        zero = np.zeros(hi - lo, dtype=np.int64)
        for a, b in pairs:
            fa = slots[a] if a else zero
            fb = slots[b] if b else zero
            df = ctx.sub_vec(fa, fb)
            ld = ctx.log[np.where(df != 0, df, 1)]
            slope = ctx.exp[(ld + ctx.log[inv_dx[(a, b)]]) % qm1]
            slope = np.where(df != 0, slope, 0)
            bm |= shift_lut[slope]
        passers = np.flatnonzero(popcount[bm] <= limit)
        bound_pass += passers.size
        for off in passers:
            k = int(lo) + int(off)
            table = [0] + [(k // q**i) % q for i in range(q - 1)]
            if is_additive(ctx, table):
                additive_pass += 1
            else:
                violations += 1
    return DirectionTheoremReport(q, total, bound_pass, additive_pass, violations)


def verify_thm_directions_bruteforce(q: int) -> int:
    """Violation count of the small-direction-set additivity statement."""
    return direction_theorem_survey(q).violations


@dataclass
class ExceptionalFind:
    d: int
    coeffs: tuple[int, ...]
    closure_exponents: tuple[int, ...]
    orbit_size: int

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "coeffs": list(self.coeffs),
            "closure_exponents": list(self.closure_exponents),
            "orbit_size": self.orbit_size,
        }


@dataclass
class ExceptionalCatalog:
    p: int
    n: int
    r_max: int
    searched_d: list[int]
    skipped_d: list[int]
    finds: list[ExceptionalFind] = field(default_factory=list)

    def to_payload(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "r_max": self.r_max,
            "searched_d": self.searched_d,
            "skipped_d": self.skipped_d,
            "finds": [f.to_dict() for f in self.finds],
        }


def find_exceptional_examples(p: int, n: int, d_range, r_max: int,
                              field_cap: int = 1 << 22,
                              search_cap: int = DEFAULT_SEARCH_CAP) -> ExceptionalCatalog:
    """Catalog additive non-Frobenius-linear maps whose directions fit in few cosets.

    For each subgroup index d in the range, every additive map with at
    least two nonzero coefficients is kept when its direction set meets at
    most r_max cosets, paired with the minimal union (the coset closure of
    the direction set).  Results are deduplicated under scaling f -> c f,
    reported by the orbit member with the smallest coefficient encoding;
    maps related by a field automorphism stay separate entries.
    """
    ctx = build_field(p, n, field_cap)
    total = ctx.q**ctx.n
    if total > search_cap:
        raise SearchSpaceTooLarge(f"candidate space {total} exceeds cap {search_cap}")
    q = ctx.q
    searched, skipped = [], []
    catalog = ExceptionalCatalog(p, n, r_max, searched, skipped)
    ys = _power_image(ctx, ctx.p - 1)
    for d in sorted(set(int(d) for d in d_range)):
        if d < 1 or (q - 1) % d:
            skipped.append(d)
            continue
        searched.append(d)
        seen = set()
        for k in _small_closure_candidates(ctx, d, ys, r_max):
            coeffs = tuple((k // q**i) % q for i in range(ctx.n))
            f = LinearizedMap(ctx, coeffs)
            canon, orbit = _scaling_canonical(f)
            if canon.coeffs in seen:
                continue
            seen.add(canon.coeffs)
            closure = _coset_closure(ctx, d, canon)
            catalog.finds.append(ExceptionalFind(d, canon.coeffs, closure, orbit))
    catalog.finds.sort(key=lambda e: (e.d, sum(c * q**i for i, c in enumerate(e.coeffs))))
    return catalog


def _small_closure_candidates(ctx: FieldCtx, d: int, ys: list[int], r_max: int) -> list[int]:
    """Indices of maps with >= 2 nonzero coefficients, no kernel, and a
    direction set meeting at most r_max cosets."""
    q, n = ctx.q, ctx.n
    total = q**n
    tables = _y_tables(ctx, ys)
    out: list[int] = []
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        cols = [(idx // q**i) % q for i in range(n)]
        nz = np.zeros(hi - lo, dtype=np.int8)
        for c in cols:
            nz += (c != 0).astype(np.int8)
        hits = np.zeros(hi - lo, dtype=np.uint64)
        invalid = nz < 2
        for per_coeff in tables:
            vals = per_coeff[0][cols[0]]
            for i in range(1, n):
                vals = ctx.add_vec(vals, per_coeff[i][cols[i]])
            zero = vals == 0
            invalid |= zero
            cls = ctx.log[np.where(zero, 1, vals)] % d
            hits |= np.where(zero, np.uint64(0), np.uint64(1) << cls.astype(np.uint64))
        out.extend((idx[(~invalid) & (np.bitwise_count(hits) <= r_max)]).tolist())
    return out


def _scaling_canonical(f: LinearizedMap) -> tuple[LinearizedMap, int]:
    """Orbit representative of {c f} with minimal coefficient encoding."""
    ctx = f.ctx
    best = f
    members = set()
    for e in range(ctx.q - 1):
        g = f.scale(int(ctx.exp[e]))
        members.add(g.coeffs)
        if g.encoding < best.encoding:
            best = g
    return best, len(members)


def _coset_closure(ctx: FieldCtx, d: int, f: LinearizedMap) -> tuple[int, ...]:
    from .directions import directions_of_additive

    ds = directions_of_additive(f)
    return tuple(sorted({int(ctx.log[e]) % d for e in ds.encodings()}))
