"""Dimension lower bounds for block-strictly-upper-triangular commuting pairs.

A composition ``(n_1, ..., n_s)`` of ``n`` cuts ``{1..n}`` into consecutive
intervals.  Both matrices of the pair are required to vanish on every
diagonal block; the commutator entries in block ``(h, k)`` with ``k - h >= 2``
are the only equations left.  Counting coordinates minus equations gives a
lower bound for the dimension of that locus, which is compared with the
dimension of the closure of regular pairs.
"""

from __future__ import annotations

import enum
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

MAX_N = 30
# compositions per vectorised chunk in search()
_CHUNK_BITS = 20


class GuardError(ValueError):
    """Requested size is outside the supported range."""


class Verdict(str, enum.Enum):
    NONE = "none"
    REDUCIBLE = "reducible"
    NOT_CI = "not_complete_intersection"

    @property
    def strength(self) -> int:
        return {"none": 0, "reducible": 1, "not_complete_intersection": 2}[self.value]


@dataclass(frozen=True)
class Composition:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise ValueError(f"composition blocks must be positive, got {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def parse(cls, text: str) -> Composition:
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError as exc:
            raise ValueError(f"bad composition {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def s(self) -> int:
        return len(self.blocks)

    def reversed(self) -> Composition:
        return Composition(self.blocks[::-1])

    def block_of(self) -> list[int]:
        """0-based block index of each 0-based position."""
        return [h for h, b in enumerate(self.blocks) for _ in range(b)]

    def intervals(self) -> list[range]:
        out, start = [], 0
        for b in self.blocks:
            out.append(range(start, start + b))
            start += b
        return out

    def __str__(self):
        return ",".join(map(str, self.blocks))


def _guard(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise GuardError(f"n must be an integer in [1, {MAX_N}], got {n!r}")


def enumerate_compositions(n: int) -> Iterator[Composition]:
    """All 2**(n-1) compositions of n in lexicographic order of block sequences."""
    _guard(n)

    def rec(rest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for b in range(1, rest + 1):
            for tail in rec(rest - b):
                yield (b,) + tail

    for blocks in rec(n):
        yield Composition(blocks)


def _blocks(j: Composition | Sequence[int]) -> tuple[int, ...]:
    return j.blocks if isinstance(j, Composition) else Composition(tuple(j)).blocks


def equation_count(j: Composition | Sequence[int]) -> int:
    b = _blocks(j)
    return sum(b[h] * b[k] for h in range(len(b)) for k in range(h + 2, len(b)))


def ambient_dim(j: Composition | Sequence[int]) -> int:
    b = _blocks(j)
    return 2 * sum(b[h] * b[k] for h in range(len(b)) for k in range(h + 1, len(b)))


def nt_bound(j: Composition | Sequence[int]) -> int:
    return ambient_dim(j) - equation_count(j)


def nt_bound_closed_form(j: Composition | Sequence[int]) -> int:
    """Sum over block pairs plus sum over adjacent pairs, computed in O(s)."""
    b = _blocks(j)
    n = sum(b)
    pairs = (n * n - sum(x * x for x in b)) // 2
    return pairs + sum(x * y for x, y in zip(b, b[1:]))


def dim_ct0(n: int) -> int:
    return n * (n + 3) // 2


def dim_nt0(n: int) -> int:
    return n * (n + 1) // 2 - 1


def _verdicts(n: int, s: int, bound: int) -> tuple[Verdict, Verdict, dict[str, bool]]:
    ct0, nt0 = dim_ct0(n), dim_nt0(n)
    tests = {
        "orbit_exceeds_ct0": bound + 2 > ct0,
        "bound_exceeds_ct0": bound > ct0,
        "orbit_reaches_ct0": bound + 2 >= ct0,
        "bound_exceeds_nt0": bound > nt0,
        "bound_reaches_nt0": bound >= nt0,
        "non_regular": s < n,
    }
    if tests["orbit_exceeds_ct0"] or tests["bound_exceeds_ct0"]:
        vct = Verdict.NOT_CI
    elif tests["non_regular"] and tests["orbit_reaches_ct0"]:
        vct = Verdict.REDUCIBLE
    else:
        vct = Verdict.NONE
    if tests["bound_exceeds_nt0"]:
        vnt = Verdict.NOT_CI
    elif tests["non_regular"] and tests["bound_reaches_nt0"]:
        vnt = Verdict.REDUCIBLE
    else:
        vnt = Verdict.NONE
    return vct, vnt, tests


@dataclass(frozen=True)
class BoundCertificate:
    composition: Composition
    equation_count: int
    ambient_dim: int
    nt_bound: int
    ct_orbit_bound: int
    dim_ct0: int
    dim_nt0: int
    verdict_ct: Verdict
    verdict_nt: Verdict
    tests: dict[str, bool] = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.composition.n

    def to_dict(self) -> dict:
        return {
            "composition": list(self.composition.blocks),
            "n": self.n,
            "s": self.composition.s,
            "equation_count": self.equation_count,
            "ambient_dim": self.ambient_dim,
            "nt_bound": self.nt_bound,
            "ct_orbit_bound": self.ct_orbit_bound,
            "dim_ct0": self.dim_ct0,
            "dim_nt0": self.dim_nt0,
            "verdict_ct": self.verdict_ct.value,
            "verdict_nt": self.verdict_nt.value,
            "tests": dict(self.tests),
        }


def classify(j: Composition | Sequence[int]) -> BoundCertificate:
    """Fill a certificate for one composition.

    The CT verdict is not-CI when either the bound itself or the bound plus
    the two scalar shifts exceeds ``n(n+3)/2``; reducible when a
    non-singleton composition reaches it.  NT uses ``n(n+1)/2 - 1`` and no
    shift.
    """
    comp = j if isinstance(j, Composition) else Composition(tuple(j))
    n = comp.n
    eqs = equation_count(comp)
    amb = ambient_dim(comp)
    bound = amb - eqs
    vct, vnt, tests = _verdicts(n, comp.s, bound)
    return BoundCertificate(
        composition=comp,
        equation_count=eqs,
        ambient_dim=amb,
        nt_bound=bound,
        ct_orbit_bound=bound + 2,
        dim_ct0=dim_ct0(n),
        dim_nt0=dim_nt0(n),
        verdict_ct=vct,
        verdict_nt=vnt,
        tests=tests,
    )


# --- exhaustive search -------------------------------------------------------
#
# A composition of n is a mask of n-1 cut bits; bit (n-2-i) set means a cut
# after 0-based position i.  Lexicographically smaller block sequences cut
# earlier, so they have larger masks: the lex-least tie winner is the max mask.


def mask_to_composition(mask: int, n: int) -> Composition:
    blocks, cur = [], 1
    for i in range(n - 1):
        if (mask >> (n - 2 - i)) & 1:
            blocks.append(cur)
            cur = 1
        else:
            cur += 1
    blocks.append(cur)
    return Composition(tuple(blocks))


def _bounds_for_masks(n: int, masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cur = np.ones_like(masks)
    prev = np.zeros_like(masks)
    sumsq = np.zeros_like(masks)
    adj = np.zeros_like(masks)
    s = np.ones_like(masks)
    for i in range(n - 1):
        cut = ((masks >> (n - 2 - i)) & 1).astype(bool)
        sumsq = np.where(cut, sumsq + cur * cur, sumsq)
        adj = np.where(cut, adj + prev * cur, adj)
        prev = np.where(cut, cur, prev)
        cur = np.where(cut, 1, cur + 1)
        s = s + cut
    sumsq = sumsq + cur * cur
    adj = adj + prev * cur
    return (n * n - sumsq) // 2 + adj, s


def _scan_chunk(args: tuple[int, int, int]) -> dict:
    """Histogram and lex-least argmax for masks in [lo, hi)."""
    n, lo, hi = args
    masks = np.arange(lo, hi, dtype=np.int64)
    bound, s = _bounds_for_masks(n, masks)
    values, counts = np.unique(bound, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    top = int(bound.max())
    best_mask = int(masks[bound == top].max())
    # strongest non-singleton witness: singleton composition is the mask of all ones
    non_regular = s < n
    if non_regular.any():
        top_nr = int(bound[non_regular].max())
        best_nr = int(masks[non_regular & (bound == top_nr)].max())
    else:
        top_nr, best_nr = None, None
    return {"hist": hist, "top": top, "best_mask": best_mask, "top_nr": top_nr, "best_nr": best_nr}


def _better(a_val, a_mask, b_val, b_mask) -> bool:
    if b_val is None:
        return True
    if a_val is None:
        return False
    return (a_val, a_mask) > (b_val, b_mask)


@dataclass
class SearchReport:
    n: int
    total: int
    best_bound: BoundCertificate
    best_ct: BoundCertificate
    best_nt: BoundCertificate
    verdict_counts_ct: dict[str, int]
    verdict_counts_nt: dict[str, int]
    bound_histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "compositions_scanned": self.total,
            "dim_ct0": dim_ct0(self.n),
            "dim_nt0": dim_nt0(self.n),
            "max_nt_bound": self.best_bound.to_dict(),
            "best_ct": self.best_ct.to_dict(),
            "best_nt": self.best_nt.to_dict(),
            "verdict_counts_ct": dict(self.verdict_counts_ct),
            "verdict_counts_nt": dict(self.verdict_counts_nt),
            "nt_bound_histogram": {str(k): v for k, v in sorted(self.bound_histogram.items(), reverse=True)},
        }


def search(n: int, threads: int | None = 1) -> SearchReport:
    """Scan every composition of n.

    Verdicts depend only on the bound and on whether ``s < n``, and they are
    monotone in the bound, so the strongest certificate for either variety is
    the non-singleton composition of largest bound (falling back to the
    singleton composition when that is all there is).  Ties go to the
    lexicographically least block sequence.
    """
    _guard(n)
    total = 1 << (n - 1)
    step = 1 << _CHUNK_BITS
    jobs = [(n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    workers = threads or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
            parts = list(ex.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(job) for job in jobs]

    hist: Counter[int] = Counter()
    top, best_mask, top_nr, best_nr = None, None, None, None
    for part in parts:
        hist.update(part["hist"])
        if _better(part["top"], part["best_mask"], top, best_mask):
            top, best_mask = part["top"], part["best_mask"]
        if part["top_nr"] is not None and _better(part["top_nr"], part["best_nr"], top_nr, best_nr):
            top_nr, best_nr = part["top_nr"], part["best_nr"]

    best_bound = classify(mask_to_composition(best_mask, n))
    witness = classify(mask_to_composition(best_nr, n)) if best_nr is not None else best_bound
    # the singleton composition always has verdict none; prefer a real witness when it is as strong
    best_ct = witness if witness.verdict_ct.strength >= best_bound.verdict_ct.strength else best_bound
    best_nt = witness if witness.verdict_nt.strength >= best_bound.verdict_nt.strength else best_bound

    counts_ct = {v.value: 0 for v in Verdict}
    counts_nt = {v.value: 0 for v in Verdict}
    singleton_bound = dim_nt0(n)
    for value, count in hist.items():
        regular_here = 1 if value == singleton_bound else 0
        vct, vnt, _ = _verdicts(n, n - 1 if n > 1 else n, value)
        rct, rnt, _ = _verdicts(n, n, value)
        counts_ct[vct.value] += count - regular_here
        counts_nt[vnt.value] += count - regular_here
        counts_ct[rct.value] += regular_here
        counts_nt[rnt.value] += regular_here
    return SearchReport(n, total, best_bound, best_ct, best_nt, counts_ct, counts_nt, dict(hist))


# --- pairs (A, B) with AB = 0 ------------------------------------------------


@dataclass(frozen=True)
class VmpqReport:
    m: int
    p: int
    q: int
    components: tuple[tuple[int, int, int], ...]
    is_complete_intersection: bool

    @property
    def ambient_dim(self) -> int:
        return self.m * self.p + self.p * self.q

    @property
    def equation_count(self) -> int:
        return self.m * self.q

    @property
    def dim(self) -> int:
        return max(d for _, _, d in self.components)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "components": [{"a": a, "b": b, "dim": d} for a, b, d in self.components],
            "is_complete_intersection": self.is_complete_intersection,
            "expected_dim": self.ambient_dim - self.equation_count,
        }


def vmpq_component_dim(m: int, p: int, q: int, a: int, b: int) -> int:
    return a * (p + m - a) + b * (p + q - b) - a * b


def vmpq_report(m: int, p: int, q: int) -> VmpqReport:
    """Components of {(A, B) : AB = 0} indexed by maximal rank caps (a, b)."""
    if min(m, p, q) < 1:
        raise ValueError("m, p, q must be positive")
    caps = [(min(p - b, m), b) for b in range(min(p, q) + 1)]
    maximal = [c for c in caps if not any(d != c and d[0] >= c[0] and d[1] >= c[1] for d in caps)]
    maximal = sorted(set(maximal), reverse=True)
    return VmpqReport(
        m,
        p,
        q,
        tuple((a, b, vmpq_component_dim(m, p, q, a, b)) for a, b in maximal),
        p >= m + q - 1,
    )
