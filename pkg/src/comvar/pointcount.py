"""Exhaustive point counts over small prime fields.

Every variety handled here is cut out by bilinear equations (commutators of
pairs, products ``AB``), so a single vectorised enumerator covers them all.
Candidates are visited as an odometer over the variables in row-major order,
X before Y (A before B).  Variables that appear in no equation are not
enumerated; the count is multiplied by ``q`` for each of them.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .bounds import Composition
from .exactalg import FieldMatrix, check_prime, commutator, mat_rank, poly_eval_matrix
from .exactalg.poly import FieldPolynomial

DEFAULT_BUDGET = 10**9
_CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


def default_budget() -> int:
    env = os.environ.get("COMVAR_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# (coefficient, first variable, second variable)
Term = tuple[int, int, int]


@dataclass(frozen=True)
class BilinearSystem:
    names: tuple[str, ...]
    equations: tuple[tuple[Term, ...], ...]
    labels: tuple[str, ...] = ()

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def free_vars(self) -> tuple[int, ...]:
        used = {v for eq in self.equations for _, a, b in eq for v in (a, b)}
        return tuple(i for i in range(self.n_vars) if i not in used)

    @property
    def bound_vars(self) -> tuple[int, ...]:
        free = set(self.free_vars)
        return tuple(i for i in range(self.n_vars) if i not in free)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def residuals(self, values: Sequence[int], q: int) -> list[int]:
        return [sum(c * values[a] * values[b] for c, a, b in eq) % q for eq in self.equations]


def _collect(terms: dict[tuple[int, int], int]) -> tuple[Term, ...]:
    return tuple((c, a, b) for (a, b), c in sorted(terms.items()) if c != 0)


def commuting_system(n: int, positions: Sequence[tuple[int, int]]) -> BilinearSystem:
    """Pairs (X, Y) supported on ``positions`` (0-based) with [X, Y] = 0.

    Entry (i, j) of the commutator is the sum over k of the 2x2 determinants
    ``x_ik y_kj - y_ik x_kj``.  Like terms are merged so identically
    vanishing entries (e.g. diagonal ones) drop out.
    """
    pos = sorted(set(positions))
    xs = {p: k for k, p in enumerate(pos)}
    ys = {p: k + len(pos) for k, p in enumerate(pos)}
    names = tuple(f"x{i + 1}{j + 1}" if n < 10 else f"x{i + 1}_{j + 1}" for i, j in pos)
    names += tuple("y" + nm[1:] for nm in names)
    equations, labels = [], []
    for i in range(n):
        for j in range(n):
            terms: dict[tuple[int, int], int] = {}
            for k in range(n):
                if (i, k) in xs and (k, j) in xs:
                    key = (xs[(i, k)], ys[(k, j)])
                    terms[key] = terms.get(key, 0) + 1
                    key = (xs[(k, j)], ys[(i, k)])
                    terms[key] = terms.get(key, 0) - 1
            eq = _collect(terms)
            if eq:
                equations.append(eq)
                labels.append(f"[{i + 1},{j + 1}]")
    return BilinearSystem(names, tuple(equations), tuple(labels))


def strict_upper_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def nt_system(n: int) -> BilinearSystem:
    return commuting_system(n, strict_upper_positions(n))


def ct_system(n: int) -> BilinearSystem:
    return commuting_system(n, [(i, j) for i in range(n) for j in range(i, n)])


def composition_positions(j: Composition) -> list[tuple[int, int]]:
    block = j.block_of()
    n = j.n
    return [(a, b) for a in range(n) for b in range(a + 1, n) if block[a] != block[b]]


def nt_composition_system(j: Composition) -> BilinearSystem:
    return commuting_system(j.n, composition_positions(j))


def vmpq_system(m: int, p: int, q: int) -> BilinearSystem:
    names = tuple(f"a{i + 1}{k + 1}" for i in range(m) for k in range(p))
    names += tuple(f"b{k + 1}{j + 1}" for k in range(p) for j in range(q))
    off = m * p
    equations = tuple(
        tuple((1, i * p + k, off + k * q + j) for k in range(p)) for i in range(m) for j in range(q)
    )
    labels = tuple(f"(AB)[{i + 1},{j + 1}]" for i in range(m) for j in range(q))
    return BilinearSystem(names, equations, labels)


# --- enumeration ---------------------------------------------------------------


def _check_budget(system: BilinearSystem, q: int, budget: int | None) -> int:
    budget = default_budget() if budget is None else budget
    required = q ** len(system.bound_vars)
    if required > budget:
        raise BudgetExceeded(required, budget)
    return required


def _digits(lo: int, hi: int, q: int, k: int) -> np.ndarray:
    """Odometer digits for candidates lo..hi-1; row 0 is the most significant."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((k, hi - lo), dtype=np.int64)
    for r in range(k - 1, -1, -1):
        idx, out[r] = np.divmod(idx, q)
    return out


def _solution_mask(system: BilinearSystem, values: np.ndarray, q: int, row_of: dict[int, int]) -> np.ndarray:
    ok = np.ones(values.shape[1], dtype=bool)
    for eq in system.equations:
        acc = np.zeros(values.shape[1], dtype=np.int64)
        for c, a, b in eq:
            acc = (acc + c * (values[row_of[a]] * values[row_of[b]] % q)) % q
        ok &= acc == 0
    return ok


def _chunk_ranges(total: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]


def iter_solutions(system: BilinearSystem, q: int, budget: int | None = None) -> Iterator[np.ndarray]:
    """Yield arrays (bound vars x solutions) of solutions, chunk by chunk.

    Rows follow ``system.bound_vars``; free variables are not included.
    """
    check_prime(q)
    total = _check_budget(system, q, budget)
    bound = system.bound_vars
    row_of = {v: r for r, v in enumerate(bound)}
    if not bound:
        yield np.zeros((0, 1), dtype=np.int64)
        return
    for lo, hi in _chunk_ranges(total):
        vals = _digits(lo, hi, q, len(bound))
        yield vals[:, _solution_mask(system, vals, q, row_of)]


def count_solutions(system: BilinearSystem, q: int, budget: int | None = None, threads: int = 1) -> int:
    """Exact number of F_q points of the system."""
    check_prime(q)
    total = _check_budget(system, q, budget)
    bound = system.bound_vars
    row_of = {v: r for r, v in enumerate(bound)}
    free_factor = q ** len(system.free_vars)
    if not bound:
        return free_factor

    def work(rng: tuple[int, int]) -> int:
        vals = _digits(rng[0], rng[1], q, len(bound))
        return int(_solution_mask(system, vals, q, row_of).sum())

    ranges = _chunk_ranges(total)
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            found = sum(ex.map(work, ranges))
    else:
        found = sum(map(work, ranges))
    return found * free_factor


def all_points(system: BilinearSystem, q: int, budget: int | None = None) -> np.ndarray:
    """Every solution with free variables expanded; shape (points, n_vars)."""
    free = system.free_vars
    required = q ** system.n_vars
    budget = default_budget() if budget is None else budget
    if required > budget:
        raise BudgetExceeded(required, budget)
    parts = [chunk for chunk in iter_solutions(system, q, budget) if chunk.shape[1]]
    bound_sols = np.concatenate(parts, axis=1) if parts else np.zeros((len(system.bound_vars), 0), dtype=np.int64)
    n_bound_sols = bound_sols.shape[1]
    free_vals = _digits(0, q ** len(free), q, len(free))
    n_free = free_vals.shape[1]
    out = np.empty((n_bound_sols * n_free, system.n_vars), dtype=np.int64)
    for r, v in enumerate(system.bound_vars):
        out[:, v] = np.repeat(bound_sols[r], n_free)
    for r, v in enumerate(free):
        out[:, v] = np.tile(free_vals[r], n_bound_sols)
    return out


# --- tables and dimension estimates --------------------------------------------


@dataclass
class PointCountTable:
    variety_id: dict
    counts: dict[int, int]
    free_coordinate_count: int

    def to_dict(self) -> dict:
        return {
            "variety": self.variety_id,
            "counts": {str(q): str(c) for q, c in sorted(self.counts.items())},
            "free": self.free_coordinate_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> PointCountTable:
        return cls(data["variety"], {int(q): int(c) for q, c in data["counts"].items()}, int(data["free"]))


@dataclass
class DimensionEstimate:
    estimated_dim: int
    consistent: bool
    residual_log_error: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"estimated_dim": self.estimated_dim, "consistent": self.consistent, "pairs": self.residual_log_error}


def estimate_dimension(table: PointCountTable) -> DimensionEstimate:
    """Round log-slopes ln(N2/N1)/ln(q2/q1) over every prime pair."""
    counts = table.counts
    if len(counts) < 2:
        raise ValueError("need counts for at least two primes")
    if any(c <= 0 for c in counts.values()):
        raise ValueError("zero point count; the variety is empty over some field")
    rounded, pairs = [], []
    for q1, q2 in itertools.combinations(sorted(counts), 2):
        slope = (math.log(counts[q2]) - math.log(counts[q1])) / math.log(q2 / q1)
        r = round(slope)
        rounded.append(r)
        pairs.append({"primes": [q1, q2], "slope": f"{slope:.6f}", "residual": f"{slope - r:+.6f}"})
    consistent = len(set(rounded)) == 1
    est = rounded[0] if consistent else int(statistics.median_low(rounded))
    return DimensionEstimate(est, consistent, pairs)


def _table(variety_id: dict, system: BilinearSystem, primes: Sequence[int], budget, threads) -> PointCountTable:
    counts = {q: count_solutions(system, q, budget, threads) for q in primes}
    return PointCountTable(variety_id, counts, len(system.free_vars))


def count_nt(n: int, q: int, budget: int | None = None, threads: int = 1) -> int:
    return count_solutions(nt_system(n), q, budget, threads)


def count_ct(n: int, q: int, budget: int | None = None, threads: int = 1) -> int:
    return count_solutions(ct_system(n), q, budget, threads)


def count_nt_composition(j: Composition, q: int, budget: int | None = None, threads: int = 1) -> int:
    return count_solutions(nt_composition_system(j), q, budget, threads)


def nt_table(n: int, primes: Sequence[int], budget=None, threads=1) -> PointCountTable:
    return _table({"kind": "NT", "n": n}, nt_system(n), primes, budget, threads)


def ct_table(n: int, primes: Sequence[int], budget=None, threads=1) -> PointCountTable:
    return _table({"kind": "CT", "n": n}, ct_system(n), primes, budget, threads)


def nt_composition_table(j: Composition, primes: Sequence[int], budget=None, threads=1) -> PointCountTable:
    return _table({"kind": "NT^J", "composition": list(j.blocks)}, nt_composition_system(j), primes, budget, threads)


# --- V_{m,p,q} with rank caps ----------------------------------------------------


def _rank_table(rows: int, cols: int, q: int) -> np.ndarray:
    """rank of every rows x cols matrix over F_q, indexed by its odometer index."""
    return np.array(
        [mat_rank(FieldMatrix(rows, cols, ent, q)) for ent in itertools.product(range(q), repeat=rows * cols)],
        dtype=np.int64,
    )


def vmpq_rank_cells(m: int, p: int, q_dim: int, field_q: int, budget: int | None = None) -> dict[tuple[int, int], int]:
    """Point counts of AB = 0 split by exact (rank A, rank B)."""
    system = vmpq_system(m, p, q_dim)
    check_prime(field_q)
    _check_budget(system, field_q, budget)
    n_a, n_b = m * p, p * q_dim
    rank_a = _rank_table(m, p, field_q)
    rank_b = _rank_table(p, q_dim, field_q)
    place = field_q ** np.arange(n_a + n_b - 1, -1, -1, dtype=np.int64)
    cells: dict[tuple[int, int], int] = {}
    for sols in iter_solutions(system, field_q, budget):
        ia = (sols[:n_a] * place[:n_a, None]).sum(axis=0) // field_q**n_b
        ib = (sols[n_a:] * place[n_a:, None]).sum(axis=0)
        pairs, counts = np.unique(np.stack([rank_a[ia], rank_b[ib]]), axis=1, return_counts=True)
        for (ra, rb), c in zip(pairs.T, counts):
            key = (int(ra), int(rb))
            cells[key] = cells.get(key, 0) + int(c)
    return cells


def count_vmpq(
    m: int,
    p: int,
    q_dim: int,
    field_q: int,
    rank_cap_a: int | None = None,
    rank_cap_b: int | None = None,
    budget: int | None = None,
) -> int:
    """Pairs with AB = 0 over F_q, optionally with rank A <= a and rank B <= b."""
    if rank_cap_a is None and rank_cap_b is None:
        return count_solutions(vmpq_system(m, p, q_dim), field_q, budget)
    cap_a = m if rank_cap_a is None else rank_cap_a
    cap_b = q_dim if rank_cap_b is None else rank_cap_b
    cells = vmpq_rank_cells(m, p, q_dim, field_q, budget)
    return sum(c for (ra, rb), c in cells.items() if ra <= cap_a and rb <= cap_b)


def vmpq_table(m, p, q_dim, primes, rank_cap_a=None, rank_cap_b=None, budget=None) -> PointCountTable:
    vid = {"kind": "V", "m": m, "p": p, "q": q_dim, "rank_cap_a": rank_cap_a, "rank_cap_b": rank_cap_b}
    counts = {f: count_vmpq(m, p, q_dim, f, rank_cap_a, rank_cap_b, budget) for f in primes}
    return PointCountTable(vid, counts, len(vmpq_system(m, p, q_dim).free_vars))


# --- membership via the determinant form -------------------------------------------


def determinant_residuals(x: FieldMatrix, y: FieldMatrix) -> dict[tuple[int, int], int]:
    """For strictly upper X, Y: sum_{i<k<j} det[X_ik X_kj] for every j >= i + 2 (1-based keys)."""
    n, q = x.rows, x.modulus
    out = {}
    for i in range(n - 2):
        for j in range(i + 2, n):
            out[(i + 1, j + 1)] = sum(x[i, k] * y[k, j] - y[i, k] * x[k, j] for k in range(i + 1, j)) % q
    return out


def pair_from_values(system: BilinearSystem, values: Sequence[int], n: int, q: int) -> tuple[FieldMatrix, FieldMatrix]:
    """Rebuild (X, Y) from a solution vector of a commuting_system."""
    half = system.n_vars // 2
    x = [[0] * n for _ in range(n)]
    y = [[0] * n for _ in range(n)]
    for k, name in enumerate(system.names[:half]):
        i, j = _parse_position(name[1:], n)
        x[i][j] = int(values[k])
        y[i][j] = int(values[k + half])
    return FieldMatrix.from_rows(x, q), FieldMatrix.from_rows(y, q)


def _parse_position(text: str, n: int) -> tuple[int, int]:
    if "_" in text:
        i, j = text.split("_")
        return int(i) - 1, int(j) - 1
    return int(text[0]) - 1, int(text[1]) - 1


# --- set-level verifications ---------------------------------------------------------


@dataclass
class ExampleAReport:
    q: int
    total: int
    nt4_points: int
    in_nt4_1: int
    in_nt4_0: int
    in_both: int
    uncovered: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "total": str(self.total),
            "nt4_points": str(self.nt4_points),
            "in_nt4_1": str(self.in_nt4_1),
            "in_nt4_0": str(self.in_nt4_0),
            "in_both": str(self.in_both),
            "uncovered": self.uncovered,
        }


def verify_example_a(q: int, budget: int | None = None) -> ExampleAReport:
    """Split NT_4(F_q) into the x23 = y23 = 0 locus and the rank <= 1 locus of (X12 X23 X34)."""
    system = nt_system(4)
    bound = system.bound_vars
    row = {system.names[v]: r for r, v in enumerate(bound)}
    factor = q ** len(system.free_vars)
    in1 = in0 = both = uncovered = points = 0
    for s in iter_solutions(system, q, budget):
        x12, y12 = s[row["x12"]], s[row["y12"]]
        x23, y23 = s[row["x23"]], s[row["y23"]]
        x34, y34 = s[row["x34"]], s[row["y34"]]
        a = (x23 == 0) & (y23 == 0)
        minors = [(u1 * v2 - v1 * u2) % q for (u1, v1), (u2, v2) in
                  itertools.combinations([(x12, y12), (x23, y23), (x34, y34)], 2)]
        b = (minors[0] == 0) & (minors[1] == 0) & (minors[2] == 0)
        points += s.shape[1]
        in1 += int(a.sum())
        in0 += int(b.sum())
        both += int((a & b).sum())
        uncovered += int((~a & ~b).sum())
    return ExampleAReport(q, q ** system.n_vars, points * factor, in1 * factor, in0 * factor, both * factor, uncovered * factor)


def involution_permutation(system: BilinearSystem, n: int) -> list[int]:
    """Variable permutation induced by z_ij -> z_{n+1-j, n+1-i} on X and Y."""
    index = {}
    for k, name in enumerate(system.names):
        i, j = _parse_position(name[1:], n)
        index[(name[0], i, j)] = k
    perm = []
    for name in system.names:
        i, j = _parse_position(name[1:], n)
        perm.append(index[(name[0], n - 1 - j, n - 1 - i)])
    return perm


def anti_transpose(m: FieldMatrix) -> FieldMatrix:
    n = m.rows
    return FieldMatrix.from_rows([[m[n - 1 - j, n - 1 - i] for j in range(n)] for i in range(n)], m.modulus)


def verify_involution(n: int, q: int, samples: int = 200, seed: int = 0, budget: int | None = None) -> bool:
    """Check NT_n is stable under the anti-transpose applied to both matrices.

    Exhaustive (vectorised over all points) for n <= 4; otherwise random
    commuting pairs (X, h(X)) with h having zero constant term.
    """
    if n <= 4:
        system = nt_system(n)
        pts = all_points(system, q, budget)
        if not len(pts):
            return True
        perm = involution_permutation(system, n)
        # new variable k takes the value of old variable perm[k]
        image = pts[:, perm].T
        return bool(_solution_mask(system, image, q, {v: v for v in range(system.n_vars)}).all())
    rng = random.Random(seed)
    for _ in range(samples):
        x = FieldMatrix(n, n, (rng.randrange(q) if j > i else 0 for i in range(n) for j in range(n)), q)
        h = FieldPolynomial([0] + [rng.randrange(q) for _ in range(rng.randrange(1, n))], q)
        y = poly_eval_matrix(h, x)
        if not commutator(anti_transpose(x), anti_transpose(y)).is_zero():
            return False
    return True
