"""Plücker coordinates of matrix pencils.

A pencil (X, Y) of n x n matrices is flattened to a 2 x n^2 matrix whose rows
are X and Y read row-major.  When the rows are independent their 2x2 minors
``p[(i,j),(h,k)] = x_ij y_hk - y_ij x_hk`` are the Plücker coordinates of the
codimension-2 subspace they cut out, and the linear forms
``sum_k p[(i,k),(k,j)]`` reproduce the commutator entries.

Positions passed to :meth:`PlueckerVector.coord` are 1-based ``(row, col)``
pairs; everything else in this module is 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exactalg import FieldError, FieldMatrix, check_prime, commutator, mat_rank, nullspace
from .pointcount import all_points, nt_system


class DegeneratePencil(FieldError):
    """The pencil lies in C0: X and Y are projectively dependent."""


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict[tuple[int, int], int]:
    size = n * n
    return {pair: k for k, pair in enumerate(itertools.combinations(range(size), 2))}


@lru_cache(maxsize=None)
def canonical_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n * n), 2))


@dataclass(frozen=True)
class PlueckerVector:
    n: int
    modulus: int
    coords: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.modulus)
        expected = len(canonical_pairs(self.n))
        if len(self.coords) != expected:
            raise FieldError(f"expected {expected} coordinates for n={self.n}, got {len(self.coords)}")
        coords = tuple(int(c) % self.modulus for c in self.coords)
        if not any(coords):
            raise DegeneratePencil("the zero vector is not a point of the Grassmannian")
        object.__setattr__(self, "coords", coords)

    def _flat(self, pos: tuple[int, int]) -> int:
        i, j = pos
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(pos)
        return (i - 1) * self.n + (j - 1)

    def value(self, a: int, b: int) -> int:
        """Signed coordinate for flat 0-based positions a, b."""
        if a == b:
            return 0
        if a < b:
            return self.coords[_pair_index(self.n)[(a, b)]]
        return -self.coords[_pair_index(self.n)[(b, a)]] % self.modulus

    def coord(self, first: tuple[int, int], second: tuple[int, int]) -> int:
        return self.value(self._flat(first), self._flat(second))

    def scaled(self, c: int) -> PlueckerVector:
        return PlueckerVector(self.n, self.modulus, tuple(c * v for v in self.coords))

    def normalized(self) -> tuple[int, ...]:
        """Representative with first nonzero coordinate equal to 1."""
        return normalize(self.coords, self.modulus)

    def projectively_equal(self, other: PlueckerVector) -> bool:
        return (self.n, self.modulus) == (other.n, other.modulus) and self.normalized() == other.normalized()

    def to_dict(self) -> dict:
        n = self.n
        entries = [
            {"a": [a // n + 1, a % n + 1], "b": [b // n + 1, b % n + 1], "v": v}
            for (a, b), v in zip(canonical_pairs(n), self.coords)
            if v
        ]
        return {"n": n, "modulus": self.modulus, "coords": entries}

    @classmethod
    def from_dict(cls, data: dict) -> PlueckerVector:
        n, p = int(data["n"]), int(data["modulus"])
        index = _pair_index(n)
        coords = [0] * len(index)
        for e in data["coords"]:
            a = (e["a"][0] - 1) * n + e["a"][1] - 1
            b = (e["b"][0] - 1) * n + e["b"][1] - 1
            v = int(e["v"])
            if a > b:
                a, b, v = b, a, -v
            coords[index[(a, b)]] = v
        return cls(n, p, tuple(coords))


def normalize(vec, q: int) -> tuple[int, ...]:
    vec = [int(v) % q for v in vec]
    lead = next((v for v in vec if v), None)
    if lead is None:
        raise DegeneratePencil("zero vector has no projective class")
    inv = pow(lead, -1, q)
    return tuple(v * inv % q for v in vec)


@dataclass(frozen=True)
class MatrixPencil:
    x: FieldMatrix
    y: FieldMatrix

    def __post_init__(self):
        if not self.x.is_square or self.x.shape != self.y.shape:
            raise FieldError("a pencil needs two square matrices of equal size")
        if self.x.modulus != self.y.modulus:
            raise FieldError("pencil matrices over different fields")

    @property
    def n(self) -> int:
        return self.x.rows

    @property
    def modulus(self) -> int:
        return self.x.modulus

    def flattening(self) -> FieldMatrix:
        return FieldMatrix(2, self.n * self.n, self.x.entries + self.y.entries, self.modulus)

    def is_commuting(self) -> bool:
        return commutator(self.x, self.y).is_zero()


def in_c0(pencil: MatrixPencil) -> bool:
    return mat_rank(pencil.flattening()) <= 1


def gamma(pencil: MatrixPencil) -> PlueckerVector:
    if in_c0(pencil):
        raise DegeneratePencil("gamma is undefined on C0")
    x, y, q = pencil.x.entries, pencil.y.entries, pencil.modulus
    coords = tuple((x[a] * y[b] - y[a] * x[b]) % q for a, b in canonical_pairs(pencil.n))
    return PlueckerVector(pencil.n, q, coords)


def image_equation_residuals(v: PlueckerVector) -> FieldMatrix:
    """Entry (i, j) is sum_k p[(i,k),(k,j)]."""
    n, q = v.n, v.modulus
    return FieldMatrix(
        n, n, (sum(v.value(i * n + k, k * n + j) for k in range(n)) % q for i in range(n) for j in range(n)), q
    )


def image_equation_matrix(n: int, q: int) -> FieldMatrix:
    """The n^2 linear forms of image_equation_residuals as rows over the canonical coordinates."""
    index = _pair_index(n)
    rows = []
    for i in range(n):
        for j in range(n):
            row = [0] * len(index)
            for k in range(n):
                a, b = i * n + k, k * n + j
                if a < b:
                    row[index[(a, b)]] += 1
                elif a > b:
                    row[index[(b, a)]] -= 1
            rows.append(row)
    return FieldMatrix.from_rows(rows, q)


def gl2_act(g: FieldMatrix, pencil: MatrixPencil) -> MatrixPencil:
    """(a, b; c, d) . (X, Y) = (aX + bY, cX + dY)."""
    if g.shape != (2, 2) or g.modulus != pencil.modulus:
        raise FieldError("expected a 2x2 matrix over the pencil's field")
    if mat_rank(g) != 2:
        raise FieldError("group element must be invertible")
    a, b, c, d = g.entries
    x, y = pencil.x, pencil.y
    return MatrixPencil(x.scale(a) + y.scale(b), x.scale(c) + y.scale(d))


def det2(g: FieldMatrix) -> int:
    a, b, c, d = g.entries
    return (a * d - b * c) % g.modulus


def same_fiber(p1: MatrixPencil, p2: MatrixPencil, method: str = "rowspace") -> bool:
    """Whether two pencils lie in one GL(2) orbit.

    ``rowspace`` compares the row spaces of the flattenings; ``gamma``
    compares Plücker vectors up to scalar.
    """
    if in_c0(p1) or in_c0(p2):
        raise DegeneratePencil("fibers are only defined off C0")
    if p1.n != p2.n or p1.modulus != p2.modulus:
        return False
    if method == "rowspace":
        stacked = FieldMatrix(4, p1.n * p1.n, p1.flattening().entries + p2.flattening().entries, p1.modulus)
        return mat_rank(stacked) == 2
    if method == "gamma":
        return gamma(p1).projectively_equal(gamma(p2))
    raise ValueError(f"unknown method {method!r}")


def quadric_e5(v: PlueckerVector) -> int:
    """p11,22 p12,21 - p11,12 p22,21 + p11,21 p22,12 for n = 2."""
    if v.n != 2:
        raise FieldError("the single Plücker quadric is specific to n = 2")
    c = v.coord
    return (
        c((1, 1), (2, 2)) * c((1, 2), (2, 1))
        - c((1, 1), (1, 2)) * c((2, 2), (2, 1))
        + c((1, 1), (2, 1)) * c((2, 2), (1, 2))
    ) % v.modulus


# --- enumerative checks ------------------------------------------------------------


@dataclass
class ExampleEReport:
    q: int
    linear_rank: int
    points_e2e3e4: int
    points_on_quadric: int
    image_points: int
    full_scan_points: int | None
    full_scan_agrees: bool | None
    all_equal: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _projective_points_of_kernel(a: FieldMatrix) -> set[tuple[int, ...]]:
    q = a.modulus
    basis = nullspace(a)
    pts = set()
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        if not any(coeffs):
            continue
        vec = [sum(c * b[k] for c, b in zip(coeffs, basis)) % q for k in range(a.cols)]
        pts.add(normalize(vec, q))
    return pts


def verify_example_e(q: int, full_scan: bool = True) -> ExampleEReport:
    """Compare the linear section cut by the residual forms with the image of gamma for n = 2."""
    if q not in (2, 3):
        raise ValueError("example-e supports q in {2, 3}")
    n = 2
    eqs = image_equation_matrix(n, q)
    linear = _projective_points_of_kernel(eqs)
    on_quadric = sum(1 for pt in linear if quadric_e5(PlueckerVector(n, q, pt)) == 0)

    scan_count, scan_agrees = None, None
    if full_scan:
        scanned = set()
        for vec in itertools.product(range(q), repeat=len(canonical_pairs(n))):
            if any(vec) and image_equation_residuals(PlueckerVector(n, q, vec)).is_zero():
                scanned.add(normalize(vec, q))
        scan_count, scan_agrees = len(scanned), scanned == linear

    image = set()
    for ex in itertools.product(range(q), repeat=n * n):
        x = FieldMatrix(n, n, ex, q)
        for ey in itertools.product(range(q), repeat=n * n):
            pencil = MatrixPencil(x, FieldMatrix(n, n, ey, q))
            if pencil.is_commuting() and not in_c0(pencil):
                image.add(gamma(pencil).normalized())

    all_equal = image == linear and on_quadric == len(linear) and scan_agrees is not False
    return ExampleEReport(q, mat_rank(eqs), len(linear), on_quadric, len(image), scan_count, scan_agrees, all_equal)


@dataclass
class Gamma4Report:
    q: int
    nt4_points: int
    c0_points: int
    checked: int
    violations: int
    in_nt4_0: int
    in_nt4_1: int
    in_both: int
    uncovered: int
    rank_locus_mismatch: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_gamma4_image(q: int, budget: int | None = None) -> Gamma4Report:
    """Check gamma on NT_4(F_q) minus C0 against the three image equations and split it into two loci."""
    if q not in (2, 3):
        raise ValueError("gamma4 verification supports q in {2, 3}")
    system = nt_system(4)
    pts = all_points(system, q, budget)
    col = {name: k for k, name in enumerate(system.names)}
    labels = ["12", "13", "14", "23", "24", "34"]
    xs = {lab: pts[:, col["x" + lab]] for lab in labels}
    ys = {lab: pts[:, col["y" + lab]] for lab in labels}

    def p(a: str, b: str) -> np.ndarray:
        return (xs[a] * ys[b] - ys[a] * xs[b]) % q

    degenerate = np.ones(len(pts), dtype=bool)
    for a, b in itertools.combinations(labels, 2):
        degenerate &= p(a, b) == 0
    live = ~degenerate

    bad = (p("12", "23") != 0) | (p("23", "34") != 0) | ((p("12", "24") + p("13", "34")) % q != 0)
    locus0 = p("12", "34") == 0
    locus1 = (xs["23"] == 0) & (ys["23"] == 0)
    rank_le_1 = (p("12", "23") == 0) & (p("12", "34") == 0) & (p("23", "34") == 0)
    return Gamma4Report(
        q=q,
        nt4_points=len(pts),
        c0_points=int(degenerate.sum()),
        checked=int(live.sum()),
        violations=int((bad & live).sum()),
        in_nt4_0=int((locus0 & live).sum()),
        in_nt4_1=int((locus1 & live).sum()),
        in_both=int((locus0 & locus1 & live).sum()),
        uncovered=int((~locus0 & ~locus1 & live).sum()),
        rank_locus_mismatch=int(((locus0 != rank_le_1) & live).sum()),
    )
