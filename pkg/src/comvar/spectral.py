"""Generalized eigenspace projectors of an upper triangular matrix.

For ``f = prod (t - l_i)^{m_i}`` the minimal polynomial of X, put
``f_i = f / (t - l_i)^{m_i}`` and pick ``g_i`` with ``sum g_i f_i = 1``.  The
matrices ``g_i(X) f_i(X)`` are complementary idempotents projecting onto the
generalized eigenspaces, and they are polynomials in X, so anything that
commutes with X preserves their images.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import (
    FieldError,
    FieldMatrix,
    FieldPolynomial,
    column_span_equal,
    commutator,
    mat_rank,
    nullspace,
    poly_eval_matrix,
    poly_xgcd,
)


class SpectralError(FieldError):
    pass


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple[int, ...]
    exponents: tuple[int, ...]
    min_poly: FieldPolynomial
    projectors: tuple[FieldMatrix, ...]
    partition: tuple[tuple[int, ...], ...] = ()
    basis: FieldMatrix | None = None

    def to_dict(self) -> dict:
        out = {
            "modulus": self.min_poly.modulus,
            "eigenvalues": list(self.eigenvalues),
            "exponents": list(self.exponents),
            "min_poly": list(self.min_poly.coeffs),
            "projectors": [pr.tolist() for pr in self.projectors],
        }
        if self.partition:
            out["partition"] = [[j + 1 for j in block] for block in self.partition]
        if self.basis is not None:
            out["basis"] = self.basis.tolist()
        return out


def _require_triangular(x: FieldMatrix) -> None:
    if not x.is_square or not x.is_upper_triangular():
        raise SpectralError("expected a square upper triangular matrix")


def _eigenvalues(x: FieldMatrix) -> list[int]:
    seen: list[int] = []
    for i in range(x.rows):
        if x[i, i] not in seen:
            seen.append(x[i, i])
    return seen


def min_poly_triangular(x: FieldMatrix) -> tuple[list[tuple[int, int]], FieldPolynomial]:
    """Eigenvalues (in order of first appearance on the diagonal) with exponents, and the minimal polynomial."""
    _require_triangular(x)
    n, p = x.rows, x.modulus
    pairs = []
    f = FieldPolynomial([1], p)
    for lam in _eigenvalues(x):
        shifted = x - FieldMatrix.scalar(n, lam, p)
        power = shifted
        prev_rank = mat_rank(power)
        m = 1
        while True:
            power = power @ shifted
            r = mat_rank(power)
            if r == prev_rank:
                break
            prev_rank, m = r, m + 1
        pairs.append((lam, m))
        f = f * FieldPolynomial.linear_power(lam, m, p)
    return pairs, f


def _projector_polys(pairs: list[tuple[int, int]], f: FieldPolynomial) -> list[FieldPolynomial]:
    p = f.modulus
    products = []
    for lam, m in pairs:
        local = FieldPolynomial.linear_power(lam, m, p)
        fi = f // local
        d, u, _ = poly_xgcd(fi, local)
        if d != 1:
            raise SpectralError(f"cofactor for eigenvalue {lam} is not coprime to its local factor")
        gi = u % local
        products.append(gi * fi)
    total = sum(products, FieldPolynomial([], p)) % f
    if total != 1:
        raise SpectralError("sum g_i f_i != 1 modulo the minimal polynomial")
    return products


def build_projectors(x: FieldMatrix) -> list[FieldMatrix]:
    pairs, f = min_poly_triangular(x)
    return [poly_eval_matrix(h, x) for h in _projector_polys(pairs, f)]


def spectral_data(x: FieldMatrix) -> SpectralData:
    pairs, f = min_poly_triangular(x)
    projectors = tuple(poly_eval_matrix(h, x) for h in _projector_polys(pairs, f))
    return SpectralData(tuple(l for l, _ in pairs), tuple(m for _, m in pairs), f, projectors)


def _columns(m: FieldMatrix, cols: list[int]) -> FieldMatrix:
    return FieldMatrix.from_rows([[m[i, j] for j in cols] for i in range(m.rows)], m.modulus)


def _stable(a: FieldMatrix, span: FieldMatrix) -> bool:
    """True iff a maps the column space of span into itself."""
    image = a @ span
    return column_span_equal(FieldMatrix.from_rows([r1 + r2 for r1, r2 in zip(span.tolist(), image.tolist())], span.modulus), span)


def lemma4_partition(x: FieldMatrix, y: FieldMatrix) -> SpectralData:
    """Upper triangular change of basis splitting K^n into X- and Y-stable generalized eigenspaces.

    Index j joins block i when the (j, j) entry of the i-th projector is 1,
    and the new basis vector is the j-th column of that projector.
    """
    _require_triangular(x)
    _require_triangular(y)
    if not commutator(x, y).is_zero():
        raise SpectralError("X and Y do not commute")
    data = spectral_data(x)
    n, p = x.rows, x.modulus
    owner = []
    for j in range(n):
        hits = [i for i, pr in enumerate(data.projectors) if pr[j, j] == 1]
        if len(hits) != 1:
            raise SpectralError(f"diagonal entry {j + 1} is 1 in {len(hits)} projectors")
        owner.append(hits[0])
    g = FieldMatrix.from_rows(
        [[data.projectors[owner[j]][i, j] for j in range(n)] for i in range(n)], p
    )
    if mat_rank(g) != n or not g.is_upper_triangular():
        raise SpectralError("basis change is not an invertible upper triangular matrix")
    partition = tuple(tuple(j for j in range(n) if owner[j] == i) for i in range(len(data.projectors)))
    for i, (lam, m) in enumerate(zip(data.eigenvalues, data.exponents)):
        span = _columns(g, list(partition[i]))
        kernel = nullspace((x - FieldMatrix.scalar(n, lam, p)) ** m)
        kernel_m = FieldMatrix.from_rows([[v[r] for v in kernel] for r in range(n)], p)
        if not column_span_equal(span, kernel_m):
            raise SpectralError(f"block {i + 1} does not span ker (X - {lam})^{m}")
        if not (_stable(x, span) and _stable(y, span)):
            raise SpectralError(f"block {i + 1} is not stable under X and Y")
    return SpectralData(data.eigenvalues, data.exponents, data.min_poly, data.projectors, partition, g)
