"""Exact rational linear algebra and truncated power series.

Everything here works on :class:`fractions.Fraction`, which is always kept in
lowest terms with a positive denominator, so equality is field equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "SingularMatrixError",
    "LowerTriangularMatrix",
    "SeriesCoefficients",
    "invert_lower_triangular",
    "invert_lower_triangular_nilpotent",
    "matrix_power_apply",
    "series_divide",
    "exp_series",
    "egf_to_ordinary",
    "ordinary_to_egf",
]


class SingularMatrixError(ZeroDivisionError):
    """A triangular matrix has a zero on its diagonal."""

    def __init__(self, index: int):
        super().__init__(f"zero diagonal entry at index {index}")
        self.index = index


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic; pass a Fraction or int")
    return Fraction(x)


class LowerTriangularMatrix:
    """Dense square lower-triangular matrix of Fractions (0-based indices)."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Sequence]):
        rows = [tuple(_as_fraction(x) for x in row) for row in rows]
        dim = len(rows)
        if dim == 0:
            raise ValueError("matrix must have positive dimension")
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise ValueError(f"row {i} has length {len(row)}, expected {dim}")
            if any(row[j] != 0 for j in range(i + 1, dim)):
                raise ValueError(f"row {i} has a nonzero entry above the diagonal")
        self._rows = tuple(rows)

    @classmethod
    def identity(cls, dim: int) -> "LowerTriangularMatrix":
        return cls([[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)])

    @classmethod
    def diagonal_matrix(cls, diag: Sequence) -> "LowerTriangularMatrix":
        dim = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(dim)] for i in range(dim)])

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LowerTriangularMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"LowerTriangularMatrix([{body}])"

    def diagonal(self) -> list[Fraction]:
        return [self._rows[i][i] for i in range(self.dim)]

    def strictly_lower(self) -> "LowerTriangularMatrix":
        return LowerTriangularMatrix(
            [[x if j < i else 0 for j, x in enumerate(row)] for i, row in enumerate(self._rows)]
        )

    def _check_same_dim(self, other: "LowerTriangularMatrix") -> None:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "LowerTriangularMatrix") -> "LowerTriangularMatrix":
        self._check_same_dim(other)
        return LowerTriangularMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def __sub__(self, other: "LowerTriangularMatrix") -> "LowerTriangularMatrix":
        self._check_same_dim(other)
        return LowerTriangularMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def __neg__(self) -> "LowerTriangularMatrix":
        return LowerTriangularMatrix([[-a for a in row] for row in self._rows])

    def scale(self, c) -> "LowerTriangularMatrix":
        c = _as_fraction(c)
        return LowerTriangularMatrix([[c * a for a in row] for row in self._rows])

    def __matmul__(self, other: "LowerTriangularMatrix") -> "LowerTriangularMatrix":
        self._check_same_dim(other)
        m = self.dim
        a, b = self._rows, other._rows
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                # product of lower-triangular matrices: only k in [j, i] contributes
                row.append(sum((a[i][k] * b[k][j] for k in range(j, i + 1)), Fraction(0)))
            out.append(row)
        return LowerTriangularMatrix(out)

    def apply(self, v: Sequence) -> list[Fraction]:
        """Return the matrix-vector product ``A v``."""
        if len(v) != self.dim:
            raise ValueError(f"dimension mismatch: matrix {self.dim}, vector {len(v)}")
        v = [_as_fraction(x) for x in v]
        return [sum((row[k] * v[k] for k in range(i + 1)), Fraction(0)) for i, row in enumerate(self._rows)]

    def power(self, k: int) -> "LowerTriangularMatrix":
        if k < 0:
            raise ValueError("negative power; invert first")
        out = LowerTriangularMatrix.identity(self.dim)
        for _ in range(k):
            out = out @ self
        return out


def invert_lower_triangular(a: LowerTriangularMatrix) -> LowerTriangularMatrix:
    """Exact inverse by forward substitution, one column at a time.

    Raises
    ------
    SingularMatrixError
        If a diagonal entry is zero; ``.index`` names the offending row.
    """
    m = a.dim
    rows = a.rows
    for i in range(m):
        if rows[i][i] == 0:
            raise SingularMatrixError(i)
    inv = [[Fraction(0)] * m for _ in range(m)]
    for j in range(m):
        inv[j][j] = 1 / rows[j][j]
        for i in range(j + 1, m):
            acc = sum((rows[i][k] * inv[k][j] for k in range(j, i)), Fraction(0))
            inv[i][j] = -acc / rows[i][i]
    return LowerTriangularMatrix(inv)


def invert_lower_triangular_nilpotent(a: LowerTriangularMatrix) -> LowerTriangularMatrix:
    """Inverse through the finite Neumann series of the strictly lower part.

    With ``A = D + R`` (``D`` diagonal, ``R`` strictly lower), ``D^{-1} R`` is
    nilpotent of index at most ``m``, so

        A^{-1} = sum_{k=0}^{m-1} (-D^{-1} R)^k D^{-1}

    is exact. Slower than :func:`invert_lower_triangular`; kept as an
    independent cross-check.
    """
    m = a.dim
    diag = a.diagonal()
    for i, d in enumerate(diag):
        if d == 0:
            raise SingularMatrixError(i)
    d_inv = LowerTriangularMatrix.diagonal_matrix([1 / d for d in diag])
    step = -(d_inv @ a.strictly_lower())
    term = LowerTriangularMatrix.identity(m)
    total = term
    for _ in range(1, m):
        term = term @ step
        total = total + term
    return total @ d_inv


def matrix_power_apply(a: LowerTriangularMatrix, k: int, v: Sequence) -> list[Fraction]:
    """Return ``A^k v`` by ``k`` successive matrix-vector products."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if len(v) != a.dim:
        raise ValueError(f"dimension mismatch: matrix {a.dim}, vector {len(v)}")
    out = [_as_fraction(x) for x in v]
    for _ in range(k):
        out = a.apply(out)
    return out


@dataclass(frozen=True)
class SeriesCoefficients:
    """Truncated ordinary power series ``sum_k coeffs[k] x^k``, k = 0..order."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "SeriesCoefficients":
        return SeriesCoefficients(self[k] for k in range(order + 1))

    def __add__(self, other: "SeriesCoefficients") -> "SeriesCoefficients":
        order = min(self.order, other.order)
        return SeriesCoefficients(self[k] + other[k] for k in range(order + 1))

    def __sub__(self, other: "SeriesCoefficients") -> "SeriesCoefficients":
        order = min(self.order, other.order)
        return SeriesCoefficients(self[k] - other[k] for k in range(order + 1))

    def __mul__(self, other: "SeriesCoefficients") -> "SeriesCoefficients":
        order = min(self.order, other.order)
        return SeriesCoefficients(
            sum((self[i] * other[k - i] for i in range(k + 1)), Fraction(0)) for k in range(order + 1)
        )

    def scale(self, c) -> "SeriesCoefficients":
        c = _as_fraction(c)
        return SeriesCoefficients(c * a for a in self.coeffs)

    def substitute_scaled(self, c) -> "SeriesCoefficients":
        """Coefficients of ``f(c x)``."""
        c = _as_fraction(c)
        return SeriesCoefficients(a * c**k for k, a in enumerate(self.coeffs))

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all are zero."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None


def series_divide(
    numerator: SeriesCoefficients, denominator: SeriesCoefficients, order: int
) -> SeriesCoefficients:
    """Quotient of two power series up to ``x^order``.

    A common factor ``x^m`` (``m`` = valuation of the denominator) is cancelled
    first, then coefficients are solved one at a time. Coefficients past the
    supplied order of either input are treated as zero, so for a true series
    quotient pass inputs of order at least ``order + m``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    m = denominator.valuation()
    if m is None:
        raise ZeroDivisionError("denominator series is identically zero to the supplied order")
    nv = numerator.valuation()
    if nv is not None and nv < m:
        raise ValueError(
            f"numerator valuation {nv} is below denominator valuation {m}; quotient is not a power series"
        )
    num = [numerator[k + m] for k in range(order + 1)]
    den = [denominator[k + m] for k in range(order + 1)]
    lead = den[0]
    q: list[Fraction] = []
    for k in range(order + 1):
        acc = num[k] - sum((den[i] * q[k - i] for i in range(1, k + 1)), Fraction(0))
        q.append(acc / lead)
    return SeriesCoefficients(q)


def exp_series(c, order: int) -> SeriesCoefficients:
    """Ordinary coefficients ``c^k / k!`` of ``exp(c x)``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = _as_fraction(c)
    return SeriesCoefficients(c**k / factorial(k) for k in range(order + 1))


def ordinary_to_egf(series: SeriesCoefficients) -> list[Fraction]:
    """Exponential-generating-function coefficients ``k! c_k``."""
    return [c * factorial(k) for k, c in enumerate(series.coeffs)]


def egf_to_ordinary(values: Sequence) -> SeriesCoefficients:
    """Inverse of :func:`ordinary_to_egf`."""
    return SeriesCoefficients(_as_fraction(a) / factorial(k) for k, a in enumerate(values))
