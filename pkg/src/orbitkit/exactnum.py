"""Exact scalar types and dense exact linear algebra.

Scalars are built on :class:`fractions.Fraction`: Gaussian rationals
(``a + b*i`` with rational ``a``, ``b``) and polynomials in a formal
scale parameter ``hbar`` with Gaussian-rational coefficients.  Matrices
over the Gaussian rationals support exact rank and kernel computations
via Gaussian elimination; no floating point is involved anywhere in
this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "GaussRational",
    "HbarPoly",
    "ExactMatrix",
    "rational_to_str",
    "rational_from_str",
    "tensor_flatten",
    "tensor_unflatten",
]

RationalLike = Union[int, Fraction]


def rational_to_str(x: Fraction) -> str:
    """Serialize a rational number as ``"p"`` or ``"p/q"``.

    >>> rational_to_str(Fraction(3, 4))
    '3/4'
    >>> rational_to_str(Fraction(-2))
    '-2'
    """
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` back to a Fraction.

    >>> rational_from_str("3/4")
    Fraction(3, 4)
    >>> rational_from_str("-2")
    Fraction(-2, 1)
    """
    return Fraction(s.strip())


@dataclass(frozen=True)
class GaussRational:
    """A Gaussian rational ``re + im*i`` with exact rational parts.

    >>> z = GaussRational(Fraction(1, 2), Fraction(-1))
    >>> z * z.conjugate()
    GaussRational(re=Fraction(5, 4), im=Fraction(0, 1))
    >>> GaussRational.i() ** 2 == GaussRational.from_int(-1)
    True
    """

    re: Fraction
    im: Fraction

    @staticmethod
    def from_int(n: int) -> "GaussRational":
        return GaussRational(Fraction(n), Fraction(0))

    @staticmethod
    def from_rational(x: RationalLike) -> "GaussRational":
        return GaussRational(Fraction(x), Fraction(0))

    @staticmethod
    def i() -> "GaussRational":
        return GaussRational(Fraction(0), Fraction(1))

    @staticmethod
    def zero() -> "GaussRational":
        return GaussRational(Fraction(0), Fraction(0))

    @staticmethod
    def one() -> "GaussRational":
        return GaussRational(Fraction(1), Fraction(0))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def __add__(self, other: "GaussRational") -> "GaussRational":
        other = _coerce(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other: "GaussRational") -> "GaussRational":
        other = _coerce(other)
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussRational":
        return _coerce(other) - self

    def __mul__(self, other) -> "GaussRational":
        other = _coerce(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussRational":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other) -> "GaussRational":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussRational":
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussRational.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": rational_to_str(self.re), "im": rational_to_str(self.im)}

    @staticmethod
    def from_json(obj) -> "GaussRational":
        if isinstance(obj, (int, str)):
            return GaussRational(rational_from_str(str(obj)), Fraction(0))
        return GaussRational(
            rational_from_str(str(obj.get("re", "0"))),
            rational_from_str(str(obj.get("im", "0"))),
        )

    def __str__(self) -> str:
        if self.im == 0:
            return rational_to_str(self.re)
        im = "i" if abs(self.im) == 1 else f"{rational_to_str(abs(self.im))}*i"
        if self.re == 0:
            return im if self.im > 0 else f"-{im}"
        sign = "+" if self.im > 0 else "-"
        return f"{rational_to_str(self.re)}{sign}{im}"


def _coerce(x) -> GaussRational:
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")


@dataclass(frozen=True)
class HbarPoly:
    """Polynomial in a formal parameter ``hbar`` over the Gaussian rationals.

    Stored as a sorted tuple of ``(exponent, coefficient)`` pairs with all
    zero coefficients dropped, so equality is structural.

    >>> h = HbarPoly.hbar()
    >>> (h * h + h).degree()
    2
    >>> (h * HbarPoly.constant(GaussRational.i())).divide_by_hbar()
    HbarPoly.from_dict({0: 'i'})
    """

    coeffs: tuple  # tuple[tuple[int, GaussRational], ...], sorted by exponent

    @staticmethod
    def from_dict(d: dict) -> "HbarPoly":
        items = []
        for k in sorted(d):
            c = d[k]
            if not isinstance(c, GaussRational):
                c = _coerce(c)
            if not c.is_zero():
                if k < 0:
                    raise ValueError("negative hbar exponent")
                items.append((int(k), c))
        return HbarPoly(tuple(items))

    @staticmethod
    def zero() -> "HbarPoly":
        return HbarPoly(())

    @staticmethod
    def constant(c) -> "HbarPoly":
        return HbarPoly.from_dict({0: _coerce(c)})

    @staticmethod
    def hbar(power: int = 1) -> "HbarPoly":
        return HbarPoly.from_dict({power: GaussRational.one()})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree in hbar; -1 for the zero polynomial."""
        return self.coeffs[-1][0] if self.coeffs else -1

    def coefficient(self, power: int) -> GaussRational:
        for k, c in self.coeffs:
            if k == power:
                return c
        return GaussRational.zero()

    def constant_part(self) -> GaussRational:
        return self.coefficient(0)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def __add__(self, other: "HbarPoly") -> "HbarPoly":
        d = dict(self.coeffs)
        for k, c in other.coeffs:
            s = d.get(k, GaussRational.zero()) + c
            if s.is_zero():
                d.pop(k, None)
            else:
                d[k] = s
        return HbarPoly(tuple(sorted(d.items())))

    def __neg__(self) -> "HbarPoly":
        return HbarPoly(tuple((k, -c) for k, c in self.coeffs))

    def __sub__(self, other: "HbarPoly") -> "HbarPoly":
        return self + (-other)

    def __mul__(self, other) -> "HbarPoly":
        if isinstance(other, (int, Fraction, GaussRational)):
            other = HbarPoly.constant(_coerce(other))
        d: dict = {}
        for k1, c1 in self.coeffs:
            for k2, c2 in other.coeffs:
                k = k1 + k2
                s = d.get(k, GaussRational.zero()) + c1 * c2
                if s.is_zero():
                    d.pop(k, None)
                else:
                    d[k] = s
        return HbarPoly(tuple(sorted(d.items())))

    __rmul__ = __mul__

    def divide_by_hbar(self) -> "HbarPoly":
        """Exact division by hbar; raises if the constant term is nonzero."""
        if not self.coefficient(0).is_zero():
            raise ValueError("not divisible by hbar: nonzero constant term")
        return HbarPoly(tuple((k - 1, c) for k, c in self.coeffs))

    def to_json(self) -> dict:
        return {str(k): c.to_json() for k, c in self.coeffs}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in self.coeffs:
            if k == 0:
                parts.append(f"({c})")
            elif k == 1:
                parts.append(f"({c})*hbar")
            else:
                parts.append(f"({c})*hbar^{k}")
        return " + ".join(parts)

    def __repr__(self) -> str:  # keep doctest output compact
        return "HbarPoly.from_dict({%s})" % ", ".join(
            f"{k}: '{c}'" for k, c in self.coeffs
        )


class ExactMatrix:
    """Dense matrix over the Gaussian rationals with exact elimination.

    >>> m = ExactMatrix.from_rows([[1, 2], [2, 4]])
    >>> m.rank()
    1
    >>> [str(v[0]) + "," + str(v[1]) for v in m.kernel_basis()]
    ['-2,1']
    """

    def __init__(self, rows: Sequence[Sequence[GaussRational]]):
        self.rows = tuple(tuple(_coerce(x) for x in r) for r in rows)
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise ValueError("ragged rows")
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "ExactMatrix":
        return ExactMatrix([[_coerce(x) for x in r] for r in rows])

    @staticmethod
    def zero(nrows: int, ncols: int) -> "ExactMatrix":
        z = GaussRational.zero()
        return ExactMatrix([[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        z, o = GaussRational.zero(), GaussRational.one()
        return ExactMatrix([[o if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> GaussRational:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(GaussRational.from_int(-1))

    def scale(self, c) -> "ExactMatrix":
        c = _coerce(c)
        return ExactMatrix([[c * x for x in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            out.append(
                [
                    sum((a * b for a, b in zip(r, c)), GaussRational.zero())
                    for c in cols
                ]
            )
        return ExactMatrix(out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)) if self.rows else [])

    def conjugate_transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[x.conjugate() for x in r] for r in (zip(*self.rows) if self.rows else [])]
        )

    def _echelon(self):
        """Row echelon form by exact Gaussian elimination.

        Returns (rows, pivot_columns).  Entries stay reduced because
        Fraction arithmetic normalizes after every operation.
        """
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pivot = None
            for i in range(r, len(rows)):
                if not rows[i][c].is_zero():
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [inv * x for x in rows[r]]
            for i in range(len(rows)):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel_basis(self) -> list:
        """Basis of the right kernel, one vector per free column.

        Satisfies rank + len(kernel_basis()) == ncols.
        """
        rows, pivots = self._echelon()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [GaussRational.zero()] * self.ncols
            v[fc] = GaussRational.one()
            for r_idx, pc in enumerate(pivots):
                # reduced echelon: pivot rows are normalized with zeros above
                v[pc] = -rows[r_idx][fc]
            basis.append(tuple(v))
        return basis

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"ExactMatrix[{body}]"


def tensor_flatten(multi: Sequence[int], dim: int) -> int:
    """Row-major flat index of a multi-index over ``{0..dim-1}``.

    >>> tensor_flatten((1, 0, 2), 3)
    11
    """
    flat = 0
    for ix in multi:
        if not 0 <= ix < dim:
            raise ValueError("index out of range")
        flat = flat * dim + ix
    return flat


def tensor_unflatten(flat: int, dim: int, length: int) -> tuple:
    """Inverse of :func:`tensor_flatten` for words of a given length.

    >>> tensor_unflatten(11, 3, 3)
    (1, 0, 2)
    """
    if not 0 <= flat < dim**length:
        raise ValueError("flat index out of range")
    out = []
    for _ in range(length):
        out.append(flat % dim)
        flat //= dim
    return tuple(reversed(out))
