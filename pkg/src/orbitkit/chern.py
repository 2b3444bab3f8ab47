"""Chern-character coefficient data for compact classical groups.

The function phi(n, k, q) is the alternating binomial sum whose values fill
the Chern-character matrices: for SU(m) the square matrix taking the
K-theory exterior generators beta(rho_k) to the odd cohomology generators
x_{2i+1}, and for SO(2n+1) the rows for beta(lambda_1..lambda_{n-1})
together with the spin row for eps_{2n+1} against x_3, x_7, ..., x_{4n-1}.
Everything is exact: big-integer binomials and Fraction matrix entries.

For SU the determinant is computed and invertibility over Q reported.  For
SO_odd the displayed row family stops at k = n - 1, so the matrix's rank is
reported instead of an invertibility verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .liealg import InputError

FAMILIES = ("SU", "SO_odd", "Sp")


def phi(n: int, k: int, q: int) -> int:
    """Alternating binomial sum over i = 1..k of (-1)^(i-1) C(n, k-i) i^(q-1).

    >>> phi(2, 1, 2)
    1
    >>> phi(3, 2, 2)
    1
    >>> phi(3, 2, 3)
    -1
    >>> all(phi(n, 1, q) == 1 for n in range(13) for q in range(1, 9))
    True
    """
    if n < 0 or k < 1 or q < 1:
        raise InputError("phi needs n >= 0, k >= 1, q >= 1")
    total = 0
    for i in range(1, k + 1):
        term = math.comb(n, k - i) * i ** (q - 1)
        total += -term if (i - 1) % 2 else term
    return total


@dataclass(frozen=True)
class RingModel:
    """Exterior-algebra generator table for one side of the Chern character."""

    family: str
    rank: int
    side: str  # "K" or "H"
    generators: tuple
    degrees: tuple

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "side": self.side,
            "generators": list(self.generators),
            "degrees": list(self.degrees),
        }


def _check_family(family: str, rank: int) -> None:
    if family not in FAMILIES:
        raise InputError(f"unsupported family {family!r}; choose from {FAMILIES}")
    if family == "SU":
        if rank < 2:
            raise InputError("SU needs rank m >= 2")
    elif rank < 1:
        raise InputError(f"{family} needs rank n >= 1")


def ring_models(family: str, rank: int):
    """K-theory and cohomology generator tables for the group family.

    SU(m) pairs beta(rho_1..m-1) with x_3, x_5, ..., x_{2m-1}.  SO(2n+1)
    has K-generators beta(rho_1..n) plus eps_{2n+1} against cohomology
    x_3, x_7, ..., x_{4n-1}, one more on the K side.  Sp(n) pairs
    beta(rho_1..n) with the same odd tower as SO(2n+1).
    """
    _check_family(family, rank)
    if family == "SU":
        m = rank
        k_gens = tuple(f"beta(rho_{k})" for k in range(1, m))
        h_gens = tuple(f"x_{2 * i + 1}" for i in range(1, m))
    elif family == "SO_odd":
        n = rank
        k_gens = tuple(f"beta(rho_{k})" for k in range(1, n + 1)) + (
            f"eps_{2 * n + 1}",
        )
        h_gens = tuple(f"x_{4 * i - 1}" for i in range(1, n + 1))
    else:
        n = rank
        k_gens = tuple(f"beta(rho_{k})" for k in range(1, n + 1))
        h_gens = tuple(f"x_{4 * i - 1}" for i in range(1, n + 1))
    k_model = RingModel(family, rank, "K", k_gens, (1,) * len(k_gens))
    h_model = RingModel(
        family,
        rank,
        "H",
        h_gens,
        tuple(int(g.split("_")[1]) for g in h_gens),
    )
    return k_model, h_model


def _determinant(rows) -> Fraction:
    # fraction-free enough at these sizes: plain elimination over Fraction
    n = len(rows)
    work = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if work[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        det *= work[c][c]
        inv = 1 / work[c][c]
        for r in range(c + 1, n):
            if work[r][c] == 0:
                continue
            factor = work[r][c] * inv
            for j in range(c, n):
                work[r][j] -= factor * work[c][j]
    return det


def _rank(rows) -> int:
    if not rows:
        return 0
    work = [list(r) for r in rows]
    nrows, ncols = len(work), len(work[0])
    rank = 0
    row = 0
    for c in range(ncols):
        pivot = next((r for r in range(row, nrows) if work[r][c] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = 1 / work[row][c]
        for r in range(nrows):
            if r != row and work[r][c] != 0:
                factor = work[r][c] * inv
                for j in range(c, ncols):
                    work[r][j] -= factor * work[row][j]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


@dataclass(frozen=True)
class ChernMatrix:
    """Exact rational Chern-character coefficient matrix."""

    family: str
    rank: int
    rows: tuple
    row_labels: tuple
    col_labels: tuple
    determinant: Fraction | None  # None for SO_odd: rank is reported instead
    matrix_rank: int
    invertible: bool | None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "rows": [[str(v) for v in row] for row in self.rows],
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "determinant": str(self.determinant)
            if self.determinant is not None
            else None,
            "matrix_rank": self.matrix_rank,
            "invertible": self.invertible,
        }


def chern_matrix(family: str, rank: int) -> ChernMatrix:
    """Assemble the Chern-character matrix for SU(m) or SO(2n+1).

    SU(m): entry (k, i) is ((-1)^i / i!) phi(m, k, i+1) for k, i = 1..m-1;
    the determinant and the invertibility verdict over Q are exact.

    SO_odd at parameter n: rows are the beta(lambda_k) formulas for
    k = 1..n-1 with entries ((-1)^(i-1) 2 / (2i-1)!) phi(2n+1, k, 2i), plus
    the spin row ((-1)^(i-1) / (2^(n-1) (2i-1)!)) sum over k = 1..n of
    phi(2n+1, k, 2i), for i = 1..n.  The displayed row family is one short
    of a full basis on the K side, so the result carries the matrix rank
    and no invertibility claim.

    >>> chern_matrix("SU", 2).rows
    ((Fraction(-1, 1),),)
    >>> chern_matrix("SU", 3).determinant
    Fraction(1, 1)
    """
    _check_family(family, rank)
    if family == "Sp":
        raise InputError("no Chern matrix is built for Sp")
    if family == "SU":
        m = rank
        rows = tuple(
            tuple(
                Fraction((-1) ** i * phi(m, k, i + 1), math.factorial(i))
                for i in range(1, m)
            )
            for k in range(1, m)
        )
        det = _determinant(rows)
        labels_k = tuple(f"beta(rho_{k})" for k in range(1, m))
        labels_h = tuple(f"x_{2 * i + 1}" for i in range(1, m))
        return ChernMatrix(
            family, rank, rows, labels_k, labels_h, det, _rank(rows), det != 0
        )
    n = rank
    rows = []
    labels = []
    for k in range(1, n):
        rows.append(
            tuple(
                Fraction((-1) ** (i - 1) * 2 * phi(2 * n + 1, k, 2 * i), math.factorial(2 * i - 1))
                for i in range(1, n + 1)
            )
        )
        labels.append(f"beta(lambda_{k})")
    spin = tuple(
        Fraction(
            (-1) ** (i - 1) * sum(phi(2 * n + 1, k, 2 * i) for k in range(1, n + 1)),
            2 ** (n - 1) * math.factorial(2 * i - 1),
        )
        for i in range(1, n + 1)
    )
    rows.append(spin)
    labels.append(f"eps_{2 * n + 1}")
    rows = tuple(rows)
    labels_h = tuple(f"x_{4 * i - 1}" for i in range(1, n + 1))
    return ChernMatrix(
        family, rank, rows, tuple(labels), labels_h, None, _rank(rows), None
    )
