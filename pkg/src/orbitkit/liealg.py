"""Lie algebras by structure constants and coadjoint-orbit linear algebra.

A Lie algebra is stored as exact rational structure constants
``c[i][j][k]`` with ``[X_i, X_j] = sum_k c[i][j][k] X_k``.  Covectors
live in the dual with rational coordinates.  The Poisson matrix of a
covector ``F`` is ``B[i][j] = <F, [X_i, X_j]>``; its rank is the orbit
dimension and its kernel the stabilizer subalgebra.  Polarization
subspaces of the complexification are checked through the exact
linear-algebra conditions that are decidable at the infinitesimal
level; global and measure-theoretic conditions are reported as not
evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import (
    ExactMatrix,
    GaussRational,
    rational_from_str,
    rational_to_str,
)

__all__ = [
    "LieAlgebra",
    "Covector",
    "ComplexSubspace",
    "PolarizationReport",
    "check_jacobi",
    "poisson_matrix",
    "orbit_dimension",
    "stabilizer",
    "hamiltonian_fields",
    "check_polarization",
    "heisenberg",
    "aff1",
    "sl2",
    "abelian",
]


class InputError(ValueError):
    """Invalid user-supplied data (bad file, inconsistent brackets, ...)."""


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra over the rationals.

    ``c[i][j][k]`` is the coefficient of ``X_k`` in ``[X_i, X_j]``.
    Antisymmetry ``c[i][j][k] == -c[j][i][k]`` is enforced at
    construction; the Jacobi identity is checked separately by
    :func:`check_jacobi` so that deliberately broken tables can still
    be built for testing.
    """

    dim: int
    basis: tuple
    c: tuple  # c[i][j] = tuple of Fraction, length dim

    def __post_init__(self):
        if len(self.basis) != self.dim or len(self.c) != self.dim:
            raise InputError("structure constant table does not match dim")
        for i in range(self.dim):
            if len(self.c[i]) != self.dim:
                raise InputError("structure constant table does not match dim")
            for j in range(self.dim):
                if len(self.c[i][j]) != self.dim:
                    raise InputError("structure constant table does not match dim")
                if self.c[i][j] != tuple(-x for x in self.c[j][i]):
                    raise InputError(
                        f"structure constants not antisymmetric at ({i},{j})"
                    )

    @staticmethod
    def from_brackets(dim: int, brackets: dict, basis: Optional[Sequence[str]] = None) -> "LieAlgebra":
        """Build from a sparse table ``{(i, j): {k: coeff}}``.

        Missing ``(j, i)`` entries are filled by antisymmetry; if both
        orientations are present they must already be consistent.
        """
        names = tuple(basis) if basis else tuple(f"X{i+1}" for i in range(dim))
        zero = tuple(Fraction(0) for _ in range(dim))
        table = [[list(zero) for _ in range(dim)] for _ in range(dim)]
        given = set()
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise InputError(f"bracket index ({i},{j}) out of range")
            for k, v in coeffs.items():
                if not 0 <= k < dim:
                    raise InputError(f"bracket target index {k} out of range")
                table[i][j][k] = Fraction(v)
            given.add((i, j))
        for (i, j) in sorted(given):
            if (j, i) in given:
                for k in range(dim):
                    if table[j][i][k] != -table[i][j][k]:
                        raise InputError(
                            f"brackets ({i},{j}) and ({j},{i}) are inconsistent"
                        )
            else:
                for k in range(dim):
                    table[j][i][k] = -table[i][j][k]
        return LieAlgebra(
            dim,
            names,
            tuple(tuple(tuple(row) for row in plane) for plane in table),
        )

    @staticmethod
    def from_json(obj) -> "LieAlgebra":
        """Load the JSON form ``{"dim": n, "basis": [...], "brackets": [...]}``.

        Each bracket entry is ``{"i": i, "j": j, "coeffs": {"k": "p/q"}}``.
        """
        try:
            dim = int(obj["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("algebra file needs an integer 'dim'") from exc
        if dim <= 0:
            raise InputError("'dim' must be positive")
        basis = obj.get("basis") or [f"X{i+1}" for i in range(dim)]
        if len(basis) != dim:
            raise InputError("'basis' length does not match 'dim'")
        brackets = {}
        for entry in obj.get("brackets", []):
            try:
                i, j = int(entry["i"]), int(entry["j"])
                coeffs = {
                    int(k): rational_from_str(str(v))
                    for k, v in entry["coeffs"].items()
                }
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"malformed bracket entry {entry!r}") from exc
            key = (i, j)
            if key in brackets:
                raise InputError(f"duplicate bracket entry for ({i},{j})")
            brackets[key] = coeffs
        return LieAlgebra.from_brackets(dim, brackets, basis)

    @staticmethod
    def load(path: str) -> "LieAlgebra":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: not valid JSON ({exc})") from exc
        return LieAlgebra.from_json(obj)

    def to_json(self) -> dict:
        entries = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                coeffs = {
                    str(k): rational_to_str(v)
                    for k, v in enumerate(self.c[i][j])
                    if v != 0
                }
                if coeffs:
                    entries.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "basis": list(self.basis), "brackets": entries}

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
        """Bracket of two coordinate vectors, rational coordinates."""
        out = [Fraction(0)] * self.dim
        for i in range(self.dim):
            if u[i] == 0:
                continue
            for j in range(self.dim):
                if v[j] == 0:
                    continue
                f = u[i] * v[j]
                for k in range(self.dim):
                    if self.c[i][j][k] != 0:
                        out[k] += f * self.c[i][j][k]
        return tuple(out)

    def bracket_complex(self, u: Sequence[GaussRational], v: Sequence[GaussRational]) -> tuple:
        """Bilinear extension of the bracket to the complexification."""
        out = [GaussRational.zero()] * self.dim
        for i in range(self.dim):
            if u[i].is_zero():
                continue
            for j in range(self.dim):
                if v[j].is_zero():
                    continue
                f = u[i] * v[j]
                for k in range(self.dim):
                    if self.c[i][j][k] != 0:
                        out[k] = out[k] + f * GaussRational.from_rational(self.c[i][j][k])
        return tuple(out)


@dataclass(frozen=True)
class Covector:
    """Element of the dual space with exact rational coordinates."""

    coords: tuple

    @staticmethod
    def of(*values) -> "Covector":
        return Covector(tuple(Fraction(v) for v in values))

    @staticmethod
    def from_json(obj) -> "Covector":
        if not isinstance(obj, (list, tuple)):
            raise InputError("covector must be a list of rationals")
        return Covector(tuple(rational_from_str(str(v)) for v in obj))

    def to_json(self) -> list:
        return [rational_to_str(v) for v in self.coords]

    def pair(self, vector: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.coords, vector)), Fraction(0))


@dataclass(frozen=True)
class ComplexSubspace:
    """Subspace of the complexified algebra, spanned over the Gaussian rationals."""

    dim_ambient: int
    vectors: tuple  # tuple of tuples of GaussRational

    @staticmethod
    def spanned_by(vectors: Sequence[Sequence], dim_ambient: int) -> "ComplexSubspace":
        vs = []
        for v in vectors:
            if len(v) != dim_ambient:
                raise InputError("spanning vector has wrong length")
            vs.append(
                tuple(
                    x if isinstance(x, GaussRational) else GaussRational.from_rational(Fraction(x))
                    for x in v
                )
            )
        return ComplexSubspace(dim_ambient, tuple(vs))

    @staticmethod
    def from_json(obj, dim_ambient: int) -> "ComplexSubspace":
        vecs = obj.get("vectors") if isinstance(obj, dict) else obj
        if not isinstance(vecs, list):
            raise InputError("subspace must provide a list of vectors")
        out = []
        for v in vecs:
            if len(v) != dim_ambient:
                raise InputError("subspace vector has wrong length")
            out.append(tuple(GaussRational.from_json(x) for x in v))
        return ComplexSubspace(dim_ambient, tuple(out))

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.vectors) if self.vectors else ExactMatrix.zero(0, self.dim_ambient)

    def dim(self) -> int:
        return self.matrix().rank() if self.vectors else 0

    def contains(self, vector: Sequence[GaussRational]) -> bool:
        if all(x.is_zero() for x in vector):
            return True
        base = self.matrix()
        stacked = ExactMatrix(list(self.vectors) + [tuple(vector)])
        return stacked.rank() == base.rank()

    def conjugate(self) -> "ComplexSubspace":
        return ComplexSubspace(
            self.dim_ambient,
            tuple(tuple(x.conjugate() for x in v) for v in self.vectors),
        )


def check_jacobi(L: LieAlgebra):
    """Verify the Jacobi identity exactly over all ordered basis triples.

    Returns ``(True, None)`` or ``(False, (i, j, k))`` with the first
    violating triple in lexicographic order.
    """
    n = L.dim
    basis_vecs = [
        tuple(Fraction(1) if t == i else Fraction(0) for t in range(n))
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = [Fraction(0)] * n
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = L.bracket(basis_vecs[a], basis_vecs[b])
                    outer = L.bracket(inner, basis_vecs[c])
                    lhs = [x + y for x, y in zip(lhs, outer)]
                if any(x != 0 for x in lhs):
                    return False, (i, j, k)
    return True, None


def poisson_matrix(L: LieAlgebra, F: Covector) -> ExactMatrix:
    """Antisymmetric matrix ``B[i][j] = <F, [X_i, X_j]>``.

    >>> B = poisson_matrix(heisenberg(), Covector.of(0, 0, 1))
    >>> B.rank()
    2
    """
    if len(F.coords) != L.dim:
        raise InputError("covector length does not match algebra dimension")
    rows = []
    for i in range(L.dim):
        row = []
        for j in range(L.dim):
            row.append(
                GaussRational.from_rational(
                    sum(
                        (L.c[i][j][k] * F.coords[k] for k in range(L.dim)),
                        Fraction(0),
                    )
                )
            )
        rows.append(row)
    return ExactMatrix(rows)


def orbit_dimension(L: LieAlgebra, F: Covector) -> int:
    """Rank of the Poisson matrix; always even for antisymmetric input."""
    r = poisson_matrix(L, F).rank()
    if r % 2 != 0:
        raise RuntimeError(
            "internal error: antisymmetric rank came out odd"
        )
    return r


def stabilizer(L: LieAlgebra, F: Covector) -> list:
    """Rational basis of the stabilizer subalgebra ``ker B``.

    The span is checked to be closed under the bracket; failure would
    indicate corrupted structure constants and raises.
    """
    B = poisson_matrix(L, F)
    kernel = B.kernel_basis()
    vectors = []
    for v in kernel:
        if any(not x.im == 0 for x in v):
            raise RuntimeError("internal error: complex kernel of a rational matrix")
        vectors.append(tuple(x.re for x in v))
    span = ComplexSubspace.spanned_by(vectors, L.dim) if vectors else None
    for u in vectors:
        for v in vectors:
            w = L.bracket(u, v)
            wg = tuple(GaussRational.from_rational(x) for x in w)
            if span is None or not span.contains(wg):
                raise RuntimeError(
                    "internal error: stabilizer not closed under bracket"
                )
    return vectors


def hamiltonian_fields(L: LieAlgebra, F: Covector) -> list:
    """Tangent directions of the coadjoint orbit at ``F``: rows of B.

    Row ``k`` collects ``<F, [X_k, X_j]>`` over ``j``; the span of the
    rows is the image of the Poisson matrix, with dimension the orbit
    dimension.
    """
    B = poisson_matrix(L, F)
    return [tuple(x.re for x in row) for row in B.rows]


@dataclass(frozen=True)
class PolarizationReport:
    """Outcome of the infinitesimal polarization conditions."""

    subalgebra: bool                 # closed under bracket and contains the stabilizer
    b_infinitesimal: bool            # [stabilizer, p] inside p
    c_real_form: bool                # p + conj(p) is the complexification of its real points
    mixed_type: Optional[tuple]      # (k, l, m) when computable
    dims: dict = field(default_factory=dict)
    not_evaluated: tuple = (
        "global_group_invariance",
        "closure_codimension_count",
        "measurable_foliation_smoothness",
    )

    @property
    def passed(self) -> bool:
        return self.subalgebra and self.b_infinitesimal and self.c_real_form

    def to_json(self) -> dict:
        return {
            "subalgebra": self.subalgebra,
            "b_infinitesimal": self.b_infinitesimal,
            "c_real_form": self.c_real_form,
            "mixed_type": list(self.mixed_type) if self.mixed_type else None,
            "dims": dict(self.dims),
            "not_evaluated": list(self.not_evaluated),
            "passed": self.passed,
        }


def _real_points_dimension(L: LieAlgebra, space: ComplexSubspace):
    """Real dimension and a rational basis of ``space`` intersected with g.

    A vector sum t_a w_a with complex t_a is real when its imaginary
    part vanishes; solving that rational linear system and projecting
    the solutions to their real parts gives the intersection.
    """
    if not space.vectors:
        return 0, []
    m = len(space.vectors)
    n = space.dim_ambient
    # unknowns: x_a = Re t_a, y_a = Im t_a; equations: Im(sum t_a w_a) = 0
    rows = []
    for coord in range(n):
        row = []
        for a in range(m):
            row.append(GaussRational.from_rational(space.vectors[a][coord].im))
        for a in range(m):
            row.append(GaussRational.from_rational(space.vectors[a][coord].re))
        rows.append(row)
    kernel = ExactMatrix(rows).kernel_basis()
    reals = []
    for sol in kernel:
        x = [sol[a].re for a in range(m)]
        y = [sol[m + a].re for a in range(m)]
        vec = [Fraction(0)] * n
        for a in range(m):
            for coord in range(n):
                vec[coord] += (
                    x[a] * space.vectors[a][coord].re
                    - y[a] * space.vectors[a][coord].im
                )
        reals.append(tuple(vec))
    if not reals:
        return 0, []
    dim = ExactMatrix.from_rows(reals).rank()
    return dim, reals


def check_polarization(L: LieAlgebra, F: Covector, p: ComplexSubspace) -> PolarizationReport:
    """Run the exactly decidable polarization conditions at ``F``.

    Checks, over exact arithmetic: (a) ``p`` is a subalgebra of the
    complexification containing the complexified stabilizer, (b) the
    infinitesimal invariance ``[stabilizer, p] inside p``, and (c) that
    ``p + conj(p)`` is the complexification of its real points.  The
    mixed-type invariants are ``k = dim g - dim m``,
    ``l = (dim m - dim h)/2`` and ``m = dim h - dim stabilizer`` where
    ``m`` and ``h`` are the real points of ``p + conj(p)`` and ``p``.
    """
    if p.dim_ambient != L.dim:
        raise InputError("subspace ambient dimension does not match algebra")
    stab = stabilizer(L, F)
    stab_c = [
        tuple(GaussRational.from_rational(x) for x in v) for v in stab
    ]

    # (a): bracket closure plus stabilizer containment
    closed = True
    for u in p.vectors:
        for v in p.vectors:
            if not p.contains(L.bracket_complex(u, v)):
                closed = False
                break
        if not closed:
            break
    contains_stab = all(p.contains(v) for v in stab_c)
    cond_a = closed and contains_stab

    # (b) infinitesimal invariance under the stabilizer
    cond_b = True
    for z in stab_c:
        for u in p.vectors:
            if not p.contains(L.bracket_complex(z, u)):
                cond_b = False
                break
        if not cond_b:
            break

    # (c) p + conj(p) spans the complexification of its real points
    p_bar = p.conjugate()
    sum_space = ComplexSubspace(
        L.dim, tuple(list(p.vectors) + list(p_bar.vectors))
    )
    dim_sum = sum_space.dim()
    dim_m, _ = _real_points_dimension(L, sum_space)
    cond_c = dim_m == dim_sum

    dim_h, _ = _real_points_dimension(L, p)
    dim_stab = len(stab)
    mixed = None
    k = L.dim - dim_m
    two_l = dim_m - dim_h
    m_part = dim_h - dim_stab
    if two_l % 2 == 0 and m_part >= 0:
        mixed = (k, two_l // 2, m_part)

    return PolarizationReport(
        subalgebra=cond_a,
        b_infinitesimal=cond_b,
        c_real_form=cond_c,
        mixed_type=mixed,
        dims={
            "ambient": L.dim,
            "p": p.dim(),
            "p_plus_conj": dim_sum,
            "real_points_sum": dim_m,
            "real_points_p": dim_h,
            "stabilizer": dim_stab,
        },
    )


# ---------------------------------------------------------------------------
# Stock algebras used across tests and fixtures.


def heisenberg() -> LieAlgebra:
    """Three-dimensional algebra with [X, Y] = Z, Z central."""
    return LieAlgebra.from_brackets(
        3, {(0, 1): {2: Fraction(1)}}, basis=("X", "Y", "Z")
    )


def aff1() -> LieAlgebra:
    """Two-dimensional algebra of the affine line: [X, Y] = Y."""
    return LieAlgebra.from_brackets(
        2, {(0, 1): {1: Fraction(1)}}, basis=("X", "Y")
    )


def sl2() -> LieAlgebra:
    """Split rank-one simple algebra: [H,E]=2E, [H,F]=-2F, [E,F]=H."""
    return LieAlgebra.from_brackets(
        3,
        {
            (0, 1): {1: Fraction(2)},
            (0, 2): {2: Fraction(-2)},
            (1, 2): {0: Fraction(1)},
        },
        basis=("H", "E", "F"),
    )


def abelian(n: int) -> LieAlgebra:
    """Abelian algebra of dimension n."""
    return LieAlgebra.from_brackets(n, {})
