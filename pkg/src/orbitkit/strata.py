"""Orbit-dimension stratification of the dual by exact sampled ranks.

Covectors are drawn from a seeded rational grid; each sample's Poisson
matrix rank is computed exactly, samples are grouped into strata of
constant (even) rank, and each stratum carries a minor certificate.
The top stratum feeds a constant-rank foliation check and a structural
report of the resulting tower of extensions; an index vector pushes
through the integer connecting matrix of such a tower.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .exactnum import ExactMatrix, GaussRational, rational_to_str
from .liealg import Covector, InputError, LieAlgebra, poisson_matrix

__all__ = [
    "SamplerConfig",
    "Stratum",
    "TowerReport",
    "sample_covectors",
    "stratify",
    "generic_rank",
    "foliation_check",
    "extension_tower",
    "compose_index",
]


@dataclass(frozen=True)
class SamplerConfig:
    """Deterministic rational sampling plan for the dual space."""

    seed: int = 0
    samples: int = 1000
    coordinate_range: int = 3

    def draw(self, dim: int) -> list:
        """Covectors with coordinates on the quarter-integer grid.

        The same (seed, samples, range, dim) always produces the same
        list, which is what makes CLI reports reproducible.
        """
        rng = random.Random(self.seed)
        r = 4 * self.coordinate_range
        out = []
        for _ in range(self.samples):
            out.append(
                Covector(
                    tuple(Fraction(rng.randint(-r, r), 4) for _ in range(dim))
                )
            )
        return out


@dataclass(frozen=True)
class Stratum:
    """Samples sharing one exact orbit dimension, with certificates."""

    orbit_dimension: int
    sample_count: int
    witness: Covector
    minors_used: tuple          # distinct (rows, cols) index pairs certifying rank
    higher_minors_vanish: bool  # all (2n+2)-minors vanish at every sample

    def to_json(self) -> dict:
        return {
            "orbit_dimension": self.orbit_dimension,
            "sample_count": self.sample_count,
            "witness": self.witness.to_json(),
            "minors_used": [
                {"rows": list(r), "cols": list(c)} for r, c in self.minors_used
            ],
            "higher_minors_vanish": self.higher_minors_vanish,
        }


def sample_covectors(L: LieAlgebra, config: SamplerConfig) -> list:
    return config.draw(L.dim)


def _det(m: ExactMatrix) -> GaussRational:
    """Exact determinant by cofactor expansion; sizes stay tiny here."""
    n = m.nrows
    if n == 0:
        return GaussRational.one()
    if n == 1:
        return m[0, 0]
    total = GaussRational.zero()
    sign = 1
    for j in range(n):
        a = m[0, j]
        if not a.is_zero():
            sub = ExactMatrix(
                [
                    [m[i, jj] for jj in range(n) if jj != j]
                    for i in range(1, n)
                ]
            )
            term = a * _det(sub)
            total = total + (term if sign > 0 else -term)
        sign = -sign
    return total


def _submatrix(B: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
    return ExactMatrix([[B[i, j] for j in cols] for i in rows])


def _invertible_submatrix(B: ExactMatrix, r: int):
    """Greedy (rows, cols) of an r x r submatrix of full rank r."""
    if r == 0:
        return (), ()
    cols: list = []
    for j in range(B.ncols):
        trial = cols + [j]
        sub = ExactMatrix([[B[i, jj] for jj in trial] for i in range(B.nrows)])
        if sub.rank() == len(trial):
            cols = trial
            if len(cols) == r:
                break
    rows: list = []
    for i in range(B.nrows):
        trial = rows + [i]
        sub = ExactMatrix([[B[ii, jj] for jj in cols] for ii in trial])
        if sub.rank() == len(trial):
            rows = trial
            if len(rows) == r:
                break
    if len(rows) != r or len(cols) != r:
        raise RuntimeError("internal error: failed to locate a full-rank submatrix")
    return tuple(rows), tuple(cols)


def stratify(L: LieAlgebra, config: SamplerConfig = SamplerConfig()) -> list:
    """Group sampled covectors by exact orbit dimension.

    Returns strata sorted by decreasing orbit dimension.  Every rank is
    certified per sample: one nonvanishing 2n-minor (recorded), and
    exact vanishing of all (2n+2)-minors.
    """
    if config.samples < 1:
        raise InputError("sampler needs at least one sample")
    samples = sample_covectors(L, config)
    by_rank: dict = {}
    for F in samples:
        B = poisson_matrix(L, F)
        r = B.rank()
        if r % 2 != 0:
            raise RuntimeError("internal error: odd rank of an antisymmetric matrix")
        by_rank.setdefault(r, []).append((F, B))
    strata = []
    for r in sorted(by_rank, reverse=True):
        entries = by_rank[r]
        minors = []
        seen = set()
        higher_ok = True
        for F, B in entries:
            rows, cols = _invertible_submatrix(B, r)
            if (rows, cols) not in seen:
                seen.add((rows, cols))
                minors.append((rows, cols))
            if _det(_submatrix(B, rows, cols)).is_zero() and r > 0:
                raise RuntimeError("internal error: certifying minor vanished")
            k = r + 2
            if k <= L.dim:
                for rset in combinations(range(L.dim), k):
                    for cset in combinations(range(L.dim), k):
                        if not _det(_submatrix(B, rset, cset)).is_zero():
                            higher_ok = False
        strata.append(
            Stratum(
                orbit_dimension=r,
                sample_count=len(entries),
                witness=entries[0][0],
                minors_used=tuple(minors),
                higher_minors_vanish=higher_ok,
            )
        )
    return strata


# -- tiny multivariate polynomials over Fraction, just enough for minors -----


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            s = out.get(m, Fraction(0)) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _poly_neg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _poly_det(rows: list) -> dict:
    n = len(rows)
    if n == 0:
        return {(): Fraction(1)}
    if n == 1:
        return rows[0][0]
    out: dict = {}
    for j in range(n):
        entry = rows[0][j]
        if not entry:
            continue
        sub = [[r[jj] for jj in range(n) if jj != j] for r in rows[1:]]
        term = _poly_mul(entry, _poly_det(sub))
        out = _poly_add(out, term if j % 2 == 0 else _poly_neg(term))
    return out


def _poly_eval(p: dict, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        v = c
        for var, e in enumerate(m):
            for _ in range(e):
                v *= point[var]
        total += v
    return total


def _poly_str(p: dict, names: Sequence[str]) -> str:
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=lambda mm: (sum(mm), mm), reverse=True):
        c = p[m]
        factors = []
        for var, e in enumerate(m):
            if e == 1:
                factors.append(names[var])
            elif e > 1:
                factors.append(f"{names[var]}^{e}")
        body = "*".join(factors)
        if not body:
            parts.append(rational_to_str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{rational_to_str(c)}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def _symbolic_poisson(L: LieAlgebra) -> list:
    """Poisson matrix entries as linear polynomials in the dual coordinates."""
    n = L.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            p: dict = {}
            for k in range(n):
                if L.c[i][j][k] != 0:
                    mono = tuple(1 if t == k else 0 for t in range(n))
                    p[mono] = L.c[i][j][k]
            row.append(p)
        rows.append(row)
    return rows


def generic_rank(L: LieAlgebra, config: SamplerConfig = SamplerConfig()) -> dict:
    """Maximal sampled orbit dimension with a symbolic certificate.

    The returned report includes a 2n-minor of the symbolic Poisson
    matrix that is nonzero as a polynomial in the dual coordinates and
    evaluates to a nonzero rational at the witness sample.
    """
    strata = stratify(L, config)
    top = strata[0]
    r = top.orbit_dimension
    if r == 0:
        return {
            "rank": 0,
            "witness": top.witness.to_json(),
            "minor": None,
            "minor_polynomial": "1",
        }
    B = poisson_matrix(L, top.witness)
    rows, cols = _invertible_submatrix(B, r)
    sym = _symbolic_poisson(L)
    sub = [[sym[i][j] for j in cols] for i in rows]
    det_poly = _poly_det(sub)
    if not det_poly:
        raise RuntimeError("internal error: symbolic certifying minor is zero")
    value = _poly_eval(det_poly, top.witness.coords)
    if value == 0:
        raise RuntimeError("internal error: symbolic minor vanishes at witness")
    names = [f"F{k+1}" for k in range(L.dim)]
    return {
        "rank": r,
        "witness": top.witness.to_json(),
        "minor": {"rows": list(rows), "cols": list(cols)},
        "minor_polynomial": _poly_str(det_poly, names),
        "minor_value_at_witness": rational_to_str(value),
    }


def foliation_check(
    L: LieAlgebra,
    stratum: Stratum,
    config: SamplerConfig = SamplerConfig(),
) -> dict:
    """Constant-rank check of the orbit distribution on one stratum.

    At each sample of the stratum's rank, the Hamiltonian directions
    (rows of B) must span a space of exactly the stratum dimension and
    coincide with the image of B.  Both checks are exact.
    """
    if stratum.sample_count < 1:
        raise InputError("stratum has no samples to check")
    r = stratum.orbit_dimension
    count = 0
    for F in sample_covectors(L, config):
        B = poisson_matrix(L, F)
        if B.rank() != r:
            continue
        count += 1
        row_rank = ExactMatrix(list(B.rows)).rank()
        if row_rank != r:
            return {
                "constant_rank": False,
                "distribution_is_image": False,
                "samples_checked": count,
                "failure": F.to_json(),
            }
        cols = B.transpose()
        stacked = ExactMatrix(list(B.rows) + list(cols.rows))
        if stacked.rank() != r:
            return {
                "constant_rank": True,
                "distribution_is_image": False,
                "samples_checked": count,
                "failure": F.to_json(),
            }
    return {
        "constant_rank": True,
        "distribution_is_image": True,
        "samples_checked": count,
        "failure": None,
    }


@dataclass(frozen=True)
class TowerReport:
    """Structural description of the stratification's tower of extensions."""

    stages: tuple
    terminal: str
    strictly_decreasing: bool
    strata: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "stages": [dict(s) for s in self.stages],
            "terminal": self.terminal,
            "strictly_decreasing": self.strictly_decreasing,
            "strata": [s.to_json() for s in self.strata],
        }

    def to_table(self) -> str:
        lines = ["stage  orbit_dim  ideal          quotient"]
        for s in self.stages:
            lines.append(
                f"{s['stage']:<6} {s['orbit_dimension']:<10} "
                f"{s['ideal']:<14} {s['quotient']}"
            )
        lines.append(f"terminal: {self.terminal}")
        return "\n".join(lines)


def extension_tower(L: LieAlgebra, config: SamplerConfig = SamplerConfig()) -> TowerReport:
    """One extension stage per positive-dimension stratum, largest first.

    Stage i is the short exact sequence with ideal the algebra over the
    open stratum V_{2n_i} and quotient the next-stage algebra; the
    terminal quotient has the character space as its spectrum.
    """
    strata = stratify(L, config)
    positive = [s for s in strata if s.orbit_dimension > 0]
    dims = [s.orbit_dimension for s in positive]
    decreasing = all(a > b for a, b in zip(dims, dims[1:])) and all(d > 0 for d in dims)
    stages = []
    for idx, s in enumerate(positive):
        stages.append(
            {
                "stage": idx + 1,
                "orbit_dimension": s.orbit_dimension,
                "ideal": f"C*(V_{s.orbit_dimension})",
                "quotient": f"A_{idx + 1}",
                "sample_count": s.sample_count,
            }
        )
    if positive:
        terminal = (
            f"A_{len(positive)} has spectrum the character space of the group"
        )
    else:
        terminal = "abelian case: the algebra itself has spectrum the character space"
    return TowerReport(
        stages=tuple(stages),
        terminal=terminal,
        strictly_decreasing=decreasing,
        strata=tuple(strata),
    )


def compose_index(matrix: Sequence[Sequence[int]], index: Sequence[int]) -> list:
    """Integer pairing of a connecting matrix with an index vector.

    Entry i of the result is ``sum_j matrix[i][j] * index[j]``.
    """
    out = []
    for row in matrix:
        if len(row) != len(index):
            raise InputError("index vector length does not match matrix")
        out.append(sum(int(a) * int(b) for a, b in zip(row, index)))
    return out
