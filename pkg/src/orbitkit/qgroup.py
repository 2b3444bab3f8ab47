"""Weyl combinatorics and a truncated operator model of quantized SU(2).

`weyl_group` enumerates type A (symmetric group) and type B (signed
permutation) Weyl groups by breadth-first search over right multiplication
by simple reflections, so each element's graph distance from the identity
is its Coxeter length; one reduced word per element is then read off by
greedy descent.  `rep_catalog` lists the irreducible representations
rho_{w,t} over a sampled torus with the dimension dichotomy: dimension 1
exactly for w = e, infinite otherwise.

`build_rep_su2` materializes the truncated infinite-dimensional model on
basis e_0..e_{N-1}:

    a e_n = sqrt(1 - q^(2n)) e_{n-1},    c e_n = e^{it} q^n e_n,

and the 1x1 character model a -> e^{it}, c -> 0.  The five defining
relations are checked numerically by `relation_residuals`; the truncation
only disturbs the relation a a* + q^2 c c* = 1 in its last diagonal entry,
so the interior window (all but the last row and column) is clean to
rounding while the boundary defect is order one and reported separately.

`joint_kernel_rank` stacks the evaluations of all PBW monomials of bounded
degree under sampled representations and characters and reports the
numerical rank; full rank is the desk-scale witness that only zero lies in
every kernel.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .liealg import InputError

_GROUP_SIZE_GUARD = 10**4


# ---------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True)
class WeylElement:
    """Group element with one reduced word and its Coxeter length.

    Type A datum is a permutation of 0..rank in one-line notation; type B
    datum is a signed permutation of 1..rank.  Simple reflections are
    numbered 1..rank; in type B the last one flips the sign of the final
    slot.
    """

    family: str
    rank: int
    datum: tuple
    word: tuple
    length: int

    def is_identity(self) -> bool:
        return self.length == 0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "datum": list(self.datum),
            "word": list(self.word),
            "length": self.length,
        }


def _identity_datum(family: str, rank: int) -> tuple:
    if family == "A":
        return tuple(range(rank + 1))
    return tuple(range(1, rank + 1))


def _apply_reflection(family: str, datum: tuple, i: int) -> tuple:
    """Right multiplication by the simple reflection s_i."""
    out = list(datum)
    if family == "A" or i < len(datum):
        out[i - 1], out[i] = out[i], out[i - 1]
    else:
        out[-1] = -out[-1]
    return tuple(out)


def _group_order(family: str, rank: int) -> int:
    if family == "A":
        return math.factorial(rank + 1)
    return 2**rank * math.factorial(rank)


def evaluate_word(family: str, rank: int, word) -> tuple:
    """Multiply out a word of simple reflections from the identity."""
    datum = _identity_datum(family, rank)
    for i in word:
        if not 1 <= i <= rank:
            raise InputError(f"reflection index {i} out of range 1..{rank}")
        datum = _apply_reflection(family, datum, i)
    return datum


def weyl_group(family: str, rank: int):
    """Enumerate the Weyl group with lengths and one reduced word each.

    The search guard rejects groups larger than 10^4 elements.  Output is
    sorted by (length, datum), identity first.
    """
    if family not in ("A", "B"):
        raise InputError(f"unsupported family {family!r}; choose A or B")
    if rank < 1:
        raise InputError("rank must be at least 1")
    order = _group_order(family, rank)
    if order > _GROUP_SIZE_GUARD:
        raise InputError(
            f"Weyl group of {family}{rank} has {order} elements, "
            f"over the {_GROUP_SIZE_GUARD} guard"
        )
    identity = _identity_datum(family, rank)
    dist = {identity: 0}
    queue = deque([identity])
    while queue:
        cur = queue.popleft()
        for i in range(1, rank + 1):
            nxt = _apply_reflection(family, cur, i)
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    if len(dist) != order:
        raise RuntimeError("enumeration did not reach the whole group")
    elements = []
    for datum in dist:
        # greedy descent: repeatedly strip the first length-lowering
        # reflection; collected indices reversed give a reduced word
        rev = []
        cur = datum
        while dist[cur] > 0:
            for i in range(1, rank + 1):
                nxt = _apply_reflection(family, cur, i)
                if dist[nxt] < dist[cur]:
                    rev.append(i)
                    cur = nxt
                    break
            else:
                raise RuntimeError("no descent found below a nonidentity element")
        word = tuple(reversed(rev))
        elements.append(WeylElement(family, rank, datum, word, dist[datum]))
    elements.sort(key=lambda w: (w.length, w.datum))
    return elements


# ---------------------------------------------------------------------------
# representation catalog


@dataclass(frozen=True)
class RepDescriptor:
    """One rho_{w,t}: its Weyl element, torus angle, and dimension."""

    element: WeylElement
    t: float
    dimension: float  # 1 or math.inf

    def to_json(self) -> dict:
        return {
            "element": self.element.to_json(),
            "t": self.t,
            "dimension": 1 if self.dimension == 1 else "inf",
        }


def rep_catalog(family: str, rank: int, t_samples: int):
    """All (w, t_j) descriptors with t_j = 2 pi j / t_samples.

    Dimension is 1 exactly when w is the identity and infinite otherwise.
    """
    if t_samples < 1:
        raise InputError("t_samples must be at least 1")
    catalog = []
    for element in weyl_group(family, rank):
        for j in range(t_samples):
            t = 2.0 * math.pi * j / t_samples
            dim = 1 if element.is_identity() else math.inf
            catalog.append(RepDescriptor(element, t, dim))
    return catalog


# ---------------------------------------------------------------------------
# truncated operator model


@dataclass(frozen=True)
class TruncatedRep:
    """Matrices for the generators a and c at truncation N."""

    q: float
    t: float
    N: int
    a: np.ndarray
    c: np.ndarray
    kind: str  # "shift" for the truncated infinite model, "character" for w=e


def build_rep_su2(q: float, t: float, N: int, element: str = "s") -> TruncatedRep:
    """Truncated generator matrices of quantized SU(2).

    With element "s" (the nonidentity reflection) the infinite-dimensional
    model is cut to basis e_0..e_{N-1}: a is the weighted down-shift
    a[n-1, n] = sqrt(1 - q^(2n)) and c the diagonal e^{it} q^n.  With
    element "e" the 1x1 character model a = e^{it}, c = 0 is returned and
    N is ignored.
    """
    if not 0.0 < q < 1.0:
        raise InputError("q must lie strictly between 0 and 1")
    if element == "e":
        a = np.array([[np.exp(1j * t)]], dtype=complex)
        c = np.zeros((1, 1), dtype=complex)
        return TruncatedRep(q, t, 1, a, c, "character")
    if element != "s":
        raise InputError(f"element must be 's' or 'e', got {element!r}")
    if N < 4:
        raise InputError("truncation N must be at least 4")
    a = np.zeros((N, N), dtype=complex)
    for n in range(1, N):
        a[n - 1, n] = math.sqrt(1.0 - q ** (2 * n))
    phase = np.exp(1j * t)
    c = np.diag([phase * q**n for n in range(N)]).astype(complex)
    return TruncatedRep(q, t, N, a, c, "shift")


_RELATION_NAMES = (
    "ac=qca",
    "ac*=qc*a",
    "cc*=c*c",
    "a*a+c*c=1",
    "aa*+q^2cc*=1",
)


def _relation_matrices(rep: TruncatedRep):
    a, c, q = rep.a, rep.c, rep.q
    a_s = a.conj().T
    c_s = c.conj().T
    eye = np.eye(rep.N, dtype=complex)
    return {
        "ac=qca": a @ c - q * (c @ a),
        "ac*=qc*a": a @ c_s - q * (c_s @ a),
        "cc*=c*c": c @ c_s - c_s @ c,
        "a*a+c*c=1": a_s @ a + c_s @ c - eye,
        "aa*+q^2cc*=1": a @ a_s + q * q * (c @ c_s) - eye,
    }


def relation_residuals(rep: TruncatedRep) -> dict:
    """Max-entry residuals of the five relations, interior and full.

    The interior window drops the last row and column, where the
    truncation makes a a* + q^2 c c* fall short of the identity by an
    order-one amount; that boundary defect is reported separately.
    """
    residuals = _relation_matrices(rep)
    per_relation = {}
    interior_max = 0.0
    full_max = 0.0
    for name, mat in residuals.items():
        full = float(np.max(np.abs(mat))) if mat.size else 0.0
        window = mat[:-1, :-1]
        interior = float(np.max(np.abs(window))) if window.size else 0.0
        per_relation[name] = {"interior": interior, "full": full}
        interior_max = max(interior_max, interior)
        full_max = max(full_max, full)
    return {
        "interior": interior_max,
        "boundary": full_max,
        "relations": per_relation,
        "N": rep.N,
        "q": rep.q,
        "kind": rep.kind,
    }


def character_constraints(q: float) -> dict:
    """Constraints on 1-dimensional representations a -> alpha, c -> gamma.

    Subtracting the two sphere relations leaves (1 - q^2)|gamma|^2 = 0, so
    away from q = 1 every character kills c and sends a to the unit
    circle: the character space is the torus.  At q = 1 the coefficient
    degenerates and the verdict is inconclusive.
    """
    if not 0.0 < q <= 1.0:
        raise InputError("q must lie in (0, 1]")
    coefficient = 1.0 - q * q
    if coefficient == 0.0:
        return {
            "verdict": "inconclusive",
            "coefficient": 0.0,
            "reason": "1 - q^2 vanishes; the constraint no longer forces gamma = 0",
        }
    return {
        "verdict": "pass",
        "coefficient": coefficient,
        "gamma": 0.0,
        "alpha_modulus": 1.0,
        "derivation": [
            "(a*a + c*c - 1) - (aa* + q^2 cc* - 1) = (1 - q^2)|gamma|^2 for scalars",
            "coefficient nonzero, so gamma = 0",
            "a*a + c*c = 1 then reads |alpha|^2 = 1",
        ],
    }


# ---------------------------------------------------------------------------
# joint-kernel faithfulness witness


def pbw_monomials(degree: int):
    """PBW exponent triples: (sign, j, k, l) for a^j c^k c*^l, j+k+l <= d.

    sign "+" uses powers of a, sign "-" powers of a*; the a*-family is
    listed only for j >= 1 since j = 0 coincides with the a-family.
    """
    if degree < 0:
        raise InputError("degree must be nonnegative")
    out = []
    for j in range(degree + 1):
        for k in range(degree + 1 - j):
            for l in range(degree + 1 - j - k):
                out.append(("+", j, k, l))
                if j >= 1:
                    out.append(("-", j, k, l))
    return out


def _monomial_matrix(rep: TruncatedRep, sign: str, j: int, k: int, l: int):
    a = rep.a if sign == "+" else rep.a.conj().T
    c = rep.c
    c_s = rep.c.conj().T
    out = np.eye(rep.N, dtype=complex)
    for _ in range(j):
        out = out @ a
    for _ in range(k):
        out = out @ c
    for _ in range(l):
        out = out @ c_s
    return out


def joint_kernel_rank(
    q: float,
    degree: int = 2,
    t_samples: int = 5,
    N: int = 16,
    include_infinite: bool = True,
) -> dict:
    """Numerical rank of the stacked monomial evaluations.

    Rows are the PBW monomials of degree <= `degree`; the columns
    concatenate, for each sampled angle, the flattened truncated
    representation image and the character value.  Full rank is the
    desk-scale faithfulness witness; dropping the infinite-dimensional
    representations (include_infinite=False) leaves the characters, which
    kill every monomial containing c, so the rank collapses.
    """
    if degree > 4:
        raise InputError("degree is capped at 4")
    if t_samples < 3 and include_infinite:
        raise InputError("need at least 3 torus samples")
    if t_samples < 1:
        raise InputError("need at least 1 torus sample")
    monomials = pbw_monomials(degree)
    rows = []
    angles = [2.0 * math.pi * i / t_samples for i in range(t_samples)]
    reps = [build_rep_su2(q, t, N) for t in angles] if include_infinite else []
    for sign, j, k, l in monomials:
        blocks = []
        for rep in reps:
            blocks.append(_monomial_matrix(rep, sign, j, k, l).ravel())
        for t in angles:
            alpha = np.exp(1j * t) if sign == "+" else np.exp(-1j * t)
            value = alpha**j if k == 0 and l == 0 else 0.0
            blocks.append(np.array([value], dtype=complex))
        rows.append(np.concatenate(blocks))
    matrix = np.vstack(rows)
    rank = int(np.linalg.matrix_rank(matrix))
    return {
        "rank": rank,
        "monomials": len(monomials),
        "full": rank == len(monomials),
        "degree": degree,
        "t_samples": t_samples,
        "N": N,
        "q": q,
        "include_infinite": include_infinite,
    }
