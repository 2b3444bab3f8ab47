"""Exact geometric-quantization checks on a flat phase space.

The model is R^{2n} with coordinates q1..qn, p1..pn, symplectic form
``omega = sum dq_i wedge dp_i`` and Poisson bracket fixed by
``{q_i, p_i} = 1``.  Polynomials carry coefficients that are
polynomials in a formal ``hbar`` over the Gaussian rationals, so every
identity below is decided exactly.

The quantization rule assigns to a polynomial observable f the operator

    Q(f) = f + (hbar/i) * L_{xi_f} + alpha(xi_f)

with ``xi_f`` the Hamiltonian field of f and ``alpha`` a polynomial
one-form whose curvature should satisfy ``d alpha = -omega``.  The
bracket-compatibility residual ``Q({f,g}) - (i/hbar)[Q(f), Q(g)]``
vanishes exactly when alpha is admissible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .exactnum import GaussRational, HbarPoly
from .liealg import InputError, LieAlgebra

__all__ = [
    "Poly",
    "PolyOneForm",
    "PolyDiffOp",
    "SymplecticModel",
    "hamiltonian_field",
    "poisson",
    "quantize_op",
    "check_curvature",
    "check_dirac",
    "action_cocycle",
    "parse_poly",
    "parse_one_form",
]


def _hp(x) -> HbarPoly:
    if isinstance(x, HbarPoly):
        return x
    if isinstance(x, GaussRational):
        return HbarPoly.constant(x)
    return HbarPoly.constant(GaussRational.from_rational(Fraction(x)))


MINUS_I_HBAR = HbarPoly.from_dict({1: GaussRational(Fraction(0), Fraction(-1))})
I_CONST = HbarPoly.constant(GaussRational.i())


@dataclass(frozen=True)
class SymplecticModel:
    """Flat phase space R^{2n}; variable order is q1..qn, p1..pn."""

    n: int

    @property
    def nvars(self) -> int:
        return 2 * self.n

    def var_name(self, idx: int) -> str:
        if idx < self.n:
            return f"q{idx + 1}"
        return f"p{idx - self.n + 1}"

    def var_index(self, name: str) -> int:
        m = re.fullmatch(r"([qp])([0-9]+)", name)
        if not m:
            raise InputError(f"unknown variable {name!r}")
        k = int(m.group(2))
        if not 1 <= k <= self.n:
            raise InputError(f"variable {name!r} outside model with n={self.n}")
        return k - 1 if m.group(1) == "q" else self.n + k - 1


class Poly:
    """Polynomial in the phase-space variables over HbarPoly scalars."""

    __slots__ = ("model", "terms")

    def __init__(self, model: SymplecticModel, terms: Optional[dict] = None):
        self.model = model
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _hp(coeff)
                if not coeff.is_zero():
                    clean[tuple(mono)] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(model: SymplecticModel) -> "Poly":
        return Poly(model)

    @staticmethod
    def constant(model: SymplecticModel, c) -> "Poly":
        return Poly(model, {(0,) * model.nvars: _hp(c)})

    @staticmethod
    def variable(model: SymplecticModel, idx: int) -> "Poly":
        mono = tuple(1 if t == idx else 0 for t in range(model.nvars))
        return Poly(model, {mono: _hp(1)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, HbarPoly.zero()) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Poly(self.model, out)

    def __neg__(self) -> "Poly":
        return Poly(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction, GaussRational, HbarPoly)):
            c = _hp(other)
            return Poly(self.model, {m: cc * c for m, cc in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, HbarPoly.zero()) + c1 * c2
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly(self.model, out)

    __rmul__ = __mul__

    def diff(self, idx: int) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e == 0:
                continue
            m2 = tuple(x - 1 if t == idx else x for t, x in enumerate(m))
            out[m2] = out.get(m2, HbarPoly.zero()) + c * e
        return Poly(self.model, out)

    def divide_by_hbar(self) -> "Poly":
        return Poly(
            self.model, {m: c.divide_by_hbar() for m, c in self.terms.items()}
        )

    def hbar_free(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mm: (sum(mm), mm), reverse=True):
            c = self.terms[m]
            factors = []
            for idx, e in enumerate(m):
                if e == 1:
                    factors.append(self.model.var_name(idx))
                elif e > 1:
                    factors.append(f"{self.model.var_name(idx)}^{e}")
            body = "*".join(factors)
            if c.is_constant():
                cs = str(c.constant_part())
                simple = not ("+" in cs or "-" in cs[1:])
            else:
                cs = str(c)
                simple = False
            if not body:
                parts.append(cs if simple else f"({cs})")
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                parts.append(f"{cs}*{body}" if simple else f"({cs})*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass(frozen=True)
class PolyOneForm:
    """One-form sum_j comps[j] d(x_j) in the model's variable order."""

    model: SymplecticModel
    comps: tuple  # tuple of Poly, length 2n

    @staticmethod
    def zero(model: SymplecticModel) -> "PolyOneForm":
        return PolyOneForm(model, tuple(Poly.zero(model) for _ in range(model.nvars)))

    def evaluate_on(self, field: "VectorField") -> Poly:
        out = Poly.zero(self.model)
        for a, x in zip(self.comps, field.comps):
            out = out + a * x
        return out

    def __str__(self) -> str:
        parts = [
            f"({c})*d{self.model.var_name(j)}"
            for j, c in enumerate(self.comps)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class VectorField:
    """Vector field sum_j comps[j] d/d(x_j)."""

    model: SymplecticModel
    comps: tuple

    def apply(self, g: Poly) -> Poly:
        out = Poly.zero(self.model)
        for j, comp in enumerate(self.comps):
            if not comp.is_zero():
                out = out + comp * g.diff(j)
        return out

    def __str__(self) -> str:
        parts = [
            f"({c})*d/d{self.model.var_name(j)}"
            for j, c in enumerate(self.comps)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"


class PolyDiffOp:
    """Differential operator in normal form: coefficients left, derivatives right.

    Stored as a map from derivative multi-indices to polynomial
    coefficients; like terms merge and zero coefficients are dropped,
    so equality of normal forms is structural equality.
    """

    __slots__ = ("model", "terms")

    def __init__(self, model: SymplecticModel, terms: Optional[dict] = None):
        self.model = model
        clean = {}
        if terms:
            for der, coeff in terms.items():
                if not coeff.is_zero():
                    clean[tuple(der)] = coeff
        self.terms = clean

    @staticmethod
    def zero(model: SymplecticModel) -> "PolyDiffOp":
        return PolyDiffOp(model)

    @staticmethod
    def multiplication(f: Poly) -> "PolyDiffOp":
        return PolyDiffOp(f.model, {(0,) * f.model.nvars: f})

    @staticmethod
    def derivative(model: SymplecticModel, idx: int) -> "PolyDiffOp":
        der = tuple(1 if t == idx else 0 for t in range(model.nvars))
        return PolyDiffOp(model, {der: Poly.constant(model, 1)})

    @staticmethod
    def identity(model: SymplecticModel) -> "PolyDiffOp":
        return PolyDiffOp.multiplication(Poly.constant(model, 1))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyDiffOp) and self.terms == other.terms

    def __add__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        out = dict(self.terms)
        for d, c in other.terms.items():
            s = out.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        return PolyDiffOp(self.model, out)

    def __neg__(self) -> "PolyDiffOp":
        return PolyDiffOp(self.model, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        return self + (-other)

    def scale(self, c) -> "PolyDiffOp":
        c = _hp(c)
        return PolyDiffOp(self.model, {d: f * c for d, f in self.terms.items()})

    def __matmul__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        """Composition self after other, renormalized by the Leibniz rule."""
        model = self.model
        out = PolyDiffOp.zero(model)
        for beta, f in self.terms.items():
            for gamma, g in other.terms.items():
                # D^beta (g D^gamma h) expands over mu <= beta
                for mu in _submulti(beta):
                    coeff = 1
                    for b, m in zip(beta, mu):
                        coeff *= comb(b, m)
                    dg = g
                    for idx, m in enumerate(mu):
                        for _ in range(m):
                            dg = dg.diff(idx)
                        if dg.is_zero():
                            break
                    if dg.is_zero():
                        continue
                    der = tuple(b - m + c for b, m, c in zip(beta, mu, gamma))
                    term = PolyDiffOp(model, {der: (f * dg) * coeff})
                    out = out + term
        return out

    def commutator(self, other: "PolyDiffOp") -> "PolyDiffOp":
        return (self @ other) - (other @ self)

    def apply(self, g: Poly) -> Poly:
        out = Poly.zero(self.model)
        for der, f in self.terms.items():
            dg = g
            for idx, e in enumerate(der):
                for _ in range(e):
                    dg = dg.diff(idx)
                if dg.is_zero():
                    break
            if not dg.is_zero():
                out = out + f * dg
        return out

    def hbar_divisible(self) -> bool:
        return all(
            coeff.coefficient(0).is_zero()
            for f in self.terms.values()
            for _, coeff in f.terms.items()
        )

    def divide_by_hbar(self) -> "PolyDiffOp":
        return PolyDiffOp(
            self.model, {d: f.divide_by_hbar() for d, f in self.terms.items()}
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for der in sorted(self.terms, key=lambda dd: (sum(dd), dd)):
            f = self.terms[der]
            ds = []
            for idx, e in enumerate(der):
                name = self.model.var_name(idx)
                if e == 1:
                    ds.append(f"d/d{name}")
                elif e > 1:
                    ds.append(f"d^{e}/d{name}^{e}")
            body = " ".join(ds)
            if body:
                parts.append(f"({f}) {body}")
            else:
                parts.append(f"({f})")
        return " + ".join(parts)

    __repr__ = __str__


def _submulti(beta):
    """All multi-indices mu with 0 <= mu <= beta, componentwise."""
    if not beta:
        yield ()
        return
    head, rest = beta[0], beta[1:]
    for tail in _submulti(rest):
        for m in range(head + 1):
            yield (m,) + tail


# ---------------------------------------------------------------------------


def hamiltonian_field(f: Poly) -> VectorField:
    """Field xi_f with i(xi_f) omega + df = 0.

    Componentwise: -df/dp_i along d/dq_i and +df/dq_i along d/dp_i,
    which pins {q_i, p_i} = +1.
    """
    model = f.model
    comps = []
    for i in range(model.n):
        comps.append(-f.diff(model.n + i))
    for i in range(model.n):
        comps.append(f.diff(i))
    return VectorField(model, tuple(comps))


def poisson(f: Poly, g: Poly) -> Poly:
    """Poisson bracket {f, g} := xi_f(g)."""
    return hamiltonian_field(f).apply(g)


def quantize_op(f: Poly, alpha: PolyOneForm) -> PolyDiffOp:
    """Operator f + (hbar/i) L_{xi_f} + alpha(xi_f) in normal form."""
    model = f.model
    xi = hamiltonian_field(f)
    op = PolyDiffOp.multiplication(f + alpha.evaluate_on(xi))
    for j, comp in enumerate(xi.comps):
        if not comp.is_zero():
            op = op + PolyDiffOp(
                model,
                {
                    tuple(1 if t == j else 0 for t in range(model.nvars)): comp
                    * MINUS_I_HBAR
                },
            )
    return op


def check_curvature(alpha: PolyOneForm) -> dict:
    """Verify d(alpha) = -omega exactly.

    The 2-form components (d alpha)_{ab} = d_a alpha_b - d_b alpha_a
    over pairs a < b must equal -1 on conjugate pairs (q_i, p_i) and 0
    elsewhere.
    """
    model = alpha.model
    deviations = {}
    for a in range(model.nvars):
        for b in range(a + 1, model.nvars):
            d_ab = alpha.comps[b].diff(a) - alpha.comps[a].diff(b)
            expected = (
                Poly.constant(model, -1)
                if (b == a + model.n and a < model.n)
                else Poly.zero(model)
            )
            gap = d_ab - expected
            if not gap.is_zero():
                deviations[f"d{model.var_name(a)}^d{model.var_name(b)}"] = str(gap)
    return {"passes": not deviations, "deviations": deviations}


def check_dirac(f: Poly, g: Poly, alpha: PolyOneForm) -> dict:
    """Residual of Q({f,g}) = (i/hbar) [Q(f), Q(g)], exactly.

    The commutator must be divisible by hbar before the comparison; a
    failure there signals an inconsistent alpha convention and raises.
    """
    qf = quantize_op(f, alpha)
    qg = quantize_op(g, alpha)
    comm = qf.commutator(qg)
    if not comm.hbar_divisible():
        raise RuntimeError(
            "internal error: commutator of quantized operators not divisible by hbar"
        )
    rhs = comm.divide_by_hbar().scale(I_CONST)
    lhs = quantize_op(poisson(f, g), alpha)
    residual = lhs - rhs
    return {"passes": residual.is_zero(), "residual": str(residual)}


def action_cocycle(L: LieAlgebra, moment: Sequence[Poly]) -> dict:
    """Cocycle table c(X_a, X_b) = {f_a, f_b} - f_{[X_a, X_b]}.

    ``moment`` assigns a polynomial f_a to each basis element.  The
    action is flat when the whole table vanishes identically.
    """
    if len(moment) != L.dim:
        raise InputError("moment map must assign one polynomial per basis element")
    model = moment[0].model
    table = {}
    flat = True
    for a in range(L.dim):
        for b in range(L.dim):
            if a == b:
                continue
            f_bracket = Poly.zero(model)
            for k in range(L.dim):
                if L.c[a][b][k] != 0:
                    f_bracket = f_bracket + moment[k] * Fraction(L.c[a][b][k])
            c_ab = poisson(moment[a], moment[b]) - f_bracket
            if not c_ab.is_zero():
                flat = False
            if a < b:
                table[f"({L.basis[a]},{L.basis[b]})"] = str(c_ab)
    return {"flat": flat, "table": table}


# ---------------------------------------------------------------------------
# Parsing.  Grammar, with the usual precedence:
#   expr   := ['+'|'-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ['^' integer]
#   atom   := rational | 'i' | 'hbar' | variable | '(' expr ')'
# One-forms additionally allow 'dq<k>' / 'dp<k>' atoms; each additive
# term must contain exactly one of them.

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<name>d?[qp][0-9]+|hbar|i)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse {text!r} at position {pos}")
        if m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, model: SymplecticModel, allow_dvar: bool):
        self.tokens = tokens
        self.k = 0
        self.model = model
        self.allow_dvar = allow_dvar

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise InputError(f"expected {op!r}")

    # each parse method returns (Poly, dvar_index_or_None)

    def parse_expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        poly, dvar = self.parse_term()
        if sign < 0:
            poly = -poly
        acc = [(poly, dvar)]
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                p, d = self.parse_term()
                acc.append(((-p) if val == "-" else p, d))
            else:
                break
        if self.allow_dvar:
            return acc
        if any(d is not None for _, d in acc):
            raise InputError("differential symbol not allowed in a polynomial")
        total = Poly.zero(self.model)
        for p, _ in acc:
            total = total + p
        return [(total, None)]

    def parse_term(self):
        poly, dvar = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p, d = self.parse_factor()
                if d is not None:
                    if dvar is not None:
                        raise InputError("two differential symbols in one term")
                    dvar = d
                    poly = poly * p
                else:
                    poly = poly * p
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                # implicit product, e.g. "2 q1"
                p, d = self.parse_factor()
                if d is not None:
                    if dvar is not None:
                        raise InputError("two differential symbols in one term")
                    dvar = d
                poly = poly * p
            else:
                return poly, dvar

    def parse_factor(self):
        poly, dvar = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num" or v2.denominator != 1:
                raise InputError("exponent must be an integer")
            if dvar is not None:
                raise InputError("cannot raise a differential to a power")
            e = int(v2)
            out = Poly.constant(self.model, 1)
            for _ in range(e):
                out = out * poly
            return out, None
        return poly, dvar

    def parse_atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.constant(self.model, Fraction(val)), None
        if kind == "name":
            if val == "i":
                return Poly.constant(self.model, GaussRational.i()), None
            if val == "hbar":
                return Poly.constant(self.model, HbarPoly.hbar()), None
            if val.startswith("d") and self.allow_dvar:
                return Poly.constant(self.model, 1), self.model.var_index(val[1:])
            if val.startswith("d"):
                raise InputError("differential symbol not allowed in a polynomial")
            return Poly.variable(self.model, self.model.var_index(val)), None
        if kind == "op" and val == "(":
            acc = self.parse_expr()
            self.expect_op(")")
            if self.allow_dvar and any(d is not None for _, d in acc):
                raise InputError("differential symbols cannot be grouped")
            total = Poly.zero(self.model)
            for p, _ in acc:
                total = total + p
            return total, None
        raise InputError(f"unexpected token {val!r}")


def parse_poly(text: str, model: SymplecticModel) -> Poly:
    """Parse a polynomial like ``"q1^2*p1 - 3/2*q1 + i*hbar"``."""
    parser = _Parser(_tokenize(text), model, allow_dvar=False)
    acc = parser.parse_expr()
    if parser.k != len(parser.tokens):
        raise InputError(f"trailing input in {text!r}")
    return acc[0][0]


def parse_one_form(text: str, model: SymplecticModel) -> PolyOneForm:
    """Parse a one-form like ``"p1*dq1"`` or ``"2*p1*dq1 - q1*dp1"``."""
    parser = _Parser(_tokenize(text), model, allow_dvar=True)
    acc = parser.parse_expr()
    if parser.k != len(parser.tokens):
        raise InputError(f"trailing input in {text!r}")
    comps = [Poly.zero(model) for _ in range(model.nvars)]
    for poly, dvar in acc:
        if dvar is None:
            if poly.is_zero():
                continue
            raise InputError("every one-form term needs exactly one dq/dp symbol")
        comps[dvar] = comps[dvar] + poly
    return PolyOneForm(model, tuple(comps))
