"""Algebra fixtures, traces, cyclic operators, homology tables, entirety."""

import json
import math
import random
from fractions import Fraction

import pytest

from orbitkit.cyclic import (
    Chain,
    FinAlgebra,
    NormSequence,
    Trace,
    apply_operator,
    chain_pairing,
    direct_sum,
    dual_numbers,
    entirety,
    gauss_field,
    gauss_field_power,
    hp_homology,
    matrix_algebra,
    matrix_amplification,
    morita_check,
    normalized_matrix_trace,
    parse_norm_pattern,
    tensor_product,
    verify_trace,
)
from orbitkit.exactnum import ExactMatrix, GaussRational
from orbitkit.liealg import InputError

ONE = GaussRational.one()
I = GaussRational.i()


def _unit_chain(A, level, word):
    return Chain.from_words(A, level, {word: ONE})


# ---------------------------------------------------------------------------
# algebras and validation


def test_fixture_algebras_validate():
    for A in (
        gauss_field(),
        dual_numbers(),
        gauss_field_power(3),
        matrix_algebra(2),
        direct_sum(gauss_field(), dual_numbers()),
        tensor_product(gauss_field(), dual_numbers()),
        matrix_amplification(gauss_field(), 2),
    ):
        A._validate()


def test_gauss_field_is_the_scalar_line():
    A = gauss_field()
    assert A.dim == 1
    assert A.mul_coords((I,), (I,)) == (-ONE,)


def test_dual_numbers_nilpotent():
    A = dual_numbers()
    eps = (GaussRational.zero(), ONE)
    assert all(v.is_zero() for v in A.mul_coords(eps, eps))


def test_matrix_units_multiply():
    A = matrix_algebra(2)
    # basis order e11, e12, e21, e22
    assert A.basis_product(1, 2) == ((0, ONE),)  # e12 e21 = e11
    assert A.basis_product(1, 1) == ()


def test_star_is_conjugate_linear():
    A = matrix_algebra(2)
    x = [GaussRational.zero()] * 4
    x[1] = I  # i e12
    starred = A.star_coords(tuple(x))
    assert starred[2] == -I  # -i e21
    assert all(starred[k].is_zero() for k in (0, 1, 3))


def test_validation_rejects_broken_unit():
    data = gauss_field().to_json()
    data["unit"] = [{"re": "0", "im": "0"}, {"re": "1", "im": "0"}]
    with pytest.raises(InputError):
        FinAlgebra.from_json(data)._validate()


def test_validation_rejects_broken_associativity():
    data = matrix_algebra(2).to_json()
    # e12 e21 = e22 breaks (e11 e12) e21 = e11 (e12 e21)
    zero = {"re": "0", "im": "0"}
    one = {"re": "1", "im": "0"}
    data["mult"][1][2] = [zero, zero, zero, one]
    with pytest.raises(InputError):
        FinAlgebra.from_json(data)._validate()


def test_validation_rejects_broken_star():
    data = gauss_field().to_json()
    # star(u) = iu is conjugate-linear but not an antihomomorphism here
    data["star"] = [
        [{"re": "1", "im": "0"}, {"re": "0", "im": "0"}],
        [{"re": "0", "im": "0"}, {"re": "0", "im": "1"}],
    ]
    with pytest.raises(InputError):
        FinAlgebra.from_json(data)._validate()


def test_algebra_json_round_trip():
    for A in (gauss_field(), matrix_algebra(2)):
        again = FinAlgebra.from_json(json.loads(json.dumps(A.to_json())))
        assert again == A


# ---------------------------------------------------------------------------
# traces


def test_normalized_matrix_trace_passes_all_axioms():
    report = verify_trace(matrix_algebra(2), normalized_matrix_trace(2))
    assert report["passed"]
    assert report["failures"] == []


def test_projection_trace_fails_exactly_faithfulness():
    A = gauss_field_power(2)
    coords = [GaussRational.zero()] * A.dim
    coords[0] = ONE  # tau = first component: unital, positive, tracial
    report = verify_trace(A, Trace(tuple(coords)))
    assert report["failures"] == ["faithful"]


def test_zero_trace_fails_normalization_and_faithfulness():
    A = gauss_field()
    report = verify_trace(A, Trace((GaussRational.zero(),) * A.dim))
    assert not report["passed"]
    assert "normalized" in report["failures"]
    assert "faithful" in report["failures"]


def test_trace_dimension_mismatch():
    with pytest.raises(InputError):
        verify_trace(gauss_field(), normalized_matrix_trace(2))


def test_trace_json_round_trip():
    tau = normalized_matrix_trace(3)
    assert Trace.from_json(tau.to_json()).coords == tau.coords


# ---------------------------------------------------------------------------
# chains and the five operators


def test_chain_from_words_and_coefficient():
    A = dual_numbers()
    x = Chain.from_words(A, 1, {(0, 1): I, (1, 0): ONE})
    assert x.coefficient((0, 1)) == I
    assert x.coefficient((1, 1)).is_zero()
    assert (x - x).is_zero()
    assert (x + x).coefficient((1, 0)) == ONE + ONE


def test_chain_coordinate_count_enforced():
    with pytest.raises(InputError):
        Chain(gauss_field(), 1, (GaussRational.zero(),) * 3)


def test_bprime_multiplies_down():
    A = matrix_algebra(2)
    x = _unit_chain(A, 1, (1, 2))  # e12 tensor e21
    out = apply_operator("b'", x)
    assert out.coefficient((0,)) == ONE  # e12 e21 = e11
    assert sum(1 for _ in out.nonzero_terms()) == 1


def test_b_on_matrix_units_gives_commutator():
    A = matrix_algebra(2)
    out = apply_operator("b", _unit_chain(A, 1, (1, 2)))
    assert out.coefficient((0,)) == ONE   # e11
    assert out.coefficient((3,)) == -ONE  # minus e22


def test_b_vanishes_on_level_one_of_commutative_algebra():
    A = gauss_field()
    rng = random.Random(0)
    for _ in range(10):
        x = Chain.random(A, 1, rng)
        assert apply_operator("b", x).is_zero()


def test_lambda_sign_and_symmetrizer_kill_symmetric_word():
    A = gauss_field()
    x = _unit_chain(A, 1, (0, 0))
    assert apply_operator("lambda", x) == -x
    assert apply_operator("N", x).is_zero()


def test_shift_collapses_front_product():
    A = matrix_algebra(2)
    out = apply_operator("S", _unit_chain(A, 2, (1, 2, 0)))
    # e12 e21 e11 = e11
    assert out.coefficient((0,)) == ONE


def test_operator_level_guards_and_aliases():
    A = gauss_field()
    with pytest.raises(InputError):
        apply_operator("b", Chain.zero(A, 0))
    with pytest.raises(InputError):
        apply_operator("S", Chain.zero(A, 1))
    with pytest.raises(InputError):
        apply_operator("frobenius", Chain.zero(A, 1))
    x = Chain.random(A, 2, random.Random(1))
    assert apply_operator("λ", x) == apply_operator("lambda", x)
    assert apply_operator("b'", x) == apply_operator("bprime", x)


def test_bicomplex_identities_exactly():
    rng = random.Random(7)
    for A in (gauss_field(), dual_numbers(), matrix_algebra(2)):
        for level in range(1, 5):
            for _ in range(8):
                x = Chain.random(A, level, rng)
                lam = apply_operator("lambda", x)
                n_of_x = apply_operator("N", x)
                assert apply_operator("N", x - lam).is_zero()
                assert (n_of_x - apply_operator("lambda", n_of_x)).is_zero()
                bx = apply_operator("b", x - lam)
                bprime = apply_operator("bprime", x)
                if level >= 2:
                    rhs = bprime - apply_operator("lambda", bprime)
                else:
                    rhs = Chain.zero(A, 0)  # rotation is trivial below
                assert (bx - rhs).is_zero()
                if level >= 2:
                    assert apply_operator("b", apply_operator("b", x)).is_zero()
                    assert apply_operator(
                        "bprime", apply_operator("bprime", x)
                    ).is_zero()


def test_adjoints_match_pairing():
    rng = random.Random(3)
    A = matrix_algebra(2)
    for kind, src, dst in (
        ("b", 2, 1),
        ("bprime", 2, 1),
        ("lambda", 2, 2),
        ("N", 2, 2),
        ("S", 3, 1),
    ):
        for _ in range(6):
            x = Chain.random(A, src, rng)
            y = Chain.random(A, dst, rng)
            lhs = chain_pairing(apply_operator(kind, x), y)
            rhs = chain_pairing(x, apply_operator(kind, y, adjoint=True))
            assert lhs == rhs


def test_boundary_columns_agree_with_operator_assembly():
    from orbitkit.cyclic import _column_terms

    A = dual_numbers()
    for n in (2, 3):
        for q in range(n + 1):
            p = n - q
            for flat in range(A.dim ** (q + 1)):
                word = tuple(
                    (flat // A.dim**k) % A.dim for k in reversed(range(q + 1))
                )
                vertical = Chain.zero(A, q - 1) if q >= 1 else None
                horizontal = Chain.zero(A, q)
                for qt, w, v in _column_terms(A, n, q, word):
                    coeff = (
                        GaussRational.from_rational(Fraction(v))
                        if not isinstance(v, GaussRational)
                        else v
                    )
                    term = Chain.from_words(A, qt, {w: coeff})
                    if qt == q - 1:
                        vertical = vertical + term
                    else:
                        horizontal = horizontal + term
                source = _unit_chain(A, q, word)
                if q >= 1:
                    expected = apply_operator("b" if p % 2 == 0 else "bprime", source)
                    if p % 2 == 1:
                        expected = -expected
                    assert vertical == expected
                if p >= 1:
                    if q == 0:
                        # rotation fixes a singleton, so 1 - lambda dies
                        # and the symmetrizer is the identity
                        expected = source if p % 2 == 0 else Chain.zero(A, 0)
                    elif p % 2 == 1:
                        expected = source - apply_operator("lambda", source)
                    else:
                        expected = apply_operator("N", source)
                    assert horizontal == expected


# ---------------------------------------------------------------------------
# an independent oracle: the quotient-by-rotations complex


def _coinvariant_basis(A, n):
    """Orbit representatives of rotation-with-sign, dropping killed classes."""
    step = -1 if n % 2 else 1
    reps = {}
    killed = set()
    for flat in range(A.dim ** (n + 1)):
        word = tuple((flat // A.dim**k) % A.dim for k in reversed(range(n + 1)))
        cur, sign = word, 1
        orbit = []
        for _ in range(n + 1):
            orbit.append((cur, sign))
            cur = (cur[n],) + cur[:n]
            sign *= step
        seen = {}
        dead = False
        for w, s in orbit:
            if w in seen and seen[w] != s:
                dead = True
                break
            seen[w] = s
        rep = min(seen)
        if dead:
            killed.add(rep)
        elif rep == word:
            reps[rep] = seen
    return [
        (rep, orbit_signs)
        for rep, orbit_signs in sorted(reps.items())
        if rep not in killed
    ]


def _induced_boundary_rank(A, n, src_basis, dst_basis):
    """Exact rank of b on rotation classes, level n -> n - 1."""
    if not src_basis or not dst_basis:
        return 0
    dst_index = {}
    for col, (rep, signs) in enumerate(dst_basis):
        for w, s in signs.items():
            dst_index[w] = (col, s)
    rows = []
    for rep, _ in src_basis:
        out = apply_operator("b", _unit_chain(A, n, rep))
        row = [GaussRational.zero()] * len(dst_basis)
        for w, v in out.nonzero_terms():
            if w in dst_index:
                col, s = dst_index[w]
                row[col] = row[col] + (v if s > 0 else -v)
        rows.append(row)
    return ExactMatrix.from_rows(rows).rank()


def _quotient_complex_hc(A, degrees):
    """Cyclic homology through the rotation-coinvariant complex."""
    top = max(degrees)
    bases = [_coinvariant_basis(A, n) for n in range(top + 2)]
    ranks = [0]
    for n in range(1, top + 2):
        ranks.append(_induced_boundary_rank(A, n, bases[n], bases[n - 1]))
    out = []
    for n in degrees:
        out.append(len(bases[n]) - ranks[n] - ranks[n + 1])
    return out


def test_quotient_complex_agrees_with_total_complex():
    table = hp_homology(gauss_field(), truncation=6)
    assert _quotient_complex_hc(gauss_field(), range(5)) == list(table.hc[:5])
    dual_table = hp_homology(dual_numbers(), truncation=4)
    assert _quotient_complex_hc(dual_numbers(), range(4)) == list(dual_table.hc)


# ---------------------------------------------------------------------------
# homology tables


def test_hp_gauss_field_frozen_values():
    report = hp_homology(gauss_field(), truncation=6)
    assert (report.hp0, report.hp1) == (1, 0)
    assert report.hc == (1, 0, 1, 0, 1, 0)
    assert report.stabilized
    assert report.previous == (1, 0)
    assert report.boundary_check == "full"


def test_hp_direct_sums_are_additive():
    assert hp_homology(gauss_field_power(2), truncation=4).hc == (2, 0, 2, 0)
    assert hp_homology(gauss_field_power(3), truncation=4).hc == (3, 0, 3, 0)


def test_hp_dual_numbers():
    report = hp_homology(dual_numbers(), truncation=4)
    assert report.hc == (2, 0, 2, 0)
    assert report.stabilized


def test_hp_matrix_algebra_matches_scalars():
    report = hp_homology(matrix_algebra(2), truncation=4)
    assert (report.hp0, report.hp1) == (1, 0)


def test_hp_realification_path():
    # u^2 = i forces Gaussian structure constants through the rank kit
    zero, one, i = GaussRational.zero(), ONE, I
    mult = (
        ((one, zero), (zero, one)),
        ((zero, one), (i, zero)),
    )
    A = FinAlgebra(
        dim=2,
        mult=mult,
        unit=(one, zero),
        star=((one, zero), (zero, i)),
        basis=("1", "u"),
    )
    A._validate()
    report = hp_homology(A, truncation=4)
    assert (report.hp0, report.hp1) == (2, 0)


def test_hp_truncation_guard():
    with pytest.raises(InputError):
        hp_homology(gauss_field(), truncation=1)


def test_tensor_square_of_dual_numbers_is_not_stabilized_at_four():
    A = tensor_product(dual_numbers(), dual_numbers())
    report = hp_homology(A, truncation=4)
    assert not report.stabilized
    assert report.hc == (4, 1, 5, 2)


def test_morita_scalars_to_two_by_two():
    verdict = morita_check(gauss_field(), 2, truncation=4)
    assert verdict["verdict"] == "pass"
    assert verdict["base"] == verdict["amplified"] == [1, 0]


def test_morita_matrix_base_at_reduced_truncation():
    # dim-16 amplification: truncation 4 keeps this in unit-test budget
    verdict = morita_check(matrix_algebra(2), 2, truncation=4)
    assert verdict["verdict"] == "pass"
    assert verdict["base"] == [1, 0]


def test_morita_reports_unstabilized_tables():
    A = tensor_product(dual_numbers(), dual_numbers())
    verdict = morita_check(A, 2, truncation=2)
    assert verdict["verdict"] == "not stabilized"
    assert not verdict["base_stabilized"]


def test_morita_amplification_guard():
    with pytest.raises(InputError):
        morita_check(gauss_field(), 1)


# ---------------------------------------------------------------------------
# entirety


def test_entire_verdicts_for_pinned_patterns():
    assert entirety(parse_norm_pattern("finite:1,2,3"))["verdict"] == "entire"
    assert entirety(parse_norm_pattern("1/fact"))["verdict"] == "entire"
    report = entirety(parse_norm_pattern("floor-half-fact/fact"))
    assert report["verdict"] == "not-entire"
    assert report["radius"] == "1"


def test_entire_growth_extremes():
    fast = entirety(parse_norm_pattern("fact"))
    assert fast["verdict"] == "not-entire"
    assert fast["radius"] == "0"
    tame = entirety(parse_norm_pattern("2^n/fact"))
    assert tame["verdict"] == "entire"


def test_entire_sampled_sequences_are_heuristic():
    decaying = NormSequence(
        "samples",
        values=tuple(Fraction(1, math.factorial(n) ** 2) for n in range(24)),
    )
    report = entirety(decaying)
    assert report["verdict"] == "entire"
    assert report["method"] == "numeric-horizon"
    assert report["heuristic"] is True
    short = NormSequence("samples", values=(Fraction(1), Fraction(2)))
    assert entirety(short)["verdict"] == "inconclusive"


def test_norm_pattern_errors():
    with pytest.raises(InputError):
        parse_norm_pattern("fact/fact/fact")
    with pytest.raises(InputError):
        parse_norm_pattern("gamma")
    with pytest.raises(InputError):
        entirety(parse_norm_pattern("1/fact"), horizon=4)
