from fractions import Fraction

import pytest

from spinpic.divisors import LAMBDA, BasisContext, DivisorClass, alpha_residue, divisors, gamma, mu
from spinpic.errors import InvariantViolation, UsageError
from spinpic.relations import (
    Origin,
    PairingSymbol,
    ProofTrace,
    Relation,
    TableRow,
    bis_relation,
    corollary_table,
    derive_main_via_deligne,
    main_relation,
    main_relation_class,
    mu_cross_relation,
    open_locus_relation,
    pullback_relation,
    render_row,
    table_latex,
)
from spinpic.table_data import PRINTED_ROWS, parse_row, parse_side

from oracles import oracle_main_relation


def rel(ctx, terms):
    return Relation(DivisorClass(ctx, terms), Origin.TABLE)


def test_main_relation_r2():
    ctx = BasisContext(2)
    assert main_relation(ctx, 2).same_as(rel(ctx, {gamma(0): 1, LAMBDA: -4, mu(2): -8}))


def test_main_relation_r4_s2():
    ctx = BasisContext(4)
    assert main_relation(ctx, 2).same_as(rel(ctx, {gamma(0): 1, gamma(2): 2, LAMBDA: -4, mu(2): -8}))


def test_main_relation_r5():
    ctx = BasisContext(5)
    want = {LAMBDA: 2, mu(5): -50, gamma(0): 4, gamma(2): -10, alpha_residue(2): -10,
            alpha_residue(4): -10, alpha_residue(3): 4}
    assert main_relation(ctx, 5).same_as(rel(ctx, want))


def test_normalization_first_coefficient_positive():
    for r in range(2, 13):
        for s in divisors(r)[1:]:
            first = next(iter(main_relation(BasisContext(r), s).cls.items()))
            assert first[1] > 0


@pytest.mark.parametrize("r", range(2, 13))
def test_main_relation_matches_oracle(r):
    for g in range(2, 20):
        ctx = BasisContext(r, g)
        for s in divisors(r):
            got = {(gen.kind, gen.index): c for gen, c in main_relation_class(ctx, s).items()}
            assert got == oracle_main_relation(r, s, g)


def test_bis_examples():
    ctx = BasisContext(3)
    assert bis_relation(ctx, 3).same_as(rel(ctx, {LAMBDA: -6, mu(3): -18, gamma(0): 2, alpha_residue(2): 2}))
    ctx = BasisContext(2)
    assert bis_relation(ctx, 2).same_as(rel(ctx, {gamma(0): 1, LAMBDA: -4, mu(2): -8}))


@pytest.mark.parametrize("r", range(2, 13))
def test_bis_equals_main(r):
    for ctx in (BasisContext(r), BasisContext(r, 2 * r + 1)):
        for s in divisors(r)[1:]:
            assert bis_relation(ctx, s).same_as(main_relation(ctx, s))


def test_open_locus_examples():
    assert open_locus_relation(2, 2).same_as(rel(BasisContext(2), {mu(2): 8, LAMBDA: 4}))
    assert open_locus_relation(6, 6).same_as(rel(BasisContext(6), {mu(6): 72, LAMBDA: -12}))
    assert mu_cross_relation(4, 2).same_as(rel(BasisContext(4), {mu(4): -64, mu(2): 16}))


@pytest.mark.parametrize("r", range(2, 13))
def test_open_locus_is_boundary_free_part(r):
    ctx = BasisContext(r)
    for s in divisors(r)[1:]:
        taut = main_relation(ctx, s).cls.tautological_part()
        assert Relation(taut, Origin.OPEN_LOCUS).same_as(open_locus_relation(r, s))


@pytest.mark.parametrize("r", range(3, 13))
def test_mu_cross_is_lambda_elimination(r):
    ctx = BasisContext(r)
    row_r = open_locus_relation(r, r).cls
    for s in divisors(r)[1:-1]:
        row_s = open_locus_relation(r, s).cls
        a, b = row_r[LAMBDA], row_s[LAMBDA]
        combo = b * row_r - a * row_s
        assert combo[LAMBDA] == 0
        cross = mu_cross_relation(r, s).cls
        # both are multiples of the same primitive vector
        assert combo[mu(r)] * cross[mu(s)] == combo[mu(s)] * cross[mu(r)]
        assert not combo.is_zero() or cross.is_zero()


@pytest.mark.parametrize("r", range(2, 13))
def test_relation_pullback_coherence(r):
    for ctx in (BasisContext(r), BasisContext(r, 13)):
        for s in divisors(r):
            pulled = pullback_relation(ctx, main_relation(ctx.level(s), s))
            assert pulled.same_as(main_relation(ctx, s))


@pytest.mark.parametrize("s", range(2, 13))
def test_special_residues_have_zero_sigma(s):
    cls = main_relation(BasisContext(s), s).cls
    for k in {0, 1, s // 2, s // 2 + 1} if s % 2 == 0 else {0, 1}:
        assert cls[alpha_residue(k % s)] == 0


def test_deligne_r2_trace():
    ctx = BasisContext(2)
    derived, trace = derive_main_via_deligne(ctx, 2)
    assert derived.same_as(rel(ctx, {gamma(0): 1, LAMBDA: -4, mu(2): -8}))
    assert [st.axiom for st in trace.steps] == ["A4", "A1", "A2", "A3"]
    assert not any(isinstance(k, PairingSymbol) for k in trace.steps[-1].identity)


def test_deligne_s1_is_trivial():
    derived, _ = derive_main_via_deligne(BasisContext(6), 1)
    assert derived.cls.is_zero()


@pytest.mark.parametrize("r", range(2, 13))
def test_deligne_matches_main(r):
    ctx = BasisContext(r)
    for s in divisors(r):
        derived, trace = derive_main_via_deligne(ctx, s)
        assert derived.same_as(main_relation(ctx, s))
        again = ProofTrace.from_dict(trace.to_dict())
        again.validate()
        assert again.final_class() == trace.final_class()


def test_trace_validation_catches_tampering():
    _, trace = derive_main_via_deligne(BasisContext(4), 4)
    step = trace.steps[1]
    bad = dict(step.identity)
    bad[LAMBDA] = bad.get(LAMBDA, 0) + 1
    trace.steps[1] = type(step)(step.description, bad, step.axiom, step.multiplier)
    with pytest.raises(InvariantViolation):
        trace.validate()


def test_trace_validation_catches_fractional_result():
    _, trace = derive_main_via_deligne(BasisContext(3), 3)
    last = trace.steps[-1]
    halved = {k: v / 2 for k, v in last.identity.items()}
    trace.steps.append(type(last)("halve", halved, last.axiom, Fraction(0)))
    with pytest.raises(InvariantViolation):
        trace.validate()


def test_parse_side_groups():
    got = parse_side(r"-6(\gamma_0+\sigma_4) + 28 (\gamma_2 + \sigma_{3})")
    assert got == {gamma(0): -6, alpha_residue(4): -6, gamma(2): 28, alpha_residue(3): 28}
    with pytest.raises(UsageError):
        parse_side(r"2\beta_1")


def test_parse_row_r2():
    ctx = BasisContext(2)
    assert parse_row(ctx, PRINTED_ROWS[2, 2]) == DivisorClass(ctx, {LAMBDA: 4, mu(2): 8, gamma(0): -1})


@pytest.mark.parametrize("r", range(2, 8))
def test_table_rows_match(r):
    rows = corollary_table(r)
    assert [row.s for row in rows] == sorted(divisors(r)[1:], reverse=True)
    for row in rows:
        assert row.printed is not None and row.errata is None
        assert row.derived.same_as(row.printed)


def test_table_r8_errata():
    rows = {row.s: row for row in corollary_table(8)}
    assert rows[8].errata is None
    assert "μ^{1/4}" in rows[4].errata and "μ^{1/2}" in rows[2].errata
    assert render_row(rows[4].derived.cls, 4) == "4λ + 32μ^{1/4} = 3γ_0 - 4γ_2 + 6γ_4"
    assert render_row(rows[2].derived.cls, 2) == "4λ + 8μ^{1/2} = γ_0 + 4γ_2 + 2γ_4"
    # the derived rows are the printed ones with the sign of mu flipped
    for s in (4, 2):
        fixed = rows[s].printed.cls + DivisorClass(BasisContext(8), {mu(s): 2 * 2 * s * s})
        assert Relation(fixed, Origin.TABLE).same_as(rows[s].derived)


def test_table_rows_beyond_printed():
    rows = corollary_table(9)
    assert all(row.printed is None and row.errata is None for row in rows)


def test_render_examples():
    rows = {row.s: row for row in corollary_table(6)}
    assert render_row(rows[6].derived.cls, 6) == "12λ - 72μ^{1/6} = -5γ_0 + 9γ_2 + 8(γ_3 + σ_2 + σ_5)"
    assert render_row(rows[2].derived.cls, 2, latex=True) == r"4\lambda + 8\mu^{1/2} = \gamma_{0} + 3\gamma_{2}"


def test_table_latex_block():
    text = table_latex(corollary_table(4))
    assert text.splitlines()[0] == r"\begin{array}{|l|rcl|}"
    assert r"r=4 & 4\lambda + 32\mu^{1/4} & = & 3\gamma_{0} - 2\gamma_{2} \\" in text


def test_serialization_roundtrip():
    for r in range(2, 9):
        for row in corollary_table(r):
            assert TableRow.from_dict(row.to_dict()) == row
        for s in divisors(r)[1:]:
            for ctx in (BasisContext(r), BasisContext(r, r + 1)):
                x = main_relation(ctx, s)
                assert Relation.from_dict(x.to_dict()) == x


def test_bad_level_rejected():
    with pytest.raises(UsageError):
        main_relation(BasisContext(6), 4)
    with pytest.raises(UsageError):
        corollary_table(1)
