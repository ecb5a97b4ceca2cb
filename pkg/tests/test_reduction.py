import pytest

from symprep.errors import NoNonTerminalWeight, WeylCapExceeded
from symprep.linalg import same_span
from symprep.reduction import (
    analyze,
    centralizer_levi,
    choose_nonterminal_weight,
    compute_gamma,
    molien_series,
    rank_complexity,
    reduce_step,
    reflection_degrees,
    run_reduction,
)
from symprep.reps import validate_symplectic_spec
from symprep.rootdata import build_root_datum, enumerate_weyl

from corpus import A1, A2, C2, T1, catalog


def test_choose_nonterminal_weight():
    assert choose_nonterminal_weight(
        validate_symplectic_spec(A1, [((1,), 2)])
    ) == (1,)
    assert choose_nonterminal_weight(
        validate_symplectic_spec(A2, [((1, 0), 1), ((0, 1), 1)])
    ) == (1, 0)
    assert choose_nonterminal_weight(
        validate_symplectic_spec(A1, [((3,), 1)])
    ) == (3,)
    with pytest.raises(NoNonTerminalWeight):
        choose_nonterminal_weight(validate_symplectic_spec(C2, [((1, 0), 1)]))


def test_reduce_step_examples():
    step, s = reduce_step(validate_symplectic_spec(A1, [((1,), 2)]), (1,))
    assert len(step.delta_u) == 1
    assert step.levi.rank == 0
    assert dict(step.s_weights) == {(1,): 1, (-1,): 1}

    step, s = reduce_step(
        validate_symplectic_spec(A2, [((1, 0), 1), ((0, 1), 1)]), (1, 0)
    )
    assert len(step.delta_u) == 2
    assert step.levi.factors == (("A", 1),)
    assert sum(dict(step.s_weights).values()) == 2

    step, s = reduce_step(validate_symplectic_spec(A1, [((3,), 1)]), (3,))
    assert dict(step.s_weights) == {(3,): 1, (-3,): 1}


def test_step_conservation_across_catalog():
    for name, (spec, _) in catalog().items():
        trace, td = run_reduction(spec)
        current = spec
        for step in trace:
            assert step.s_spec.dim == current.dim - 2 * len(step.delta_u)
            ws = dict(step.s_weights)
            assert ws == {tuple(-x for x in w): m for w, m in ws.items()}
            current = step.s_spec


def test_run_reduction_examples():
    trace, td = run_reduction(validate_symplectic_spec(C2, [((1, 0), 1)]))
    assert not trace and td.sp_factor_sizes == (2,) and td.a_star_basis == ()

    trace, td = run_reduction(validate_symplectic_spec(A1, [((1,), 2)]))
    assert len(trace) == 1
    assert td.character_pairs == ((1,),)
    assert rank_complexity(td) == (1, 0)

    trace, td = run_reduction(validate_symplectic_spec(A1, [((2,), 2)]))
    assert rank_complexity(td) == (1, 1)


def test_rank_complexity_examples():
    _, td = run_reduction(validate_symplectic_spec(C2, [((1, 0), 1)]))
    assert rank_complexity(td) == (0, 0)
    _, td = run_reduction(
        validate_symplectic_spec(T1, [((1,), 2), ((-1,), 2)])
    )
    assert rank_complexity(td) == (1, 1)
    _, td = run_reduction(validate_symplectic_spec(A1, [((3,), 1)]))
    assert rank_complexity(td) == (1, 0)


def test_catalog_rank_complexity():
    for name, (spec, (rk, c, mf)) in catalog().items():
        trace, td = run_reduction(spec)
        assert rank_complexity(td) == (rk, c), name
        assert (c == 0) == mf, name


def test_centralizer_levi_examples():
    _, td = run_reduction(validate_symplectic_spec(A2, [((1, 0), 1), ((0, 1), 1)]))
    levi = centralizer_levi(A2, td.a_star_basis, expect=td.terminal_group)
    assert levi.factors == (("A", 1),)
    levi = centralizer_levi(C2, [], expect=None)
    assert levi.factors == (("C", 2),)
    _, td = run_reduction(validate_symplectic_spec(A1, [((1,), 2)]))
    levi = centralizer_levi(A1, td.a_star_basis, expect=td.terminal_group)
    assert levi.rank == 0


def test_centralizer_levi_consistent_across_catalog():
    for name, (spec, _) in catalog().items():
        _, td = run_reduction(spec)
        centralizer_levi(spec.datum, td.a_star_basis, expect=td.terminal_group)


def test_compute_gamma_examples():
    _, td = run_reduction(validate_symplectic_spec(A1, [((1,), 2)]))
    g = compute_gamma(A1, td.a_star_basis)
    assert g.gamma_order == 2 and len(g.reflection_indices) == 1
    _, td = run_reduction(validate_symplectic_spec(A2, [((1, 0), 1), ((0, 1), 1)]))
    g = compute_gamma(A2, td.a_star_basis)
    assert g.gamma_order == 1
    g = compute_gamma(A2, [])
    assert g.gamma_order == 1


def test_molien_series_of_sign_group():
    flip = ((-1,),)
    ident = ((1,),)
    series = molien_series([ident, flip], 6)
    assert series == [1, 0, 1, 0, 1, 0, 1]
    assert reflection_degrees([ident, flip]) == (2,)
    assert molien_series([ident], 4) == [1, 1, 1, 1, 1]
    assert reflection_degrees([ident]) == (1,)


def test_little_weyl_examples():
    rep = analyze(validate_symplectic_spec(A1, [((3,), 1)]))
    assert rep.little_weyl.status == "exact"
    assert rep.little_weyl.order == 2
    assert rep.little_weyl.degrees == (2,)

    rep = analyze(validate_symplectic_spec(A1, [((1,), 2)]))
    assert rep.little_weyl.status == "exact"
    assert rep.little_weyl.order == 1

    rep = analyze(validate_symplectic_spec(C2, [((1, 0), 1)]))
    assert rep.little_weyl.status == "exact"
    assert rep.little_weyl.order == 1

    rep = analyze(validate_symplectic_spec(A1, [((2,), 2)]))
    assert rep.little_weyl.status == "unknown"
    assert rep.gamma.gamma_order == 2


def test_little_weyl_order_divides_gamma():
    for name, (spec, _) in catalog().items():
        rep = analyze(spec)
        if rep.little_weyl.status == "exact":
            assert rep.gamma.gamma_order % rep.little_weyl.order == 0, name


def test_mf_hilbert_series_is_even():
    from symprep.reps import invariant_dims

    for name, (spec, (rk, c, mf)) in catalog().items():
        if not mf or spec.dim > 16:
            continue
        dims = invariant_dims(spec, 6)
        assert all(v == 0 for d, v in enumerate(dims) if d % 2), name


def test_isotropy_examples():
    rep = analyze(validate_symplectic_spec(C2, [((1, 0), 1)]))
    assert rep.isotropy.dim_h == 6
    assert rep.isotropy.sp_parts == ("Sp_3",)
    rep = analyze(validate_symplectic_spec(A1, [((1,), 2)]))
    assert rep.isotropy.dim_h == 0
    # trivial action: H = G
    triv = validate_symplectic_spec(A1, [((0,), 2)])
    rep = analyze(triv)
    assert rep.isotropy.dim_h == A1.dim_group()


def test_analyze_examples():
    rep = analyze(validate_symplectic_spec(C2, [((1, 0), 1)]))
    assert (rep.rk_s, rep.c_s, rep.mf) == (0, 0, True)
    rep = analyze(validate_symplectic_spec(A1, [((3,), 1)]))
    assert (rep.rk_s, rep.c_s, rep.mf) == (1, 0, True)
    assert rep.little_weyl.order == 2
    rep = analyze(validate_symplectic_spec(A1, [((2,), 2)]))
    assert (rep.rk_s, rep.c_s, rep.mf) == (1, 1, False)
    assert rep.little_weyl.status == "unknown"


def test_analyze_weyl_cap():
    e7 = build_root_datum([("E", 7)])
    spec = validate_symplectic_spec(e7, [((0,) * 7, 2)])
    with pytest.raises(WeylCapExceeded):
        analyze(spec)


def test_permanence_under_first_choice():
    spec = validate_symplectic_spec(A2, [((1, 0), 1), ((0, 1), 1)])
    base_trace, base_td = run_reduction(spec)
    for w, _ in spec.summands:
        from symprep.classify import WeightStatus, weight_status

        if weight_status(spec, w) is not WeightStatus.NON_TERMINAL:
            continue
        trace, td = run_reduction(spec, first_choice=w)
        assert rank_complexity(td) == rank_complexity(base_td)
        conj = any(
            same_span([we.apply(b) for b in td.a_star_basis], list(base_td.a_star_basis))
            for we in enumerate_weyl(spec.datum)
        ) if td.a_star_basis else not base_td.a_star_basis
        assert conj
