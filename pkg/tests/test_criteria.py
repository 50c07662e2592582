from itertools import permutations, product

import pytest
from hypothesis import given, settings

from coresupport import (
    Move,
    TieError,
    Verdict,
    apply_moves,
    check_broad_support,
    check_core_support,
    condorcet_outcome,
    core_support_tally,
    find_monotonicity_violation,
    iia_flip_report,
    irv_ranking,
    major_set,
    minor_set,
    pairwise_matrix,
    parse_profile,
    replay_witness,
)
from coresupport.criteria import demote, promote

from conftest import BEGICH, PALIN, PELTOLA, make, naive_witness, profiles

IRV_ORDER = (PELTOLA, PALIN, BEGICH)
CONDORCET_ORDER = (BEGICH, PELTOLA, PALIN)


# -- major / minor -----------------------------------------------------------


def test_major_set_examples():
    assert major_set(IRV_ORDER, BEGICH) == {PELTOLA, PALIN, BEGICH}
    assert major_set(IRV_ORDER, PALIN) == {PELTOLA, PALIN}
    assert major_set(IRV_ORDER, PELTOLA) == {PELTOLA}
    assert major_set((0,), 0) == {0}


def test_major_minor_partition():
    for ranking in permutations(range(4)):
        for y in ranking:
            assert y in major_set(ranking, y)
            assert major_set(ranking, y) | minor_set(ranking, y) == set(ranking)
            assert not major_set(ranking, y) & minor_set(ranking, y)


# -- core support ------------------------------------------------------------


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (PELTOLA, BEGICH, (75_799, 53_810, 58_973)),
        (PALIN, BEGICH, (58_973, 53_810, 75_799)),
        (PELTOLA, PALIN, (91_266, 86_026, 11_290)),
    ],
)
def test_core_support_tallies(alaska, x, y, expected):
    t = core_support_tally(alaska, IRV_ORDER, x, y)
    assert (t.x_votes, t.y_votes, t.abstain) == expected
    assert t.restriction == "core-support"
    assert t.verdict is Verdict.PASS


def test_core_support_tally_requires_order(alaska):
    with pytest.raises(ValueError):
        core_support_tally(alaska, IRV_ORDER, BEGICH, PELTOLA)


def test_core_support_ignores_minor_candidates():
    # Relative to B, C is minor, so C>A ballots count for A.
    p = make("ABC", (2, "C>A"), (3, "B"))
    t = core_support_tally(p, (0, 1, 2), 0, 1)
    assert (t.x_votes, t.y_votes, t.abstain) == (2, 3, 0)


def test_check_core_support_alaska(alaska):
    report = check_core_support(alaska, IRV_ORDER)
    assert report.passed
    assert [(p.x, p.y) for p in report.pairs] == [(PELTOLA, PALIN), (PELTOLA, BEGICH), (PALIN, BEGICH)]


def test_condorcet_order_fails_core_support(alaska):
    report = check_core_support(alaska, CONDORCET_ORDER)
    assert not report.passed
    verdicts = {(p.x, p.y): p.verdict for p in report.pairs}
    assert verdicts == {
        (BEGICH, PELTOLA): Verdict.PASS,
        (BEGICH, PALIN): Verdict.FAIL,
        (PELTOLA, PALIN): Verdict.PASS,
    }


def test_begich_loses_core_support_pairs_relative_to_begich(alaska):
    for x in (PELTOLA, PALIN):
        t = core_support_tally(alaska, IRV_ORDER, x, BEGICH)
        assert t.y_votes == 53_810 < t.x_votes


def test_single_candidate_vacuous_pass():
    report = check_core_support(make("A", (2, "A")), (0,))
    assert report.passed and report.pairs == ()


def test_tie_verdict_fails_overall():
    report = check_core_support(make("AB", (1, "A"), (1, "B")), (0, 1))
    assert report.pairs[0].verdict is Verdict.TIE
    assert not report.passed


def test_check_rejects_non_permutation(alaska):
    with pytest.raises(ValueError):
        check_core_support(alaska, (0, 1))
    with pytest.raises(ValueError):
        check_broad_support(alaska, (0, 0, 1))


# -- broad support -----------------------------------------------------------


def test_broad_support_alaska(alaska):
    assert check_broad_support(alaska, CONDORCET_ORDER).passed
    report = check_broad_support(alaska, IRV_ORDER)
    failed = {(p.x, p.y) for p in report.pairs if p.verdict is not Verdict.PASS}
    assert failed == {(PELTOLA, BEGICH), (PALIN, BEGICH)}


def test_broad_support_cycle_has_no_passer():
    p = make("ABC", (1, "A>B>C"), (1, "B>C>A"), (1, "C>A>B"))
    assert not any(check_broad_support(p, r).passed for r in permutations(range(3)))


@given(profiles(min_candidates=2, max_candidates=4))
def test_core_tally_top_pair_equals_all_ballots(p):
    try:
        ranking, _ = irv_ranking(p)
    except TieError:
        ranking = tuple(range(p.n_candidates))
    m = pairwise_matrix(p)
    x, y = ranking[0], ranking[1]
    t = core_support_tally(p, ranking, x, y)
    assert (t.x_votes, t.y_votes, t.abstain) == (m.beats[x][y], m.beats[y][x], m.abstain(x, y))


@given(profiles(max_candidates=4))
def test_core_support_equivalent_to_irv(p):
    try:
        ranking, _ = irv_ranking(p)
    except TieError:
        return
    assert check_core_support(p, ranking).passed


@given(profiles(min_candidates=2, max_candidates=4))
def test_broad_support_passer_is_condorcet_order(p):
    outcome = condorcet_outcome(pairwise_matrix(p))
    passers = [r for r in permutations(range(p.n_candidates)) if check_broad_support(p, r).passed]
    assert passers == ([] if outcome.ranking is None else [outcome.ranking])


@given(profiles(max_candidates=4))
def test_pair_tallies_sum_to_total(p):
    ranking = tuple(range(p.n_candidates))
    for report in (check_core_support(p, ranking), check_broad_support(p, ranking)):
        for t in report.pairs:
            assert t.x_votes + t.y_votes + t.abstain == p.total_ballots


# -- monotonicity ------------------------------------------------------------


def test_alaska_monotonicity_witness(alaska):
    w = find_monotonicity_violation(alaska)
    assert w.direction == "promote"
    assert w.k == 5_164
    assert w.candidate == w.original_winner == PELTOLA
    assert w.new_winner == BEGICH
    assert w.source_ranking == (PALIN,)
    assert w.transformed_ranking == (PELTOLA, PALIN)
    first, final = w.new_rounds
    assert first.tallies == {BEGICH: 53_810, PALIN: 53_809, PELTOLA: 80_963}
    assert final.tallies == {BEGICH: 87_859, PELTOLA: 84_615}
    assert replay_witness(alaska, w) == BEGICH


def test_alaska_witness_agrees_with_naive_search(alaska):
    w = find_monotonicity_violation(alaska)
    assert naive_witness(alaska) == (w.moves[0].group, w.k, PELTOLA, BEGICH)


def test_two_candidates_are_monotone():
    assert find_monotonicity_violation(make("AB", (5, "A"), (3, "B>A"), (2, "")), demote_losers=True) is None


def test_majority_winner_has_no_promote_witness():
    p = make("ABC", (6, "A>B"), (3, "B>C"), (2, "C>B"))
    assert find_monotonicity_violation(p) is None
    assert find_monotonicity_violation(p, exhaustive=True) is None


DEMOTE_PROFILE = """\
#candidates: A,B,C,D
2,B>C>D>A
2,A>B>C>D
2,A>C>D>B
1,D>A>B>C
2,C>D>A>B
1,D>A>C>B
1,D>C>B>A
1,A>C>B>D
1,B>A>D>C
1,B>D>A>C
1,A>D>C>B
"""


def test_demote_witness():
    p = parse_profile(DEMOTE_PROFILE)
    assert find_monotonicity_violation(p) is None
    w = find_monotonicity_violation(p, demote_losers=True)
    assert w.direction == "demote"
    assert naive_witness(p, "demote") == (w.moves[0].group, w.k, w.candidate, w.new_winner)
    assert (w.moves[0].group, w.k, w.candidate) == (2, 2, 0)
    assert w.moves[0].target == (2, 3, 1, 0)
    assert w.new_winner == w.candidate != w.original_winner
    assert replay_witness(p, w) == w.candidate


def test_promote_moves_winner_to_front():
    assert promote((1, 0, 2), 2) == (2, 1, 0)
    assert promote((1,), 2) == (2, 1)
    assert promote((), 2) == (2,)
    assert demote((0, 1, 2), 0) == (1, 2, 0)


def test_exhaustive_guard(alaska):
    with pytest.raises(ValueError, match="exceeds"):
        find_monotonicity_violation(alaska, exhaustive=True)


def brute_force_min_total(profile):
    """Smallest total k over all multi-group promote moves (product enumeration)."""
    ranking, _ = irv_ranking(profile)
    winner = ranking[0]
    options = [(i, g) for i, g in enumerate(profile.groups) if not g.ranking or g.ranking[0] != winner]
    best = None
    for vector in product(*(range(g.count + 1) for _, g in options)):
        total = sum(vector)
        if total == 0 or (best is not None and total >= best):
            continue
        moves = [Move(i, g.ranking, promote(g.ranking, winner), k) for (i, g), k in zip(options, vector) if k]
        try:
            new = irv_ranking(apply_moves(profile, moves))[0][0]
        except TieError:
            continue
        if new != winner:
            best = total
    return best


@settings(max_examples=60, deadline=None)
@given(profiles(min_candidates=3, max_candidates=4, max_ballots=14))
def test_search_matches_brute_force(p):
    try:
        irv_ranking(p)
    except TieError:
        with pytest.raises(TieError):
            find_monotonicity_violation(p)
        return
    single = find_monotonicity_violation(p)
    naive = naive_witness(p)
    if naive is None:
        assert single is None
    else:
        assert (single.moves[0].group, single.k, single.new_winner) == (naive[0], naive[1], naive[3])
        assert replay_witness(p, single) == single.new_winner
    full = find_monotonicity_violation(p, exhaustive=True)
    best = brute_force_min_total(p)
    if best is None:
        assert full is None
    else:
        assert full.k == best
        assert replay_witness(p, full) == full.new_winner != full.original_winner
        if single is not None:
            assert full.k <= single.k


# -- IIA ---------------------------------------------------------------------


def test_iia_remove_palin(alaska):
    report = iia_flip_report(alaska, PALIN)
    assert report.before == IRV_ORDER
    assert report.after == (BEGICH, PELTOLA)
    (flip,) = report.flips
    assert (flip.before_upper, flip.before_lower) == (PELTOLA, BEGICH)
    t = flip.tally
    assert (t.x, t.y, t.x_votes, t.y_votes, t.abstain) == (BEGICH, PELTOLA, 87_859, 79_451, 21_272)


def test_iia_remove_begich(alaska):
    report = iia_flip_report(alaska, BEGICH)
    assert report.after == (PELTOLA, PALIN)
    assert report.flips == ()


def test_iia_bullet_votes_never_flip():
    p = make("ABC", (5, "A"), (4, "B"), (3, "C"))
    for c in range(3):
        assert iia_flip_report(p, c).flips == ()


def test_iia_needs_three_candidates():
    with pytest.raises(ValueError):
        iia_flip_report(make("AB", (1, "A")), 0)


def test_iia_zero_vote_removed_candidate_does_not_tie():
    # D has no first preferences; removing A must not tie A's emptied tally with D's.
    p = make("ABCD", (4, "A>B"), (3, "B"), (2, "C>B"))
    assert irv_ranking(p)[0] == (1, 0, 2, 3)
    report = iia_flip_report(p, 0)
    assert report.after == (1, 2, 3)
    assert report.flips == ()
