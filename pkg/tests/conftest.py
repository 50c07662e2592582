import sys

import pytest
from hypothesis import strategies as st

from coresupport import BallotProfile, Move, TieError, alaska_2022, apply_moves, irv_ranking
from coresupport.criteria import demote, promote

BEGICH, PALIN, PELTOLA = 0, 1, 2


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def alaska():
    return alaska_2022()


def make(names, *rows):
    """Build a profile from ``(count, "A>B")`` rows."""
    return BallotProfile.from_names(
        list(names), [([c for c in r.split(">") if c], n) for n, r in rows]
    )


@st.composite
def profiles(draw, max_candidates=5, max_ballots=30, min_candidates=1):
    """Small random profiles with truncated rankings and at most ``max_ballots`` ballots."""
    n = draw(st.integers(min_candidates, max_candidates))
    names = [chr(ord("A") + i) for i in range(n)]
    budget = draw(st.integers(0, max_ballots))
    rows = []
    while budget > 0:
        ranking = draw(st.permutations(range(n)))
        length = draw(st.integers(0, n))
        count = draw(st.integers(1, budget))
        rows.append((ranking[:length], count))
        budget -= count
    return BallotProfile.from_groups(names, rows)


def naive_witness(profile, direction="promote"):
    """Single-group search by rewriting ballots and recounting from scratch.

    Returns ``(group, k, candidate, new_winner)`` for the first hit in
    (k, group order, candidate) order.
    """
    ranking, _ = irv_ranking(profile)
    winner = ranking[0]
    options = []
    for i, g in enumerate(profile.groups):
        if direction == "promote":
            if not g.ranking or g.ranking[0] != winner:
                options.append((i, g, promote(g.ranking, winner), winner))
        else:
            for loser in ranking[1:]:
                if loser in g.ranking[:-1]:
                    options.append((i, g, demote(g.ranking, loser), loser))
    top = max((g.count for _, g, _, _ in options), default=0)
    for k in range(1, top + 1):
        for i, g, target, candidate in options:
            if g.count < k:
                continue
            try:
                new = irv_ranking(apply_moves(profile, [Move(i, g.ranking, target, k)]))[0][0]
            except TieError:
                continue
            if new != winner if direction == "promote" else new == candidate:
                return i, k, candidate, new
    return None
