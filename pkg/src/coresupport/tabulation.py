"""Plurality, instant runoff and Condorcet tabulation over ballot profiles.

All counts are exact integers. Rankings are tuples of candidate ids,
winner first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .ballots import BallotProfile


class TiebreakPolicy(enum.Enum):
    ERROR = "error"
    # Among candidates tied for the lowest tally, the lowest id goes out first.
    LOWEST_ID = "lowest-id"


class TieError(Exception):
    """An unresolvable tie. ``round`` is the IRV round (1-based) or None."""

    def __init__(self, tied: Iterable[int], round: int | None = None, message: str = ""):
        self.tied = tuple(sorted(tied))
        self.round = round
        if not message:
            where = f" in round {round}" if round is not None else ""
            message = f"tie between candidates {list(self.tied)}{where}"
        super().__init__(message)


@dataclass(frozen=True)
class RoundLog:
    round: int
    active: tuple[int, ...]
    tallies: dict[int, int] = field(hash=False)
    exhausted: int
    eliminated: int
    tiebreak: bool = False


def first_preferences(profile: BallotProfile, active: Iterable[int]) -> tuple[dict[int, int], int]:
    """Count each ballot for its highest-ranked active candidate.

    Returns ``(tallies, exhausted)`` where ``tallies`` has an entry (possibly 0)
    for every active candidate and ``exhausted`` counts ballots naming none of them.
    """
    active = frozenset(active)
    tallies = {c: 0 for c in sorted(active)}
    exhausted = 0
    for g in profile.groups:
        for c in g.ranking:
            if c in active:
                tallies[c] += g.count
                break
        else:
            exhausted += g.count
    return tallies, exhausted


def plurality_ranking(
    profile: BallotProfile, policy: TiebreakPolicy = TiebreakPolicy.ERROR
) -> tuple[int, ...]:
    tallies, _ = first_preferences(profile, range(profile.n_candidates))
    # Lower id sorts below on equal counts, consistent with LOWEST_ID elimination.
    ranking = tuple(sorted(tallies, key=lambda c: (-tallies[c], -c)))
    if policy is TiebreakPolicy.ERROR:
        for a, b in zip(ranking, ranking[1:]):
            if tallies[a] == tallies[b]:
                raise TieError([c for c in ranking if tallies[c] == tallies[a]])
    return ranking


def irv_ranking(
    profile: BallotProfile, policy: TiebreakPolicy = TiebreakPolicy.ERROR
) -> tuple[tuple[int, ...], list[RoundLog]]:
    """Instant runoff by repeated elimination of the lowest first-preference tally.

    Each eliminated candidate takes the lowest open place in the social ranking;
    the last survivor is the winner. A tie in the final two-way round is always
    an error, whatever the policy.
    """
    active = list(range(profile.n_candidates))
    bottom_up: list[int] = []
    rounds: list[RoundLog] = []
    while len(active) > 1:
        round_no = len(rounds) + 1
        tallies, exhausted = first_preferences(profile, active)
        low = min(tallies.values())
        tied = [c for c in active if tallies[c] == low]
        if len(tied) > 1 and (policy is TiebreakPolicy.ERROR or len(active) == 2):
            raise TieError(tied, round_no)
        loser = min(tied)
        rounds.append(RoundLog(round_no, tuple(active), tallies, exhausted, loser, len(tied) > 1))
        bottom_up.append(loser)
        active.remove(loser)
    bottom_up.extend(active)
    return tuple(reversed(bottom_up)), rounds


def irv_winner(profile: BallotProfile, policy: TiebreakPolicy = TiebreakPolicy.ERROR) -> int:
    return irv_ranking(profile, policy)[0][0]


@dataclass(frozen=True)
class PairwiseMatrix:
    """``beats[x][y]`` is the number of ballots ranking x above y.

    A listed candidate is above every unlisted one; ballots listing neither
    candidate of a pair abstain on it.
    """

    beats: tuple[tuple[int, ...], ...]
    total: int

    @property
    def n_candidates(self) -> int:
        return len(self.beats)

    def abstain(self, x: int, y: int) -> int:
        return self.total - self.beats[x][y] - self.beats[y][x]

    def majority(self, x: int, y: int) -> bool:
        """True when x strictly beats y."""
        return self.beats[x][y] > self.beats[y][x]


def pairwise_matrix(profile: BallotProfile) -> PairwiseMatrix:
    n = profile.n_candidates
    beats = [[0] * n for _ in range(n)]
    for g in profile.groups:
        listed = set(g.ranking)
        unlisted = [c for c in range(n) if c not in listed]
        for i, x in enumerate(g.ranking):
            row = beats[x]
            for y in g.ranking[i + 1:]:
                row[y] += g.count
            for y in unlisted:
                row[y] += g.count
    return PairwiseMatrix(tuple(map(tuple, beats)), profile.total_ballots)


def smith_set(matrix: PairwiseMatrix) -> frozenset[int]:
    """Smallest non-empty set whose members all strictly beat every outsider."""
    n = matrix.n_candidates
    wins = [sum(matrix.majority(x, y) for y in range(n) if y != x) for x in range(n)]
    # Any dominating set outscores every outsider, so it is a prefix of this order.
    order = sorted(range(n), key=lambda c: (-wins[c], c))
    for k in range(1, n + 1):
        inside, outside = order[:k], order[k:]
        if all(matrix.majority(x, y) for x in inside for y in outside):
            return frozenset(inside)
    return frozenset(order)


@dataclass(frozen=True)
class CondorcetOutcome:
    """Either a transitive pairwise-majority ranking or a cycle report.

    When ``ranking`` is None the strict majority relation is not a transitive
    tournament; ``smith_set`` and ``tied_pairs`` describe why.
    """

    ranking: tuple[int, ...] | None
    smith_set: frozenset[int]
    tied_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def winner(self) -> int | None:
        if self.ranking is not None:
            return self.ranking[0]
        if len(self.smith_set) == 1:
            return next(iter(self.smith_set))
        return None


def condorcet_outcome(matrix: PairwiseMatrix) -> CondorcetOutcome:
    n = matrix.n_candidates
    tied = tuple(
        (x, y) for x, y in combinations(range(n), 2) if matrix.beats[x][y] == matrix.beats[y][x]
    )
    smith = smith_set(matrix)
    if not tied:
        wins = [sum(matrix.majority(x, y) for y in range(n) if y != x) for x in range(n)]
        # A complete tournament is transitive iff its win counts are all distinct.
        if len(set(wins)) == n:
            ranking = tuple(sorted(range(n), key=lambda c: -wins[c]))
            return CondorcetOutcome(ranking, smith)
    return CondorcetOutcome(None, smith, tied)


def condorcet_ranking(profile: BallotProfile) -> CondorcetOutcome:
    return condorcet_outcome(pairwise_matrix(profile))
