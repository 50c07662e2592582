"""Majority-rule criteria over (profile, social ranking) pairs.

Two pair-election criteria are checked here. Core support decides each
pair X above Y using only ballots whose highest-ranked *major* candidate
relative to Y (Y or anyone above it) is X or Y; instant runoff satisfies it.
Broad support uses every ballot; a ranking passing it is the Condorcet order.

The module also searches for monotonicity failures and reports pair flips
caused by removing a candidate (independence of irrelevant alternatives).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .ballots import BallotProfile, restrict_profile
from .tabulation import (
    RoundLog,
    TiebreakPolicy,
    irv_ranking,
    pairwise_matrix,
)

CORE = "core-support"
BROAD = "broad-support"
ALL_BALLOTS = "all-ballots"


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    TIE = "tie"


def major_set(ranking: Sequence[int], y: int) -> frozenset[int]:
    """``y`` together with every candidate ranked above it."""
    ranking = list(ranking)
    return frozenset(ranking[: ranking.index(y) + 1])


def minor_set(ranking: Sequence[int], y: int) -> frozenset[int]:
    ranking = list(ranking)
    return frozenset(ranking[ranking.index(y) + 1:])


@dataclass(frozen=True)
class PairTally:
    """Pair election between ``x`` (ranked higher) and ``y``.

    ``restriction`` names the ballot subset counted: ``core-support`` or
    ``all-ballots``. ``abstain`` covers every other ballot so the three
    counts always sum to the profile total.
    """

    x: int
    y: int
    x_votes: int
    y_votes: int
    abstain: int
    restriction: str

    @property
    def verdict(self) -> Verdict:
        if self.x_votes > self.y_votes:
            return Verdict.PASS
        if self.x_votes == self.y_votes:
            return Verdict.TIE
        return Verdict.FAIL


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    ranking: tuple[int, ...]
    pairs: tuple[PairTally, ...]

    @property
    def passed(self) -> bool:
        return all(p.verdict is Verdict.PASS for p in self.pairs)


def _check_ranking(profile: BallotProfile, ranking: Sequence[int]) -> tuple[int, ...]:
    ranking = tuple(ranking)
    if sorted(ranking) != list(range(profile.n_candidates)):
        raise ValueError(f"ranking {ranking} is not a permutation of the roster")
    return ranking


def core_support_tally(profile: BallotProfile, ranking: Sequence[int], x: int, y: int) -> PairTally:
    ranking = tuple(ranking)
    if x not in ranking or y not in ranking or ranking.index(x) >= ranking.index(y):
        raise ValueError(f"candidate {x} is not strictly above {y} in {ranking}")
    major = major_set(ranking, y)
    x_votes = y_votes = 0
    for g in profile.groups:
        top = next((c for c in g.ranking if c in major), None)
        if top == x:
            x_votes += g.count
        elif top == y:
            y_votes += g.count
    abstain = profile.total_ballots - x_votes - y_votes
    return PairTally(x, y, x_votes, y_votes, abstain, CORE)


def check_core_support(profile: BallotProfile, ranking: Sequence[int]) -> CriterionReport:
    ranking = _check_ranking(profile, ranking)
    pairs = tuple(core_support_tally(profile, ranking, x, y) for x, y in combinations(ranking, 2))
    return CriterionReport(CORE, ranking, pairs)


def check_broad_support(profile: BallotProfile, ranking: Sequence[int]) -> CriterionReport:
    ranking = _check_ranking(profile, ranking)
    m = pairwise_matrix(profile)
    pairs = tuple(
        PairTally(x, y, m.beats[x][y], m.beats[y][x], m.abstain(x, y), ALL_BALLOTS)
        for x, y in combinations(ranking, 2)
    )
    return CriterionReport(BROAD, ranking, pairs)


# -- monotonicity -----------------------------------------------------------

PROMOTE = "promote"
DEMOTE = "demote"


def promote(ranking: Sequence[int], candidate: int) -> tuple[int, ...]:
    """Move ``candidate`` to first place; others keep their relative order."""
    return (candidate,) + tuple(c for c in ranking if c != candidate)


def demote(ranking: Sequence[int], candidate: int) -> tuple[int, ...]:
    """Move a listed ``candidate`` to the last listed place."""
    return tuple(c for c in ranking if c != candidate) + (candidate,)


@dataclass(frozen=True)
class Move:
    """Rewrite ``count`` ballots of group ``group`` from ``source`` to ``target``."""

    group: int
    source: tuple[int, ...]
    target: tuple[int, ...]
    count: int


@dataclass(frozen=True)
class MonotonicityWitness:
    """A concrete ballot change that breaks monotonicity.

    ``direction`` is ``promote`` (raising ``candidate`` made it lose) or
    ``demote`` (lowering ``candidate`` made it win).
    """

    direction: str
    candidate: int
    moves: tuple[Move, ...]
    original_winner: int
    new_winner: int
    original_rounds: tuple[RoundLog, ...]
    new_rounds: tuple[RoundLog, ...]

    @property
    def k(self) -> int:
        return sum(m.count for m in self.moves)

    @property
    def source_ranking(self) -> tuple[int, ...]:
        return self.moves[0].source

    @property
    def transformed_ranking(self) -> tuple[int, ...]:
        return self.moves[0].target


def apply_moves(profile: BallotProfile, moves: Sequence[Move]) -> BallotProfile:
    """Return the profile with each move's ballots rewritten.

    Rewritten ballots join an existing group with the same ranking, or a new
    group appended at the end; emptied groups disappear.
    """
    counts = [[g.ranking, g.count] for g in profile.groups]
    extra: list[list] = []
    for m in moves:
        if counts[m.group][0] != m.source or counts[m.group][1] < m.count:
            raise ValueError(f"move {m} does not fit group {m.group}")
        counts[m.group][1] -= m.count
    for m in moves:
        for entry in counts + extra:
            if entry[0] == m.target:
                entry[1] += m.count
                break
        else:
            extra.append([m.target, m.count])
    return BallotProfile.from_groups(
        profile.names, ((r, c) for r, c in counts + extra if c > 0)
    )


def replay_witness(
    profile: BallotProfile, witness: MonotonicityWitness, policy: TiebreakPolicy = TiebreakPolicy.ERROR
) -> int:
    """Apply the witness moves and re-run instant runoff; returns the new winner."""
    return irv_ranking(apply_moves(profile, witness.moves), policy)[0][0]


class _FastRunoff:
    """Instant runoff winner for ``base + sum(k_i * (target_i - source_i))``.

    First-preference tallies for each active set are cached per ballot group,
    so evaluating a candidate manipulation never rescans the profile. Returns
    None where :func:`irv_ranking` would raise a tie error.
    """

    def __init__(self, profile: BallotProfile, policy: TiebreakPolicy):
        self.profile = profile
        self.policy = policy
        self.n = profile.n_candidates
        self._base: dict[int, list[int]] = {}
        self._top: dict[tuple[tuple[int, ...], int], int] = {}

    def _top_of(self, ranking: tuple[int, ...], mask: int) -> int:
        key = (ranking, mask)
        top = self._top.get(key)
        if top is None:
            top = next((c for c in ranking if mask >> c & 1), -1)
            self._top[key] = top
        return top

    def _base_tallies(self, mask: int) -> list[int]:
        tallies = self._base.get(mask)
        if tallies is None:
            tallies = [0] * self.n
            for g in self.profile.groups:
                top = self._top_of(g.ranking, mask)
                if top >= 0:
                    tallies[top] += g.count
            self._base[mask] = tallies
        return tallies

    def winner(self, moves: Sequence[tuple[tuple[int, ...], tuple[int, ...], int]]) -> int | None:
        mask = (1 << self.n) - 1
        active = self.n
        while active > 1:
            tallies = list(self._base_tallies(mask))
            for source, target, k in moves:
                s = self._top_of(source, mask)
                t = self._top_of(target, mask)
                if s != t:
                    if s >= 0:
                        tallies[s] -= k
                    if t >= 0:
                        tallies[t] += k
            low = min(tallies[c] for c in range(self.n) if mask >> c & 1)
            tied = [c for c in range(self.n) if mask >> c & 1 and tallies[c] == low]
            if len(tied) > 1 and (self.policy is TiebreakPolicy.ERROR or active == 2):
                return None
            mask &= ~(1 << tied[0])
            active -= 1
        return mask.bit_length() - 1


def _compositions(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Vectors bounded by ``caps`` summing to ``total``; earlier slots filled first."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest = sum(caps[1:])
    for first in range(min(total, caps[0]), max(0, total - rest) - 1, -1):
        for tail in _compositions(total - first, caps[1:]):
            yield (first,) + tail


EXHAUSTIVE_LIMIT = 200_000


def find_monotonicity_violation(
    profile: BallotProfile,
    policy: TiebreakPolicy = TiebreakPolicy.ERROR,
    *,
    demote_losers: bool = False,
    exhaustive: bool = False,
) -> MonotonicityWitness | None:
    """Search for a monotonicity failure of instant runoff.

    The promote search raises the winner W to first place on k ballots of a
    single group, for every group not already ranking W first, and returns
    the smallest k (earliest group on equal k) for which W no longer wins.
    With ``demote_losers`` and no promote witness, it also tries moving a
    losing candidate L to the bottom of k listed ballots, looking for L to win.

    ``exhaustive`` spreads the k moved ballots over any combination of
    groups, ordered by total k; it refuses profiles whose search space
    exceeds ``EXHAUSTIVE_LIMIT`` combinations.

    Manipulated profiles that hit a tie under ``policy`` are skipped.
    Raises TieError if the unmodified profile has no tie-free winner.
    """
    ranking, rounds = irv_ranking(profile, policy)
    winner = ranking[0]
    fast = _FastRunoff(profile, policy)

    promote_options = [
        (i, g, promote(g.ranking, winner))
        for i, g in enumerate(profile.groups)
        if not g.ranking or g.ranking[0] != winner
    ]
    found = _search(fast, [(i, g, t, winner) for i, g, t in promote_options],
                    lambda new, target: new != target, exhaustive)
    direction = PROMOTE
    if found is None and demote_losers:
        direction = DEMOTE
        if exhaustive:
            for loser in ranking[1:]:
                options = [
                    (i, g, demote(g.ranking, loser), loser)
                    for i, g in enumerate(profile.groups)
                    if loser in g.ranking[:-1]
                ]
                found = _search(fast, options, lambda new, target: new == target, True)
                if found is not None:
                    break
        else:
            options = [
                (i, g, demote(g.ranking, loser), loser)
                for i, g in enumerate(profile.groups)
                for loser in ranking[1:]
                if loser in g.ranking[:-1]
            ]
            found = _search(fast, options, lambda new, target: new == target, False)
    if found is None:
        return None

    moves, candidate = found
    new_ranking, new_rounds = irv_ranking(apply_moves(profile, moves), policy)
    witness = MonotonicityWitness(
        direction, candidate, moves, winner, new_ranking[0], tuple(rounds), tuple(new_rounds)
    )
    replayed = witness.new_winner != winner if direction == PROMOTE else witness.new_winner == candidate
    if not replayed:
        raise AssertionError(f"witness failed to replay: {witness}")
    return witness


def _search(fast: _FastRunoff, options, succeeded, exhaustive: bool):
    """Return ``(moves, candidate)`` for the first successful manipulation."""
    if not options:
        return None
    if not exhaustive:
        top = max(g.count for _, g, _, _ in options)
        for k in range(1, top + 1):
            for i, g, target, candidate in options:
                if g.count < k:
                    continue
                new = fast.winner([(g.ranking, target, k)])
                if new is not None and succeeded(new, candidate):
                    return (Move(i, g.ranking, target, k),), candidate
        return None

    # Exhaustive options share one candidate.
    candidate = options[0][3]
    caps = [g.count for _, g, _, _ in options]
    space = 1
    for cap in caps:
        space *= cap + 1
        if space > EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"exhaustive monotonicity search space exceeds {EXHAUSTIVE_LIMIT} combinations"
            )
    for total in range(1, sum(caps) + 1):
        for vector in _compositions(total, caps):
            moves = [(g.ranking, t, k) for (_, g, t, _), k in zip(options, vector) if k]
            new = fast.winner(moves)
            if new is not None and succeeded(new, candidate):
                return tuple(
                    Move(i, g.ranking, t, k) for (i, g, t, _), k in zip(options, vector) if k
                ), candidate
    return None


# -- independence of irrelevant alternatives --------------------------------


@dataclass(frozen=True)
class PairFlip:
    """Pair whose instant runoff order reverses once a candidate is removed.

    ``tally`` is the all-ballot pair election in the reduced profile, with
    the new upper candidate as ``x``.
    """

    before_upper: int
    before_lower: int
    tally: PairTally


@dataclass(frozen=True)
class IIAReport:
    removed: int
    before: tuple[int, ...]
    after: tuple[int, ...]
    flips: tuple[PairFlip, ...]


def iia_flip_report(
    profile: BallotProfile, removed: int, policy: TiebreakPolicy = TiebreakPolicy.ERROR
) -> IIAReport:
    if not 0 <= removed < profile.n_candidates:
        raise ValueError(f"unknown candidate id {removed}")
    if profile.n_candidates < 3:
        raise ValueError("removing a candidate needs at least three candidates")
    before, _ = irv_ranking(profile, policy)
    keep = [c for c in range(profile.n_candidates) if c != removed]
    reduced = restrict_profile(profile, keep)
    # Renumber the survivors so the removed candidate takes no part in the count.
    index = {c: i for i, c in enumerate(keep)}
    sub = BallotProfile.from_groups(
        [profile.name_of(c) for c in keep],
        ((tuple(index[c] for c in g.ranking), g.count) for g in reduced.groups),
    )
    after = tuple(keep[i] for i in irv_ranking(sub, policy)[0])
    m = pairwise_matrix(reduced)
    flips = []
    for x, y in combinations([c for c in before if c != removed], 2):
        if after.index(x) > after.index(y):
            flips.append(
                PairFlip(x, y, PairTally(y, x, m.beats[y][x], m.beats[x][y], m.abstain(x, y), ALL_BALLOTS))
            )
    return IIAReport(removed, before, after, tuple(flips))
