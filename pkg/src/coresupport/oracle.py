"""Brute-force checks and seeded random profiles.

Random profiles come from SplitMix64 so that any port can reproduce them:

* ``next()``: ``state += 0x9E3779B97F4A7C15``; ``z = state``;
  ``z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9``; ``z = (z ^ z >> 27) * 0x94D049BB133111EB``;
  return ``z ^ z >> 31`` (all arithmetic mod 2**64).
* ``below(m)``: draw ``x`` until ``x < 2**64 - 2**64 % m``; return ``x % m``.
* A full ranking is a Fisher-Yates shuffle of ``0..n-1``: for ``i`` from
  ``n-1`` down to 1 swap slots ``i`` and ``below(i+1)``.
* The truncated variant then keeps the first ``1 + below(n)`` entries.
* Candidates are named ``A``, ``B``, ... in id order; ballots are merged in
  first-appearance order.
* Trial ``i`` of a scan uses the ``i``-th output of a SplitMix64 stream
  seeded with the scan seed.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .ballots import BallotProfile, alaska_2022
from .criteria import (
    check_broad_support,
    check_core_support,
    find_monotonicity_violation,
)
from .tabulation import TieError, TiebreakPolicy, condorcet_outcome, irv_ranking, pairwise_matrix

MAX_ENUMERATION = 8
MASK64 = (1 << 64) - 1

IMPARTIAL = "impartial"
TRUNCATED = "truncated"
FIXTURE = "fixture"
KINDS = (IMPARTIAL, TRUNCATED, FIXTURE)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        limit = (1 << 64) - (1 << 64) % m
        while True:
            x = self.next()
            if x < limit:
                return x % m


@dataclass(frozen=True)
class ProfileGenerator:
    kind: str = IMPARTIAL
    n: int = 3
    b: int = 25
    seed: int = 0


def candidate_names(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_uppercase[:n])
    return [f"C{i}" for i in range(n)]


def generate_profile(gen: ProfileGenerator) -> BallotProfile:
    if gen.kind == FIXTURE:
        return alaska_2022()
    if gen.kind not in (IMPARTIAL, TRUNCATED):
        raise ValueError(f"unknown generator kind {gen.kind!r}")
    if gen.n < 1:
        raise ValueError("need at least one candidate")
    if gen.b < 0:
        raise ValueError("ballot count must be non-negative")
    rng = SplitMix64(gen.seed)
    rows = []
    for _ in range(gen.b):
        ranking = list(range(gen.n))
        for i in range(gen.n - 1, 0, -1):
            j = rng.below(i + 1)
            ranking[i], ranking[j] = ranking[j], ranking[i]
        if gen.kind == TRUNCATED:
            ranking = ranking[: 1 + rng.below(gen.n)]
        rows.append((ranking, 1))
    return BallotProfile.from_groups(candidate_names(gen.n), rows)


def trial_generators(gen: ProfileGenerator, trials: int) -> Iterator[ProfileGenerator]:
    seeds = SplitMix64(gen.seed)
    for _ in range(trials):
        yield ProfileGenerator(gen.kind, gen.n, gen.b, seeds.next())


def all_rankings(n: int) -> list[tuple[int, ...]]:
    """Every ranking of ``n`` candidates, lexicographic by id."""
    if n > MAX_ENUMERATION:
        raise ValueError(f"refusing to enumerate {n}! rankings (limit n <= {MAX_ENUMERATION})")
    return list(permutations(range(n)))


def rankings_passing_core_support(profile: BallotProfile) -> set[tuple[int, ...]]:
    return {r for r in all_rankings(profile.n_candidates) if check_core_support(profile, r).passed}


def rankings_passing_broad_support(profile: BallotProfile) -> set[tuple[int, ...]]:
    return {r for r in all_rankings(profile.n_candidates) if check_broad_support(profile, r).passed}


@dataclass(frozen=True)
class ScanSummary:
    """Counts over generated profiles.

    ``agree``/``disagree`` compare winners where both IRV (tie-free) and a
    transitive Condorcet order exist. ``cycles`` counts profiles without a
    transitive Condorcet order, ``ties`` those where IRV hits a tie.
    ``monotonicity_witnesses`` counts tie-free profiles with a promote witness.
    """

    trials: int
    agree: int
    disagree: int
    cycles: int
    ties: int
    monotonicity_witnesses: int


def agreement_scan(gen: ProfileGenerator, trials: int, monotonicity: bool = True) -> ScanSummary:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    agree = disagree = cycles = ties = witnesses = 0
    for trial in trial_generators(gen, trials):
        profile = generate_profile(trial)
        outcome = condorcet_outcome(pairwise_matrix(profile))
        if outcome.ranking is None:
            cycles += 1
        try:
            irv, _ = irv_ranking(profile)
        except TieError:
            ties += 1
            continue
        if outcome.ranking is not None:
            if outcome.ranking[0] == irv[0]:
                agree += 1
            else:
                disagree += 1
        if monotonicity and find_monotonicity_violation(profile) is not None:
            witnesses += 1
    return ScanSummary(trials, agree, disagree, cycles, ties, witnesses)


@dataclass(frozen=True)
class Counterexample:
    seed: int
    irv: tuple[int, ...]
    condorcet: tuple[int, ...]


@dataclass(frozen=True)
class GeneralResultReport:
    """Three-candidate profiles where the IRV and Condorcet winners differ.

    The claim checked: the Condorcet winner is last in the IRV ranking and
    the IRV winner is second in the Condorcet order. Only profiles with a
    tie-free IRV count and a transitive Condorcet order are ``applicable``.
    """

    trials: int
    applicable: int
    holds: int
    counterexamples: tuple[Counterexample, ...]


def general_result_scan(gen: ProfileGenerator, trials: int) -> GeneralResultReport:
    if gen.kind != FIXTURE and gen.n != 3:
        raise ValueError("the disagreement scan is defined for three candidates")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    applicable = holds = 0
    bad = []
    for trial in trial_generators(gen, trials):
        profile = generate_profile(trial)
        outcome = condorcet_outcome(pairwise_matrix(profile))
        if outcome.ranking is None:
            continue
        try:
            irv, _ = irv_ranking(profile)
        except TieError:
            continue
        cond = outcome.ranking
        if irv[0] == cond[0]:
            continue
        applicable += 1
        if irv[-1] == cond[0] and cond[1] == irv[0]:
            holds += 1
        else:
            bad.append(Counterexample(trial.seed, irv, cond))
    return GeneralResultReport(trials, applicable, holds, tuple(bad))


def unique_irv_passer(profile: BallotProfile, policy: TiebreakPolicy = TiebreakPolicy.ERROR) -> bool | None:
    """True when IRV's ranking is the only core-support passer; None if IRV ties."""
    try:
        irv, _ = irv_ranking(profile, policy)
    except TieError:
        return None
    return rankings_passing_core_support(profile) == {irv}
