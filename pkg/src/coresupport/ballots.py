"""Ranked ballot profiles: parsing, normalization and simple statistics.

A ballot file is UTF-8 text with one weighted ranking per line::

    #candidates: Begich,Palin,Peltola
    27053,Begich>Palin>Peltola
    11290,Begich
    5,

The ``#candidates:`` header is optional; without it candidates are
numbered in order of first appearance. Any other line starting with ``#``
is a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

HEADER_PREFIX = "#candidates:"

_COUNT_RE = re.compile(r"[+-]?\d+")


class BallotFormatError(ValueError):
    """Raised for malformed ballot data. ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnknownCandidateError(KeyError):
    def __str__(self):
        return f"unknown candidate {self.args[0]!r}"


@dataclass(frozen=True)
class Candidate:
    id: int
    name: str


@dataclass(frozen=True)
class BallotGroup:
    """``count`` identical ballots sharing one ranking (candidate ids, best first)."""

    ranking: tuple[int, ...]
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"ballot count must be positive, got {self.count}")
        if len(set(self.ranking)) != len(self.ranking):
            raise ValueError(f"duplicate candidate in ranking {self.ranking}")


@dataclass(frozen=True)
class BallotProfile:
    """Immutable candidate roster plus weighted ballot groups.

    Groups keep first-appearance order and have pairwise distinct rankings.
    Build instances through :meth:`from_groups` (or :func:`parse_profile`),
    which merges duplicates.
    """

    candidates: tuple[Candidate, ...]
    groups: tuple[BallotGroup, ...]

    @classmethod
    def from_groups(
        cls, names: Sequence[str], groups: Iterable[tuple[Sequence[int], int]]
    ) -> BallotProfile:
        names = [name.strip() for name in names]
        if not names:
            raise ValueError("empty candidate roster")
        if any(not name for name in names):
            raise ValueError("empty candidate name")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate candidate name in roster {names}")
        n = len(names)
        merged: dict[tuple[int, ...], int] = {}
        for ranking, count in groups:
            ranking = tuple(ranking)
            if any(not 0 <= c < n for c in ranking):
                raise ValueError(f"ranking {ranking} refers to a candidate outside the roster")
            merged[ranking] = merged.get(ranking, 0) + count
        return cls(
            candidates=tuple(Candidate(i, name) for i, name in enumerate(names)),
            groups=tuple(BallotGroup(r, c) for r, c in merged.items()),
        )

    @classmethod
    def from_names(
        cls, names: Sequence[str], groups: Iterable[tuple[Sequence[str], int]]
    ) -> BallotProfile:
        """Convenience constructor taking rankings as lists of candidate names."""
        index = {name: i for i, name in enumerate(names)}
        try:
            id_groups = [([index[name] for name in ranking], count) for ranking, count in groups]
        except KeyError as exc:
            raise UnknownCandidateError(exc.args[0]) from None
        return cls.from_groups(names, id_groups)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.candidates)

    @property
    def n_candidates(self) -> int:
        return len(self.candidates)

    @property
    def total_ballots(self) -> int:
        return total_ballots(self)

    def candidate_id(self, name: str) -> int:
        for c in self.candidates:
            if c.name == name.strip():
                return c.id
        raise UnknownCandidateError(name)

    def name_of(self, candidate: int) -> str:
        return self.candidates[candidate].name

    def format_ranking(self, ranking: Sequence[int]) -> str:
        return ">".join(self.name_of(c) for c in ranking)

    def parse_ranking(self, text: str) -> tuple[int, ...]:
        """Parse ``A>B>C`` against this roster. Empty text is the empty ranking."""
        text = text.strip()
        if not text:
            return ()
        ranking = tuple(self.candidate_id(part) for part in text.split(">"))
        if len(set(ranking)) != len(ranking):
            raise ValueError(f"duplicate candidate in ranking {text!r}")
        return ranking


def total_ballots(profile: BallotProfile) -> int:
    return sum(g.count for g in profile.groups)


def _split_names(text: str, sep: str, lineno: int) -> list[str]:
    names = [part.strip() for part in text.split(sep)]
    if any(not name for name in names):
        raise BallotFormatError("empty candidate name", lineno)
    return names


def parse_profile(text: str) -> BallotProfile:
    """Parse ballot-file text into a normalized :class:`BallotProfile`.

    Raises:
        BallotFormatError: on any malformed line, duplicate candidate in a
            ranking, unknown candidate (header present), non-positive count,
            or an empty roster.
    """
    roster: list[str] | None = None
    header_names: set[str] = set()
    seen: dict[str, int] = {}
    order: list[str] = []
    rows: list[tuple[list[str], int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(HEADER_PREFIX):
                if roster is not None:
                    raise BallotFormatError("repeated candidates header", lineno)
                if rows:
                    raise BallotFormatError("candidates header after ballot lines", lineno)
                roster = _split_names(line[len(HEADER_PREFIX):], ",", lineno)
                header_names = set(roster)
                if len(header_names) != len(roster):
                    raise BallotFormatError("duplicate name in candidates header", lineno)
            continue

        count_text, sep, ranking_text = line.partition(",")
        if not sep:
            raise BallotFormatError(f"expected 'COUNT,RANKING', got {line!r}", lineno)
        count_text = count_text.strip()
        if not _COUNT_RE.fullmatch(count_text):
            raise BallotFormatError(f"invalid ballot count {count_text!r}", lineno)
        count = int(count_text)
        if count <= 0:
            raise BallotFormatError(f"ballot count must be positive, got {count}", lineno)

        ranking_text = ranking_text.strip()
        names = _split_names(ranking_text, ">", lineno) if ranking_text else []
        if len(set(names)) != len(names):
            raise BallotFormatError(f"duplicate candidate in ranking {ranking_text!r}", lineno)
        for name in names:
            if roster is not None:
                if name not in header_names:
                    raise BallotFormatError(f"unknown candidate {name!r}", lineno)
            elif name not in seen:
                seen[name] = len(order)
                order.append(name)
        rows.append((names, count))

    names = roster if roster is not None else order
    if not names:
        raise BallotFormatError("empty candidate roster")
    return BallotProfile.from_names(names, rows)


def format_profile(profile: BallotProfile) -> str:
    """Serialize to the ballot file format; ``parse_profile`` inverts it exactly."""
    lines = [HEADER_PREFIX + " " + ",".join(profile.names)]
    for g in profile.groups:
        lines.append(f"{g.count},{profile.format_ranking(g.ranking)}")
    return "\n".join(lines) + "\n"


def read_profile(path) -> BallotProfile:
    with open(path, encoding="utf-8") as f:
        return parse_profile(f.read())


def alaska_2022() -> BallotProfile:
    """The bundled 2022 Alaska special election ballot totals (nine groups)."""
    text = resources.files("coresupport").joinpath("data/alaska_2022.csv").read_text("utf-8")
    return parse_profile(text)


def restrict_profile(profile: BallotProfile, keep: Iterable[int]) -> BallotProfile:
    """Delete every candidate not in ``keep`` from each ballot.

    The roster is unchanged (ids stay stable); only rankings shrink. Rankings
    that become identical are merged and emptied ballots are kept as
    abstentions, so the ballot total is preserved.
    """
    keep = frozenset(keep)
    if not keep:
        raise ValueError("cannot restrict to an empty candidate set")
    unknown = [c for c in keep if not 0 <= c < profile.n_candidates]
    if unknown:
        raise ValueError(f"unknown candidate ids {sorted(unknown)}")
    return BallotProfile.from_groups(
        profile.names,
        ((tuple(c for c in g.ranking if c in keep), g.count) for g in profile.groups),
    )


def continuation_rate(profile: BallotProfile, candidate: int) -> Fraction:
    """Share of ``candidate``'s first-choice ballots that rank someone else too."""
    first = continued = 0
    for g in profile.groups:
        if g.ranking and g.ranking[0] == candidate:
            first += g.count
            if len(g.ranking) > 1:
                continued += g.count
    if first == 0:
        raise ValueError(f"{profile.name_of(candidate)} has no first-preference ballots")
    return Fraction(continued, first)


def format_percent(value: Fraction, places: int = 2) -> str:
    """Exact half-up rounding of a non-negative fraction to a percentage string."""
    q, r = divmod(value.numerator * 100 * 10**places, value.denominator)
    if 2 * r >= value.denominator:
        q += 1
    digits = str(q).rjust(places + 1, "0")
    if not places:
        return f"{digits}%"
    return f"{digits[:-places]}.{digits[-places:]}%"
