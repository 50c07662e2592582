"""JSON encoding of results, keyed by candidate name.

Every value produced by the engine has an ``encode`` branch and a matching
``decode_*`` method so reports round-trip exactly. The document layout is
described in docs/json-schema.md.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Sequence

from .criteria import (
    CriterionReport,
    IIAReport,
    MonotonicityWitness,
    Move,
    PairFlip,
    PairTally,
)
from .oracle import Counterexample, GeneralResultReport, ScanSummary
from .tabulation import CondorcetOutcome, PairwiseMatrix, RoundLog


class Codec:
    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self._ids = {name: i for i, name in enumerate(self.names)}

    def _n(self, c: int) -> str:
        return self.names[c]

    def names_of(self, cs) -> list[str]:
        return [self.names[c] for c in cs]

    def _id(self, name: str) -> int:
        return self._ids[name]

    def _ids_of(self, names) -> tuple[int, ...]:
        return tuple(self._ids[name] for name in names)

    # -- encoding -------------------------------------------------------

    def encode(self, value):
        if isinstance(value, RoundLog):
            return {
                "round": value.round,
                "active": self.names_of(value.active),
                "tallies": {self._n(c): v for c, v in sorted(value.tallies.items())},
                "exhausted": value.exhausted,
                "eliminated": self._n(value.eliminated),
                "tiebreak": value.tiebreak,
            }
        if isinstance(value, PairwiseMatrix):
            n = value.n_candidates
            return {
                "total": value.total,
                "beats": {
                    self._n(x): {self._n(y): value.beats[x][y] for y in range(n) if y != x}
                    for x in range(n)
                },
                "pairs": [
                    {
                        "x": self._n(x),
                        "y": self._n(y),
                        "x_votes": value.beats[x][y],
                        "y_votes": value.beats[y][x],
                        "abstain": value.abstain(x, y),
                    }
                    for x in range(n)
                    for y in range(x + 1, n)
                ],
            }
        if isinstance(value, CondorcetOutcome):
            return {
                "ranking": None if value.ranking is None else self.names_of(value.ranking),
                "smith_set": self.names_of(sorted(value.smith_set)),
                "tied_pairs": [self.names_of(p) for p in value.tied_pairs],
            }
        if isinstance(value, PairTally):
            return {
                "x": self._n(value.x),
                "y": self._n(value.y),
                "x_votes": value.x_votes,
                "y_votes": value.y_votes,
                "abstain": value.abstain,
                "restriction": value.restriction,
                "verdict": value.verdict.value,
            }
        if isinstance(value, CriterionReport):
            return {
                "criterion": value.criterion,
                "ranking": self.names_of(value.ranking),
                "pairs": [self.encode(p) for p in value.pairs],
                "passed": value.passed,
            }
        if isinstance(value, Move):
            return {
                "group": value.group,
                "source": self.names_of(value.source),
                "target": self.names_of(value.target),
                "count": value.count,
            }
        if isinstance(value, MonotonicityWitness):
            return {
                "direction": value.direction,
                "candidate": self._n(value.candidate),
                "k": value.k,
                "moves": [self.encode(m) for m in value.moves],
                "original_winner": self._n(value.original_winner),
                "new_winner": self._n(value.new_winner),
                "original_rounds": [self.encode(r) for r in value.original_rounds],
                "new_rounds": [self.encode(r) for r in value.new_rounds],
            }
        if isinstance(value, IIAReport):
            return {
                "removed": self._n(value.removed),
                "before": self.names_of(value.before),
                "after": self.names_of(value.after),
                "flips": [
                    {
                        "before_upper": self._n(f.before_upper),
                        "before_lower": self._n(f.before_lower),
                        "tally": self.encode(f.tally),
                    }
                    for f in value.flips
                ],
            }
        if isinstance(value, ScanSummary):
            return asdict(value)
        if isinstance(value, GeneralResultReport):
            return {
                "trials": value.trials,
                "applicable": value.applicable,
                "holds": value.holds,
                "counterexamples": [
                    {"seed": c.seed, "irv": self.names_of(c.irv), "condorcet": self.names_of(c.condorcet)}
                    for c in value.counterexamples
                ],
            }
        raise TypeError(f"cannot encode {type(value).__name__}")

    # -- decoding -------------------------------------------------------

    def decode_round(self, d) -> RoundLog:
        return RoundLog(
            d["round"],
            self._ids_of(d["active"]),
            {self._id(name): v for name, v in d["tallies"].items()},
            d["exhausted"],
            self._id(d["eliminated"]),
            d["tiebreak"],
        )

    def decode_matrix(self, d) -> PairwiseMatrix:
        n = len(self.names)
        beats = [[0] * n for _ in range(n)]
        for x, row in d["beats"].items():
            for y, v in row.items():
                beats[self._id(x)][self._id(y)] = v
        return PairwiseMatrix(tuple(map(tuple, beats)), d["total"])

    def decode_condorcet(self, d) -> CondorcetOutcome:
        return CondorcetOutcome(
            None if d["ranking"] is None else self._ids_of(d["ranking"]),
            frozenset(self._ids_of(d["smith_set"])),
            tuple(self._ids_of(p) for p in d["tied_pairs"]),
        )

    def decode_tally(self, d) -> PairTally:
        return PairTally(
            self._id(d["x"]), self._id(d["y"]), d["x_votes"], d["y_votes"], d["abstain"], d["restriction"]
        )

    def decode_criterion(self, d) -> CriterionReport:
        return CriterionReport(
            d["criterion"], self._ids_of(d["ranking"]), tuple(self.decode_tally(p) for p in d["pairs"])
        )

    def decode_witness(self, d) -> MonotonicityWitness:
        return MonotonicityWitness(
            d["direction"],
            self._id(d["candidate"]),
            tuple(
                Move(m["group"], self._ids_of(m["source"]), self._ids_of(m["target"]), m["count"])
                for m in d["moves"]
            ),
            self._id(d["original_winner"]),
            self._id(d["new_winner"]),
            tuple(self.decode_round(r) for r in d["original_rounds"]),
            tuple(self.decode_round(r) for r in d["new_rounds"]),
        )

    def decode_iia(self, d) -> IIAReport:
        return IIAReport(
            self._id(d["removed"]),
            self._ids_of(d["before"]),
            self._ids_of(d["after"]),
            tuple(
                PairFlip(self._id(f["before_upper"]), self._id(f["before_lower"]), self.decode_tally(f["tally"]))
                for f in d["flips"]
            ),
        )

    @staticmethod
    def decode_scan(d) -> ScanSummary:
        return ScanSummary(**d)

    def decode_general(self, d) -> GeneralResultReport:
        return GeneralResultReport(
            d["trials"],
            d["applicable"],
            d["holds"],
            tuple(
                Counterexample(c["seed"], self._ids_of(c["irv"]), self._ids_of(c["condorcet"]))
                for c in d["counterexamples"]
            ),
        )


def dumps(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
