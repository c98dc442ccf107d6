"""A condensed-detachment saturation prover with an independent checker.

derive() runs a given-clause loop: axiom instances seed the passive
queue, the smallest formula (ties by insertion order) is activated, and
condensed detachment is attempted against every activated partner in
both major/minor roles.  Results are canonicalized; goal subsumption is
checked before the retention filters (size cap, exact duplicates,
forward subsumption), so budgets never hide a found proof.

check_proof() re-derives every line from its stated premises using only
the syntax primitives, sharing none of the saturation machinery.

independence_check() races derive against a refuting model search in
fixed round-robin quanta and reports which side answered.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .formulas import (
    Formula,
    Impl,
    NotImplication,
    UnifyFailure,
    _cd,
    alpha_equal,
    canonicalize,
    condensed_detach,
    formula_size,
    match,
    parse,
)
from .models import FiniteModel
from .search import ModelSearch, RefuteSchema, SearchConfig
from .search import Exhausted as SearchExhausted
from .theories import Theory, delete_schema

__all__ = [
    "AxiomLine",
    "CDLine",
    "Proof",
    "ProofCheck",
    "ProverConfig",
    "ProverStats",
    "Exhausted",
    "Derivation",
    "derive",
    "check_proof",
    "parse_transcript",
    "Derivable",
    "Independent",
    "Unknown",
    "independence_check",
]


@dataclass(frozen=True)
class AxiomLine:
    """A proof line instantiating a named schema."""

    schema_id: str
    formula: Formula


@dataclass(frozen=True)
class CDLine:
    """A proof line detaching line ``major`` against line ``minor``
    (0-based indices into the proof)."""

    major: int
    minor: int
    formula: Formula


ProofLine = Union[AxiomLine, CDLine]


@dataclass(frozen=True)
class Proof:
    """A DAG of proof lines; ``goal_line`` indexes the conclusion."""

    lines: tuple[ProofLine, ...]
    goal_line: int

    def transcript(self) -> str:
        """Render as one line per step, 1-based:
        ``<n> AX <schema_id> <formula>`` / ``<n> CD <major>,<minor> <formula>``."""
        out = []
        for i, line in enumerate(self.lines, start=1):
            if isinstance(line, AxiomLine):
                out.append(f"{i} AX {line.schema_id} {line.formula}")
            else:
                out.append(f"{i} CD {line.major + 1},{line.minor + 1} {line.formula}")
        return "\n".join(out)


def parse_transcript(text: str) -> Proof:
    """Inverse of Proof.transcript; the last line is taken as the goal."""
    lines: list[ProofLine] = []
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw:
            continue
        parts = raw.split(maxsplit=3)
        if len(parts) != 4:
            raise ValueError(f"malformed proof line: {raw!r}")
        num, kind, ref, formula_text = parts
        if int(num) != len(lines) + 1:
            raise ValueError(f"out-of-order proof line: {raw!r}")
        formula = parse(formula_text)
        if kind == "AX":
            lines.append(AxiomLine(ref, formula))
        elif kind == "CD":
            major_s, minor_s = ref.split(",")
            lines.append(CDLine(int(major_s) - 1, int(minor_s) - 1, formula))
        else:
            raise ValueError(f"unknown proof step kind {kind!r}")
    if not lines:
        raise ValueError("empty proof transcript")
    return Proof(tuple(lines), len(lines) - 1)


@dataclass(frozen=True)
class ProverConfig:
    max_generated: int = 1_000_000
    max_formula_size: int = 48
    max_seconds: Optional[float] = None

    def __post_init__(self):
        if self.max_generated <= 0 or self.max_formula_size <= 0:
            raise ValueError("budgets must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")


@dataclass
class ProverStats:
    """Saturation counters.  generated counts every successful
    detachment, including re-derivations of known conclusions; distinct
    counts conclusions never seen before."""

    generated: int = 0
    distinct: int = 0
    retained: int = 0
    activated: int = 0
    duplicates: int = 0
    subsumed: int = 0
    oversize: int = 0

    def to_dict(self) -> dict:
        return {
            "generated": self.generated,
            "distinct": self.distinct,
            "retained": self.retained,
            "activated": self.activated,
            "duplicates": self.duplicates,
            "subsumed": self.subsumed,
            "oversize": self.oversize,
        }


@dataclass
class Exhausted:
    """derive() gave up; ``reason`` names the budget that tripped
    (max_generated, max_seconds, or saturated)."""

    reason: str
    stats: ProverStats


def _shape(f: Formula) -> str:
    name = type(f).__name__
    if name == "MetaVar":
        return "V"
    if name == "Atom":
        return "c:" + f.name
    return name


def _sub_key(f: Formula):
    """Index key for the subsumption store: root symbol plus child
    shapes.  A pattern in bucket k can only match targets whose key
    specializes k (child shape V matches anything)."""
    name = type(f).__name__
    if name == "MetaVar":
        return None  # universal bucket
    if name == "Atom":
        return ("A", f.name)
    if name == "Neg":
        return ("N", _shape(f.arg))
    return (name, _shape(f.lhs), _shape(f.rhs))


def _sub_probe_keys(f: Formula) -> list:
    """Bucket keys whose patterns could generalize f."""
    name = type(f).__name__
    if name == "MetaVar":
        return []
    if name == "Atom":
        return [("A", f.name)]
    if name == "Neg":
        s = _shape(f.arg)
        return [("N", "V")] if s == "V" else [("N", "V"), ("N", s)]
    ls, rs = _shape(f.lhs), _shape(f.rhs)
    keys = {(name, "V", "V"), (name, ls, "V"), (name, "V", rs), (name, ls, rs)}
    return list(keys)


_TICK = 64


class Derivation:
    """A resumable derive() run: step(quantum) advances the saturation
    by up to ``quantum`` generated formulas and returns Proof, Exhausted,
    or None while work remains."""

    def __init__(self, t: Theory, goal: Formula, cfg: ProverConfig = ProverConfig()):
        self.theory = t
        self.goal = canonicalize(goal)
        self.cfg = cfg
        self.stats = ProverStats()
        self._result: Optional[Union[Proof, Exhausted]] = None
        self._gen = self._run()

    # record layout: (formula, kind, ref1, ref2); kind "AX" stores the
    # schema id in ref1.

    def _run(self) -> Iterator[tuple]:
        cfg = self.cfg
        stats = self.stats
        start = time.monotonic()
        records: list[tuple] = []
        passive: list[tuple[int, int, int]] = []  # (size, seq, record id)
        usable: list[int] = []
        seen: set[Formula] = set()  # every distinct conclusion, retained or not
        buckets: dict[tuple, list[tuple[int, Formula, int]]] = {}
        universal: list[tuple[int, Formula, int]] = []  # bare-variable patterns
        self._records = records

        def retain(formula: Formula, kind: str, ref1, ref2) -> int:
            rid = len(records)
            records.append((formula, kind, ref1, ref2))
            size = formula_size(formula)
            key = _sub_key(formula)
            if key is None:
                universal.append((size, formula, rid))
            else:
                buckets.setdefault(key, []).append((size, formula, rid))
            heapq.heappush(passive, (size, rid, rid))
            stats.retained += 1
            return rid

        def subsumer(formula: Formula, size: int) -> Optional[int]:
            for rsize, rformula, rid in universal:
                if rsize <= size:
                    return rid
            for key in _sub_probe_keys(formula):
                for rsize, rformula, rid in buckets.get(key, ()):
                    if rsize <= size and match(rformula, formula) is not None:
                        return rid
            return None

        for schema in self.theory.schemata:
            body = canonicalize(schema.body)
            seen.add(body)
            rid = retain(body, "AX", schema.id, None)
            if match(body, self.goal) is not None:
                yield ("proof", self._build_proof(rid))
                return

        while True:
            if cfg.max_seconds is not None and time.monotonic() - start > cfg.max_seconds:
                yield ("exhausted", Exhausted("max_seconds", stats))
                return
            if not passive:
                yield ("exhausted", Exhausted("saturated", stats))
                return
            _, _, given = heapq.heappop(passive)
            usable.append(given)
            stats.activated += 1
            given_formula = records[given][0]
            for partner in list(usable):
                partner_formula = records[partner][0]
                pairs = ((given, given_formula, partner, partner_formula),)
                if partner != given:
                    pairs = (
                        (given, given_formula, partner, partner_formula),
                        (partner, partner_formula, given, given_formula),
                    )
                for maj_id, maj, min_id, minor in pairs:
                    if not isinstance(maj, Impl):
                        continue
                    result = _cd(maj, minor)
                    if result is None:
                        continue
                    stats.generated += 1
                    if stats.generated % _TICK == 0:
                        yield ("tick",)
                        if cfg.max_seconds is not None and time.monotonic() - start > cfg.max_seconds:
                            yield ("exhausted", Exhausted("max_seconds", stats))
                            return
                    if result in seen:
                        stats.duplicates += 1
                    else:
                        seen.add(result)
                        stats.distinct += 1
                        if match(result, self.goal) is not None:
                            rid = retain(result, "CD", maj_id, min_id)
                            yield ("proof", self._build_proof(rid))
                            return
                        size = formula_size(result)
                        if size > cfg.max_formula_size:
                            stats.oversize += 1
                        elif subsumer(result, size) is not None:
                            stats.subsumed += 1
                        else:
                            retain(result, "CD", maj_id, min_id)
                    if stats.generated >= cfg.max_generated:
                        yield ("exhausted", Exhausted("max_generated", stats))
                        return

    def _build_proof(self, goal_rid: int) -> Proof:
        records = self._records
        needed: set[int] = set()
        stack = [goal_rid]
        while stack:
            rid = stack.pop()
            if rid in needed:
                continue
            needed.add(rid)
            _, kind, ref1, ref2 = records[rid]
            if kind == "CD":
                stack.append(ref1)
                stack.append(ref2)
        order = sorted(needed)
        renumber = {rid: i for i, rid in enumerate(order)}
        lines: list[ProofLine] = []
        for rid in order:
            formula, kind, ref1, ref2 = records[rid]
            if kind == "AX":
                lines.append(AxiomLine(ref1, formula))
            else:
                lines.append(CDLine(renumber[ref1], renumber[ref2], formula))
        return Proof(tuple(lines), renumber[goal_rid])

    def step(self, quantum: int) -> Optional[Union[Proof, Exhausted]]:
        """Advance by up to quantum * 64 generated formulas."""
        if self._result is not None:
            return self._result
        ticks = 0
        while True:
            try:
                event = next(self._gen)
            except StopIteration:  # defensive; _run always yields a verdict
                self._result = Exhausted("saturated", self.stats)
                return self._result
            if event[0] in ("proof", "exhausted"):
                self._result = event[1]
                return self._result
            ticks += 1
            if ticks >= quantum:
                return None


def derive(t: Theory, goal: Formula, cfg: ProverConfig = ProverConfig()) -> Union[Proof, Exhausted]:
    """Prove that goal (or a generalization of it) is derivable in t.

    Deterministic: identical inputs replay the identical saturation and
    return the identical transcript."""
    d = Derivation(t, goal, cfg)
    while True:
        result = d.step(1 << 20)
        if result is not None:
            return result


# ---------------------------------------------------------------------------
# independent checking


@dataclass
class ProofCheck:
    ok: bool
    line: Optional[int] = None  # 0-based index of the offending line
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def check_proof(t: Theory, proof: Proof) -> ProofCheck:
    """Re-derive every line from its premises.  Axiom lines must match
    their schema; CD lines must equal (up to renaming) the condensed
    detachment of their referenced lines; references must point
    backwards; the goal index must be in range."""
    lines = proof.lines
    if not lines:
        return ProofCheck(False, None, "empty proof")
    if not 0 <= proof.goal_line < len(lines):
        return ProofCheck(False, None, f"goal line {proof.goal_line} out of range")
    for i, line in enumerate(lines):
        if isinstance(line, AxiomLine):
            try:
                schema = t.schema(line.schema_id)
            except KeyError:
                return ProofCheck(False, i, f"unknown schema {line.schema_id}")
            if match(schema.body, line.formula) is None:
                return ProofCheck(False, i, f"not an instance of {line.schema_id}")
        elif isinstance(line, CDLine):
            if not (0 <= line.major < i and 0 <= line.minor < i):
                return ProofCheck(False, i, "premise reference is not backward")
            try:
                expected = condensed_detach(
                    lines[line.major].formula, lines[line.minor].formula
                )
            except (NotImplication, UnifyFailure) as exc:
                return ProofCheck(False, i, f"detachment fails: {exc}")
            if not alpha_equal(expected, line.formula):
                return ProofCheck(False, i, f"line is {line.formula}, detachment gives {expected}")
        else:
            return ProofCheck(False, i, f"unknown line kind {type(line).__name__}")
    return ProofCheck(True)


# ---------------------------------------------------------------------------
# independence


@dataclass(frozen=True)
class Derivable:
    """The prover answered: the schema follows from the rest."""

    proof: Proof


@dataclass(frozen=True)
class Independent:
    """The model finder answered: a countermodel separates the schema."""

    model: FiniteModel


@dataclass(frozen=True)
class Unknown:
    """Both budgets ran out; details carry both sides' statistics."""

    details: dict


_PROVER_QUANTUM = 4      # * 64 generated formulas per slice
_SEARCH_QUANTUM = 4      # * 256 decisions per slice


def independence_check(
    t: Theory,
    schema_id: str,
    cfg: ProverConfig = ProverConfig(),
    max_model_size: int = 4,
) -> Union[Derivable, Independent, Unknown]:
    """Is schema_id derivable from t without it, or separated by a
    finite countermodel?  Runs the prover and the refuting model search
    in fixed alternating quanta; the first definitive answer wins."""
    reduced = delete_schema(t, schema_id)
    goal = t.schema(schema_id).body
    deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds
    derivation = Derivation(reduced, goal, cfg)
    refuter = ModelSearch(
        reduced,
        (RefuteSchema.from_theory(t, schema_id),),
        SearchConfig(min_size=1, max_size=max_model_size),
    )
    prover_done: Optional[Exhausted] = None
    search_done: Optional[SearchExhausted] = None
    while True:
        if prover_done is None:
            outcome = derivation.step(_PROVER_QUANTUM)
            if isinstance(outcome, Proof):
                return Derivable(outcome)
            if isinstance(outcome, Exhausted):
                prover_done = outcome
        if search_done is None:
            outcome = refuter.step(_SEARCH_QUANTUM)
            if isinstance(outcome, FiniteModel):
                return Independent(outcome)
            if isinstance(outcome, SearchExhausted):
                search_done = outcome
        if prover_done is not None and search_done is not None:
            return Unknown({
                "prover": {"reason": prover_done.reason, **prover_done.stats.to_dict()},
                "search": search_done.stats.to_dict(),
            })
        if deadline is not None and time.monotonic() > deadline:
            return Unknown({
                "reason": "max_seconds",
                "prover": derivation.stats.to_dict(),
                "search": refuter.stats.to_dict(),
            })
