"""Finite structures interpreting the signature n, i, a, o plus a
provability subset, with analyzers for the properties the experiments
probe: bottom-like elements, conditional explosiveness, non-explosive
contradictions, atoms, and imminent explosion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence, Union

from .formulas import Atom, Conj, Disj, Formula, Impl, MetaVar, Neg
from .theories import Clause, Literal, Theory, compile_theory

__all__ = [
    "FiniteModel",
    "Violation",
    "ModelCheckResult",
    "check_model",
    "eval_term",
    "literal_holds",
    "model_to_json",
    "model_from_json",
    "trivial_model",
    "classical_model",
    "bottom_like",
    "explosive_elements",
    "conditionally_explosive",
    "nonexplosive_contradiction_witness",
    "atoms",
    "imminent_explosion_holds",
    "imminent_explosion_counterexample",
]

Row = tuple[int, ...]
Table = tuple[Row, ...]


def _as_table(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class FiniteModel:
    """A finite interpretation: four operation tables over 0..size-1 and
    a provable subset.  Constants (when a theory declares any) map names
    to elements; absent entries default to element 0."""

    size: int
    neg: Row
    impl: Table
    conj: Table
    disj: Table
    provable: frozenset[int]
    constants: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise ValueError("size must be at least 1")
        object.__setattr__(self, "neg", tuple(self.neg))
        object.__setattr__(self, "impl", _as_table(self.impl))
        object.__setattr__(self, "conj", _as_table(self.conj))
        object.__setattr__(self, "disj", _as_table(self.disj))
        object.__setattr__(self, "provable", frozenset(self.provable))
        object.__setattr__(self, "constants", dict(self.constants))
        if len(self.neg) != n or any(not 0 <= v < n for v in self.neg):
            raise ValueError("neg must map 0..size-1 into the domain")
        for name, table in (("impl", self.impl), ("conj", self.conj), ("disj", self.disj)):
            if len(table) != n or any(len(row) != n for row in table):
                raise ValueError(f"{name} must be a size x size table")
            if any(not 0 <= v < n for row in table for v in row):
                raise ValueError(f"{name} entries must lie in the domain")
        if any(not 0 <= e < n for e in self.provable):
            raise ValueError("provable must be a subset of the domain")
        if any(not 0 <= v < n for v in self.constants.values()):
            raise ValueError("constant interpretations must lie in the domain")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteModel):
            return NotImplemented
        return (
            self.size == other.size
            and self.neg == other.neg
            and self.impl == other.impl
            and self.conj == other.conj
            and self.disj == other.disj
            and self.provable == other.provable
            and dict(self.constants) == dict(other.constants)
        )

    def __hash__(self) -> int:
        return hash((
            self.size, self.neg, self.impl, self.conj, self.disj,
            self.provable, tuple(sorted(self.constants.items())),
        ))

    def constant(self, name: str) -> int:
        return self.constants.get(name, 0)


def eval_term(m: FiniteModel, term: Formula, env: Mapping[str, int]) -> int:
    """Evaluate a term whose metavariables are bound to elements by env.
    Atoms denote constants (element 0 unless the model says otherwise)."""
    if isinstance(term, MetaVar):
        return env[term.name]
    if isinstance(term, Atom):
        return m.constant(term.name)
    if isinstance(term, Neg):
        return m.neg[eval_term(m, term.arg, env)]
    left = eval_term(m, term.lhs, env)
    right = eval_term(m, term.rhs, env)
    if isinstance(term, Impl):
        return m.impl[left][right]
    if isinstance(term, Conj):
        return m.conj[left][right]
    return m.disj[left][right]


def literal_holds(m: FiniteModel, lit: Literal, env: Mapping[str, int]) -> bool:
    if lit.pred == "p":
        value = eval_term(m, lit.args[0], env) in m.provable
    else:
        value = eval_term(m, lit.args[0], env) == eval_term(m, lit.args[1], env)
    return value == lit.positive


@dataclass(frozen=True)
class Violation:
    clause: Clause
    assignment: tuple[tuple[str, int], ...]

    def __str__(self) -> str:
        env = ", ".join(f"{v}={e}" for v, e in self.assignment)
        label = self.clause.label or str(self.clause)
        return f"{label} fails at {{{env}}}"


REPORT_CAP = 100


@dataclass
class ModelCheckResult:
    """Outcome of checking a model against a theory.  Violations beyond
    REPORT_CAP entries are counted in total_violations but not listed."""

    ok: bool
    violations: list[Violation]
    total_violations: int

    def __bool__(self) -> bool:
        return self.ok


def check_model(m: FiniteModel, t: Theory) -> ModelCheckResult:
    """Check every compiled clause of t over every assignment, in clause
    order and lexicographic assignment order over sorted variable names."""
    violations: list[Violation] = []
    total = 0
    for clause in compile_theory(t):
        names = sorted(clause.variables())
        for values in product(range(m.size), repeat=len(names)):
            env = dict(zip(names, values))
            if any(literal_holds(m, lit, env) for lit in clause.literals):
                continue
            total += 1
            if len(violations) < REPORT_CAP:
                violations.append(Violation(clause, tuple(zip(names, values))))
    return ModelCheckResult(total == 0, violations, total)


# ---------------------------------------------------------------------------
# interchange format


def model_to_json(m: FiniteModel) -> str:
    """Serialize to the interchange form, e.g.
    {"size":2,"neg":[1,0],"impl":[[1,1],[0,1]],...,"provable":[1]}."""
    doc: dict = {
        "size": m.size,
        "neg": list(m.neg),
        "impl": [list(r) for r in m.impl],
        "conj": [list(r) for r in m.conj],
        "disj": [list(r) for r in m.disj],
        "provable": sorted(m.provable),
    }
    if m.constants:
        doc["constants"] = {k: m.constants[k] for k in sorted(m.constants)}
    return json.dumps(doc, separators=(",", ":"))


def model_from_json(text: Union[str, bytes, dict]) -> FiniteModel:
    doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    return FiniteModel(
        size=doc["size"],
        neg=tuple(doc["neg"]),
        impl=_as_table(doc["impl"]),
        conj=_as_table(doc["conj"]),
        disj=_as_table(doc["disj"]),
        provable=frozenset(doc["provable"]),
        constants=dict(doc.get("constants", {})),
    )


def trivial_model() -> FiniteModel:
    """The one-element model with its sole element provable."""
    return FiniteModel(
        size=1, neg=(0,), impl=((0,),), conj=((0,),), disj=((0,),),
        provable=frozenset({0}),
    )


def classical_model() -> FiniteModel:
    """The two-valued Boolean model: 0 false, 1 true, provable = {1}."""
    return FiniteModel(
        size=2,
        neg=(1, 0),
        impl=((1, 1), (0, 1)),
        conj=((0, 0), (0, 1)),
        disj=((0, 1), (1, 1)),
        provable=frozenset({1}),
    )


# ---------------------------------------------------------------------------
# analyzers


def bottom_like(m: FiniteModel) -> set[int]:
    """Elements d with impl[d][y] provable for every y: anything follows
    from d, so d behaves like falsum."""
    return {
        d for d in range(m.size)
        if all(m.impl[d][y] in m.provable for y in range(m.size))
    }


def explosive_elements(m: FiniteModel) -> set[int]:
    """Elements x such that x and n(x) jointly entail everything, read
    through the nested-implication encoding i(x,i(n(x),y))."""
    return {
        x for x in range(m.size)
        if all(m.impl[x][m.impl[m.neg[x]][y]] in m.provable for y in range(m.size))
    }


def conditionally_explosive(m: FiniteModel) -> set[int]:
    """Elements d whose provability would flood the structure: d in
    provable implies provable is the whole domain.  Vacuously includes
    every non-provable element, and everything when provable is total."""
    if len(m.provable) == m.size:
        return set(range(m.size))
    return {d for d in range(m.size) if d not in m.provable}


def nonexplosive_contradiction_witness(m: FiniteModel) -> Optional[tuple[int, int]]:
    """First (x, y) with impl[conj[x][neg[x]]][y] not provable: the
    contradiction a(x,n(x)) fails to entail y.  None when every
    contradiction element is bottom-like."""
    for x in range(m.size):
        c = m.conj[x][m.neg[x]]
        for y in range(m.size):
            if m.impl[c][y] not in m.provable:
                return (x, y)
    return None


def atoms(m: FiniteModel) -> set[int]:
    """Elements outside the range of all four operations."""
    ranged: set[int] = set(m.neg)
    for table in (m.impl, m.conj, m.disj):
        for row in table:
            ranged.update(row)
    return set(range(m.size)) - ranged


def imminent_explosion_counterexample(m: FiniteModel) -> Optional[int]:
    """First x violating: some y makes {x, n(x), y} entail every z via
    the nesting impl[x][impl[neg[x]][impl[y][z]]].  None when the
    imminent-explosion principle holds."""
    for x in range(m.size):
        nx = m.neg[x]
        if not any(
            all(m.impl[x][m.impl[nx][m.impl[y][z]]] in m.provable for z in range(m.size))
            for y in range(m.size)
        ):
            return x
    return None


def imminent_explosion_holds(m: FiniteModel) -> bool:
    """Whether every x has a y making {x, n(x), y} entail everything."""
    return imminent_explosion_counterexample(m) is None
