"""Axiomatic theories of a provability predicate over formulas.

A theory packages named axiom schemata with clause-level rules (always
including modus ponens) and compiles to first-order clauses over a
single unary predicate p and the term signature n, i, a, o.  The base
theory is da Costa's paraconsistent calculus C1; helpers extend it with
an explosion schema or a falsum constant, or delete schemata by id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .formulas import (
    Atom,
    Conj,
    Disj,
    Formula,
    Impl,
    MetaVar,
    Neg,
    consistency_op,
    formula_vars,
    parse,
)

__all__ = [
    "AxiomSchema",
    "Literal",
    "Clause",
    "Theory",
    "TooManyAssumptions",
    "MODUS_PONENS",
    "c1",
    "with_explosion",
    "with_bottom",
    "delete_schema",
    "structural_infinity_clauses",
    "atom_existence_clauses",
    "with_structural_infinity",
    "with_atom_existence",
    "ATOM_WITNESS_CONSTANT",
    "entails",
    "compile_theory",
    "theory_from_name",
]


@dataclass(frozen=True, slots=True)
class AxiomSchema:
    """A named schema; metavariables in the body range over all formulas."""

    id: str
    body: Formula

    def __str__(self) -> str:
        return f"{self.id}: {self.body}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A signed atomic statement: p(term) or term = term (pred "eq")."""

    positive: bool
    pred: str
    args: tuple[Formula, ...]

    def __post_init__(self):
        if self.pred not in ("p", "eq"):
            raise ValueError(f"unknown predicate {self.pred!r}")
        if len(self.args) != (1 if self.pred == "p" else 2):
            raise ValueError(f"bad arity for {self.pred}: {len(self.args)}")

    def __str__(self) -> str:
        if self.pred == "p":
            body = f"p({self.args[0]})"
        else:
            op = "=" if self.positive else "!="
            return f"{self.args[0]} {op} {self.args[1]}"
        return body if self.positive else f"-{body}"


def _plit(term: Formula, positive: bool = True) -> Literal:
    return Literal(positive, "p", (term,))


def _eqlit(a: Formula, b: Formula, positive: bool = True) -> Literal:
    return Literal(positive, "eq", (a, b))


@dataclass(frozen=True, slots=True)
class Clause:
    """A disjunction of literals, implicitly universally quantified.

    Metavariables appearing in the literals are read as variables
    ranging over the domain (all formulas syntactically; all elements
    when evaluated in a finite structure).
    """

    literals: tuple[Literal, ...]
    label: str = ""

    def variables(self) -> list[str]:
        seen: list[str] = []
        for lit in self.literals:
            for t in lit.args:
                for v in formula_vars(t):
                    if v not in seen:
                        seen.append(v)
        return seen

    def __str__(self) -> str:
        return " | ".join(str(l) for l in self.literals)


_X, _Y, _Z = MetaVar("X"), MetaVar("Y"), MetaVar("Z")

#: Modus ponens as a clause: -p(i(X,Y)) | -p(X) | p(Y).
MODUS_PONENS = Clause(
    (_plit(Impl(_X, _Y), False), _plit(_X, False), _plit(_Y, True)),
    label="mp",
)


@dataclass(frozen=True)
class Theory:
    """A named axiom set plus rule and optional structural clauses."""

    name: str
    schemata: tuple[AxiomSchema, ...]
    rule_clauses: tuple[Clause, ...] = (MODUS_PONENS,)
    structural_clauses: tuple[Clause, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        ids = [s.id for s in self.schemata]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate schema ids in {self.name}")
        if MODUS_PONENS not in self.rule_clauses:
            raise ValueError("every theory must retain the modus ponens rule")

    def schema(self, schema_id: str) -> AxiomSchema:
        for s in self.schemata:
            if s.id == schema_id:
                return s
        raise KeyError(f"no schema {schema_id!r} in theory {self.name}")

    def has_schema(self, schema_id: str) -> bool:
        return any(s.id == schema_id for s in self.schemata)


def _c1_schemata() -> tuple[AxiomSchema, ...]:
    positive = [
        ("A1", "i(X,i(Y,X))"),
        ("A2", "i(i(X,Y),i(i(X,i(Y,Z)),i(X,Z)))"),
        ("A3", "i(a(X,Y),X)"),
        ("A4", "i(a(X,Y),Y)"),
        ("A5", "i(X,i(Y,a(X,Y)))"),
        ("A6", "i(X,o(X,Y))"),
        ("A7", "i(Y,o(X,Y))"),
        ("A8", "i(i(X,Z),i(i(Y,Z),i(o(X,Y),Z)))"),
        ("A9", "o(X,n(X))"),
        ("A10", "i(n(n(X)),X)"),
    ]
    schemata = [AxiomSchema(sid, parse(text)) for sid, text in positive]
    xc, yc = consistency_op(_X), consistency_op(_Y)
    schemata += [
        # The well-behavedness axioms; X-degree-marked is n(a(X,n(X))).
        AxiomSchema("A11", Impl(xc, Impl(Impl(_Y, _X), Impl(Impl(_Y, Neg(_X)), Neg(_Y))))),
        AxiomSchema("A12", Impl(Conj(xc, yc), consistency_op(Conj(_X, _Y)))),
        AxiomSchema("A13", Impl(Conj(xc, yc), consistency_op(Disj(_X, _Y)))),
        AxiomSchema("A14", Impl(Conj(xc, yc), consistency_op(Impl(_X, _Y)))),
    ]
    return tuple(schemata)


def c1() -> Theory:
    """da Costa's C1: positive logic, excluded middle, double negation
    elimination, and the well-behavedness schemata A11-A14."""
    return Theory(name="c1", schemata=_c1_schemata())


def with_explosion(t: Theory) -> Theory:
    """Add the explosion schema EXP: i(X,i(n(X),Y)).  Idempotent by id."""
    if t.has_schema("EXP"):
        return t
    schema = AxiomSchema("EXP", parse("i(X,i(n(X),Y))"))
    return Theory(
        name=f"{t.name}+explosion",
        schemata=t.schemata + (schema,),
        rule_clauses=t.rule_clauses,
        structural_clauses=t.structural_clauses,
        constants=t.constants,
    )


def with_bottom(t: Theory) -> Theory:
    """Add a falsum constant bot and the schema BOT: i(bot,X).  Idempotent."""
    if t.has_schema("BOT"):
        return t
    schema = AxiomSchema("BOT", Impl(Atom("bot"), _X))
    constants = t.constants if "bot" in t.constants else t.constants + ("bot",)
    return Theory(
        name=f"{t.name}+bottom",
        schemata=t.schemata + (schema,),
        rule_clauses=t.rule_clauses,
        structural_clauses=t.structural_clauses,
        constants=constants,
    )


def delete_schema(t: Theory, schema_id: str) -> Theory:
    """Remove one schema by id; unknown ids raise KeyError."""
    t.schema(schema_id)  # raises if absent
    return Theory(
        name=f"{t.name}-{schema_id}",
        schemata=tuple(s for s in t.schemata if s.id != schema_id),
        rule_clauses=t.rule_clauses,
        structural_clauses=t.structural_clauses,
        constants=t.constants,
    )


def structural_infinity_clauses() -> tuple[Clause, ...]:
    """Clauses that force an infinite domain: implications are never
    negations, negation has no fixed point, and negation is injective.

    Any structure satisfying all three is infinite, so they are kept out
    of every default theory and attached explicitly when wanted.
    """
    return (
        Clause((_eqlit(Impl(_X, _Y), Neg(_Z), False),), label="impl_not_neg"),
        Clause((_eqlit(Neg(_X), _X, False),), label="neg_no_fixpoint"),
        Clause((_eqlit(Neg(_X), Neg(_Y), False), _eqlit(_X, _Y, True)), label="neg_injective"),
    )


#: Constant naming the witness element asserted by atom_existence_clauses.
ATOM_WITNESS_CONSTANT = "atom0"


def atom_existence_clauses() -> tuple[Clause, ...]:
    """Clauses pinning a constant to an element outside the range of all
    four operations, i.e. an atom of the structure (Skolemized form)."""
    w = Atom(ATOM_WITNESS_CONSTANT)
    return (
        Clause((_eqlit(w, Neg(_X), False),), label="atom0_not_neg"),
        Clause((_eqlit(w, Impl(_X, _Y), False),), label="atom0_not_impl"),
        Clause((_eqlit(w, Conj(_X, _Y), False),), label="atom0_not_conj"),
        Clause((_eqlit(w, Disj(_X, _Y), False),), label="atom0_not_disj"),
    )


def with_structural_infinity(t: Theory) -> Theory:
    """Attach the structural infinity clauses to a theory."""
    extra = tuple(c for c in structural_infinity_clauses() if c not in t.structural_clauses)
    return Theory(
        name=t.name,
        schemata=t.schemata,
        rule_clauses=t.rule_clauses,
        structural_clauses=t.structural_clauses + extra,
        constants=t.constants,
    )


def with_atom_existence(t: Theory) -> Theory:
    """Attach the atom-existence clauses (and their witness constant)."""
    extra = tuple(c for c in atom_existence_clauses() if c not in t.structural_clauses)
    constants = t.constants
    if ATOM_WITNESS_CONSTANT not in constants:
        constants = constants + (ATOM_WITNESS_CONSTANT,)
    return Theory(
        name=t.name,
        schemata=t.schemata,
        rule_clauses=t.rule_clauses,
        structural_clauses=t.structural_clauses + extra,
        constants=constants,
    )


class TooManyAssumptions(ValueError):
    """entails() got more than two assumptions without the extended flag."""


def entails(assumptions: Sequence[Formula], goal: Formula, extended: bool = False) -> Formula:
    """Encode an entailment as a nested implication.

    One assumption gives i(g1,goal); two give i(g1,i(g2,goal)), nesting
    left to right.  More than two raises TooManyAssumptions unless
    ``extended`` is set, in which case the fold continues arbitrarily.
    """
    if len(assumptions) > 2 and not extended:
        raise TooManyAssumptions(
            f"{len(assumptions)} assumptions; pass extended=True to nest beyond two"
        )
    result = goal
    for g in reversed(list(assumptions)):
        result = Impl(g, result)
    return result


def compile_theory(t: Theory) -> list[Clause]:
    """Flatten a theory to clauses: one positive unit clause per schema
    (metavariables read as universally quantified domain variables),
    then the rule clauses, then any structural clauses, verbatim."""
    out = [Clause((_plit(s.body),), label=s.id) for s in t.schemata]
    out.extend(t.rule_clauses)
    out.extend(t.structural_clauses)
    return out


def theory_from_name(name: str) -> Theory:
    """Resolve a theory name such as c1, c1+explosion, or c1+bottom-A9.

    Grammar: ``c1`` followed by any number of ``+explosion`` / ``+bottom``
    extensions and ``-<schema_id>`` deletions, applied left to right.
    """
    text = name.strip()
    if not text.startswith("c1"):
        raise ValueError(f"unknown base theory in {name!r}")
    t = c1()
    rest = text[2:]
    while rest:
        if rest.startswith("+"):
            for key, builder in (("explosion", with_explosion), ("bottom", with_bottom)):
                if rest[1:].startswith(key):
                    t = builder(t)
                    rest = rest[1 + len(key):]
                    break
            else:
                raise ValueError(f"unknown extension in theory name {name!r}")
        elif rest.startswith("-"):
            end = 1
            while end < len(rest) and rest[end] not in "+-":
                end += 1
            sid = rest[1:end].upper()
            try:
                t = delete_schema(t, sid)
            except KeyError:
                raise ValueError(f"unknown schema {sid!r} in theory name {name!r}")
            rest = rest[end:]
        else:
            raise ValueError(f"cannot parse theory name {name!r}")
    return t
