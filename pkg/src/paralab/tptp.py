"""TPTP FOF export for cross-checking with external provers.

The whole theory becomes a problem file: one axiom formula per compiled
unit clause, the modus ponens rule in implication form, and optionally
a conjecture.  Negating the conjecture turns it into an axiom so a
model finder will hunt for a countermodel instead.

Only the FOF dialect is emitted.  The term language is the same prefix
grammar used everywhere else, which happens to be valid TPTP term
syntax as long as variables are upper-case and function symbols are
lower-case, which ours are.
"""

from __future__ import annotations

from typing import Optional

from .formulas import Formula, formula_vars
from .theories import Clause, Literal, Theory, compile_theory

__all__ = ["export_tptp", "answer4_conjecture", "clause_to_fof"]


#: The rule clause in its familiar implication form; the generic
#: disjunctive rendering would obscure it for human readers.
_MP_LINE = "fof(mp, axiom, ![X,Y]: ((p(i(X,Y)) & p(X)) => p(Y)))."

#: There is always a proposition whose provability floods everything:
#: a classically valid sentence worth handing to an external prover.
_ANSWER4_LINE = "fof(answer4, conjecture, ?[X]: (p(X) => ![Y]: p(Y)))."


def _literal_fof(lit: Literal) -> str:
    if lit.pred == "p":
        body = f"p({lit.args[0]})"
        return body if lit.positive else f"~{body}"
    op = "=" if lit.positive else "!="
    return f"{lit.args[0]} {op} {lit.args[1]}"


def _quantify(names: list[str], body: str) -> str:
    if not names:
        return body
    return f"![{','.join(names)}]: {body}"


def clause_to_fof(clause: Clause, fof_id: str, role: str = "axiom") -> str:
    """Render one clause as a fof line.  Unit clauses come out bare;
    wider clauses as a parenthesized disjunction."""
    parts = [_literal_fof(lit) for lit in clause.literals]
    body = parts[0] if len(parts) == 1 else "(" + " | ".join(parts) + ")"
    return f"fof({fof_id}, {role}, {_quantify(clause.variables(), body)})."


def _conjecture_lines(goal: Formula, negate: bool) -> list[str]:
    names = formula_vars(goal)
    quantified = _quantify(names, f"p({goal})")
    if negate:
        return [f"fof(goal, axiom, ~({quantified}))."]
    return [f"fof(goal, conjecture, {quantified})."]


def export_tptp(t: Theory, conjecture: Optional[Formula] = None,
                negate: bool = False) -> str:
    """The theory as a TPTP FOF problem document.

    Every compiled clause becomes an axiom line named by its label
    (lower-cased); modus ponens keeps its implication form.  A
    conjecture is emitted under the id ``goal``, or, when negate is
    set, as a negated axiom so model finders search for countermodels.
    The document is deterministic down to the byte.
    """
    lines: list[str] = []
    for i, clause in enumerate(compile_theory(t)):
        if clause.label == "mp":
            lines.append(_MP_LINE)
            continue
        fof_id = clause.label.lower() if clause.label else f"clause{i}"
        lines.append(clause_to_fof(clause, fof_id))
    if conjecture is not None:
        lines.extend(_conjecture_lines(conjecture, negate))
    return "\n".join(lines) + "\n"


def answer4_conjecture() -> str:
    """The existential flooding sentence as a standalone conjecture line."""
    return _ANSWER4_LINE
