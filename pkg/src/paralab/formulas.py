"""Propositional formulas over the signature n, i, a, o.

Formulas are immutable trees.  Leaves are atoms (lowercase identifiers,
rigid constants) or metavariables (uppercase identifiers, schematic
placeholders that unification may bind).  The concrete syntax is
prefix-functional:

>>> parse("i(X,i(Y,X))")
i(X,i(Y,X))
>>> parse("o(p,n(p))")
o(p,n(p))

The module also provides substitution, most-general unification,
one-way matching, and condensed detachment, which are the only
inference primitives the rest of the package builds on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

__all__ = [
    "Atom",
    "MetaVar",
    "Neg",
    "Impl",
    "Conj",
    "Disj",
    "Formula",
    "FormulaSyntaxError",
    "NotImplication",
    "UnifyFailure",
    "Substitution",
    "parse",
    "format_formula",
    "formula_size",
    "formula_vars",
    "formula_atoms",
    "is_ground",
    "occurs",
    "substitute",
    "unify",
    "match",
    "alpha_equal",
    "canonicalize",
    "canonical_names",
    "condensed_detach",
    "consistency_op",
]


@dataclass(frozen=True, slots=True)
class Atom:
    """A rigid constant, e.g. a propositional letter ``p``."""

    name: str

    def __str__(self) -> str:
        return self.name

    __repr__ = __str__


@dataclass(frozen=True, slots=True)
class MetaVar:
    """A schematic variable that unification may bind."""

    name: str

    def __str__(self) -> str:
        return self.name

    __repr__ = __str__


@dataclass(frozen=True, slots=True)
class Neg:
    arg: "Formula"

    def __str__(self) -> str:
        return f"n({self.arg})"

    __repr__ = __str__


@dataclass(frozen=True, slots=True)
class Impl:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self) -> str:
        return f"i({self.lhs},{self.rhs})"

    __repr__ = __str__


@dataclass(frozen=True, slots=True)
class Conj:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self) -> str:
        return f"a({self.lhs},{self.rhs})"

    __repr__ = __str__


@dataclass(frozen=True, slots=True)
class Disj:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self) -> str:
        return f"o({self.lhs},{self.rhs})"

    __repr__ = __str__


Formula = Union[Atom, MetaVar, Neg, Impl, Conj, Disj]

_BINARY = {"i": Impl, "a": Conj, "o": Disj}


class FormulaSyntaxError(ValueError):
    """Malformed formula text.  ``position`` is a 1-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class NotImplication(ValueError):
    """Condensed detachment applied to a major premise that is not i(_,_)."""


class UnifyFailure(ValueError):
    """Condensed detachment whose premises do not unify."""


# ---------------------------------------------------------------------------
# parsing and printing


def _is_ident_char(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, c: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != c:
            raise self.error(f"expected {c!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or not self.text[self.pos].isascii() or not self.text[self.pos].isalpha():
            raise self.error("expected an identifier")
        self.pos += 1
        while self.pos < len(self.text) and _is_ident_char(self.text[self.pos]):
            self.pos += 1
        return self.text[start : self.pos]

    def formula(self) -> Formula:
        name = self.ident()
        if name[0].isupper():
            return MetaVar(name)
        # A lowercase name is a connective only when a parenthesis follows;
        # otherwise it is an atom, so plain "n" or "i" parse as atoms.
        if name in ("n", "i", "a", "o") and self.peek() == "(":
            self.expect("(")
            first = self.formula()
            if name == "n":
                self.expect(")")
                return Neg(first)
            self.expect(",")
            second = self.formula()
            self.expect(")")
            return _BINARY[name](first, second)
        if not name[0].islower():
            raise self.error("expected an identifier")
        return Atom(name)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula.

    >>> parse("i(p, q)")
    i(p,q)
    >>> parse("i(p,q")
    Traceback (most recent call last):
        ...
    paralab.formulas.FormulaSyntaxError: expected ')' (at offset 6)
    """
    p = _Parser(text)
    f = p.formula()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return f


def format_formula(f: Formula) -> str:
    """Render a formula in the same syntax ``parse`` accepts."""
    return str(f)


# ---------------------------------------------------------------------------
# structural helpers


def formula_size(f: Formula) -> int:
    """Number of symbols, counting every connective, atom and variable."""
    if isinstance(f, (Atom, MetaVar)):
        return 1
    if isinstance(f, Neg):
        return 1 + formula_size(f.arg)
    return 1 + formula_size(f.lhs) + formula_size(f.rhs)


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Neg):
            stack.append(g.arg)
        elif isinstance(g, (Impl, Conj, Disj)):
            stack.append(g.rhs)
            stack.append(g.lhs)


def formula_vars(f: Formula) -> list[str]:
    """Metavariable names in first-occurrence order (left to right)."""
    seen: list[str] = []
    def go(g: Formula) -> None:
        if isinstance(g, MetaVar):
            if g.name not in seen:
                seen.append(g.name)
        elif isinstance(g, Neg):
            go(g.arg)
        elif isinstance(g, (Impl, Conj, Disj)):
            go(g.lhs)
            go(g.rhs)
    go(f)
    return seen


def formula_atoms(f: Formula) -> set[str]:
    return {g.name for g in _walk(f) if isinstance(g, Atom)}


def is_ground(f: Formula) -> bool:
    return not any(isinstance(g, MetaVar) for g in _walk(f))


def occurs(name: str, f: Formula) -> bool:
    return any(isinstance(g, MetaVar) and g.name == name for g in _walk(f))


# ---------------------------------------------------------------------------
# substitution


class Substitution:
    """A finite map from metavariable names to formulas.

    Application is simultaneous: every metavariable is replaced in one
    pass, so bindings never cascade within a single ``apply``.  The maps
    produced by ``unify`` are fully resolved and hence idempotent.
    """

    __slots__ = ("_map",)

    def __init__(self, bindings: Optional[Mapping[str, Formula]] = None):
        self._map: dict[str, Formula] = dict(bindings or {})

    def apply(self, f: Formula) -> Formula:
        if not self._map:
            return f
        if isinstance(f, MetaVar):
            return self._map.get(f.name, f)
        if isinstance(f, Atom):
            return f
        if isinstance(f, Neg):
            return Neg(self.apply(f.arg))
        return type(f)(self.apply(f.lhs), self.apply(f.rhs))

    def get(self, name: str) -> Optional[Formula]:
        return self._map.get(name)

    def items(self):
        return self._map.items()

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, name: str) -> bool:
        return name in self._map

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __repr__(self) -> str:
        inner = ", ".join(f"{k} := {v}" for k, v in sorted(self._map.items()))
        return "{" + inner + "}"


def substitute(f: Formula, s: Union[Substitution, Mapping[str, Formula]]) -> Formula:
    """Apply a substitution (a Substitution or a plain name->formula map)."""
    if not isinstance(s, Substitution):
        s = Substitution(s)
    return s.apply(f)


# ---------------------------------------------------------------------------
# unification and matching


def unify(f: Formula, g: Formula) -> Optional[Substitution]:
    """Most general unifier of two formulas, or None when there is none.

    The result is fully resolved: no binding mentions a variable that is
    itself bound, so applying it twice equals applying it once.

    >>> unify(parse("i(X,n(Y))"), parse("i(p,Z)"))
    {X := p, Z := n(Y)}
    >>> unify(parse("X"), parse("n(X)")) is None
    True
    """
    out: dict[str, Formula] = {}
    eqs: list[tuple[Formula, Formula]] = [(f, g)]
    while eqs:
        a, b = eqs.pop()
        if a == b:
            continue
        if not isinstance(a, MetaVar) and isinstance(b, MetaVar):
            a, b = b, a
        if isinstance(a, MetaVar):
            if occurs(a.name, b):
                return None
            one = Substitution({a.name: b})
            eqs = [(one.apply(x), one.apply(y)) for x, y in eqs]
            for k in out:
                out[k] = one.apply(out[k])
            out[a.name] = b
            continue
        if type(a) is not type(b):
            return None
        if isinstance(a, Atom):
            return None  # distinct atoms
        if isinstance(a, Neg):
            eqs.append((a.arg, b.arg))
        else:
            eqs.append((a.lhs, b.lhs))
            eqs.append((a.rhs, b.rhs))
    return Substitution(out)


def match(pattern: Formula, target: Formula) -> Optional[Substitution]:
    """One-way matching: a substitution s with substitute(pattern, s) == target.

    Metavariables in ``target`` are treated as rigid symbols, so this
    decides "target is an instance of pattern" (subsumption).
    """
    bind: dict[str, Formula] = {}
    stack: list[tuple[Formula, Formula]] = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, MetaVar):
            old = bind.get(p.name)
            if old is None:
                bind[p.name] = t
            elif old != t:
                return None
            continue
        if type(p) is not type(t):
            return None
        if isinstance(p, Atom):
            if p.name != t.name:
                return None
        elif isinstance(p, Neg):
            stack.append((p.arg, t.arg))
        else:
            stack.append((p.lhs, t.lhs))
            stack.append((p.rhs, t.rhs))
    return Substitution(bind)


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Equality up to a renaming bijection of metavariables."""
    return canonicalize(f) == canonicalize(g)


_CANON_BASES = "XYZWVUTSRQ"


def canonical_names() -> Iterator[str]:
    """The canonical variable name sequence X, Y, Z, ..., X1, Y1, ..."""
    k = 0
    while True:
        for base in _CANON_BASES:
            yield base if k == 0 else f"{base}{k}"
        k += 1


def canonicalize(f: Formula) -> Formula:
    """Rename metavariables in first-occurrence order to the canonical names."""
    names = formula_vars(f)
    if not names:
        return f
    rename = {
        old: MetaVar(new)
        for old, new in zip(names, canonical_names())
        if old != new
    }
    if not rename:
        return f
    return Substitution(rename).apply(f)


# ---------------------------------------------------------------------------
# condensed detachment


def _rename_apart(minor: Formula, taken: set[str]) -> Formula:
    """Rename minor's variables with fresh numeric suffixes off ``taken``."""
    rename: dict[str, Formula] = {}
    used = set(taken)
    for v in formula_vars(minor):
        if v in taken:
            k = 1
            while f"{v}_{k}" in used:
                k += 1
            fresh = f"{v}_{k}"
            used.add(fresh)
            rename[v] = MetaVar(fresh)
        else:
            used.add(v)
    return Substitution(rename).apply(minor) if rename else minor


def _cd(major: Formula, minor: Formula) -> Optional[Formula]:
    """Condensed detachment core; None when the premises do not unify.

    The caller must ensure ``major`` is an implication.
    """
    minor = _rename_apart(minor, set(formula_vars(major)))
    theta = unify(major.lhs, minor)
    if theta is None:
        return None
    return canonicalize(theta.apply(major.rhs))


def condensed_detach(major: Formula, minor: Formula) -> Formula:
    """Detach: from i(A,B) and a minor unifiable with A, infer B under the mgu.

    The premises are renamed apart first, and the result is canonicalized
    (metavariables renamed in first-occurrence order), so it is stable
    under the naming of the inputs.

    >>> condensed_detach(parse("i(i(X,X),Y)"), parse("i(Z,Z)"))
    X
    """
    if not isinstance(major, Impl):
        raise NotImplication(f"major premise is not an implication: {major}")
    result = _cd(major, minor)
    if result is None:
        raise UnifyFailure(f"minor premise does not unify: {major} / {minor}")
    return result


def consistency_op(f: Formula) -> Formula:
    """The defined consistency connective: f degree-marked as n(a(f,n(f)))."""
    return Neg(Conj(f, Neg(f)))
