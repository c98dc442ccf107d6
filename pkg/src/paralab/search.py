"""Finite model search by backtracking cell assignment.

The unknowns of a size-n search are cells: one provability bit per
element, one negation cell per element, and three n x n operation
tables (plus one cell per declared constant).  Theory clauses are
grounded over all variable assignments; after every assignment each
clause with all but one literal decided propagates, and contradictions
backtrack.  Cell order is provability bits for elements 0..n-1, then
neg, then impl, conj, disj row-major, with ascending value order, so
runs are deterministic.  Constant cells, when present, come first.

Existential constraints branch over domain-element tuples at the top of
the search tree; forbidden patterns compile to clauses.  find_model
applies a partial symmetry break (element 0 is provable whenever
anything is); enumerate_models applies none, so its output is exactly
the set a naive generate-and-test scan produces.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Optional, Sequence, Union

from .formulas import Atom, Conj, Disj, Formula, Impl, MetaVar, Neg, formula_vars
from .models import (
    FiniteModel,
    check_model,
    literal_holds,
)
from .theories import Clause, Literal, Theory, compile_theory

__all__ = [
    "Template",
    "RequireExists",
    "Forbid",
    "RefuteSchema",
    "Constraint",
    "SearchConfig",
    "SearchStats",
    "Exhausted",
    "find_model",
    "enumerate_models",
    "ModelSearch",
    "constraint_satisfied",
    "permute_model",
    "is_canonical",
]


# ---------------------------------------------------------------------------
# constraints


@dataclass(frozen=True)
class Template:
    """A quantified literal pattern: exists x.. (forall y..) /\\ literals.

    The inner universal block is empty for plain existential patterns;
    it is what lets a constraint talk about rows, e.g. "some element
    implies everything".
    """

    exists: tuple[str, ...]
    literals: tuple[Literal, ...]
    forall: tuple[str, ...] = ()

    def __post_init__(self):
        declared = set(self.exists) | set(self.forall)
        for lit in self.literals:
            for term in lit.args:
                for v in formula_vars(term):
                    if v not in declared:
                        raise ValueError(f"template variable {v!r} is not quantified")

    def __str__(self) -> str:
        body = " & ".join(str(l) for l in self.literals)
        prefix = ""
        if self.exists:
            prefix += f"exists {','.join(self.exists)}: "
        if self.forall:
            prefix += f"forall {','.join(self.forall)}: "
        return prefix + body


@dataclass(frozen=True)
class RequireExists:
    """Some witness tuple must satisfy the template."""

    template: Template


@dataclass(frozen=True)
class Forbid:
    """No witness tuple may satisfy the template."""

    template: Template


@dataclass(frozen=True)
class RefuteSchema:
    """Some instance of the schema body must be non-provable.

    Carries the body itself so the search stays meaningful after the
    schema has been deleted from the theory being searched.
    """

    schema_id: str
    body: Formula

    @classmethod
    def from_theory(cls, t: Theory, schema_id: str) -> "RefuteSchema":
        return cls(schema_id, t.schema(schema_id).body)

    def as_require_exists(self) -> RequireExists:
        body = self.body
        return RequireExists(
            Template(tuple(formula_vars(body)), (Literal(False, "p", (body,)),))
        )


Constraint = Union[RequireExists, Forbid, RefuteSchema]


def template_satisfied(m: FiniteModel, template: Template) -> bool:
    names_e, names_f = template.exists, template.forall
    for ev in product(range(m.size), repeat=len(names_e)):
        env = dict(zip(names_e, ev))
        if all(
            all(literal_holds(m, lit, {**env, **dict(zip(names_f, fv))})
                for lit in template.literals)
            for fv in product(range(m.size), repeat=len(names_f))
        ):
            return True
    return False


def constraint_satisfied(m: FiniteModel, c: Constraint) -> bool:
    """Direct evaluation of a constraint on a finished model."""
    if isinstance(c, RequireExists):
        return template_satisfied(m, c.template)
    if isinstance(c, Forbid):
        return not template_satisfied(m, c.template)
    if isinstance(c, RefuteSchema):
        return template_satisfied(m, c.as_require_exists().template)
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------------------
# configuration and statistics


@dataclass(frozen=True)
class SearchConfig:
    min_size: int = 1
    max_size: int = 4
    max_seconds: Optional[float] = None
    enumerate_all: bool = False
    workers: int = 1

    def __post_init__(self):
        if not 1 <= self.min_size <= self.max_size:
            raise ValueError("need 1 <= min_size <= max_size")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    models: int = 0
    sizes: dict[int, int] = field(default_factory=dict)  # size -> nodes spent
    last_completed_size: Optional[int] = None
    timed_out: bool = False

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "pruned": self.pruned,
            "models": self.models,
            "sizes": {str(k): v for k, v in sorted(self.sizes.items())},
            "last_completed_size": self.last_completed_size,
            "timed_out": self.timed_out,
        }


@dataclass
class Exhausted:
    """Search ended without (further) models; carries the run statistics."""

    stats: SearchStats


# ---------------------------------------------------------------------------
# grounding

# Ground terms are ints (elements) or tuples:
#   ("C", cell)        constant cell reference
#   ("n", t) / ("i", t1, t2) / ("a", t1, t2) / ("o", t1, t2)
# Ground literals:
#   ("p", term, positive) | ("eq", t1, t2, positive)


class _Layout:
    __slots__ = ("n", "constants", "const_cell", "p_base", "neg_base",
                 "impl_base", "conj_base", "disj_base", "ncells")

    def __init__(self, n: int, constants: Sequence[str]):
        self.n = n
        self.constants = tuple(constants)
        m = len(self.constants)
        self.const_cell = {name: i for i, name in enumerate(self.constants)}
        self.p_base = m
        self.neg_base = m + n
        self.impl_base = m + 2 * n
        self.conj_base = self.impl_base + n * n
        self.disj_base = self.conj_base + n * n
        self.ncells = m + 2 * n + 3 * n * n

    def domain_size(self, cell: int) -> int:
        if self.p_base <= cell < self.neg_base:
            return 2
        return self.n


_OPTAG = {Neg: "n", Impl: "i", Conj: "a", Disj: "o"}


def _ground_term(term: Formula, env: dict[str, int], layout: _Layout):
    if isinstance(term, MetaVar):
        return env[term.name]
    if isinstance(term, Atom):
        cell = layout.const_cell.get(term.name)
        if cell is None:
            raise ValueError(f"constant {term.name!r} is not declared by the theory")
        return ("C", cell)
    if isinstance(term, Neg):
        return ("n", _ground_term(term.arg, env, layout))
    return (
        _OPTAG[type(term)],
        _ground_term(term.lhs, env, layout),
        _ground_term(term.rhs, env, layout),
    )


def _ground_literal(lit: Literal, env: dict[str, int], layout: _Layout):
    if lit.pred == "p":
        return ("p", _ground_term(lit.args[0], env, layout), lit.positive)
    return (
        "eq",
        _ground_term(lit.args[0], env, layout),
        _ground_term(lit.args[1], env, layout),
        lit.positive,
    )


# Compiled literal forms evaluated by the engine:
#   (1, prog, want)          P(term) == want
#   (2, prog1, prog2, want)  (t1 == t2) == want
# where prog is a postfix program, a tuple of (op, arg) pairs:
#   (0, v)     push element v
#   (1, cell)  push the value of a constant cell
#   (2, base)  x := pop; push table[base + x]
#   (3, base)  y := pop; x := pop; push table[base + x*n + y]
# A blocked read names the cell, so watches land on exactly the
# assignment that can advance the evaluation.


def _compile_term(t, layout: _Layout, prog: list) -> None:
    if type(t) is int:
        prog.append((0, t))
        return
    tag = t[0]
    if tag == "C":
        prog.append((1, t[1]))
        return
    if tag == "n":
        _compile_term(t[1], layout, prog)
        prog.append((2, layout.neg_base))
        return
    _compile_term(t[1], layout, prog)
    _compile_term(t[2], layout, prog)
    if tag == "i":
        prog.append((3, layout.impl_base))
    elif tag == "a":
        prog.append((3, layout.conj_base))
    else:
        prog.append((3, layout.disj_base))


def _compile_lits(lits: tuple, layout: _Layout) -> tuple:
    out = []
    for lit in lits:
        if lit[0] == "p":
            prog: list = []
            _compile_term(lit[1], layout, prog)
            out.append((1, tuple(prog), 1 if lit[2] else 0))
        else:
            prog1: list = []
            prog2: list = []
            _compile_term(lit[1], layout, prog1)
            _compile_term(lit[2], layout, prog2)
            out.append((2, tuple(prog1), tuple(prog2), 1 if lit[3] else 0))
    return tuple(out)


class _GClause:
    __slots__ = ("lits", "clits", "label")

    def __init__(self, lits: tuple, label: str, layout: _Layout):
        self.lits = lits
        self.clits = _compile_lits(lits, layout)
        self.label = label


def _add_clause(out: dict, lits: Sequence, label: str) -> Optional[bool]:
    """Statically simplify and record one ground clause.

    Returns False when the clause is empty after simplification (the
    size is unsatisfiable), True otherwise.
    """
    kept = []
    for lit in lits:
        if lit[0] == "eq" and type(lit[1]) is int and type(lit[2]) is int:
            if (lit[1] == lit[2]) == lit[3]:
                return True  # statically satisfied clause
            continue  # statically false literal
        kept.append(lit)
    if not kept:
        return False
    key = tuple(kept)
    if key not in out:
        out[key] = label
    return True


def _ground_theory(clauses: Sequence[Clause], layout: _Layout) -> Optional[list[_GClause]]:
    """Ground every clause over all assignments; None when some clause
    is statically empty (no model of this size exists)."""
    n = layout.n
    out: dict[tuple, str] = {}
    for clause in clauses:
        names = sorted(clause.variables())
        for values in product(range(n), repeat=len(names)):
            env = dict(zip(names, values))
            lits = [_ground_literal(l, env, layout) for l in clause.literals]
            if _add_clause(out, lits, clause.label) is False:
                return None
    return [_GClause(lits, label, layout) for lits, label in out.items()]


def _negate(lit) -> tuple:
    return lit[:-1] + (not lit[-1],)


def _forbid_clauses(template: Template, layout: _Layout) -> Optional[list[_GClause]]:
    """Ground 'no exists-tuple satisfies (forall ..) literals': for each
    exists tuple one clause of negated literal instances."""
    n = layout.n
    out: dict[tuple, str] = {}
    for ev in product(range(n), repeat=len(template.exists)):
        env = dict(zip(template.exists, ev))
        lits = []
        for fv in product(range(n), repeat=len(template.forall)):
            full = {**env, **dict(zip(template.forall, fv))}
            lits.extend(
                _negate(_ground_literal(l, full, layout)) for l in template.literals
            )
        if _add_clause(out, lits, "forbid") is False:
            return None
    return [_GClause(lits, label, layout) for lits, label in out.items()]


def _witness_units(template: Template, ev: tuple, layout: _Layout) -> Optional[list[_GClause]]:
    """Unit clauses asserting the template at one exists tuple."""
    n = layout.n
    env = dict(zip(template.exists, ev))
    out: dict[tuple, str] = {}
    for fv in product(range(n), repeat=len(template.forall)):
        full = {**env, **dict(zip(template.forall, fv))}
        for l in template.literals:
            if _add_clause(out, [_ground_literal(l, full, layout)], "witness") is False:
                return None
    return [_GClause(lits, label, layout) for lits, label in out.items()]


def _symmetry_clauses(layout: _Layout) -> list[_GClause]:
    """Partial symmetry break: if anything is provable, element 0 is."""
    return [
        _GClause((("p", j, False), ("p", 0, True)), "sym", layout)
        for j in range(1, layout.n)
    ]


# ---------------------------------------------------------------------------
# the backtracking engine

_TICK = 256


class _Engine:
    """Exhaustive backtracking over the cell assignment space.

    run() is a generator producing ("tick",) every _TICK decisions and
    ("model", FiniteModel) for every total satisfying assignment, in
    canonical order.
    """

    __slots__ = ("layout", "clauses", "stats", "assign", "watchers",
                 "watched", "trail", "sat", "sat_trail", "theory")

    def __init__(self, layout: _Layout, clauses: list[_GClause], stats: SearchStats):
        self.layout = layout
        self.clauses = clauses
        self.stats = stats
        self.assign = [-1] * layout.ncells
        self.watchers: list[list[int]] = [[] for _ in range(layout.ncells)]
        self.watched: set[tuple[int, int]] = set()
        self.trail: list[int] = []
        # satisfied-clause cache: sat[cid] set when a clause is seen
        # satisfied, cleared on backtrack past the decision that set it
        # (clearing too eagerly only costs a re-evaluation)
        self.sat = bytearray(len(clauses))
        self.sat_trail: list[int] = []

    # term evaluation ------------------------------------------------------

    def _run_prog(self, prog):
        """(value, -1, False) on success, (None, blocking cell, at_top)
        when a needed cell is unassigned."""
        assign = self.assign
        n = self.layout.n
        stack = []
        for k, (op, arg) in enumerate(prog):
            if op == 0:
                stack.append(arg)
                continue
            if op == 1:
                cell = arg
                v = assign[cell]
                if v < 0:
                    return None, cell, k == len(prog) - 1
                stack.append(v)
                continue
            if op == 2:
                cell = arg + stack[-1]
            else:
                y = stack.pop()
                cell = arg + stack[-1] * n + y
            v = assign[cell]
            if v < 0:
                return None, cell, k == len(prog) - 1
            stack[-1] = v
        return stack[-1], -1, False

    def _eval_eq(self, lit):
        """(truth, blocker, force) for an equality literal; truth None
        when undecided, force a (cell, value) pair when one side's value
        pins the other side's top cell."""
        v1, b1, top1 = self._run_prog(lit[1])
        v2, b2, top2 = self._run_prog(lit[2])
        want = lit[3]
        if v1 is not None and v2 is not None:
            return (v1 == v2) == (want == 1), -1, None
        force = None
        if want:
            if v1 is not None and top2:
                force = (b2, v1)
            elif v2 is not None and top1:
                force = (b1, v2)
        return None, (b1 if v1 is None else b2), force

    # clause bookkeeping ---------------------------------------------------

    def _watch(self, cid: int, cell: int) -> None:
        key = (cid, cell)
        if key not in self.watched:
            self.watched.add(key)
            self.watchers[cell].append(cid)

    def _inspect(self, cid: int, queue: list) -> bool:
        """Re-evaluate one clause; False on conflict.

        Watches the first undecided literal's blocking cell.  When
        exactly one literal is undecided, enqueues whatever assignment
        it pins down: the provable bit of an evaluated term, the sole
        table value consistent with the pinned provable set, or the
        remaining side of an equality.  Conflicts when that literal
        cannot be satisfied at all."""
        if self.sat[cid]:
            return True
        assign = self.assign
        n = self.layout.n
        p_base = self.layout.p_base
        blocker = -1
        undecided = 0
        force = None    # ready assignment for the last undecided literal
        defer = -1      # top-blocked cell awaiting a provable-set scan
        defer_want = 0
        for lit in self.clauses[cid].clits:
            if lit[0] == 1:
                prog = lit[1]
                want = lit[2]
                stack = []
                blocked = -1
                for k, (op, arg) in enumerate(prog):
                    if op == 0:
                        stack.append(arg)
                        continue
                    if op == 1:
                        cell = arg
                    elif op == 2:
                        cell = arg + stack[-1]
                    else:
                        y = stack.pop()
                        cell = arg + stack[-1] * n + y
                    v = assign[cell]
                    if v < 0:
                        blocked = cell
                        break
                    if op == 1:
                        stack.append(v)
                    else:
                        stack[-1] = v
                if blocked < 0:
                    pcell = p_base + stack[-1]
                    pv = assign[pcell]
                    if pv < 0:
                        undecided += 1
                        if blocker < 0:
                            blocker = pcell
                        force = (pcell, want)
                        defer = -1
                    elif pv == want:
                        self.sat[cid] = 1
                        self.sat_trail.append(cid)
                        return True
                else:
                    undecided += 1
                    if blocker < 0:
                        blocker = blocked
                    force = None
                    defer = blocked if k == len(prog) - 1 else -1
                    defer_want = want
            else:
                truth, b, f = self._eval_eq(lit)
                if truth is True:
                    self.sat[cid] = 1
                    self.sat_trail.append(cid)
                    return True
                if truth is None:
                    undecided += 1
                    if blocker < 0:
                        blocker = b
                    force = f
                    defer = -1
        if undecided == 0:
            return False
        self._watch(cid, blocker)
        if undecided == 1:
            if force is not None:
                queue.append(force)
            elif defer >= 0:
                # the literal's truth is a function of this one cell;
                # with every provable bit pinned, the satisfying values
                # are known: none is a conflict, exactly one is a force
                candidate = -2
                for u in range(n):
                    pu = assign[p_base + u]
                    if pu < 0:
                        candidate = -1
                        break
                    if pu == defer_want:
                        if candidate >= 0:
                            candidate = -1
                            break
                        candidate = u
                if candidate == -2:
                    return False
                if candidate >= 0:
                    queue.append((defer, candidate))
        return True

    def _propagate(self, queue: list) -> bool:
        """Assign queued cells and fire watchers; False on conflict."""
        qi = 0
        sat = self.sat
        while qi < len(queue):
            cell, value = queue[qi]
            qi += 1
            cur = self.assign[cell]
            if cur == value:
                continue
            if cur >= 0:
                return False
            if value >= self.layout.domain_size(cell):
                return False
            self.assign[cell] = value
            self.trail.append(cell)
            # _watch never appends to an assigned cell's list, so
            # iterating the live list is safe here
            for cid in self.watchers[cell]:
                if not sat[cid] and not self._inspect(cid, queue):
                    return False
        return True

    def _undo_to(self, mark: int, sat_mark: int) -> None:
        while len(self.trail) > mark:
            self.assign[self.trail.pop()] = -1
        sat_trail = self.sat_trail
        sat = self.sat
        while len(sat_trail) > sat_mark:
            sat[sat_trail.pop()] = 0

    def _extract(self) -> FiniteModel:
        lay = self.layout
        n = lay.n
        a = self.assign
        return FiniteModel(
            size=n,
            neg=tuple(a[lay.neg_base + x] for x in range(n)),
            impl=tuple(tuple(a[lay.impl_base + x * n + y] for y in range(n)) for x in range(n)),
            conj=tuple(tuple(a[lay.conj_base + x * n + y] for y in range(n)) for x in range(n)),
            disj=tuple(tuple(a[lay.disj_base + x * n + y] for y in range(n)) for x in range(n)),
            provable=frozenset(e for e in range(n) if a[lay.p_base + e] == 1),
            constants={name: a[cell] for name, cell in lay.const_cell.items()},
        )

    # the search loop ------------------------------------------------------

    def run(self) -> Iterator[tuple]:
        stats = self.stats
        queue: list = []
        for cid in range(len(self.clauses)):
            if not self._inspect(cid, queue):
                stats.pruned += 1
                return
        if not self._propagate(queue):
            stats.pruned += 1
            return

        ncells = self.layout.ncells
        # stack rows: [cell, value_index, trail_mark, order_position, sat_mark]
        stack: list[list[int]] = []
        climbing = False
        since_tick = 0
        while True:
            if climbing:
                while stack:
                    row = stack[-1]
                    self._undo_to(row[2], row[4])
                    row[1] += 1
                    if row[1] >= self.layout.domain_size(row[0]):
                        stack.pop()
                        continue
                    stats.nodes += 1
                    since_tick += 1
                    if since_tick >= _TICK:
                        since_tick = 0
                        yield ("tick",)
                    if self._propagate([(row[0], row[1])]):
                        climbing = False
                        break
                    stats.pruned += 1
                if climbing:
                    return  # stack empty: space exhausted
                continue
            # extend: find the first unassigned cell in fixed order
            pos = stack[-1][3] + 1 if stack else 0
            while pos < ncells and self.assign[pos] >= 0:
                pos += 1
            if pos == ncells:
                stats.models += 1
                yield ("model", self._extract())
                climbing = True
                continue
            stats.nodes += 1
            since_tick += 1
            if since_tick >= _TICK:
                since_tick = 0
                yield ("tick",)
            stack.append([pos, 0, len(self.trail), pos, len(self.sat_trail)])
            if not self._propagate([(pos, 0)]):
                stats.pruned += 1
                climbing = True


# ---------------------------------------------------------------------------
# drivers


def _split_constraints(constraints: Sequence[Constraint]) -> tuple[list[Template], list[Template]]:
    require: list[Template] = []
    forbid: list[Template] = []
    for c in constraints:
        if isinstance(c, RefuteSchema):
            require.append(c.as_require_exists().template)
        elif isinstance(c, RequireExists):
            require.append(c.template)
        elif isinstance(c, Forbid):
            forbid.append(c.template)
        else:
            raise TypeError(f"not a constraint: {c!r}")
    return require, forbid


def _verify(m: FiniteModel, t: Theory, constraints: Sequence[Constraint]) -> FiniteModel:
    """Independent re-check of an engine-produced model before emission."""
    result = check_model(m, t)
    if not result.ok:
        raise RuntimeError(f"search produced a non-model of {t.name}: {result.violations[:3]}")
    for c in constraints:
        if not constraint_satisfied(m, c):
            raise RuntimeError(f"search produced a model violating {c}")
    return m


def _stream(
    t: Theory,
    constraints: Sequence[Constraint],
    cfg: SearchConfig,
    stats: SearchStats,
    symmetry: bool,
    first_only: bool,
    modulo_iso: bool = False,
) -> Iterator[tuple]:
    """Common search driver.  Yields ("tick",) markers and ("model", m)
    events with verified models; updates stats."""
    deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds
    require, forbid = _split_constraints(constraints)
    compiled = compile_theory(t)
    for n in range(cfg.min_size, cfg.max_size + 1):
        nodes_before = stats.nodes
        layout = _Layout(n, t.constants)
        base = _ground_theory(compiled, layout)
        satisfiable_size = base is not None
        if satisfiable_size:
            for template in forbid:
                extra = _forbid_clauses(template, layout)
                if extra is None:
                    satisfiable_size = False
                    break
                base.extend(extra)
        if satisfiable_size:
            if symmetry:
                base.extend(_symmetry_clauses(layout))
            spaces = [
                list(product(range(n), repeat=len(tpl.exists))) for tpl in require
            ]
            for combo in product(*spaces):
                clauses = list(base)
                ok = True
                for tpl, ev in zip(require, combo):
                    units = _witness_units(tpl, ev, layout)
                    if units is None:
                        ok = False
                        break
                    clauses.extend(units)
                if not ok:
                    continue
                engine = _Engine(layout, clauses, stats)
                for event in engine.run():
                    if event[0] == "tick":
                        if deadline is not None and time.monotonic() > deadline:
                            stats.timed_out = True
                            stats.sizes[n] = stats.nodes - nodes_before
                            return
                        yield event
                        continue
                    model = _verify(event[1], t, constraints)
                    if modulo_iso and not is_canonical(model):
                        continue
                    yield ("model", model)
                    if first_only:
                        stats.sizes[n] = stats.nodes - nodes_before
                        return
        stats.sizes[n] = stats.nodes - nodes_before
        stats.last_completed_size = n
    return


def find_model(
    t: Theory,
    constraints: Sequence[Constraint] = (),
    cfg: SearchConfig = SearchConfig(),
) -> Union[FiniteModel, Exhausted]:
    """First model of t meeting the constraints, scanning sizes from
    cfg.min_size up; Exhausted(stats) when none exists in range (or the
    time budget ran out, flagged in the stats)."""
    stats = SearchStats()
    for event in _stream(t, constraints, cfg, stats, symmetry=True, first_only=True):
        if event[0] == "model":
            return event[1]
    return Exhausted(stats)


def enumerate_models(
    t: Theory,
    cfg: SearchConfig,
    stats: Optional[SearchStats] = None,
    modulo_iso: bool = False,
) -> Iterator[FiniteModel]:
    """Every model of t, size by size, in canonical cell order.  No
    symmetry breaking is applied, so the output matches a naive scan of
    all candidate structures; pass modulo_iso=True to keep only models
    that are their own canonical form under domain permutation."""
    if not cfg.enumerate_all:
        raise ValueError("enumerate_models requires cfg.enumerate_all")
    if stats is None:
        stats = SearchStats()
    for event in _stream(t, (), cfg, stats, symmetry=False, first_only=False,
                         modulo_iso=modulo_iso):
        if event[0] == "model":
            yield event[1]


class ModelSearch:
    """Resumable find_model for interleaved schedules: step(quantum)
    advances the search by roughly quantum*256 decisions and returns a
    FiniteModel, Exhausted, or None when the quantum ran out first."""

    def __init__(self, t: Theory, constraints: Sequence[Constraint], cfg: SearchConfig):
        self.stats = SearchStats()
        self._result: Optional[Union[FiniteModel, Exhausted]] = None
        self._events = _stream(t, constraints, cfg, self.stats,
                               symmetry=True, first_only=True)

    def step(self, quantum: int) -> Optional[Union[FiniteModel, Exhausted]]:
        """Advance by up to ``quantum`` ticks (roughly quantum * 256
        decisions); None means the quantum expired with no verdict."""
        if self._result is not None:
            return self._result
        ticks = 0
        while True:
            try:
                event = next(self._events)
            except StopIteration:
                self._result = Exhausted(self.stats)
                return self._result
            if event[0] == "model":
                self._result = event[1]
                return self._result
            ticks += 1
            if ticks >= quantum:
                return None


# ---------------------------------------------------------------------------
# isomorphism utilities


def permute_model(m: FiniteModel, perm: Sequence[int]) -> FiniteModel:
    """Relabel a model along a domain permutation (old -> new)."""
    n = m.size
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    return FiniteModel(
        size=n,
        neg=tuple(perm[m.neg[inv[x]]] for x in range(n)),
        impl=tuple(tuple(perm[m.impl[inv[x]][inv[y]]] for y in range(n)) for x in range(n)),
        conj=tuple(tuple(perm[m.conj[inv[x]][inv[y]]] for y in range(n)) for x in range(n)),
        disj=tuple(tuple(perm[m.disj[inv[x]][inv[y]]] for y in range(n)) for x in range(n)),
        provable=frozenset(perm[e] for e in m.provable),
        constants={name: perm[v] for name, v in m.constants.items()},
    )


def _model_key(m: FiniteModel) -> tuple:
    return (
        tuple(1 if e in m.provable else 0 for e in range(m.size)),
        m.neg,
        m.impl,
        m.conj,
        m.disj,
        tuple(sorted(m.constants.items())),
    )


def is_canonical(m: FiniteModel) -> bool:
    """Whether m is the least model (by table serialization) in its
    isomorphism class."""
    key = _model_key(m)
    return all(
        key <= _model_key(permute_model(m, perm))
        for perm in permutations(range(m.size))
    )
