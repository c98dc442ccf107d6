"""Naive reference implementations used only by the tests.

Everything here is written for obviousness, not speed: straight recursion,
generate-and-test enumeration, triple-nested loops.  None of it shares code
with the package's engines beyond the plain data types, so agreement between
the two is meaningful evidence rather than a tautology.
"""

from itertools import product

from paralab.formulas import Atom, Conj, Disj, Impl, MetaVar, Neg
from paralab.models import FiniteModel
from paralab.theories import Theory, compile_theory


# ---------------------------------------------------------------------------
# evaluation, written independently of paralab.models.eval_term


def naive_eval(term, m, env):
    if isinstance(term, MetaVar):
        return env[term.name]
    if isinstance(term, Atom):
        return m.constants.get(term.name, 0)
    if isinstance(term, Neg):
        return m.neg[naive_eval(term.arg, m, env)]
    a = naive_eval(term.lhs, m, env)
    b = naive_eval(term.rhs, m, env)
    if isinstance(term, Impl):
        return m.impl[a][b]
    if isinstance(term, Conj):
        return m.conj[a][b]
    if isinstance(term, Disj):
        return m.disj[a][b]
    raise TypeError(f"not a term: {term!r}")


def naive_literal(lit, m, env):
    if lit.pred == "p":
        holds = naive_eval(lit.args[0], m, env) in m.provable
    else:
        holds = naive_eval(lit.args[0], m, env) == naive_eval(lit.args[1], m, env)
    return holds if lit.positive else not holds


def naive_clause_ok(clause, m):
    names = sorted(clause.variables())
    for values in product(range(m.size), repeat=len(names)):
        env = dict(zip(names, values))
        if not any(naive_literal(lit, m, env) for lit in clause.literals):
            return False
    return True


def naive_satisfies(m: FiniteModel, t: Theory) -> bool:
    return all(naive_clause_ok(c, m) for c in compile_theory(t))


# ---------------------------------------------------------------------------
# generate-and-test model enumeration


def all_structures(size: int, constants=()):
    """Every structure of the given size, in a fixed deterministic order.

    Exponential in size**2; only sizes 1 and 2 are practical, which is all
    the tests need.
    """
    n = size
    rows = list(product(range(n), repeat=n))
    tables = list(product(rows, repeat=n))
    negs = list(product(range(n), repeat=n))
    provables = [frozenset(s) for s in _subsets(n)]
    consts = list(product(range(n), repeat=len(constants)))
    for neg in negs:
        for impl in tables:
            for conj in tables:
                for disj in tables:
                    for prov in provables:
                        for cv in consts:
                            yield FiniteModel(
                                size=n, neg=neg, impl=impl, conj=conj,
                                disj=disj, provable=prov,
                                constants=dict(zip(constants, cv)),
                            )


def _subsets(n: int):
    for bits in range(1 << n):
        yield [i for i in range(n) if bits >> i & 1]


def naive_models(t: Theory, size: int) -> list[FiniteModel]:
    return [m for m in all_structures(size, t.constants) if naive_satisfies(m, t)]


# ---------------------------------------------------------------------------
# analyzers, re-derived from their definitions with explicit loops


def naive_bottom_like(m):
    out = set()
    for d in range(m.size):
        if all(m.impl[d][y] in m.provable for y in range(m.size)):
            out.add(d)
    return out


def naive_explosive(m):
    out = set()
    for x in range(m.size):
        bad = False
        for y in range(m.size):
            if m.impl[x][m.impl[m.neg[x]][y]] not in m.provable:
                bad = True
        if not bad:
            out.add(x)
    return out


def naive_conditionally_explosive(m):
    if all(x in m.provable for x in range(m.size)):
        return set(range(m.size))
    return {d for d in range(m.size) if d not in m.provable}


def naive_contradiction_witness(m):
    for x in range(m.size):
        contradiction = m.conj[x][m.neg[x]]
        for y in range(m.size):
            if m.impl[contradiction][y] not in m.provable:
                return (x, y)
    return None


def naive_atoms(m):
    out = set()
    for d in range(m.size):
        hit = False
        for x in range(m.size):
            if m.neg[x] == d:
                hit = True
            for y in range(m.size):
                if m.impl[x][y] == d or m.conj[x][y] == d or m.disj[x][y] == d:
                    hit = True
        if not hit:
            out.add(d)
    return out


# ---------------------------------------------------------------------------
# seeded random data for property tests


def random_formula(rng, max_depth=6):
    """A random formula over a small pool of atoms and metavariables."""
    if max_depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Atom(rng.choice(("p", "q", "r", "s", "bot")))
        return MetaVar(rng.choice(("X", "Y", "Z", "W", "V2")))
    kind = rng.randrange(4)
    if kind == 0:
        return Neg(random_formula(rng, max_depth - 1))
    left = random_formula(rng, max_depth - 1)
    right = random_formula(rng, max_depth - 1)
    return (Impl, Conj, Disj)[kind - 1](left, right)


def random_model(rng, size: int, constants=()) -> FiniteModel:
    n = size
    return FiniteModel(
        size=n,
        neg=tuple(rng.randrange(n) for _ in range(n)),
        impl=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        conj=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        disj=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        provable=frozenset(e for e in range(n) if rng.random() < 0.5),
        constants={name: rng.randrange(n) for name in constants},
    )


def naive_imminent_counterexample(m):
    for x in range(m.size):
        witnessed = False
        for y in range(m.size):
            good = True
            for z in range(m.size):
                chain = m.impl[x][m.impl[m.neg[x]][m.impl[y][z]]]
                if chain not in m.provable:
                    good = False
            if good:
                witnessed = True
        if not witnessed:
            return x
    return None
