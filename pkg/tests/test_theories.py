"""Theories: the C1 axiom set, extensions, compilation to clauses."""

import pytest

from oracle import naive_models
from paralab.formulas import formula_size, parse
from paralab.models import FiniteModel, check_model, trivial_model
from paralab.search import Exhausted, SearchConfig, find_model
from paralab.theories import (
    MODUS_PONENS,
    TooManyAssumptions,
    Theory,
    c1,
    compile_theory,
    delete_schema,
    entails,
    structural_infinity_clauses,
    theory_from_name,
    with_atom_existence,
    with_bottom,
    with_explosion,
    with_structural_infinity,
)

C1_IDS = tuple(f"A{k}" for k in range(1, 15))


class TestC1:
    def test_schema_ids(self):
        assert tuple(s.id for s in c1().schemata) == C1_IDS

    def test_bodies(self):
        t = c1()
        assert t.schema("A1").body == parse("i(X,i(Y,X))")
        assert t.schema("A2").body == parse("i(i(X,Y),i(i(X,i(Y,Z)),i(X,Z)))")
        assert t.schema("A9").body == parse("o(X,n(X))")
        assert t.schema("A10").body == parse("i(n(n(X)),X)")

    def test_consistency_marked_bodies(self):
        t = c1()
        xo = "n(a(X,n(X)))"
        yo = "n(a(Y,n(Y)))"
        assert str(t.schema("A11").body) == f"i({xo},i(i(Y,X),i(i(Y,n(X)),n(Y))))"
        assert str(t.schema("A12").body) == f"i(a({xo},{yo}),n(a(a(X,Y),n(a(X,Y)))))"
        assert str(t.schema("A13").body) == f"i(a({xo},{yo}),n(a(o(X,Y),n(o(X,Y)))))"
        assert str(t.schema("A14").body) == f"i(a({xo},{yo}),n(a(i(X,Y),n(i(X,Y)))))"

    def test_schema_sizes(self):
        sizes = {s.id: formula_size(s.body) for s in c1().schemata}
        assert sizes["A11"] == 17
        assert sizes["A12"] == sizes["A13"] == sizes["A14"] == 21

    def test_rule_is_modus_ponens(self):
        t = c1()
        assert t.rule_clauses == (MODUS_PONENS,)
        lits = MODUS_PONENS.literals
        assert [l.positive for l in lits] == [False, False, True]
        assert str(lits[0].args[0]) == "i(X,Y)"

    def test_no_structural_clauses_or_constants(self):
        t = c1()
        assert t.structural_clauses == ()
        assert t.constants == ()

    def test_schema_lookup(self):
        t = c1()
        assert t.has_schema("A9") and not t.has_schema("EXP")
        with pytest.raises(KeyError):
            t.schema("A15")

    def test_mp_mandatory(self):
        with pytest.raises(ValueError):
            Theory(name="bad", schemata=c1().schemata, rule_clauses=())

    def test_duplicate_ids_rejected(self):
        s = c1().schemata
        with pytest.raises(ValueError):
            Theory(name="dup", schemata=s + (s[0],))


class TestExtensions:
    def test_explosion(self):
        t = with_explosion(c1())
        assert t.name == "c1+explosion"
        assert t.schema("EXP").body == parse("i(X,i(n(X),Y))")
        assert set(s.id for s in t.schemata) == set(C1_IDS) | {"EXP"}

    def test_explosion_idempotent(self):
        t = with_explosion(c1())
        assert with_explosion(t) is t

    def test_bottom(self):
        t = with_bottom(c1())
        assert t.name == "c1+bottom"
        assert t.constants == ("bot",)
        assert str(t.schema("BOT").body) == "i(bot,X)"
        assert with_bottom(t) is t

    def test_bottom_satisfied_by_trivial(self):
        base = trivial_model()
        m = FiniteModel(size=1, neg=base.neg, impl=base.impl, conj=base.conj,
                        disj=base.disj, provable=base.provable, constants={"bot": 0})
        assert check_model(m, with_bottom(c1())).ok

    def test_delete(self):
        t = delete_schema(c1(), "A9")
        assert t.name == "c1-A9"
        assert not t.has_schema("A9")
        assert len(t.schemata) == 13
        with pytest.raises(KeyError):
            delete_schema(c1(), "A99")


class TestStructuralClauses:
    def test_trivial_model_violates_infinity(self):
        t = with_structural_infinity(c1())
        assert t.structural_clauses == structural_infinity_clauses()
        res = check_model(trivial_model(), t)
        assert not res.ok
        labels = {v.clause.label for v in res.violations}
        # n(0) = 0 breaks the fixpoint ban; i(0,0) = 0 = n(0) breaks the
        # sort separation
        assert "neg_no_fixpoint" in labels and "impl_not_neg" in labels

    def test_off_by_default(self):
        assert check_model(trivial_model(), c1()).ok

    @pytest.mark.parametrize("size", [1, 2])
    def test_no_finite_model_small(self, size):
        t = with_structural_infinity(c1())
        out = find_model(t, [], SearchConfig(min_size=size, max_size=size))
        assert isinstance(out, Exhausted)
        assert not out.stats.timed_out

    def test_atom_existence(self):
        t = with_atom_existence(c1())
        assert t.constants == ("atom0",)
        assert len(t.structural_clauses) == 4
        # a size-2 model whose tables all map into {0} leaves 1 atomic
        m = FiniteModel(size=2, neg=(0, 0), impl=((0, 0), (0, 0)),
                        conj=((0, 0), (0, 0)), disj=((0, 0), (0, 0)),
                        provable=frozenset({0, 1}), constants={"atom0": 1})
        assert check_model(m, with_atom_existence(Theory(name="t", schemata=()))).ok
        wrong = FiniteModel(size=2, neg=m.neg, impl=m.impl, conj=m.conj,
                            disj=m.disj, provable=m.provable, constants={"atom0": 0})
        assert not check_model(wrong, with_atom_existence(Theory(name="t", schemata=()))).ok


class TestEntails:
    def test_examples(self):
        p, q, r = parse("p"), parse("q"), parse("r")
        assert entails([p], q) == parse("i(p,q)")
        assert entails([p, q], r) == parse("i(p,i(q,r))")
        assert entails([], q) == q

    def test_three_assumptions_guarded(self):
        ps = [parse(s) for s in "pqr"]
        with pytest.raises(TooManyAssumptions):
            entails(ps, parse("s"))
        assert entails(ps, parse("s"), extended=True) == parse("i(p,i(q,i(r,s)))")


class TestCompile:
    def test_counts_and_order(self):
        cs = compile_theory(c1())
        assert len(cs) == 15
        assert [c.label for c in cs] == list(C1_IDS) + ["mp"]
        assert all(len(c.literals) == 1 and c.literals[0].positive for c in cs[:14])

    def test_explosion_count(self):
        cs = compile_theory(with_explosion(c1()))
        assert len(cs) == 16
        assert [c.label for c in cs[-2:]] == ["EXP", "mp"]

    def test_structural_appended(self):
        cs = compile_theory(with_structural_infinity(c1()))
        assert [c.label for c in cs[-3:]] == [
            "impl_not_neg", "neg_no_fixpoint", "neg_injective"]


class TestTheoryFromName:
    def test_round_trips(self):
        for name in ("c1", "c1+explosion", "c1+bottom", "c1+explosion+bottom",
                     "c1-A9", "c1+explosion-A12", "c1-A11-A12-A13-A14"):
            t = theory_from_name(name)
            assert t.name == name

    def test_deletion_case_insensitive(self):
        assert theory_from_name("c1-a9").has_schema("A9") is False

    def test_rejects_unknown(self):
        for bad in ("k3", "c1+magic", "c1-A99", "c1?"):
            with pytest.raises(ValueError):
                theory_from_name(bad)


def test_exactly_one_size1_c1_model():
    assert naive_models(c1(), 1) == [trivial_model()]
