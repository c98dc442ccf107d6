"""The experiment battery and its self-verifying reports."""

import copy
import json
import random

import pytest

from paralab.experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentReport,
    ReportIntegrityError,
    experiment0,
    experiment1,
    experiment2,
    experiment3,
    probe_imminent_explosion,
    random_structure,
)
from paralab.models import bottom_like, conditionally_explosive, model_from_json

# tiny budgets: enough for the searches that resolve at sizes 1-2, while
# forcing every saturation run to exhaust quickly
TINY = ExperimentConfig(max_size=2, max_seconds=20.0, max_generated=2000,
                        max_formula_size=13, trials=200)


@pytest.fixture(scope="module")
def exp1_report():
    return experiment1(ExperimentConfig(max_size=4, max_seconds=300.0, trials=200))


@pytest.fixture(scope="module")
def exp2_report():
    return experiment2(TINY)


@pytest.fixture(scope="module")
def exp3_report():
    return experiment3(ExperimentConfig(max_size=2, max_seconds=300.0))


class TestRandomStructure:
    def test_deterministic(self):
        a = random_structure(random.Random(42), 3)
        b = random_structure(random.Random(42), 3)
        assert a == b

    def test_size_respected(self):
        rng = random.Random(0)
        for size in (1, 2, 5):
            assert random_structure(rng, size).size == size


class TestExperiment0:
    def test_exhaustive_refutation_at_small_sizes(self):
        rep = experiment0(ExperimentConfig(max_size=2, max_seconds=120.0))
        assert rep.verdict == "Refuted"
        assert rep.bound == 2
        assert rep.details["exhausted_sizes"] == 2
        assert rep.witnesses == []
        rep.verify()

    def test_explosion_variant_also_refuted(self):
        rep = experiment0(ExperimentConfig(max_size=2, max_seconds=120.0),
                          theory_name="c1+explosion")
        assert rep.verdict == "Refuted"
        assert rep.theory_name == "c1+explosion"

    def test_timeout_reports_unknown(self):
        rep = experiment0(ExperimentConfig(max_size=6, max_seconds=0.05))
        assert rep.verdict == "Unknown"
        assert rep.bound < 6


class TestExperiment1:
    def test_established(self, exp1_report):
        rep = exp1_report
        assert rep.verdict == "Established"
        assert rep.details["part_a"] == {"trials": 200, "failures": 0}
        assert rep.seed == 0

    def test_part_b_witness_separates_the_notions(self, exp1_report):
        part_b = exp1_report.details["part_b"]
        elem = part_b["element"]
        assert elem in part_b["conditionally_explosive"]
        assert elem not in part_b["bottom_like"]
        w = [w for w in exp1_report.witnesses if w["kind"] == "model"][0]
        m = model_from_json(w["model"])
        assert elem in conditionally_explosive(m) - bottom_like(m)

    def test_report_verifies_and_round_trips(self, exp1_report):
        text = exp1_report.to_json()
        back = ExperimentReport.from_json(text)
        assert back.verdict == exp1_report.verdict
        assert back.witnesses == exp1_report.witnesses
        assert back.to_json() == text

    def test_corpus_witness_records_replay_inputs(self, exp1_report):
        w = [w for w in exp1_report.witnesses
             if w["kind"] == "random-structure-corpus"][0]
        assert w == {"kind": "random-structure-corpus", "seed": 0,
                     "trials": 200, "min_size": 1, "max_size": 5}


class TestExperiment2:
    def test_classical_model_passes(self, exp2_report):
        assert exp2_report.details["part_a"] == {"classical_model_passes": True}

    def test_tiny_budgets_leave_part_b_unknown(self, exp2_report):
        part_b = exp2_report.details["part_b"]
        assert set(part_b) == {"A11", "A12", "A13", "A14"}
        assert set(part_b.values()) == {"Unknown"}
        assert all(f"part_b_{ax}" in exp2_report.budgets_used for ax in part_b)

    def test_a9_independent(self, exp2_report):
        assert exp2_report.details["part_c"]["A9"] == "Independent"
        assert exp2_report.details["part_c"]["countermodel_size"] == 2

    def test_aggregate_verdict_stays_unknown(self, exp2_report):
        # not all expectations met, nothing contradicted
        assert exp2_report.verdict == "Unknown"

    def test_witnesses_reverify(self, exp2_report):
        exp2_report.verify()
        kinds = [w.get("checker") or w.get("label") for w in exp2_report.witnesses]
        assert "classical" in kinds and "refutes_schema" in kinds

    def test_rejects_theory_override(self):
        with pytest.raises(TypeError):
            experiment2(TINY, theory_name="c1")


class TestExperiment3:
    def test_evidence_at_bound_two(self, exp3_report):
        rep = exp3_report
        assert rep.verdict == "Evidence"
        assert rep.bound == 2
        assert rep.details["models_scanned"] == 16_387
        assert rep.details["models_by_size"] == {"1": 1, "2": 16_386}
        assert rep.details["routes_agree"] is True
        assert "flagged_finding" not in rep.details
        rep.verify()

    def test_round_trip(self, exp3_report):
        text = exp3_report.to_json()
        assert ExperimentReport.from_json(text).to_json() == text


class TestImminentProbe:
    def test_holds_across_small_corpus(self):
        rep = probe_imminent_explosion(ExperimentConfig(max_size=2, max_seconds=300.0))
        assert rep.verdict == "Evidence"
        assert rep.details == {"holds": 16_387, "fails": 0}
        assert rep.bound == 2


class TestReports:
    def test_verdict_vocabulary_enforced(self):
        with pytest.raises(ValueError):
            ExperimentReport(experiment_id="0", theory_name="c1",
                             statement={}, verdict="Probably")

    def test_tampered_model_witness_detected(self, exp2_report):
        broken = ExperimentReport.from_json(exp2_report.to_json())
        target = [w for w in broken.witnesses if w["kind"] == "model"][0]
        target["model"]["provable"] = []
        with pytest.raises(ReportIntegrityError):
            broken.verify()
        with pytest.raises(ReportIntegrityError):
            broken.to_json()

    def test_tampered_recorded_pair_detected(self):
        rep = ExperimentReport(
            experiment_id="0", theory_name="c1", statement={},
            verdict="Established",
            witnesses=[{
                "kind": "model", "theory": None,
                "model": {"size": 2, "neg": [0, 0], "impl": [[0, 0], [0, 0]],
                          "conj": [[0, 0], [0, 0]], "disj": [[0, 0], [0, 0]],
                          "provable": []},
                "checker": "nonexplosive_contradiction_witness",
                "x": 1, "y": 1,
            }])
        # the model does contain a witness, but not the recorded one
        with pytest.raises(ReportIntegrityError):
            rep.verify()

    def test_proof_witness_checked(self):
        good = {
            "kind": "proof", "theory": "c1", "goal": "i(X,X)",
            "transcript": (
                "1 AX A1 i(X,i(Y,X))\n"
                "2 AX A2 i(i(X,Y),i(i(X,i(Y,Z)),i(X,Z)))\n"
                "3 CD 2,1 i(i(X,i(i(Y,X),Z)),i(X,Z))\n"
                "4 CD 3,1 i(X,X)"),
        }
        rep = ExperimentReport(experiment_id="2", theory_name="c1",
                               statement={}, verdict="Evidence",
                               witnesses=[good])
        rep.verify()
        bad = copy.deepcopy(good)
        bad["transcript"] = bad["transcript"].replace("4 CD 3,1", "4 CD 1,3")
        rep_bad = ExperimentReport(experiment_id="2", theory_name="c1",
                                   statement={}, verdict="Evidence",
                                   witnesses=[bad])
        with pytest.raises(ReportIntegrityError):
            rep_bad.verify()

    def test_unknown_witness_kind_rejected(self):
        rep = ExperimentReport(experiment_id="0", theory_name="c1",
                               statement={}, verdict="Evidence",
                               witnesses=[{"kind": "vibes"}])
        with pytest.raises(ReportIntegrityError):
            rep.verify()

    def test_registry(self):
        assert set(EXPERIMENTS) == {"0", "1", "2", "3", "imminent"}
        assert EXPERIMENTS["3"] is experiment3


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(max_size=0)
        with pytest.raises(ValueError):
            ExperimentConfig(max_seconds=0)
        with pytest.raises(ValueError):
            ExperimentConfig(trials=0)

    def test_prover_config_carries_budgets(self):
        cfg = ExperimentConfig(max_generated=123, max_formula_size=7,
                               max_seconds=9.0)
        pc = cfg.prover_config()
        assert (pc.max_generated, pc.max_formula_size, pc.max_seconds) == (123, 7, 9.0)
        assert cfg.prover_config(max_seconds=1.0).max_seconds == 1.0
