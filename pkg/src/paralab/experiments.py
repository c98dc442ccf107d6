"""The standard experiment battery over the C1 provability theories.

Each experiment produces an ExperimentReport: the claim that was tested
is stored as data (theory name, constraint templates, quantifier
shapes), the verdict is one of Established / Refuted / Evidence /
Unknown, and every witness is embedded inline in a form its independent
checker can re-validate.  Rendering a report re-runs those checkers, so
a serialized report that parses back is evidence, not prose.

The numbered experiments:

  0. find a model where some contradiction fails to entail something,
     i.e. the theory does not force explosion;
  1. (a) every random provability structure has a conditionally
     explosive element, (b) some C1 model separates "conditionally
     explosive" from "bottom-like";
  2. (a) the classical two-valued model satisfies c1+explosion,
     (b) the well-behavedness schemata A11-A14 become derivable once
     explosion is added, (c) excluded middle A9 stays independent;
  3. every C1 model up to a size bound has a bottom-like element.

plus probe_imminent_explosion, an exploratory classification of the
experiment-3 corpus.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .formulas import Impl, MetaVar, match, parse
from .models import (
    FiniteModel,
    bottom_like,
    check_model,
    classical_model,
    conditionally_explosive,
    imminent_explosion_counterexample,
    imminent_explosion_holds,
    model_from_json,
    model_to_json,
    nonexplosive_contradiction_witness,
)
from .prover import (
    Derivable,
    Independent,
    ProverConfig,
    check_proof,
    independence_check,
    parse_transcript,
)
from .search import (
    Exhausted,
    Forbid,
    RefuteSchema,
    RequireExists,
    SearchConfig,
    SearchStats,
    Template,
    constraint_satisfied,
    enumerate_models,
    find_model,
)
from .theories import Literal, theory_from_name

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "ReportIntegrityError",
    "random_structure",
    "experiment0",
    "experiment1",
    "experiment2",
    "experiment3",
    "probe_imminent_explosion",
    "EXPERIMENTS",
]


VERDICTS = ("Established", "Refuted", "Evidence", "Unknown")


@dataclass(frozen=True)
class ExperimentConfig:
    """Budgets shared by all experiments.

    max_size bounds every model search (None picks the experiment's own
    default); max_seconds caps each unit of work (one search, one
    independence check), not the whole experiment; the prover budgets
    apply per independence check; trials and seed drive the random
    corpus of experiment 1(a).
    """

    max_size: Optional[int] = None
    max_seconds: Optional[float] = 600.0
    max_generated: int = 1_000_000
    max_formula_size: int = 48
    trials: int = 1000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.max_size is not None and self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    def prover_config(self, max_seconds: Optional[float] = None) -> ProverConfig:
        return ProverConfig(
            max_generated=self.max_generated,
            max_formula_size=self.max_formula_size,
            max_seconds=self.max_seconds if max_seconds is None else max_seconds,
        )


class ReportIntegrityError(Exception):
    """A report's embedded witness failed its independent checker."""


# ---------------------------------------------------------------------------
# claim serialization

# Templates travel inside statements as plain data so a report (and the
# TPTP exporter) can reproduce exactly what was searched.


def _template_data(tpl: Template) -> dict:
    return {
        "exists": list(tpl.exists),
        "forall": list(tpl.forall),
        "literals": [
            {"positive": lit.positive, "term": str(lit.args[0])}
            for lit in tpl.literals
        ],
    }


def _template_from_data(doc: dict) -> Template:
    return Template(
        exists=tuple(doc["exists"]),
        literals=tuple(
            Literal(entry["positive"], "p", (parse(entry["term"]),))
            for entry in doc["literals"]
        ),
        forall=tuple(doc["forall"]),
    )


@dataclass
class ExperimentReport:
    """One structured result document per experiment run."""

    experiment_id: str
    theory_name: str
    statement: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    budgets_used: dict = field(default_factory=dict)
    wall_time: float = 0.0
    seed: Optional[int] = None
    bound: Optional[int] = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def verify(self) -> None:
        """Re-run the independent checker behind every embedded witness;
        raises ReportIntegrityError on the first failure."""
        for i, w in enumerate(self.witnesses):
            try:
                _verify_witness(w, self)
            except ReportIntegrityError:
                raise
            except Exception as exc:
                raise ReportIntegrityError(
                    f"witness {i} of {self.experiment_id}: {exc}"
                ) from exc

    def to_json(self) -> str:
        self.verify()
        doc = {
            "experiment_id": self.experiment_id,
            "theory_name": self.theory_name,
            "statement": self.statement,
            "verdict": self.verdict,
            "bound": self.bound,
            "witnesses": self.witnesses,
            "details": self.details,
            "budgets_used": self.budgets_used,
            "wall_time": round(self.wall_time, 3),
            "seed": self.seed,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> "ExperimentReport":
        doc = json.loads(text)
        return cls(
            experiment_id=doc["experiment_id"],
            theory_name=doc["theory_name"],
            statement=doc["statement"],
            verdict=doc["verdict"],
            witnesses=doc["witnesses"],
            details=doc["details"],
            budgets_used=doc["budgets_used"],
            wall_time=doc["wall_time"],
            seed=doc["seed"],
            bound=doc["bound"],
        )


def _model_witness(m: FiniteModel, theory_name: Optional[str], **extra) -> dict:
    w = {"kind": "model", "theory": theory_name,
         "model": json.loads(model_to_json(m))}
    w.update(extra)
    return w


def _verify_witness(w: dict, report: ExperimentReport) -> None:
    kind = w.get("kind")
    if kind == "model":
        m = model_from_json(w["model"])
        name = w.get("theory")
        if name is not None:
            t = theory_from_name(name)
            res = check_model(m, t)
            if not res.ok:
                raise ReportIntegrityError(
                    f"model witness fails {name}: {res.total_violations} violations"
                )
        if "constraint" in w:
            tpl = _template_from_data(w["constraint"])
            want = w.get("constraint_holds", True)
            got = constraint_satisfied(m, RequireExists(tpl))
            if got != want:
                raise ReportIntegrityError("model witness fails its constraint")
        checker = w.get("checker")
        if checker == "nonexplosive_contradiction_witness":
            pair = nonexplosive_contradiction_witness(m)
            if pair is None:
                raise ReportIntegrityError("no nonexplosive contradiction in witness")
            if "x" in w and tuple(pair) != (w["x"], w["y"]):
                raise ReportIntegrityError("recorded (x, y) is not the first witness")
        elif checker == "conditionally_explosive_not_bottom_like":
            d = w["element"]
            if d not in conditionally_explosive(m) or d in bottom_like(m):
                raise ReportIntegrityError(
                    "element is not conditionally-explosive-but-not-bottom-like"
                )
        elif checker == "no_bottom_like":
            if bottom_like(m):
                raise ReportIntegrityError("claimed counterexample has a bottom-like element")
        elif checker == "imminent_explosion_fails":
            if imminent_explosion_holds(m):
                raise ReportIntegrityError("imminent explosion holds in claimed failure")
        elif checker == "refutes_schema":
            t = theory_from_name(w["theory"])
            refute = RefuteSchema(w["refutes"], parse(w["schema_body"]))
            if not constraint_satisfied(m, refute):
                raise ReportIntegrityError(f"model does not refute {w['refutes']}")
    elif kind == "proof":
        t = theory_from_name(w["theory"])
        proof = parse_transcript(w["transcript"])
        res = check_proof(t, proof)
        if not res.ok:
            raise ReportIntegrityError(f"proof witness invalid: {res.reason}")
        goal = parse(w["goal"])
        if match(proof.lines[proof.goal_line].formula, goal) is None:
            raise ReportIntegrityError("proof witness does not subsume its goal")
    elif kind == "random-structure-corpus":
        # replay the whole corpus from the recorded seed
        rng = random.Random(w["seed"])
        for _ in range(w["trials"]):
            m = random_structure(rng, rng.randint(w["min_size"], w["max_size"]))
            if not conditionally_explosive(m):
                raise ReportIntegrityError(
                    "replayed corpus contains a structure with no "
                    "conditionally explosive element"
                )
    else:
        raise ReportIntegrityError(f"unknown witness kind {kind!r}")


# ---------------------------------------------------------------------------
# random provability structures


def random_structure(rng: random.Random, size: int) -> FiniteModel:
    """A uniformly random structure: arbitrary operation tables and an
    arbitrary provable subset.  No theory is imposed."""
    n = size
    return FiniteModel(
        size=n,
        neg=tuple(rng.randrange(n) for _ in range(n)),
        impl=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        conj=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        disj=tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(n)),
        provable=frozenset(e for e in range(n) if rng.random() < 0.5),
    )


# ---------------------------------------------------------------------------
# experiment 0: non-explosive contradictions


#: Instances of this term being non-provable witness a contradiction
#: a(X,n(X)) that fails to entail Y.
_NONEXPLOSIVE = parse("i(a(X,n(X)),Y)")


def experiment0(cfg: ExperimentConfig = ExperimentConfig(),
                theory_name: str = "c1") -> ExperimentReport:
    """Search for a model of the theory containing a contradiction that
    does not entail everything.

    Established(model, x, y) exhibits the witness; Refuted means the
    exhaustive scan up to the size bound found none (which is the
    expected outcome for c1+explosion); Unknown means the time budget
    expired first.
    """
    t = theory_from_name(theory_name)
    bound = cfg.max_size if cfg.max_size is not None else 4
    tpl = Template(("X", "Y"), (Literal(False, "p", (_NONEXPLOSIVE,)),))
    statement = {
        "claim": "some model has a non-explosive contradiction",
        "constraint": _template_data(tpl),
        "sizes": [1, bound],
    }
    start = time.monotonic()
    result = find_model(t, (RequireExists(tpl),),
                        SearchConfig(1, bound, max_seconds=cfg.max_seconds))
    wall = time.monotonic() - start
    if isinstance(result, FiniteModel):
        x, y = nonexplosive_contradiction_witness(result)
        return ExperimentReport(
            experiment_id="0",
            theory_name=theory_name,
            statement=statement,
            verdict="Established",
            witnesses=[_model_witness(
                result, theory_name, constraint=_template_data(tpl),
                checker="nonexplosive_contradiction_witness", x=x, y=y,
            )],
            details={"witness_size": result.size},
            budgets_used={"search": {"max_size": bound}},
            wall_time=wall,
            bound=result.size,
        )
    stats = result.stats
    verdict = "Unknown" if stats.timed_out else "Refuted"
    return ExperimentReport(
        experiment_id="0",
        theory_name=theory_name,
        statement=statement,
        verdict=verdict,
        details={"exhausted_sizes": stats.last_completed_size},
        budgets_used={"search": stats.to_dict()},
        wall_time=wall,
        bound=stats.last_completed_size,
    )


# ---------------------------------------------------------------------------
# experiment 1: conditionally explosive elements


def experiment1(cfg: ExperimentConfig = ExperimentConfig(),
                theory_name: str = "c1") -> ExperimentReport:
    """(a) every random structure has a conditionally explosive element;
    (b) some model of the theory has one that is not bottom-like.

    Part (a) is theory-free and exact over the seeded corpus.  Part (b)
    searches for a model with d, y where neither d nor i(d,y) is
    provable: such a d is conditionally explosive (it is not provable)
    yet not bottom-like (row d leaves y unreached).
    """
    t = theory_from_name(theory_name)
    bound = cfg.max_size if cfg.max_size is not None else 4
    start = time.monotonic()

    rng = random.Random(cfg.seed)
    failures = []
    for trial in range(cfg.trials):
        m = random_structure(rng, rng.randint(1, 5))
        if not conditionally_explosive(m):
            failures.append({"trial": trial, "model": json.loads(model_to_json(m))})

    d, y = MetaVar("D"), MetaVar("Y")
    tpl = Template(("D", "Y"), (
        Literal(False, "p", (d,)),
        Literal(False, "p", (Impl(d, y),)),
    ))
    result = find_model(t, (RequireExists(tpl),),
                        SearchConfig(1, bound, max_seconds=cfg.max_seconds))
    wall = time.monotonic() - start

    statement = {
        "claim": "conditional explosiveness is nonempty everywhere and "
                 "does not imply bottom-likeness",
        "part_a": {"corpus": "seeded random structures",
                   "trials": cfg.trials, "sizes": [1, 5]},
        "part_b": {"constraint": _template_data(tpl), "sizes": [1, bound]},
    }
    witnesses = [{
        "kind": "random-structure-corpus",
        "seed": cfg.seed,
        "trials": cfg.trials,
        "min_size": 1,
        "max_size": 5,
    }]
    details: dict = {"part_a": {"trials": cfg.trials, "failures": len(failures)}}
    budgets: dict = {}

    if failures:
        # a genuine counterexample to a classically valid sentence would
        # mean a broken analyzer, not a discovery; surface it loudly
        details["part_a_failures"] = failures[:5]
        return ExperimentReport(
            experiment_id="1", theory_name=theory_name, statement=statement,
            verdict="Refuted", witnesses=[], details=details,
            budgets_used=budgets, wall_time=wall, seed=cfg.seed,
        )

    if isinstance(result, FiniteModel):
        ce = conditionally_explosive(result) - bottom_like(result)
        elem = min(ce)
        witnesses.append(_model_witness(
            result, theory_name, constraint=_template_data(tpl),
            checker="conditionally_explosive_not_bottom_like", element=elem,
        ))
        details["part_b"] = {
            "witness_size": result.size,
            "element": elem,
            "conditionally_explosive": sorted(conditionally_explosive(result)),
            "bottom_like": sorted(bottom_like(result)),
        }
        verdict = "Established"
    else:
        budgets["part_b_search"] = result.stats.to_dict()
        details["part_b"] = {"exhausted_sizes": result.stats.last_completed_size}
        verdict = "Unknown"

    return ExperimentReport(
        experiment_id="1", theory_name=theory_name, statement=statement,
        verdict=verdict, witnesses=witnesses, details=details,
        budgets_used=budgets, wall_time=wall, seed=cfg.seed,
    )


# ---------------------------------------------------------------------------
# experiment 2: what explosion does to the axioms


_WELL_BEHAVEDNESS = ("A11", "A12", "A13", "A14")


def experiment2(cfg: ExperimentConfig = ExperimentConfig()) -> ExperimentReport:
    """Three sub-claims about c1+explosion: (a) it is satisfiable (the
    classical model passes), (b) each of A11-A14 becomes derivable from
    the rest, (c) A9 stays independent.

    Part (b) runs the prover against the model finder per schema; a
    budget exhaustion is reported as Unknown for that schema, never
    silently escalated.  The overall verdict is Established only when
    every part meets its expectation.
    """
    theory_name = "c1+explosion"
    t = theory_from_name(theory_name)
    start = time.monotonic()
    witnesses: list = []
    details: dict = {}
    budgets: dict = {}

    classical = classical_model()
    res_a = check_model(classical, t)
    details["part_a"] = {"classical_model_passes": res_a.ok}
    if res_a.ok:
        witnesses.append(_model_witness(classical, theory_name, label="classical"))

    derivable: dict[str, str] = {}
    for ax in _WELL_BEHAVEDNESS:
        outcome = independence_check(
            t, ax, cfg.prover_config(),
            max_model_size=cfg.max_size if cfg.max_size is not None else 4,
        )
        if isinstance(outcome, Derivable):
            derivable[ax] = "Derivable"
            witnesses.append({
                "kind": "proof",
                "theory": f"{theory_name}-{ax}",
                "goal": str(t.schema(ax).body),
                "transcript": outcome.proof.transcript(),
                "schema": ax,
            })
        elif isinstance(outcome, Independent):
            # would contradict the expected dependence; keep the model
            derivable[ax] = "Independent"
            witnesses.append(_model_witness(
                outcome.model, f"{theory_name}-{ax}",
                checker="refutes_schema", refutes=ax,
                schema_body=str(t.schema(ax).body),
            ))
        else:
            derivable[ax] = "Unknown"
            budgets[f"part_b_{ax}"] = outcome.details
    details["part_b"] = derivable

    outcome_c = independence_check(t, "A9", cfg.prover_config(), max_model_size=6)
    if isinstance(outcome_c, Independent):
        details["part_c"] = {"A9": "Independent",
                             "countermodel_size": outcome_c.model.size}
        witnesses.append(_model_witness(
            outcome_c.model, f"{theory_name}-A9",
            checker="refutes_schema", refutes="A9",
            schema_body=str(t.schema("A9").body),
        ))
    elif isinstance(outcome_c, Derivable):
        details["part_c"] = {"A9": "Derivable"}
        witnesses.append({
            "kind": "proof",
            "theory": f"{theory_name}-A9",
            "goal": str(t.schema("A9").body),
            "transcript": outcome_c.proof.transcript(),
            "schema": "A9",
        })
    else:
        details["part_c"] = {"A9": "Unknown"}
        budgets["part_c_A9"] = outcome_c.details

    wall = time.monotonic() - start
    expected = (
        res_a.ok
        and all(v == "Derivable" for v in derivable.values())
        and details["part_c"]["A9"] == "Independent"
    )
    refuted = (
        not res_a.ok
        or any(v == "Independent" for v in derivable.values())
        or details["part_c"]["A9"] == "Derivable"
    )
    verdict = "Established" if expected else ("Refuted" if refuted else "Unknown")
    statement = {
        "claim": "explosion keeps the classical model, absorbs the "
                 "well-behavedness schemata, and leaves excluded middle "
                 "independent",
        "part_a": {"model": "classical two-valued"},
        "part_b": {"schemata": list(_WELL_BEHAVEDNESS), "expected": "Derivable"},
        "part_c": {"schema": "A9", "expected": "Independent"},
    }
    return ExperimentReport(
        experiment_id="2", theory_name=theory_name, statement=statement,
        verdict=verdict, witnesses=witnesses, details=details,
        budgets_used=budgets, wall_time=wall,
    )


# ---------------------------------------------------------------------------
# experiment 3: bottom-like elements


def experiment3(cfg: ExperimentConfig = ExperimentConfig(),
                theory_name: str = "c1") -> ExperimentReport:
    """Do all models of the theory up to the size bound contain a
    bottom-like element?

    Two independent routes must agree: exhaustive enumeration with a
    per-model analyzer scan, and a constrained search that forbids
    bottom-like elements outright.  Evidence(bound) when both come up
    empty-handed; a surviving counterexample is a Refuted verdict and a
    finding worth publishing, not a test failure.
    """
    t = theory_from_name(theory_name)
    bound = cfg.max_size if cfg.max_size is not None else 2
    start = time.monotonic()
    stats = SearchStats()
    scanned = 0
    by_size: dict[int, int] = {}
    counterexample: Optional[FiniteModel] = None
    enum_cfg = SearchConfig(1, bound, max_seconds=cfg.max_seconds,
                            enumerate_all=True)
    for m in enumerate_models(t, enum_cfg, stats):
        scanned += 1
        by_size[m.size] = by_size.get(m.size, 0) + 1
        if not bottom_like(m):
            # survive independent re-verification before believing it
            if check_model(m, t).ok and not bottom_like(model_from_json(
                    json.loads(model_to_json(m)))):
                counterexample = m
                break

    d, y = MetaVar("D"), MetaVar("Y")
    forbid_tpl = Template(("D",), (Literal(True, "p", (Impl(d, y),)),), ("Y",))
    route2 = find_model(t, (Forbid(forbid_tpl),),
                        SearchConfig(1, bound, max_seconds=cfg.max_seconds))
    route2_found = isinstance(route2, FiniteModel)
    wall = time.monotonic() - start

    statement = {
        "claim": "every model has a bottom-like element",
        "sizes": [1, bound],
        "enumeration": "exhaustive, no isomorphism rejection",
        "constraint_route": {"forbid": _template_data(forbid_tpl)},
    }
    details = {
        "models_scanned": scanned,
        "models_by_size": {str(k): v for k, v in sorted(by_size.items())},
        "routes_agree": (counterexample is not None) == route2_found,
    }
    budgets = {"enumeration": stats.to_dict(),
               "constraint_route": route2.stats.to_dict()
               if isinstance(route2, Exhausted) else {"found": True}}

    if counterexample is not None or route2_found:
        found = counterexample if counterexample is not None else route2
        return ExperimentReport(
            experiment_id="3", theory_name=theory_name, statement=statement,
            verdict="Refuted",
            witnesses=[_model_witness(found, theory_name, checker="no_bottom_like")],
            details={**details, "flagged_finding": True},
            budgets_used=budgets, wall_time=wall, bound=found.size,
        )
    if stats.timed_out:
        return ExperimentReport(
            experiment_id="3", theory_name=theory_name, statement=statement,
            verdict="Unknown", details=details, budgets_used=budgets,
            wall_time=wall, bound=stats.last_completed_size,
        )
    return ExperimentReport(
        experiment_id="3", theory_name=theory_name, statement=statement,
        verdict="Evidence", details=details, budgets_used=budgets,
        wall_time=wall, bound=bound,
    )


# ---------------------------------------------------------------------------
# imminent explosion probe


def probe_imminent_explosion(cfg: ExperimentConfig = ExperimentConfig(),
                             theory_name: str = "c1") -> ExperimentReport:
    """Classify every model up to the size bound by whether each element
    x has a companion y making {x, n(x), y} entail everything.

    Purely exploratory: Evidence(bound) when the principle holds across
    the corpus, Refuted(model) when a verified failure appears, Unknown
    on a timeout.  No outcome is presupposed.
    """
    t = theory_from_name(theory_name)
    bound = cfg.max_size if cfg.max_size is not None else 2
    start = time.monotonic()
    stats = SearchStats()
    holds = 0
    fails = 0
    failure: Optional[FiniteModel] = None
    failure_element: Optional[int] = None
    enum_cfg = SearchConfig(1, bound, max_seconds=cfg.max_seconds,
                            enumerate_all=True)
    for m in enumerate_models(t, enum_cfg, stats):
        x = imminent_explosion_counterexample(m)
        if x is None:
            holds += 1
        else:
            fails += 1
            if failure is None and check_model(m, t).ok:
                failure, failure_element = m, x

    wall = time.monotonic() - start
    statement = {
        "claim": "every element can be completed to an explosive triple",
        "sizes": [1, bound],
        "corpus": "all models up to the bound",
    }
    details = {"holds": holds, "fails": fails}
    budgets = {"enumeration": stats.to_dict()}

    if failure is not None:
        return ExperimentReport(
            experiment_id="imminent", theory_name=theory_name,
            statement=statement, verdict="Refuted",
            witnesses=[_model_witness(
                failure, theory_name, checker="imminent_explosion_fails",
                element=failure_element,
            )],
            details=details, budgets_used=budgets, wall_time=wall,
            bound=failure.size,
        )
    if stats.timed_out:
        return ExperimentReport(
            experiment_id="imminent", theory_name=theory_name,
            statement=statement, verdict="Unknown", details=details,
            budgets_used=budgets, wall_time=wall,
            bound=stats.last_completed_size,
        )
    return ExperimentReport(
        experiment_id="imminent", theory_name=theory_name,
        statement=statement, verdict="Evidence", details=details,
        budgets_used=budgets, wall_time=wall, bound=bound,
    )


#: CLI-facing registry: experiment id -> runner.
EXPERIMENTS: dict[str, Callable[..., ExperimentReport]] = {
    "0": experiment0,
    "1": experiment1,
    "2": experiment2,
    "3": experiment3,
    "imminent": probe_imminent_explosion,
}
