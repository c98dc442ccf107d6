"""paralab: a workbench for paraconsistent provability structures.

The package axiomatizes da Costa's calculus C1 as a first-order theory
of a provability predicate over propositions, proves theorems by
condensed-detachment saturation, finds finite countermodels by
constraint-driven enumeration, and ships the bundled experiments that
exercise both directions.
"""

from .formulas import (  # noqa: F401
    Atom,
    Conj,
    Disj,
    Formula,
    FormulaSyntaxError,
    Impl,
    MetaVar,
    Neg,
    Substitution,
    alpha_equal,
    canonicalize,
    condensed_detach,
    consistency_op,
    format_formula,
    formula_size,
    formula_vars,
    parse,
    substitute,
    unify,
)
from .theories import (  # noqa: F401
    AxiomSchema,
    Clause,
    Literal,
    Theory,
    c1,
    compile_theory,
    delete_schema,
    entails,
    theory_from_name,
    with_bottom,
    with_explosion,
)
from .models import (  # noqa: F401
    FiniteModel,
    bottom_like,
    check_model,
    classical_model,
    conditionally_explosive,
    explosive_elements,
    imminent_explosion_holds,
    model_from_json,
    model_to_json,
    nonexplosive_contradiction_witness,
    trivial_model,
)
from .search import (  # noqa: F401
    Forbid,
    RefuteSchema,
    RequireExists,
    SearchConfig,
    Template,
    enumerate_models,
    find_model,
)
from .prover import (  # noqa: F401
    Derivable,
    Derivation,
    Independent,
    Proof,
    ProverConfig,
    check_proof,
    derive,
    independence_check,
    parse_transcript,
)
from .experiments import (  # noqa: F401
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentReport,
    experiment0,
    experiment1,
    experiment2,
    experiment3,
    probe_imminent_explosion,
)
from .tptp import answer4_conjecture, export_tptp  # noqa: F401

__version__ = "0.1.0"
