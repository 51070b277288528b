"""A proof kernel for truth theories over Robinson arithmetic.

The kernel checks Hilbert-style proofs in an arithmetical language with a
unary truth predicate, extended by truth schemas and a finitely certified
omega-rule.  Bundled derivations show that the full schema set is
omega-inconsistent, both directly and through Loeb's theorem for the
omega-truth predicate.
"""

from .syntax import (
    Add, Eq, FnApp, Forall, Formula, Imp, Mul, Not, Succ, Term, Tr, Var,
    ZERO, Zero, free_vars, mk_iff, numeral, parse, parse_formula, parse_term,
    pretty_print, substitute,
)
from .coding import (
    decode, diagonal_pair, diagonal_sentence, dot_term, encode, iter_fn,
    name_of, omega_truth, sub_fn, value,
)
from .kernel import (
    Axiom, CheckError, CheckedTheorem, GAMMA, Gen, MP, MissingSchema, Omega,
    PremiseGenerator, Proof, Refutation, SIGMA, SchemaId, TIntro,
    TheoryConfig, check, is_axiom, match_schema, omega_apply,
    validate_generator,
)
from .tactics import (
    DiagonalResult, Thm, derive_A1, derive_A2, diagonal_lemma, eval_closed,
    rewrite_eq, taut,
)
from .theorems import (
    ProvabilityPredicate, WitnessReport, formalized_loeb, loeb, m1, m2, m3,
    mcgee_original, mcgee_via_loeb, omega_witness, tomega_provability,
)

__version__ = "0.1.0"
