"""Proof objects, axiom schemas, inference rules and the proof checker.

The kernel accepts Hilbert-style proofs over the truth language: axiom
instances, modus ponens, generalization, the truth-introduction rule, and
omega-rule nodes.  An omega node does not carry infinitely many premises;
it carries a *premise generator*: a proof of the instance at 0 together
with a list of step combinators that turn a proof of the instance at n
into a proof of the instance at n+1.  The checker replays the generator
for ``omega_samples`` successive instances and verifies every produced
proof from scratch.

Trust statement.  Soundness of an accepted omega node for *all* n rests on
the step combinators being parametric: each one builds its output from the
shape of its input conclusion, delegating every numeral computation to the
COMP_* axiom schemas, whose instances the checker verifies by running the
meta-level functions.  The trusted computing base is exactly: evaluation of
the substitution function, the iteration template identities, numeral
arithmetic, and the sampled replay itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from . import coding
from .syntax import (
    Add, Eq, FnApp, Forall, Formula, Imp, ITER, Mul, Not, SUB, Succ, Term,
    Tr, Var, ZERO, numeral, pretty_print, replace_at, substitute,
    term_positions,
)

__all__ = [
    "SchemaId", "TheoryConfig", "GAMMA", "SIGMA",
    "Proof", "Axiom", "MP", "Gen", "TIntro", "Omega",
    "PremiseGenerator", "StepCombinator", "ApplyTIntro", "LiftImp",
    "RewriteEval", "ChainWith",
    "CheckedTheorem", "Refutation", "GeneratorCertificate",
    "CheckError", "AxiomRejection", "MissingSchema",
    "is_axiom", "match_schema", "check", "validate_generator", "omega_apply",
    "q_axiom",
]


class SchemaId(enum.Enum):
    PROP1 = "PROP1"
    PROP2 = "PROP2"
    PROP3 = "PROP3"
    QUANT1 = "QUANT1"
    QUANT2 = "QUANT2"
    EQ1 = "EQ1"
    EQ2 = "EQ2"
    EQ3 = "EQ3"
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    Q6 = "Q6"
    Q7 = "Q7"
    CONS = "CONS"
    TIMP = "TIMP"
    UINF = "UINF"
    COMP_SUB = "COMP_SUB"
    COMP_ITER0 = "COMP_ITER0"
    COMP_ITER_STEP = "COMP_ITER_STEP"
    COMP_SUCC = "COMP_SUCC"


@dataclass(frozen=True)
class TheoryConfig:
    """Which axiom schemas are active, plus checker parameters.

    ``GAMMA`` activates all three truth schemas; ``SIGMA`` is ``GAMMA``
    without internal consistency.  The base logic, Robinson arithmetic and
    the computation schemas are always available.
    """

    has_cons: bool = True
    has_timp: bool = True
    has_uinf: bool = True
    q_axioms: bool = True
    computation_axioms: bool = True
    omega_samples: int = 8
    max_omega_count: int | None = None

    def __post_init__(self):
        if not self.q_axioms or not self.computation_axioms:
            raise ValueError("the arithmetic and computation schemas cannot be disabled")
        if self.omega_samples < 1:
            raise ValueError("omega_samples must be at least 1")

    def active(self, schema: SchemaId) -> bool:
        if schema is SchemaId.CONS:
            return self.has_cons
        if schema is SchemaId.TIMP:
            return self.has_timp
        if schema is SchemaId.UINF:
            return self.has_uinf
        return True

    def preset_name(self) -> str:
        flags = (self.has_cons, self.has_timp, self.has_uinf)
        if flags == (True, True, True):
            return "gamma"
        if flags == (False, True, True):
            return "sigma"
        return "custom(cons={:d},timp={:d},uinf={:d})".format(*flags)

    def with_samples(self, n: int) -> "TheoryConfig":
        return replace(self, omega_samples=n)


GAMMA = TheoryConfig()
SIGMA = TheoryConfig(has_cons=False)


class MissingSchema(ValueError):
    """A bundled derivation needs a schema the configuration switched off."""

    def __init__(self, schema: SchemaId):
        super().__init__(f"MissingSchema({schema.value})")
        self.schema = schema


class CheckError(ValueError):
    """Structured proof-check failure: offending node, rule and reason."""

    def __init__(self, path: tuple[int, ...], rule: str, reason: str):
        super().__init__(f"at node {'/'.join(map(str, path)) or '<root>'} [{rule}]: {reason}")
        self.path = path
        self.rule = rule
        self.reason = reason


class AxiomRejection(ValueError):
    """A formula does not instantiate any active axiom schema."""


# ---------------------------------------------------------------------------
# proof objects


class Proof:
    __slots__ = ("hash", "_macro")

    def _init(self, h: int) -> None:
        self.hash = h
        self._macro = None

    def __hash__(self) -> int:
        return self.hash

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Proof) and _proof_eq(self, other))

    def __ne__(self, other):
        return not self.__eq__(other)


class Axiom(Proof):
    __slots__ = ("schema", "instance")

    def __init__(self, schema: SchemaId, instance: Formula):
        self.schema = schema
        self.instance = instance
        self._init(hash((21, schema, instance.hash)))


class MP(Proof):
    """Modus ponens: first premise proves A, second proves A -> B."""

    __slots__ = ("minor", "major")

    def __init__(self, minor: Proof, major: Proof):
        self.minor = minor
        self.major = major
        self._init(hash((22, minor.hash, major.hash)))


class Gen(Proof):
    __slots__ = ("var", "premise")

    def __init__(self, var: int, premise: Proof):
        self.var = var
        self.premise = premise
        self._init(hash((23, var, premise.hash)))


class TIntro(Proof):
    __slots__ = ("premise",)

    def __init__(self, premise: Proof):
        self.premise = premise
        self._init(hash((24, premise.hash)))


class StepCombinator:
    __slots__ = ("hash",)

    def __hash__(self):
        return self.hash

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and _step_eq(self, other))


class ApplyTIntro(StepCombinator):
    """phi  =>  T(name of phi)."""

    __slots__ = ()

    def __init__(self):
        self.hash = hash((31,))

    def apply(self, proof: Proof, formula: Formula, expected: Formula):
        from . import tactics as T

        th = T.tintro(T.Thm(proof, formula))
        return th.proof, th.formula


class LiftImp(StepCombinator):
    """Lift an implication under the truth predicate.

    depth 1: from A -> B derive T(#A) -> T(#B); depth 2: from A -> (B -> C)
    derive T(#A) -> (T(#B) -> T(#C)).  Uses T-Intro plus TIMP instances.
    """

    __slots__ = ("depth",)

    def __init__(self, depth: int = 1):
        if depth not in (1, 2):
            raise ValueError("LiftImp depth must be 1 or 2")
        self.depth = depth
        self.hash = hash((32, depth))

    def apply(self, proof: Proof, formula: Formula, expected: Formula):
        from . import tactics as T

        th = T.lift_imp(T.Thm(proof, formula), self.depth)
        return th.proof, th.formula


class RewriteEval(StepCombinator):
    """Align the closed term at ``position`` with the expected conclusion
    through a chain of COMP_* evaluation axioms."""

    __slots__ = ("position",)

    def __init__(self, position):
        self.position = tuple(position)
        self.hash = hash((33, self.position))

    def apply(self, proof: Proof, formula: Formula, expected: Formula):
        from . import tactics as T

        th = T.rewrite_align(T.Thm(proof, formula), expected, [self.position])
        return th.proof, th.formula


class ChainWith(StepCombinator):
    """Compose the input implication with a fixed checked lemma."""

    __slots__ = ("lemma", "conclusion")

    def __init__(self, lemma: Proof, conclusion: Formula):
        self.lemma = lemma
        self.conclusion = conclusion
        self.hash = hash((34, lemma.hash, conclusion.hash))

    def apply(self, proof: Proof, formula: Formula, expected: Formula):
        from . import tactics as T

        th = T.chain(T.Thm(proof, formula), T.Thm(self.lemma, self.conclusion))
        return th.proof, th.formula


def _step_eq(a: StepCombinator, b: StepCombinator) -> bool:
    if isinstance(a, LiftImp):
        return a.depth == b.depth
    if isinstance(a, RewriteEval):
        return a.position == b.position
    if isinstance(a, ChainWith):
        return a.lemma == b.lemma and a.conclusion == b.conclusion
    return True


class PremiseGenerator:
    """Finite certificate for an infinite premise family.

    ``family`` has the distinguished variable ``var``; instance n is
    ``family`` with the numeral of n substituted for ``var``.  ``base``
    proves instance 0 and ``steps``, applied in order, turn a proof of
    instance n into a proof of instance n+1 uniformly in n.
    """

    __slots__ = ("var", "family", "base", "steps", "hash")

    def __init__(self, var: int, family: Formula, base: Proof, steps):
        self.var = var
        self.family = family
        self.base = base
        self.steps = tuple(steps)
        self.hash = hash((41, var, family.hash, base.hash) + tuple(s.hash for s in self.steps))

    def instance(self, n: int) -> Formula:
        return substitute(self.family, self.var, numeral(n))

    def conclusion(self) -> Formula:
        return Forall(self.var, self.family)

    def __hash__(self):
        return self.hash

    def __eq__(self, other):
        return self is other or (
            isinstance(other, PremiseGenerator)
            and self.var == other.var
            and self.family == other.family
            and self.base == other.base
            and self.steps == other.steps
        )


class Omega(Proof):
    __slots__ = ("gen", "conclusion")

    def __init__(self, gen: PremiseGenerator, conclusion: Formula):
        self.gen = gen
        self.conclusion = conclusion
        self._init(hash((25, gen.hash, conclusion.hash)))


def _proof_children(p: Proof) -> tuple[Proof, ...]:
    t = type(p)
    if t is MP:
        return (p.minor, p.major)
    if t is Gen or t is TIntro:
        return (p.premise,)
    if t is Omega:
        return (p.gen.base,) + tuple(
            s.lemma for s in p.gen.steps if isinstance(s, ChainWith)
        )
    return ()


def _proof_eq(a: Proof, b: Proof) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if type(x) is not type(y) or x.hash != y.hash:
            return False
        t = type(x)
        if t is Axiom:
            if x.schema is not y.schema or x.instance != y.instance:
                return False
        elif t is Gen:
            if x.var != y.var:
                return False
            stack.append((x.premise, y.premise))
        elif t is MP:
            stack.append((x.minor, y.minor))
            stack.append((x.major, y.major))
        elif t is TIntro:
            stack.append((x.premise, y.premise))
        else:  # Omega
            if x.conclusion != y.conclusion or x.gen != y.gen:
                return False
    return True


def omega_apply(gen: PremiseGenerator) -> Proof:
    """Omega node concluding the universal closure of the generator family.

    Validation is deferred to :func:`check`.
    """
    return Omega(gen, gen.conclusion())


# ---------------------------------------------------------------------------
# schema matching

_Q_SENTENCES: dict[SchemaId, Formula] | None = None


def _q_sentences() -> dict[SchemaId, Formula]:
    global _Q_SENTENCES
    if _Q_SENTENCES is None:
        x, y = Var(0), Var(1)
        _Q_SENTENCES = {
            SchemaId.Q1: Forall(0, Forall(1, Imp(Eq(Succ(x), Succ(y)), Eq(x, y)))),
            SchemaId.Q2: Forall(0, Not(Eq(Succ(x), ZERO))),
            SchemaId.Q3: Forall(0, Imp(Not(Eq(x, ZERO)), Not(Forall(1, Not(Eq(x, Succ(y))))))),
            SchemaId.Q4: Forall(0, Eq(Add(x, ZERO), x)),
            SchemaId.Q5: Forall(0, Forall(1, Eq(Add(x, Succ(y)), Succ(Add(x, y))))),
            SchemaId.Q6: Forall(0, Eq(Mul(x, ZERO), ZERO)),
            SchemaId.Q7: Forall(0, Forall(1, Eq(Mul(x, Succ(y)), Add(Mul(x, y), x)))),
        }
    return _Q_SENTENCES


def _m_prop1(phi):
    ok = type(phi) is Imp and type(phi.cons) is Imp and phi.cons.cons == phi.ant
    return ok, None


def _m_prop2(phi):
    if not (
        type(phi) is Imp
        and type(phi.ant) is Imp and type(phi.ant.cons) is Imp
        and type(phi.cons) is Imp
        and type(phi.cons.ant) is Imp and type(phi.cons.cons) is Imp
    ):
        return False, None
    a, bc = phi.ant.ant, phi.ant.cons
    ok = (
        phi.cons.ant.ant == a
        and phi.cons.ant.cons == bc.ant
        and phi.cons.cons.ant == a
        and phi.cons.cons.cons == bc.cons
    )
    return ok, None


def _m_prop3(phi):
    ok = (
        type(phi) is Imp
        and type(phi.ant) is Imp
        and type(phi.ant.ant) is Not and type(phi.ant.cons) is Not
        and type(phi.cons) is Imp
        and phi.cons.ant == phi.ant.cons.body
        and phi.cons.cons == phi.ant.ant.body
    )
    return ok, None


def _find_instance_term(body: Formula, inst: Formula, v: int):
    """Solve ``inst == substitute(body, v, t)`` for ``t`` (no bound renaming).

    Returns (True, t) on success (t is None for a vacuous instantiation) and
    (False, None) otherwise.
    """
    cands: list[Term] = []

    def walk(a, b, bound: frozenset[int]) -> bool:
        if v not in a.fv:
            return a == b
        ta = type(a)
        if ta is Var:
            if a.idx != v:
                return type(b) is Var and b.idx == a.idx
            if b.fv & bound:
                return False  # a variable of t would be captured here
            cands.append(b)
            return True
        if ta is not type(b):
            return False
        if ta is Forall:
            if a.var != b.var:
                return False
            return walk(a.body, b.body, bound | {a.var})
        if ta is FnApp and a.sym != b.sym:
            return False
        ka, kb = _syn_children(a), _syn_children(b)
        if len(ka) != len(kb):
            return False
        return all(walk(p, q, bound) for p, q in zip(ka, kb))

    if not walk(body, inst, frozenset()):
        return False, None
    t0 = cands[0] if cands else None
    for t in cands[1:]:
        if t != t0:
            return False, None
    return True, t0


from .syntax import _children as _syn_children  # reuse the structural walker


def _m_quant1(phi):
    if not (type(phi) is Imp and type(phi.ant) is Forall):
        return False, None
    ok, _t = _find_instance_term(phi.ant.body, phi.cons, phi.ant.var)
    if not ok:
        return False, "consequent is not a substitution instance of the quantified body"
    return True, None


def _m_quant2(phi):
    if not (
        type(phi) is Imp
        and type(phi.ant) is Forall and type(phi.ant.body) is Imp
        and type(phi.cons) is Imp and type(phi.cons.cons) is Forall
    ):
        return False, None
    v = phi.ant.var
    a, b = phi.ant.body.ant, phi.ant.body.cons
    if phi.cons.ant != a or phi.cons.cons.var != v or phi.cons.cons.body != b:
        return False, None
    if v in a.fv:
        return False, f"variable {v} occurs free in the antecedent"
    return True, None


def _m_eq1(phi):
    return (type(phi) is Eq and phi.left == phi.right), None


def _one_step_rewrite(src, dst, s: Term, t: Term) -> bool:
    """dst is src with s replaced by t at exactly one term position."""
    for path, node in term_positions(src):
        if node == s and replace_at(src, path, t) == dst:
            return True
    return False


def _m_eq2(phi):
    if not (
        type(phi) is Imp and type(phi.ant) is Eq and type(phi.cons) is Eq
    ):
        return False, None
    s, t = phi.ant.left, phi.ant.right
    if _one_step_rewrite(phi.cons.left, phi.cons.right, s, t):
        return True, None
    return False, "right side is not a one-position rewrite of the left side"


def _m_eq3(phi):
    if not (
        type(phi) is Imp and type(phi.ant) is Eq
        and type(phi.cons) is Imp
        and type(phi.cons.ant) in (Eq, Tr)
        and type(phi.cons.cons) in (Eq, Tr)
    ):
        return False, None
    s, t = phi.ant.left, phi.ant.right
    if _one_step_rewrite(phi.cons.ant, phi.cons.cons, s, t):
        return True, None
    return False, "consequent is not a one-position rewrite of the antecedent"


def _named(t: Term):
    """Decode a canonical numeral naming a sentence-or-formula, or None."""
    if not isinstance(t, Term) or t.nv is None:
        return None
    try:
        return coding.decode(t.nv)
    except coding.DecodeError:
        return None


def _m_cons(phi):
    if not (
        type(phi) is Imp and type(phi.ant) is Tr
        and type(phi.cons) is Not and type(phi.cons.body) is Tr
    ):
        return False, None
    da = _named(phi.ant.arg)
    db = _named(phi.cons.body.arg)
    if da is None or db is None or not isinstance(db, Formula):
        return False, "arguments are not names of formulas"
    if db.fv:
        return False, "named formula is not a sentence"
    if da != Not(db):
        return False, "left name is not the negation of the right name"
    return True, None


def _m_timp(phi):
    if not (
        type(phi) is Imp and type(phi.ant) is Tr
        and type(phi.cons) is Imp
        and type(phi.cons.ant) is Tr and type(phi.cons.cons) is Tr
    ):
        return False, None
    di = _named(phi.ant.arg)
    da = _named(phi.cons.ant.arg)
    db = _named(phi.cons.cons.arg)
    if di is None or da is None or db is None:
        return False, "arguments are not names of formulas"
    if not (isinstance(da, Formula) and isinstance(db, Formula)) or da.fv or db.fv:
        return False, "named formulas are not sentences"
    if di != Imp(da, db):
        return False, "first name is not the implication of the other two"
    return True, None


def _m_uinf(phi):
    if not (
        type(phi) is Imp and type(phi.ant) is Forall
        and type(phi.ant.body) is Tr and type(phi.cons) is Tr
    ):
        return False, None
    x = phi.ant.var
    arg = phi.ant.body.arg
    if not (type(arg) is FnApp and arg.sym == SUB):
        return False, None
    cn, vn, xv = arg.args
    if not (type(xv) is Var and xv.idx == x):
        return False, "inner substitution is not applied at the quantified variable"
    if cn.nv is None or vn.nv is None:
        return False, "name or variable-index argument is not a canonical numeral"
    body = _named(cn)
    if body is None or not isinstance(body, Formula):
        return False, "first argument is not the name of a formula"
    v = vn.nv
    if not body.fv <= {v}:
        return False, "named formula has free variables other than the distinguished one"
    want = coding.encode(Forall(v, body))
    if phi.cons.arg.nv != want:
        return False, "consequent does not name the universal closure"
    return True, None


def _m_comp_sub(phi):
    if not (type(phi) is Eq and type(phi.left) is FnApp and phi.left.sym == SUB):
        return False, None
    c, v, n = phi.left.args
    k = phi.right
    if any(a.nv is None for a in (c, v, n, k)):
        return False, "arguments are not canonical numerals"
    try:
        got = coding.sub_fn(c.nv, v.nv, n.nv)
    except coding.CodingError as e:
        return False, str(e)
    if got != k.nv:
        return False, "right side disagrees with the substitution function"
    return True, None


def _m_comp_iter0(phi):
    ok = (
        type(phi) is Forall
        and type(phi.body) is Eq
        and type(phi.body.left) is FnApp and phi.body.left.sym == ITER
        and phi.body.left.args[0].nv == 0
        and type(phi.body.left.args[1]) is Var and phi.body.left.args[1].idx == phi.var
        and type(phi.body.right) is Var and phi.body.right.idx == phi.var
    )
    return ok, None


def _m_comp_iter_step(phi):
    if not (
        type(phi) is Forall and type(phi.body) is Forall
        and type(phi.body.body) is Eq
    ):
        return False, None
    a, b = phi.var, phi.body.var
    eq = phi.body.body
    lhs, rhs = eq.left, eq.right
    if not (
        a != b
        and type(lhs) is FnApp and lhs.sym == ITER
        and type(lhs.args[0]) is Succ and type(lhs.args[0].arg) is Var
        and lhs.args[0].arg.idx == a
        and type(lhs.args[1]) is Var and lhs.args[1].idx == b
        and type(rhs) is FnApp and rhs.sym == SUB
    ):
        return False, None
    inner, yi, xv = rhs.args
    if not (
        type(inner) is FnApp and inner.sym == SUB
        and type(xv) is Var and xv.idx == a
        and type(inner.args[2]) is Var and inner.args[2].idx == b
    ):
        return False, None
    k0n, zi = inner.args[0], inner.args[1]
    if k0n.nv is None or zi.nv is None or yi.nv is None:
        return False, "template arguments are not canonical numerals"
    if zi.nv == yi.nv:
        return False, "template slots coincide"
    template = _named(k0n)
    want = Tr(FnApp(ITER, [Var(yi.nv), Var(zi.nv)]))
    if template != want:
        return False, "first argument does not name the iteration step template"
    return True, None


def _m_comp_succ(phi):
    if type(phi) is not Eq or phi.right.nv is None:
        return False, None
    lhs, k = phi.left, phi.right.nv
    t = type(lhs)
    if t is Succ and lhs.arg.nv is not None:
        ok = k == lhs.arg.nv + 1
    elif t is Add and lhs.left.nv is not None and lhs.right.nv is not None:
        ok = k == lhs.left.nv + lhs.right.nv
    elif t is Mul and lhs.left.nv is not None and lhs.right.nv is not None:
        ok = k == lhs.left.nv * lhs.right.nv
    else:
        return False, None
    return ok, (None if ok else "right side disagrees with numeral arithmetic")


_MATCHERS = {
    SchemaId.PROP1: _m_prop1,
    SchemaId.PROP2: _m_prop2,
    SchemaId.PROP3: _m_prop3,
    SchemaId.QUANT1: _m_quant1,
    SchemaId.QUANT2: _m_quant2,
    SchemaId.EQ1: _m_eq1,
    SchemaId.EQ2: _m_eq2,
    SchemaId.EQ3: _m_eq3,
    SchemaId.CONS: _m_cons,
    SchemaId.TIMP: _m_timp,
    SchemaId.UINF: _m_uinf,
    SchemaId.COMP_SUB: _m_comp_sub,
    SchemaId.COMP_ITER0: _m_comp_iter0,
    SchemaId.COMP_ITER_STEP: _m_comp_iter_step,
    SchemaId.COMP_SUCC: _m_comp_succ,
}


def _matches(schema: SchemaId, phi: Formula):
    m = _MATCHERS.get(schema)
    if m is not None:
        return m(phi)
    return (phi == _q_sentences()[schema]), None


def q_axiom(schema: SchemaId) -> Formula:
    """The canonical sentence of one of the arithmetic axioms Q1..Q7."""
    return _q_sentences()[schema]


def match_schema(phi: Formula, config: TheoryConfig) -> SchemaId | None:
    """The first active schema that ``phi`` instantiates, or None."""
    for schema in SchemaId:
        if config.active(schema) and _matches(schema, phi)[0]:
            return schema
    return None


def is_axiom(phi: Formula, config: TheoryConfig) -> SchemaId:
    """Like :func:`match_schema` but raises a diagnostic on rejection."""
    near: list[str] = []
    for schema in SchemaId:
        ok, detail = _matches(schema, phi)
        if ok:
            if config.active(schema):
                return schema
            near.append(f"{schema.value} matches but is inactive under this theory")
        elif detail:
            near.append(f"{schema.value}: {detail}")
    hint = f" (nearest: {'; '.join(near)})" if near else ""
    raise AxiomRejection(
        f"formula instantiates no active axiom schema{hint}: {pretty_print(phi)}"
    )


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class GeneratorCertificate:
    samples_checked: int


@dataclass(frozen=True)
class CheckedTheorem:
    """A verified judgment.  ``omega_count`` is the maximum number of omega
    nodes on any root-to-leaf path; 0 means classical derivability."""

    formula: Formula
    theory: TheoryConfig
    omega_count: int
    samples_checked: int
    proof_size: int
    proof: Proof = field(repr=False, compare=False)

    def certificate(self) -> dict:
        return {
            "formula": pretty_print(self.formula),
            "theory": self.theory.preset_name(),
            "omega_count": self.omega_count,
            "samples_checked": self.samples_checked,
            "proof_size": self.proof_size,
        }


@dataclass(frozen=True)
class Refutation:
    """Proofs of a sentence and of its negation under one configuration."""

    positive: CheckedTheorem
    negative: CheckedTheorem
    narrative: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        if self.negative.formula != Not(self.positive.formula):
            raise ValueError("refutation sides do not contradict each other")
        if self.negative.theory != self.positive.theory:
            raise ValueError("refutation sides use different theories")


class _Checker:
    def __init__(self, config: TheoryConfig):
        self.config = config
        # keyed by structural equality, so certificates are stable across
        # serialization round trips that duplicate shared subproofs
        self.memo: dict[Proof, tuple[Formula, int]] = {}
        self.samples = 0
        self.size = 0

    def run(self, root: Proof, path: tuple[int, ...] = ()) -> tuple[Formula, int]:
        memo = self.memo
        stack: list[tuple[Proof, tuple[int, ...], bool]] = [(root, path, False)]
        while stack:
            node, npath, ready = stack.pop()
            if node in memo:
                continue
            if not ready:
                stack.append((node, npath, True))
                for i, child in enumerate(_proof_children(node)):
                    stack.append((child, npath + (i,), False))
            else:
                memo[node] = self._reduce(node, npath)
                self.size += 1
        return memo[root]

    def _reduce(self, node: Proof, path: tuple[int, ...]) -> tuple[Formula, int]:
        t = type(node)
        memo = self.memo
        if t is Axiom:
            if not self.config.active(node.schema):
                raise CheckError(path, "axiom", f"schema {node.schema.value} is inactive under this theory")
            ok, detail = _matches(node.schema, node.instance)
            if not ok:
                why = detail or "instance does not match the schema"
                raise CheckError(path, "axiom", f"{node.schema.value}: {why}: {pretty_print(node.instance)}")
            return node.instance, 0
        if t is MP:
            fa, oa = memo[node.minor]
            fb, ob = memo[node.major]
            if type(fb) is not Imp:
                raise CheckError(path, "mp", f"major premise is not an implication: {pretty_print(fb)}")
            if fb.ant != fa:
                raise CheckError(
                    path, "mp",
                    f"minor premise {pretty_print(fa)} does not match antecedent {pretty_print(fb.ant)}",
                )
            return fb.cons, max(oa, ob)
        if t is Gen:
            f, o = memo[node.premise]
            return Forall(node.var, f), o
        if t is TIntro:
            f, o = memo[node.premise]
            if f.fv:
                raise CheckError(path, "t-intro", f"premise is not a sentence: {pretty_print(f)}")
            return Tr(coding.name_of(f)), o
        # Omega
        gen = node.gen
        want = gen.conclusion()
        if node.conclusion != want:
            raise CheckError(path, "omega", f"conclusion differs from the family closure {pretty_print(want)}")
        counts = [self._replay(gen, path)]
        base_f, base_o = memo[gen.base]
        counts.append(base_o)
        return node.conclusion, 1 + max(counts)

    def _replay(self, gen: PremiseGenerator, path: tuple[int, ...]) -> int:
        memo = self.memo
        base_f, base_o = memo[gen.base]
        fam0 = gen.instance(0)
        if base_f != fam0:
            raise CheckError(path, "omega", f"base proves {pretty_print(base_f)}, not instance 0 {pretty_print(fam0)}")
        cur_proof, cur_formula = gen.base, fam0
        worst = base_o
        for k in range(self.config.omega_samples):
            expected = gen.instance(k + 1)
            for j, step in enumerate(gen.steps):
                try:
                    cur_proof, cur_formula = step.apply(cur_proof, cur_formula, expected)
                except CheckError:
                    raise
                except Exception as e:  # tactic construction failure
                    raise CheckError(path, "omega", f"step {j} failed at sample {k}: {e}") from e
            got, ocount = self.run(cur_proof, path + (1 + k,))
            if got != expected:
                raise CheckError(
                    path, "omega",
                    f"sample {k + 1} proves {pretty_print(got)}, expected {pretty_print(expected)}",
                )
            cur_formula = got
            worst = max(worst, ocount)
        self.samples += self.config.omega_samples
        return worst


def check(proof: Proof, config: TheoryConfig = GAMMA) -> CheckedTheorem:
    """Verify a proof and return its certificate; raises CheckError."""
    st = _Checker(config)
    formula, ocount = st.run(proof)
    if config.max_omega_count is not None and ocount > config.max_omega_count:
        raise CheckError((), "omega", f"omega_count {ocount} exceeds the configured cap {config.max_omega_count}")
    return CheckedTheorem(formula, config, ocount, st.samples, st.size, proof)


def validate_generator(gen: PremiseGenerator, config: TheoryConfig = GAMMA) -> GeneratorCertificate:
    """Replay a generator at ``config.omega_samples`` instances."""
    st = _Checker(config)
    st.run(gen.base)
    st._replay(gen, ())
    return GeneratorCertificate(samples_checked=config.omega_samples)
