"""Abstract syntax, parsing and printing for the truth language.

Terms are built from 0, S, +, *, variables (natural indices) and the two
designated function symbols ``iter`` (arity 2) and ``sub`` (arity 3).
Formulas are built from =, the unary truth predicate T, ~, -> and forall;
every other connective is a derived abbreviation that is expanded before
anything reaches the checker.

Nodes are immutable.  Each node caches its hash, its free-variable set and,
for terms, the natural it denotes when it is a *canonical* compact numeral
(see :func:`numeral`).  Equality short-circuits on object identity, cached
hashes and cached numeral values, so the very large shared structures that
show up inside quoted formulas compare cheaply.
"""

from __future__ import annotations

import re
from typing import Iterator, Union

__all__ = [
    "Term", "Var", "Zero", "Succ", "Add", "Mul", "FnApp",
    "Formula", "Eq", "Tr", "Not", "Imp", "Forall",
    "Expr", "Path", "ZERO", "TWO", "ITER", "SUB", "FN_ARITY",
    "numeral", "free_vars", "substitute", "term_substitute",
    "subterm_at", "replace_at", "free_var_positions", "term_positions",
    "var_name", "parse", "parse_term", "parse_formula", "pretty_print",
    "ParseError", "mk_iff", "mk_and",
]

_EMPTY: frozenset[int] = frozenset()

ITER = "iter"
SUB = "sub"
FN_ARITY = {ITER: 2, SUB: 3}


class Term:
    """Base class for term nodes."""

    __slots__ = ("hash", "fv", "nv", "_code", "_val")

    def _init_cache(self, h: int, fv: frozenset[int], nv: int | None) -> None:
        self.hash = h
        self.fv = fv
        self.nv = nv  # value when the node is a canonical numeral, else None
        self._code = None
        self._val = None

    def __hash__(self) -> int:
        return self.hash

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, (Term, Formula)) and _eq(self, other))

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __repr__(self) -> str:
        return pretty_print(self)


class Var(Term):
    __slots__ = ("idx",)

    def __init__(self, idx: int):
        if idx < 0:
            raise ValueError("variable index must be a natural")
        self.idx = idx
        self._init_cache(hash((1, idx)), frozenset((idx,)), None)


class Zero(Term):
    __slots__ = ()

    def __init__(self) -> None:
        self._init_cache(hash((2,)), _EMPTY, 0)


class Succ(Term):
    __slots__ = ("arg",)

    def __init__(self, arg: Term):
        self.arg = arg
        nv = arg.nv + 1 if arg.nv is not None and arg.nv % 2 == 0 else None
        self._init_cache(hash((3, arg.hash)), arg.fv, nv)


class Add(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._init_cache(hash((4, left.hash, right.hash)), _union(left.fv, right.fv), None)


class Mul(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        nv = None
        if right.nv is not None and right.nv >= 1 and _is_two_literal(left):
            nv = 2 * right.nv
        self._init_cache(hash((5, left.hash, right.hash)), _union(left.fv, right.fv), nv)


class FnApp(Term):
    __slots__ = ("sym", "args")

    def __init__(self, sym: str, args):
        if sym not in FN_ARITY:
            raise ValueError(f"unknown function symbol {sym!r}")
        args = tuple(args)
        if len(args) != FN_ARITY[sym]:
            raise ValueError(f"{sym} expects {FN_ARITY[sym]} arguments, got {len(args)}")
        self.sym = sym
        self.args = args
        fv = _EMPTY
        for a in args:
            fv = _union(fv, a.fv)
        self._init_cache(hash((6, sym) + tuple(a.hash for a in args)), fv, None)


class Formula:
    """Base class for formula nodes."""

    __slots__ = ("hash", "fv", "_code")

    def _init_cache(self, h: int, fv: frozenset[int]) -> None:
        self.hash = h
        self.fv = fv
        self._code = None

    def __hash__(self) -> int:
        return self.hash

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, (Term, Formula)) and _eq(self, other))

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __repr__(self) -> str:
        return pretty_print(self)


class Eq(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._init_cache(hash((10, left.hash, right.hash)), _union(left.fv, right.fv))


class Tr(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Term):
        self.arg = arg
        self._init_cache(hash((11, arg.hash)), arg.fv)


class Not(Formula):
    __slots__ = ("body",)

    def __init__(self, body: Formula):
        self.body = body
        self._init_cache(hash((12, body.hash)), body.fv)


class Imp(Formula):
    __slots__ = ("ant", "cons")

    def __init__(self, ant: Formula, cons: Formula):
        self.ant = ant
        self.cons = cons
        self._init_cache(hash((13, ant.hash, cons.hash)), _union(ant.fv, cons.fv))


class Forall(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: int, body: Formula):
        if var < 0:
            raise ValueError("variable index must be a natural")
        self.var = var
        self.body = body
        fv = body.fv - {var} if var in body.fv else body.fv
        self._init_cache(hash((14, var, body.hash)), fv)


Expr = Union[Term, Formula]
Path = tuple[int, ...]

ZERO = Zero()
TWO = Succ(Succ(ZERO))


def _union(a: frozenset[int], b: frozenset[int]) -> frozenset[int]:
    if not a:
        return b
    if not b:
        return a
    return a | b


def _is_two_literal(t: Term) -> bool:
    return (
        type(t) is Succ
        and type(t.arg) is Succ
        and type(t.arg.arg) is Zero  # type: ignore[union-attr]
    )


def _children(e: Expr) -> tuple:
    t = type(e)
    if t is Succ or t is Tr or t is Not:
        return (e.arg,) if t is not Not else (e.body,)
    if t is Add or t is Mul or t is Eq:
        return (e.left, e.right)
    if t is FnApp:
        return e.args
    if t is Imp:
        return (e.ant, e.cons)
    if t is Forall:
        return (e.body,)
    return ()


def _rebuild(e: Expr, children: tuple) -> Expr:
    t = type(e)
    if t is Succ:
        return Succ(children[0])
    if t is Add:
        return Add(children[0], children[1])
    if t is Mul:
        return Mul(children[0], children[1])
    if t is FnApp:
        return FnApp(e.sym, children)
    if t is Eq:
        return Eq(children[0], children[1])
    if t is Tr:
        return Tr(children[0])
    if t is Not:
        return Not(children[0])
    if t is Imp:
        return Imp(children[0], children[1])
    if t is Forall:
        return Forall(e.var, children[0])
    raise ValueError(f"{t.__name__} has no children")


def _eq(a: Expr, b: Expr) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        tx = type(x)
        if tx is not type(y) or x.hash != y.hash:
            return False
        if tx is Var:
            if x.idx != y.idx:
                return False
            continue
        if isinstance(x, Term):
            # canonical numerals are uniquely determined by their value
            if x.nv != y.nv:
                return False
            if x.nv is not None:
                continue
        if tx is FnApp and x.sym != y.sym:
            return False
        if tx is Forall and x.var != y.var:
            return False
        stack.extend(zip(_children(x), _children(y)))
    return True


_NUMERAL_CACHE: dict[int, Term] = {}


def numeral(n: int) -> Term:
    """Canonical compact numeral: size grows with the bit length of ``n``."""
    if n < 0:
        raise ValueError("numerals denote naturals")
    if n == 0:
        return ZERO
    hit = _NUMERAL_CACHE.get(n)
    if hit is not None:
        return hit
    t: Term = Succ(ZERO)
    for b in bin(n)[3:]:
        t = Mul(TWO, t)
        if b == "1":
            t = Succ(t)
    if n.bit_length() > 16:  # only the big ones are worth pinning
        _NUMERAL_CACHE[n] = t
    return t


def free_vars(e: Expr) -> frozenset[int]:
    return e.fv


def term_substitute(t: Term, v: int, s: Term) -> Term:
    if v not in t.fv:
        return t
    if type(t) is Var:
        return s
    kids = tuple(term_substitute(c, v, s) for c in _children(t))
    return _rebuild(t, kids)


def substitute(phi: Formula, v: int, s: Term) -> Formula:
    """Replace every free occurrence of ``v`` in ``phi`` by ``s``.

    Bound variables that would capture a variable of ``s`` are renamed to the
    smallest fresh index first.
    """
    if v not in phi.fv:
        return phi
    t = type(phi)
    if t is Eq:
        return Eq(term_substitute(phi.left, v, s), term_substitute(phi.right, v, s))
    if t is Tr:
        return Tr(term_substitute(phi.arg, v, s))
    if t is Not:
        return Not(substitute(phi.body, v, s))
    if t is Imp:
        return Imp(substitute(phi.ant, v, s), substitute(phi.cons, v, s))
    # Forall; phi.var != v since v is free in phi
    w, body = phi.var, phi.body
    if w in s.fv:
        fresh = 0
        taken = body.fv | s.fv | {v}
        while fresh in taken:
            fresh += 1
        body = substitute(body, w, Var(fresh))
        w = fresh
    return Forall(w, substitute(body, v, s))


def subterm_at(e: Expr, path: Path) -> Expr:
    for i in path:
        kids = _children(e)
        if not 0 <= i < len(kids):
            raise IndexError(f"position {path} does not exist in {type(e).__name__} node")
        e = kids[i]
    return e


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    if not path:
        return new
    kids = list(_children(e))
    if not 0 <= path[0] < len(kids):
        raise IndexError(f"position {path} does not exist in {type(e).__name__} node")
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return _rebuild(e, tuple(kids))


def free_var_positions(phi: Expr, v: int) -> list[Path]:
    """Paths of all free occurrences of ``Var(v)``, in left-to-right order."""
    out: list[Path] = []

    def walk(e: Expr, path: Path) -> None:
        if v not in e.fv:
            return
        if type(e) is Var:
            out.append(path)
            return
        if type(e) is Forall and e.var == v:
            return
        for i, c in enumerate(_children(e)):
            walk(c, path + (i,))

    walk(phi, ())
    return out


def term_positions(e: Expr) -> Iterator[tuple[Path, Term]]:
    """All term positions of an expression (terms inside formulas included)."""
    stack: list[tuple[Expr, Path]] = [(e, ())]
    while stack:
        node, path = stack.pop()
        if isinstance(node, Term):
            yield path, node
        for i, c in enumerate(_children(node)):
            stack.append((c, path + (i,)))


def mk_iff(a: Formula, b: Formula) -> Formula:
    """a <-> b as the primitive-connective expansion ~((a->b) -> ~(b->a))."""
    return Not(Imp(Imp(a, b), Not(Imp(b, a))))


def mk_and(a: Formula, b: Formula) -> Formula:
    return Not(Imp(a, Not(b)))


# ---------------------------------------------------------------------------
# concrete syntax

_CANONICAL_NAMES = ("x", "y", "z", "w", "u", "v")
_NAME_TO_INDEX = {n: i for i, n in enumerate(_CANONICAL_NAMES)}
_RESERVED = {"forall", "T", "S", "iter", "sub"}


def var_name(idx: int) -> str:
    if idx < len(_CANONICAL_NAMES):
        return _CANONICAL_NAMES[idx]
    return f"v{idx}"


def var_index(name: str) -> int | None:
    """Index of a variable name in the concrete grammar, or None."""
    return _var_index(name)


def _var_index(name: str) -> int | None:
    if name in _NAME_TO_INDEX:
        return _NAME_TO_INDEX[name]
    m = re.fullmatch(r"v(\d+)", name)
    if m:
        return int(m.group(1))
    return None


def pretty_print(e: Expr) -> str:
    parts: list[str] = []
    _pp(e, parts, top=True)
    return "".join(parts)


def _pp_term(t: Term, parts: list[str]) -> None:
    if t.nv is not None and t.nv > 0:
        parts.append(f"#{t.nv}")
        return
    tt = type(t)
    if tt is Var:
        parts.append(var_name(t.idx))
    elif tt is Zero:
        parts.append("0")
    elif tt is Succ:
        parts.append("S(")
        _pp_term(t.arg, parts)
        parts.append(")")
    elif tt is Add or tt is Mul:
        parts.append("(")
        _pp_term(t.left, parts)
        parts.append(" + " if tt is Add else " * ")
        _pp_term(t.right, parts)
        parts.append(")")
    else:  # FnApp
        parts.append(t.sym)
        parts.append("(")
        for i, a in enumerate(t.args):
            if i:
                parts.append(", ")
            _pp_term(a, parts)
        parts.append(")")


def _pp(e: Expr, parts: list[str], top: bool = False) -> None:
    t = type(e)
    if isinstance(e, Term):
        _pp_term(e, parts)
    elif t is Eq:
        _pp_term(e.left, parts)
        parts.append(" = ")
        _pp_term(e.right, parts)
    elif t is Tr:
        parts.append("T(")
        _pp_term(e.arg, parts)
        parts.append(")")
    elif t is Not:
        parts.append("~")
        if type(e.body) in (Imp, Forall):
            parts.append("(")
            _pp(e.body, parts)
            parts.append(")")
        else:
            _pp(e.body, parts)
    elif t is Imp:
        if type(e.ant) in (Imp, Forall):
            parts.append("(")
            _pp(e.ant, parts)
            parts.append(")")
        else:
            _pp(e.ant, parts)
        parts.append(" -> ")
        _pp(e.cons, parts)
    else:  # Forall
        parts.append(f"forall {var_name(e.var)}. ")
        _pp(e.body, parts)


class ParseError(ValueError):
    """Syntax error in the concrete grammar, tagged with an input position."""

    def __init__(self, message: str, pos: int, text: str):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>#\d+)|(?P<zero>0)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)|(?P<sym>[()=+*,.~])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), m.start()))
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, want: str):
        kind, val, pos = self.next()
        if val != want and kind != want:
            raise ParseError(f"expected {want!r}, found {val or 'end of input'!r}", pos, self.text)
        return val

    def error(self, msg: str):
        _, val, pos = self.peek()
        raise ParseError(f"{msg}, found {val or 'end of input'!r}", pos, self.text)

    # terms -----------------------------------------------------------------
    def term(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "num":
            self.next()
            return numeral(int(val[1:]))
        if val == "0":
            # no bare integers other than 0 in the grammar
            self.next()
            return ZERO
        if val == "S":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Succ(t)
        if val in FN_ARITY:
            self.next()
            self.expect("(")
            args = [self.term()]
            for _ in range(FN_ARITY[val] - 1):
                self.expect(",")
                args.append(self.term())
            self.expect(")")
            return FnApp(val, args)
        if val == "(":
            self.next()
            left = self.term()
            kind2, op, pos2 = self.next()
            if op not in ("+", "*"):
                raise ParseError(f"expected '+' or '*', found {op!r}", pos2, self.text)
            right = self.term()
            self.expect(")")
            return Add(left, right) if op == "+" else Mul(left, right)
        if kind == "name":
            idx = _var_index(val)
            if idx is None:
                raise ParseError(f"unknown identifier {val!r}", pos, self.text)
            self.next()
            return Var(idx)
        self.error("expected a term")
        raise AssertionError

    # formulas ---------------------------------------------------------------
    def formula(self) -> Formula:
        if self.peek()[1] == "forall":
            return self.forall()
        left = self.unary()
        if self.peek()[1] == "->":
            self.next()
            return Imp(left, self.formula())
        return left

    def forall(self) -> Formula:
        self.next()  # 'forall'; the body extends maximally to the right
        kind, name, pos = self.next()
        idx = _var_index(name) if kind == "name" else None
        if idx is None:
            raise ParseError(f"expected a variable after 'forall', found {name!r}", pos, self.text)
        self.expect(".")
        return Forall(idx, self.formula())

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.next()
            if self.peek()[1] == "forall":
                return Not(self.forall())
            return Not(self.unary())
        if val == "T":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Tr(t)
        if val == "(":
            # either a parenthesized formula or a parenthesized term of an equation
            mark = self.i
            try:
                left = self.term()
            except ParseError:
                self.i = mark
                self.next()
                inner = self.formula()
                self.expect(")")
                return inner
            self.expect("=")
            return Eq(left, self.term())
        left = self.term()
        self.expect("=")
        return Eq(left, self.term())


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "eof":
        p.error("trailing input after term")
    return t


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error("trailing input after formula")
    return f


def parse(text: str, kind: str = "formula") -> Expr:
    """Parse ``text`` as a ``"term"`` or a ``"formula"``."""
    if kind == "term":
        return parse_term(text)
    if kind == "formula":
        return parse_formula(text)
    raise ValueError(f"kind must be 'term' or 'formula', got {kind!r}")
