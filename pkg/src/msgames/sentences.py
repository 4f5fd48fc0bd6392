"""First-order sentences over {<, =, atom}: AST, evaluator, metrics,
parser/renderer, and the library of threshold sentences for linear orders.

The evaluator has two engines: a plain Tarskian recursion, and a memoized
engine for constant-free, atom-free sentences over linear orders that keys
subformula truth on the order type of the assignment with gap lengths
capped at 2^qr - 1 (qr = quantifier rank of the subformula).  Two
assignments with the same capped profile satisfy the same rank-qr
formulas, which is what makes the six-quantifier threshold sentence
checkable at sizes in the forties.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .structures import Structure, UsageError


# ---------------------------------------------------------------------------
# AST.  Terms are strings: variables or constant names; which is which is
# resolved at evaluation time (environment first, then model constants).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Less:
    a: str
    b: str


@dataclass(frozen=True)
class Eq:
    a: str
    b: str


@dataclass(frozen=True)
class AtomPred:
    t: str


@dataclass(frozen=True)
class Not:
    body: "Node"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Implies:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Node"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Node"


Node = Union[Less, Eq, AtomPred, Not, And, Or, Implies, Exists, Forall]


def neq(a: str, b: str) -> Node:
    return Not(Eq(a, b))


def chain(*terms: str) -> Node:
    """t1 < t2 < ... < tk as a conjunction of adjacent comparisons."""
    parts = [Less(a, b) for a, b in zip(terms, terms[1:])]
    return parts[0] if len(parts) == 1 else And(*parts)


# ---------------------------------------------------------------------------
# Metrics.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuantifierProfile:
    count: int
    rank: int
    prefix: Optional[str]  # over {E, A} when the sentence is prenex


def _count_rank(n: Node):
    if isinstance(n, (Less, Eq, AtomPred)):
        return 0, 0
    if isinstance(n, Not):
        return _count_rank(n.body)
    if isinstance(n, Implies):
        lc, lr = _count_rank(n.left)
        rc, rr = _count_rank(n.right)
        return lc + rc, max(lr, rr)
    if isinstance(n, (And, Or)):
        pairs = [_count_rank(p) for p in n.parts]
        return sum(c for c, _ in pairs), max((r for _, r in pairs), default=0)
    if isinstance(n, (Exists, Forall)):
        c, r = _count_rank(n.body)
        return c + 1, r + 1
    raise UsageError(f"not a formula node: {n!r}")


def quantifier_profile(s: Node) -> QuantifierProfile:
    count, rank = _count_rank(s)
    prefix = []
    node = s
    while isinstance(node, (Exists, Forall)):
        prefix.append("E" if isinstance(node, Exists) else "A")
        node = node.body
    matrix_count, _ = _count_rank(node)
    if matrix_count == 0 and len(prefix) == count:
        return QuantifierProfile(count, rank, "".join(prefix))
    return QuantifierProfile(count, rank, None)


def free_variables(s: Node, bound=frozenset()) -> set:
    if isinstance(s, (Less, Eq)):
        return {t for t in (s.a, s.b) if t not in bound}
    if isinstance(s, AtomPred):
        return {s.t} - bound
    if isinstance(s, Not):
        return free_variables(s.body, bound)
    if isinstance(s, Implies):
        return free_variables(s.left, bound) | free_variables(s.right, bound)
    if isinstance(s, (And, Or)):
        out = set()
        for p in s.parts:
            out |= free_variables(p, bound)
        return out
    if isinstance(s, (Exists, Forall)):
        return free_variables(s.body, bound | {s.var})
    raise UsageError(f"not a formula node: {s!r}")


def _uses_atom_pred(s: Node) -> bool:
    if isinstance(s, AtomPred):
        return True
    if isinstance(s, (Less, Eq)):
        return False
    if isinstance(s, Not):
        return _uses_atom_pred(s.body)
    if isinstance(s, Implies):
        return _uses_atom_pred(s.left) or _uses_atom_pred(s.right)
    if isinstance(s, (And, Or)):
        return any(_uses_atom_pred(p) for p in s.parts)
    return _uses_atom_pred(s.body)


# ---------------------------------------------------------------------------
# Models and evaluation.  Domain values are element indices (int) or atoms
# ('a', j); atoms are unrelated to everything and equal only to themselves.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomModel:
    """A structure together with a supply of unrelated atoms."""

    struct: Structure
    atom_count: int


def _unwrap(model):
    if isinstance(model, AtomModel):
        return model.struct, model.atom_count
    if isinstance(model, Structure):
        return model, 0
    raise UsageError(f"cannot evaluate over {model!r}")


def evaluate(s: Node, model) -> bool:
    """Truth of a closed sentence in a structure (optionally with atoms)."""
    struct, atoms = _unwrap(model)
    consts = struct.constants
    if free_variables(s) - set(consts):
        raise UsageError(f"sentence has free variables: {sorted(free_variables(s) - set(consts))}")
    if struct.is_linear_order and atoms == 0 and not consts and not _uses_atom_pred(s):
        return _eval_capped(s, struct.n)
    domain = list(range(struct.n)) + [("a", j) for j in range(atoms)]
    less = struct.relations.get("<", frozenset())
    return _eval_naive(s, {}, domain, less, consts)


def _term(t, env, consts):
    if t in env:
        return env[t]
    if t in consts:
        return consts[t]
    raise UsageError(f"uninterpreted symbol {t!r}")


def _eval_naive(s: Node, env, domain, less, consts) -> bool:
    if isinstance(s, Less):
        a, b = _term(s.a, env, consts), _term(s.b, env, consts)
        return isinstance(a, int) and isinstance(b, int) and (a, b) in less
    if isinstance(s, Eq):
        return _term(s.a, env, consts) == _term(s.b, env, consts)
    if isinstance(s, AtomPred):
        return not isinstance(_term(s.t, env, consts), int)
    if isinstance(s, Not):
        return not _eval_naive(s.body, env, domain, less, consts)
    if isinstance(s, And):
        return all(_eval_naive(p, env, domain, less, consts) for p in s.parts)
    if isinstance(s, Or):
        return any(_eval_naive(p, env, domain, less, consts) for p in s.parts)
    if isinstance(s, Implies):
        return (not _eval_naive(s.left, env, domain, less, consts)) or _eval_naive(
            s.right, env, domain, less, consts
        )
    if isinstance(s, Exists):
        return any(
            _eval_naive(s.body, {**env, s.var: v}, domain, less, consts) for v in domain
        )
    if isinstance(s, Forall):
        return all(
            _eval_naive(s.body, {**env, s.var: v}, domain, less, consts) for v in domain
        )
    raise UsageError(f"not a formula node: {s!r}")


def _eval_capped(s: Node, n: int) -> bool:
    ranks: dict = {}
    keep = []  # keeps nodes alive so id() stays unique

    def rank_of(node):
        r = ranks.get(id(node))
        if r is None:
            keep.append(node)
            if isinstance(node, (Less, Eq)):
                r = 0
            elif isinstance(node, Not):
                r = rank_of(node.body)
            elif isinstance(node, Implies):
                r = max(rank_of(node.left), rank_of(node.right))
            elif isinstance(node, (And, Or)):
                r = max((rank_of(p) for p in node.parts), default=0)
            else:
                r = rank_of(node.body) + 1
            ranks[id(node)] = r
        return r

    rank_of(s)
    memo: dict = {}

    def profile(env, cap):
        positions = sorted(set(env.values()))
        rank_index = {p: i for i, p in enumerate(positions)}
        pattern = tuple(sorted((v, rank_index[p]) for v, p in env.items()))
        gaps = []
        prev = -1
        for p in positions:
            gaps.append(min(p - prev - 1, cap))
            prev = p
        gaps.append(min(n - 1 - prev, cap))
        return pattern, tuple(gaps)

    def ev(node, env) -> bool:
        if isinstance(node, Less):
            return env[node.a] < env[node.b]
        if isinstance(node, Eq):
            return env[node.a] == env[node.b]
        if isinstance(node, Not):
            return not ev(node.body, env)
        if isinstance(node, And):
            return all(ev(p, env) for p in node.parts)
        if isinstance(node, Or):
            return any(ev(p, env) for p in node.parts)
        if isinstance(node, Implies):
            return (not ev(node.left, env)) or ev(node.right, env)
        # quantifier: memoize on the capped order type of the assignment
        cap = (1 << ranks[id(node)]) - 1
        key = (id(node), profile(env, cap))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Exists):
            result = any(ev(node.body, {**env, node.var: v}) for v in range(n))
        else:
            result = all(ev(node.body, {**env, node.var: v}) for v in range(n))
        memo[key] = result
        return result

    return ev(s, {})


# ---------------------------------------------------------------------------
# Text grammar: `E v .` / `A v .` quantifiers, infix <, =, &, |, !, ->,
# atom(v), parentheses.  `->` is right-associative and binds loosest, then
# |, then &, then !.
# ---------------------------------------------------------------------------


class ParseError(UsageError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_PUNCT = ("->", "(", ")", "<", "=", "&", "|", "!", ".")


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        matched = False
        for p in _PUNCT:
            if text.startswith(p, i):
                out.append((p, i))
                i += len(p)
                matched = True
                break
        if matched:
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append((text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    out.append((None, len(text)))
    return out


def parse(text: str) -> Node:
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]][0]

    def where():
        return tokens[pos[0]][1]

    def take(expected=None):
        tok, at = tokens[pos[0]]
        if tok is None:
            raise ParseError("unexpected end of input", at)
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", at)
        pos[0] += 1
        return tok

    def is_name(tok):
        return tok is not None and tok not in _PUNCT and (tok[0].isalpha() or tok[0] == "_")

    def formula():
        if peek() in ("E", "A") and is_name(tokens[pos[0] + 1][0]) and tokens[pos[0] + 2][0] == ".":
            q = take()
            var = take()
            take(".")
            body = formula()
            return Exists(var, body) if q == "E" else Forall(var, body)
        return implies()

    def implies():
        left = disjunction()
        if peek() == "->":
            take("->")
            return Implies(left, implies())
        return left

    def disjunction():
        parts = [conjunction()]
        while peek() == "|":
            take("|")
            parts.append(conjunction())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def conjunction():
        parts = [unary()]
        while peek() == "&":
            take("&")
            parts.append(unary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def unary():
        if peek() == "!":
            take("!")
            return Not(unary())
        if peek() == "(":
            take("(")
            inner = formula()
            take(")")
            return inner
        if peek() == "atom" and tokens[pos[0] + 1][0] == "(":
            take("atom")
            take("(")
            t = take()
            if not is_name(t):
                raise ParseError("expected a term inside atom()", where())
            take(")")
            return AtomPred(t)
        tok = take()
        if not is_name(tok):
            raise ParseError(f"unexpected token {tok!r}", tokens[pos[0] - 1][1])
        op = take()
        if op == "<":
            return Less(tok, take())
        if op == "=":
            return Eq(tok, take())
        raise ParseError(f"expected < or = after {tok!r}", tokens[pos[0] - 1][1])

    node = formula()
    if peek() is not None:
        raise ParseError(f"trailing input {peek()!r}", where())
    return node


def render(s: Node) -> str:
    """Canonical text; parse(render(s)) == s."""

    def prec(n):
        if isinstance(n, (Exists, Forall)):
            return 0
        if isinstance(n, Implies):
            return 1
        if isinstance(n, Or):
            return 2
        if isinstance(n, And):
            return 3
        if isinstance(n, Not):
            return 4
        return 5

    def go(n, parent_prec):
        if isinstance(n, Less):
            text = f"{n.a} < {n.b}"
        elif isinstance(n, Eq):
            text = f"{n.a} = {n.b}"
        elif isinstance(n, AtomPred):
            return f"atom({n.t})"
        elif isinstance(n, Not):
            return "!" + go(n.body, 4)
        elif isinstance(n, And):
            text = " & ".join(go(p, 4) for p in n.parts)
        elif isinstance(n, Or):
            text = " | ".join(go(p, 3) for p in n.parts)
        elif isinstance(n, Implies):
            text = f"{go(n.left, 2)} -> {go(n.right, 1)}"
        elif isinstance(n, Exists):
            text = f"E {n.var} . {go(n.body, 0)}"
        elif isinstance(n, Forall):
            text = f"A {n.var} . {go(n.body, 0)}"
        else:
            raise UsageError(f"not a formula node: {n!r}")
        if prec(n) < parent_prec or (isinstance(n, (Exists, Forall)) and parent_prec > 0):
            return f"({text})"
        return text

    return go(s, 0)
