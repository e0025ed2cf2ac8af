"""Concrete syntax: unranked terms for trees, an XPath-like dialect for
patterns, Dewey addresses, witnesses and DIMACS CNF.

Tree grammar::

    tree  := label ( '(' tree (',' tree)* ')' )?

Pattern grammar::

    step  := label pred* tail?
    pred  := '[' ( './/' step | './'? step ) ']'
    tail  := '//' step | '/' step
    label := ident | '*'

``/`` and bare or ``./`` predicates give child edges, ``//`` and ``.//``
give descendant edges.  Identifiers are ASCII letters, digits and ``_``;
whitespace between tokens is ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .tree import WILDCARD, EdgeKind, Pattern, Tree, WildcardInTree

ROOT_MARK = "ε"


class ParseError(ValueError):
    """Malformed input; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, expected: str = ""):
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class InvalidPath(ValueError):
    pass


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip_ws(self) -> None:
        t = self.text
        while self.i < len(t) and t[self.i].isspace():
            self.i += 1

    def peek(self, s: str) -> bool:
        self.skip_ws()
        return self.text.startswith(s, self.i)

    def take(self, s: str) -> bool:
        if self.peek(s):
            self.i += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.take(s):
            raise ParseError(f"unexpected {self._found()}", self.i, repr(s))

    def _found(self) -> str:
        if self.i >= len(self.text):
            return "end of input"
        return repr(self.text[self.i])

    def label(self, allow_wildcard: bool) -> str:
        self.skip_ws()
        t = self.text
        start = self.i
        if allow_wildcard and t.startswith(WILDCARD, start):
            self.i += 1
            return WILDCARD
        while self.i < len(t) and _is_ident_char(t[self.i]):
            self.i += 1
        if self.i == start:
            what = "label or '*'" if allow_wildcard else "label"
            raise ParseError(f"unexpected {self._found()}", start, what)
        return t[start : self.i]

    def end(self) -> None:
        self.skip_ws()
        if self.i != len(self.text):
            raise ParseError(f"unexpected {self._found()}", self.i, "end of input")


def parse_tree(text: str) -> Tree:
    sc = _Scanner(text)
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    # explicit stack: deep chains must not hit the recursion limit
    stack: list[int] = []
    while True:
        sc.skip_ws()
        if sc.text.startswith(WILDCARD, sc.i):
            raise WildcardInTree(f"wildcard at position {sc.i} in a tree")
        lab = sc.label(allow_wildcard=False)
        v = len(labels)
        labels.append(lab)
        if stack:
            edges.append((stack[-1], v))
        if sc.take("("):
            stack.append(v)
            continue
        while stack:
            if sc.take(","):
                break
            sc.expect(")")
            stack.pop()
        else:
            break
    sc.end()
    return Tree(labels, edges)


def parse_pattern(text: str) -> Pattern:
    sc = _Scanner(text)
    labels: list[str] = []
    edges: list[tuple[int, int, EdgeKind]] = []

    def step(parent: int, kind: EdgeKind | None) -> None:
        v = len(labels)
        labels.append(sc.label(allow_wildcard=True))
        if parent >= 0:
            edges.append((parent, v, kind))
        while sc.take("["):
            if sc.take(".//"):
                step(v, EdgeKind.DESC)
            else:
                sc.take("./")
                step(v, EdgeKind.CHILD)
            sc.expect("]")
        if sc.take("//"):
            step(v, EdgeKind.DESC)
        elif sc.take("/"):
            step(v, EdgeKind.CHILD)

    try:
        step(-1, None)
    except RecursionError:
        raise ParseError("pattern nested too deeply", sc.i) from None
    sc.end()
    return Pattern(labels, edges)


def parse_structure(text: str) -> Pattern:
    """Parse either syntax: terms contain '(' and no '/' or '['."""
    if any(c in text for c in "/["):
        return parse_pattern(text)
    return parse_tree(text)


def _sorted_children(s: Pattern, canon: list[str], x: int) -> list[int]:
    return sorted(s.children[x], key=lambda c: (s.edge[c].value + canon[c], c))


def render_tree(t: Pattern) -> str:
    """Canonical term: children sorted by canonical form."""
    canon = t.canonical_forms()
    out: list[str] = []
    stack: list[object] = [t.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        x = item
        out.append(t.labels[x])
        kids = _sorted_children(t, canon, x)
        if kids:
            out.append("(")
            stack.append(")")
            for i, c in enumerate(reversed(kids)):
                stack.append(c)
                if i < len(kids) - 1:
                    stack.append(",")
    return "".join(out)


def render_pattern(p: Pattern) -> str:
    """Canonical XPath-like rendering.

    The least child in canonical order becomes the trailing step, the others
    become predicates in canonical order, so ``f/a[.//b/c]//b`` renders as
    itself.
    """
    canon = p.canonical_forms()

    def rec(x: int) -> str:
        kids = _sorted_children(p, canon, x)
        s = p.labels[x]
        if not kids:
            return s
        tail, preds = kids[0], kids[1:]
        for c in preds:
            prefix = ".//" if p.edge[c] is EdgeKind.DESC else ""
            s += "[" + prefix + rec(c) + "]"
        return s + p.edge[tail].value + rec(tail)

    return rec(p.root)


# -- Dewey paths --------------------------------------------------------------

DeweyPath = tuple


def dewey_of(s: Pattern, n: int) -> tuple[int, ...]:
    path = []
    for a, b in zip(s.root_path(n), s.root_path(n)[1:]):
        path.append(s.children[a].index(b))
    return tuple(path)


def node_at(s: Pattern, d: Sequence[int]) -> int:
    x = s.root
    for depth, i in enumerate(d):
        kids = s.children[x]
        if not 0 <= i < len(kids):
            raise InvalidPath(f"index {i} at depth {depth} out of range (degree {len(kids)})")
        x = kids[i]
    return x


def format_dewey(d: Sequence[int]) -> str:
    return ".".join(map(str, d)) if d else ROOT_MARK


def parse_dewey(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in (ROOT_MARK, ""):
        return ()
    try:
        parts = tuple(int(x) for x in text.split("."))
    except ValueError:
        raise InvalidPath(f"malformed Dewey path {text!r}") from None
    if any(x < 0 for x in parts):
        raise InvalidPath(f"negative index in {text!r}")
    return parts


def format_witness(t: Pattern, p: Pattern, h: Sequence[int]) -> str:
    """One ``<patternDewey> -> <treeDewey>`` line per pattern node, preorder."""
    lines = [
        f"{format_dewey(dewey_of(p, m))} -> {format_dewey(dewey_of(t, h[m]))}"
        for m in p.preorder
    ]
    return "\n".join(lines)


def witness_pairs(t: Pattern, p: Pattern, h: Sequence[int]) -> list[tuple[str, str]]:
    return [
        (format_dewey(dewey_of(p, m)), format_dewey(dewey_of(t, h[m]))) for m in p.preorder
    ]


def parse_witness(t: Pattern, p: Pattern, text: str) -> list[int]:
    h: list[int | None] = [None] * len(p)
    for line in text.splitlines():
        if not line.strip():
            continue
        left, sep, right = line.partition("->")
        if not sep:
            raise InvalidPath(f"witness line without '->': {line!r}")
        h[node_at(p, parse_dewey(left))] = node_at(t, parse_dewey(right))
    if any(x is None for x in h):
        raise InvalidPath("witness does not cover every pattern node")
    return h  # type: ignore[return-value]


# -- DIMACS -------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for j, clause in enumerate(self.clauses):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {j + 1}: literal {lit} outside 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c + (0,))) for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        pos = offset
        offset += len(line)
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            if header is not None:
                raise ParseError("second problem line", pos)
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("malformed problem line", pos, "'p cnf V C'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer in problem line", pos, "'p cnf V C'") from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative count in problem line", pos)
            continue
        if header is None:
            raise ParseError("clause before problem line", pos, "'p cnf V C'")
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", pos + line.index(tok), "integer") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds {header[0]} variables", pos)
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing problem line", len(text), "'p cnf V C'")
    if current:
        raise ParseError("last clause not terminated by 0", len(text), "'0'")
    if len(clauses) != header[1]:
        raise ParseError(
            f"header declares {header[1]} clauses, found {len(clauses)}", len(text)
        )
    return CnfFormula(header[0], tuple(clauses))
