"""PubMed-style boolean query parsing.

Supports AND, OR, NOT and parentheses.  Like the remote search engine,
operators bind left to right with equal precedence unless parenthesized,
so ``Alzheimer NOT Glucose NOT Phosphate`` reads as
``(Alzheimer NOT Glucose) NOT Phosphate``.  Terms are bare word runs or
quoted phrases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from litsqueeze.errors import QuerySyntaxError

_TOKEN_RE = re.compile(r'\(|\)|"[^"]*"|[^\s()]+')
_OPERATORS = {"AND", "OR", "NOT"}


class Node:
    """Base class for parsed query nodes."""


@dataclass(frozen=True)
class Term(Node):
    text: str

    def unparse(self) -> str:
        if re.search(r"\s", self.text):
            return f'"{self.text}"'
        return self.text


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # AND | OR | NOT
    left: Node
    right: Node

    def unparse(self) -> str:
        return f"({self.left.unparse()} {self.op} {self.right.unparse()})"


def _tokenize(raw: str) -> list[str]:
    tokens = _TOKEN_RE.findall(raw)
    out = []
    for tok in tokens:
        if tok.startswith('"') and tok.endswith('"'):
            out.append(tok)
        elif tok.upper() in _OPERATORS:
            out.append(tok.upper())
        else:
            out.append(tok)
    return out


class _Parser:
    def __init__(self, tokens: list[str], raw: str):
        self.tokens = tokens
        self.pos = 0
        self.raw = raw

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError(f"unexpected end of query: {self.raw!r}")
        self.pos += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.peek() is not None:
            raise QuerySyntaxError(f"trailing input at token {self.peek()!r} in {self.raw!r}")
        return node

    def expr(self) -> Node:
        node = self.operand()
        while self.peek() in _OPERATORS:
            op = self.next()
            right = self.operand()
            node = BinOp(op, node, right)
        return node

    def operand(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError(f"operand expected at end of {self.raw!r}")
        if tok == "(":
            self.next()
            node = self.expr()
            if self.peek() != ")":
                raise QuerySyntaxError(f"unbalanced parenthesis in {self.raw!r}")
            self.next()
            return node
        if tok == ")":
            raise QuerySyntaxError(f"unexpected ')' in {self.raw!r}")
        # consecutive bare words form one phrase term
        words = []
        while self.peek() is not None and self.peek() not in _OPERATORS and self.peek() not in ("(", ")"):
            word = self.next()
            if word.startswith('"') and word.endswith('"'):
                words.append(word[1:-1].strip())
            else:
                words.append(word)
        if not words or any(not w for w in words):
            raise QuerySyntaxError(f"empty term in {self.raw!r}")
        return Term(" ".join(words))


@dataclass(frozen=True)
class BooleanQuery:
    """A parsed boolean query; ``raw`` is preserved as typed."""

    raw: str
    tree: Node = field(compare=False)

    @classmethod
    def parse(cls, raw: str) -> "BooleanQuery":
        raw = raw.strip()
        if not raw:
            raise QuerySyntaxError("empty query")
        tree = _Parser(_tokenize(raw), raw).parse()
        return cls(raw=raw, tree=tree)

    def unparse(self) -> str:
        """An equivalent raw string with explicit grouping.

        Reparsing the result yields the same tree (round-trip contract).
        """
        return self.tree.unparse()

    def excluded_clauses(self) -> list[tuple[str, ...]]:
        """Flatten every NOT right-hand side into exclusion clauses.

        Each clause is a tuple of terms that must *all* appear for the
        clause to exclude a document; an OR under a NOT yields one clause
        per branch.
        """
        clauses: list[tuple[str, ...]] = []

        def conjunctions(node: Node) -> list[tuple[str, ...]]:
            # disjunctive normal form of an exclusion subtree
            if isinstance(node, Term):
                return [(node.text,)]
            assert isinstance(node, BinOp)
            if node.op == "OR":
                return conjunctions(node.left) + conjunctions(node.right)
            if node.op == "AND":
                return [
                    l + r for l in conjunctions(node.left) for r in conjunctions(node.right)
                ]
            # NOT inside an exclusion: "x NOT y" excludes on x alone
            return conjunctions(node.left)

        def walk(node: Node) -> None:
            if isinstance(node, BinOp):
                if node.op == "NOT":
                    clauses.extend(conjunctions(node.right))
                    walk(node.left)
                else:
                    walk(node.left)
                    walk(node.right)

        walk(self.tree)
        return clauses

    def include_terms(self) -> list[str]:
        """Terms on the positive side of the query, left to right."""
        terms: list[str] = []

        def walk(node: Node) -> None:
            if isinstance(node, Term):
                terms.append(node.text)
            elif isinstance(node, BinOp):
                walk(node.left)
                if node.op != "NOT":
                    walk(node.right)

        walk(self.tree)
        return terms
