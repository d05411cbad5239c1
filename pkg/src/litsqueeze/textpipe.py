"""Text normalization and gene-name recognition.

Turns a document's title+abstract into analysis tokens (lowercased,
stoplist-filtered, stemmed) and matches gene symbols against an
alias->symbol dictionary.  Gene matching runs on the *unstemmed* lowercase
tokens: symbols are codes, and stemming would mutilate them.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from litsqueeze.stemmer import stem

if TYPE_CHECKING:
    from litsqueeze.corpus import Document

# Alphanumeric runs; hyphens/apostrophes split, so "SARS-CoV-2" yields
# ("sars", "cov", "2") and the pure number is dropped afterwards.
_TOKEN_RE = re.compile(r"[a-z0-9]+")
_NUMBER_RE = re.compile(r"^[0-9]+$")


@dataclass(frozen=True)
class TokenizedDoc:
    """Normalized view of one document.

    ``tokens`` are stemmed; ``raw_tokens`` are the same stream before
    stemming (used for gene matching).  Both exclude stoplist entries,
    pure numbers, and punctuation.
    """

    doc_id: str
    tokens: tuple[str, ...]
    token_set: frozenset[str]
    raw_tokens: tuple[str, ...]


@dataclass(frozen=True)
class GeneDictionary:
    """Case-insensitive mapping from surface forms (aliases) to canonical symbols."""

    alias_to_symbol: dict[str, str]
    symbols: frozenset[str] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "symbols", frozenset(self.alias_to_symbol.values()))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "GeneDictionary":
        return cls({alias.lower(): symbol.upper() for alias, symbol in pairs})

    def __len__(self) -> int:
        return len(self.alias_to_symbol)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on everything that is not a letter or digit."""
    return _TOKEN_RE.findall(text.lower())


def preprocess(doc: Document, stoplist: frozenset[str]) -> TokenizedDoc:
    """Normalize title+abstract into stemmed analysis tokens.

    Deterministic for fixed inputs; empty text yields empty token streams.
    """
    raw: list[str] = []
    for tok in tokenize(doc.title + " " + doc.abstract):
        if tok in stoplist or _NUMBER_RE.match(tok):
            continue
        raw.append(tok)
    stemmed = tuple(stem(t) for t in raw)
    return TokenizedDoc(
        doc_id=doc.doc_id,
        tokens=stemmed,
        token_set=frozenset(stemmed),
        raw_tokens=tuple(raw),
    )


def match_genes(doc: TokenizedDoc, dictionary: GeneDictionary) -> frozenset[str]:
    """Canonical symbols whose alias appears as a whole raw token."""
    lookup = dictionary.alias_to_symbol
    return frozenset(lookup[t] for t in doc.raw_tokens if t in lookup)


def count_genes(doc: TokenizedDoc, dictionary: GeneDictionary) -> Counter:
    """Occurrence counts per canonical symbol (alias token multiplicity)."""
    lookup = dictionary.alias_to_symbol
    counts: Counter = Counter()
    for t in doc.raw_tokens:
        symbol = lookup.get(t)
        if symbol is not None:
            counts[symbol] += 1
    return counts


@dataclass(frozen=True)
class TextPipeline:
    """Bundled preprocessing configuration: stoplist + gene dictionary."""

    stoplist: frozenset[str]
    dictionary: GeneDictionary

    def run(self, doc: Document) -> TokenizedDoc:
        return preprocess(doc, self.stoplist)


def load_stoplist(path: str | Path) -> frozenset[str]:
    """One term per line, UTF-8; blank lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def load_gene_dictionary(path: str | Path) -> GeneDictionary:
    """Two tab-separated columns ``alias<TAB>symbol``, case-insensitive."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                continue
            pairs.append((parts[0].strip(), parts[1].strip()))
    return GeneDictionary.from_pairs(pairs)


def _data_path(name: str) -> Path:
    return Path(str(resources.files("litsqueeze").joinpath("data", name)))


def default_stoplist() -> frozenset[str]:
    return load_stoplist(_data_path("stoplist_en.txt"))


def default_gene_dictionary() -> GeneDictionary:
    """Small demo dictionary; point at a full HGNC-style export for real runs."""
    return load_gene_dictionary(_data_path("demo_gene_dictionary.tsv"))
