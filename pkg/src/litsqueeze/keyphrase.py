"""RAKE key-phrase extraction over abstracts.

Candidates are maximal runs of content words between delimiters (sentence
punctuation, stoplist words, numbers).  Words keep their surface form
(lowercased, unstemmed): phrases are for human reading.  Scoring uses the
degree/frequency ratio on the word co-occurrence graph of the candidates.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from litsqueeze.corpus import Document

DEFAULT_MAX_PHRASE_LEN = 4
DEFAULT_MIN_PHRASE_FREQ = 2

# words keep interior hyphens/apostrophes ("sars-cov-2" stays one word)
_WORD_RE = re.compile(r"[a-z0-9]+(?:['\-][a-z0-9]+)*")
_NUMBER_RE = re.compile(r"^[0-9]+$")


@dataclass(frozen=True)
class PhraseCandidate:
    words: tuple[str, ...]
    doc_id: str


@dataclass(frozen=True)
class ScoredPhrase:
    phrase: str
    score: float
    freq: int


def extract_candidates(
    doc: "Document",
    stoplist: frozenset[str],
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN,
) -> list[PhraseCandidate]:
    """Candidate phrases from one document's abstract.

    Runs longer than max_phrase_len are discarded outright rather than
    truncated; a run that long is prose, not a phrase.
    """
    text = doc.abstract.lower()
    candidates: list[PhraseCandidate] = []
    run: list[str] = []
    last_end = 0

    def flush():
        if run and len(run) <= max_phrase_len:
            candidates.append(PhraseCandidate(words=tuple(run), doc_id=doc.doc_id))
        run.clear()

    for match in _WORD_RE.finditer(text):
        gap = text[last_end : match.start()]
        last_end = match.end()
        if gap.strip():  # punctuation between words breaks the run
            flush()
        word = match.group(0)
        if word in stoplist or _NUMBER_RE.match(word):
            flush()
            continue
        run.append(word)
    flush()
    return candidates


def score_phrases(
    candidates: Iterable[PhraseCandidate],
    min_freq: int = 1,
) -> list[ScoredPhrase]:
    """Score pooled candidates with deg(w)/freq(w) word weights.

    freq(w) counts word occurrences across all candidates; deg(w) adds the
    candidate's length once per occurrence of w (self-inclusive degree).
    A phrase scores the sum of its word scores; identical phrases merge
    with summed freq.  Sorted by descending score, ties lexicographic.
    """
    freq: Counter = Counter()
    degree: Counter = Counter()
    phrase_freq: Counter = Counter()
    phrase_words: dict[str, tuple[str, ...]] = {}

    for cand in candidates:
        length = len(cand.words)
        for w in cand.words:
            freq[w] += 1
            degree[w] += length
        phrase = " ".join(cand.words)
        phrase_freq[phrase] += 1
        phrase_words[phrase] = cand.words

    scored = []
    for phrase, count in phrase_freq.items():
        if count < min_freq:
            continue
        score = sum(degree[w] / freq[w] for w in phrase_words[phrase])
        scored.append(ScoredPhrase(phrase=phrase, score=score, freq=count))
    scored.sort(key=lambda sp: (-sp.score, sp.phrase))
    return scored


def extract_phrases(
    docs: Sequence["Document"],
    stoplist: frozenset[str],
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN,
    min_freq: int = 1,
) -> list[ScoredPhrase]:
    """Extract and score phrases over a whole document set."""
    pooled: list[PhraseCandidate] = []
    for doc in docs:
        pooled.extend(extract_candidates(doc, stoplist, max_phrase_len))
    return score_phrases(pooled, min_freq=min_freq)


def export_phrases_csv(phrases: Sequence[ScoredPhrase]) -> str:
    """CSV phrase,score,freq descending by score; phrases are quoted."""
    lines = ["phrase,score,freq"]
    for sp in phrases:
        lines.append(f'"{sp.phrase}",{sp.score:.6f},{sp.freq}')
    return "\n".join(lines) + "\n"
