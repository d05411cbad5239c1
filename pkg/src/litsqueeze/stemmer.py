"""Classic suffix-stripping stemmer for English (Porter, five-step variant).

Pure Python, no external resources, deterministic.  Used for token
normalization so that inflected forms ("cells", "divided") collapse to one
analysis term.  Gene symbols are never passed through here; they are matched
on raw tokens (see :mod:`litsqueeze.textpipe`).
"""

from __future__ import annotations

from functools import lru_cache

_VOWELS = "aeiou"


class _Buffer:
    """Mutable word buffer with the stemmer's measure/shape predicates.

    ``k`` is the index of the last live character, ``j`` marks the stem end
    after a suffix match.
    """

    def __init__(self, word: str):
        self.b = word
        self.k = len(word) - 1
        self.j = 0

    def cons(self, i: int) -> bool:
        ch = self.b[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return True if i == 0 else not self.cons(i - 1)
        return True

    def m(self) -> int:
        """Number of vowel-consonant sequences in the stem b[0..j]."""
        n = 0
        i = 0
        while True:
            if i > self.j:
                return n
            if not self.cons(i):
                break
            i += 1
        i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self.cons(i):
                    break
                i += 1
            i += 1
            n += 1
            while True:
                if i > self.j:
                    return n
                if not self.cons(i):
                    break
                i += 1
            i += 1

    def vowel_in_stem(self) -> bool:
        return any(not self.cons(i) for i in range(self.j + 1))

    def double_cons(self, j: int) -> bool:
        if j < 1:
            return False
        if self.b[j] != self.b[j - 1]:
            return False
        return self.cons(j)

    def cvc(self, i: int) -> bool:
        """Stem ends consonant-vowel-consonant, last consonant not w/x/y."""
        if i < 2 or not self.cons(i) or self.cons(i - 1) or not self.cons(i - 2):
            return False
        return self.b[i] not in "wxy"

    def ends(self, s: str) -> bool:
        length = len(s)
        if length > self.k + 1:
            return False
        if self.b[self.k - length + 1 : self.k + 1] != s:
            return False
        self.j = self.k - length
        return True

    def set_to(self, s: str) -> None:
        self.b = self.b[: self.j + 1] + s + self.b[self.j + 1 + len(s) :]
        self.k = self.j + len(s)

    def replace_if_m(self, s: str) -> None:
        if self.m() > 0:
            self.set_to(s)


def _step1ab(w: _Buffer) -> None:
    # plurals: sses -> ss, ies -> i, drop lone s
    if w.b[w.k] == "s":
        if w.ends("sses"):
            w.k -= 2
        elif w.ends("ies"):
            w.set_to("i")
        elif w.b[w.k - 1] != "s":
            w.k -= 1
    # past/continuous: eed -> ee (m>0), ed/ing dropped when stem has a vowel
    if w.ends("eed"):
        if w.m() > 0:
            w.k -= 1
    elif (w.ends("ed") or w.ends("ing")) and w.vowel_in_stem():
        w.k = w.j
        if w.ends("at"):
            w.set_to("ate")
        elif w.ends("bl"):
            w.set_to("ble")
        elif w.ends("iz"):
            w.set_to("ize")
        elif w.double_cons(w.k):
            w.k -= 1
            if w.b[w.k] in "lsz":
                w.k += 1
        elif w.m() == 1 and w.cvc(w.k):
            w.set_to("e")


def _step1c(w: _Buffer) -> None:
    if w.ends("y") and w.vowel_in_stem():
        w.b = w.b[: w.k] + "i" + w.b[w.k + 1 :]


_STEP2 = {
    "a": (("ational", "ate"), ("tional", "tion")),
    "c": (("enci", "ence"), ("anci", "ance")),
    "e": (("izer", "ize"),),
    "l": (("bli", "ble"), ("alli", "al"), ("entli", "ent"), ("eli", "e"), ("ousli", "ous")),
    "o": (("ization", "ize"), ("ation", "ate"), ("ator", "ate")),
    "s": (("alism", "al"), ("iveness", "ive"), ("fulness", "ful"), ("ousness", "ous")),
    "t": (("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")),
    "g": (("logi", "log"),),
}

_STEP3 = {
    "e": (("icate", "ic"), ("ative", ""), ("alize", "al")),
    "i": (("iciti", "ic"),),
    "l": (("ical", "ic"), ("ful", "")),
    "s": (("ness", ""),),
}

_STEP4 = {
    "a": ("al",),
    "c": ("ance", "ence"),
    "e": ("er",),
    "i": ("ic",),
    "l": ("able", "ible"),
    "n": ("ant", "ement", "ment", "ent"),
    "o": ("ion", "ou"),
    "s": ("ism",),
    "t": ("ate", "iti"),
    "u": ("ous",),
    "v": ("ive",),
    "z": ("ize",),
}


def _step2(w: _Buffer) -> None:
    for suffix, repl in _STEP2.get(w.b[w.k - 1], ()):
        if w.ends(suffix):
            w.replace_if_m(repl)
            return


def _step3(w: _Buffer) -> None:
    for suffix, repl in _STEP3.get(w.b[w.k], ()):
        if w.ends(suffix):
            w.replace_if_m(repl)
            return


def _step4(w: _Buffer) -> None:
    for suffix in _STEP4.get(w.b[w.k - 1], ()):
        if w.ends(suffix):
            if suffix == "ion" and w.b[w.j] not in "st":
                continue
            if w.m() > 1:
                w.k = w.j
            return


def _step5(w: _Buffer) -> None:
    w.j = w.k
    if w.b[w.k] == "e":
        a = w.m()
        if a > 1 or (a == 1 and not w.cvc(w.k - 1)):
            w.k -= 1
    if w.b[w.k] == "l" and w.double_cons(w.k) and w.m() > 1:
        w.k -= 1


@lru_cache(maxsize=1 << 17)
def stem(word: str) -> str:
    """Stem a single lowercase token.

    Tokens shorter than three characters are returned unchanged, matching
    the original algorithm.  Non-alphabetic characters are treated as
    consonants, so code-like tokens ("tp53") pass through intact.
    """
    if len(word) <= 2:
        return word
    w = _Buffer(word)
    _step1ab(w)
    _step1c(w)
    _step2(w)
    _step3(w)
    _step4(w)
    _step5(w)
    return w.b[: w.k + 1]
