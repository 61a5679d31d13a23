"""Default stopword list and loader.

The list is deliberately conservative: articles, pronouns, prepositions,
conjunctions, and auxiliaries only. Modal "would" and verb "like" are kept
as content tokens because they carry signal in debate boilerplate
("would like thank opponent"), as do digits and single letters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

_DEFAULT_WORDS = """
a an the no
i me my mine myself we us our ours ourselves
you your yours yourself yourselves
he him his himself she her hers herself it its itself
they them their theirs themselves
this that these those
who whom whose which what
of to in on at by for with from into onto upon about against
between through during before after above below under over
off out up down
and or but nor so yet if because as while than whether though although
am is are was were be been being
do does did done doing
have has had having
will shall can may must might could should
not
"""

DEFAULT_STOPWORDS = frozenset(_DEFAULT_WORDS.split())


@dataclass(frozen=True)
class StopwordList:
    """A set of lowercase single tokens filtered out in without-stopword mode."""

    words: frozenset[str] = field(default=DEFAULT_STOPWORDS)

    def __post_init__(self):
        if not self.words:
            raise ConfigError("stopword list must be nonempty")
        for w in self.words:
            if not w or any(c.isspace() for c in w):
                raise ConfigError(f"stopword entries must be single tokens, got {w!r}")
            if w != w.lower():
                raise ConfigError(f"stopword entries must be lowercase, got {w!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words


def default_stopwords() -> StopwordList:
    return StopwordList()


def load_stopwords(path: str) -> StopwordList:
    """Read a stopword file: one token per line, UTF-8, blank lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            token = line.strip()
            if not token:
                continue
            if any(c.isspace() for c in token):
                raise ConfigError(f"{path}:{ln}: multi-word stopword entry {token!r}")
            words.add(token.lower())
    if not words:
        raise ConfigError(f"{path}: stopword file is empty")
    return StopwordList(frozenset(words))
