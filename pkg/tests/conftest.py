from __future__ import annotations

import pytest

from argclean.corpus import Corpus, Unit, build_argument_text
from argclean.stopwords import StopwordList, default_stopwords


@pytest.fixture(scope="session")
def stopwords() -> StopwordList:
    return default_stopwords()


def unit_from_tokens(tokens, arg_id="a", position=1, stopwords=None):
    """A unit whose raw text is the space-joined tokens."""
    stopwords = stopwords or default_stopwords()
    full = tuple(tokens)
    content = tuple(t for t in full if t not in stopwords)
    return Unit(arg_id, position, " ".join(tokens), full, content)


def corpus_from_bodies(bodies, prefix="a"):
    """One argument per body string, ids prefix0, prefix1, ..."""
    texts = [build_argument_text(f"{prefix}{i}", body) for i, body in enumerate(bodies)]
    return Corpus(texts, provenance="fixture")


def corpus_from_token_sentences(sentences_per_text, prefix="a"):
    """Each entry is a list of token lists; one text per entry."""
    bodies = []
    for sentences in sentences_per_text:
        bodies.append(" ".join(" ".join(tokens).capitalize() + "." for tokens in sentences))
    return corpus_from_bodies(bodies, prefix=prefix)
