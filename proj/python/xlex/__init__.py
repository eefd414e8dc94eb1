"""Explainable sentiment lexicons: build from token attributions, merge with
word lists, score and evaluate sentences."""

import os
from pathlib import Path

from ._core import (
    LEXICON_FORMAT_VERSION,
    AlreadyNormalized,
    CombinedLexicon,
    DataError,
    DuplicateWord,
    Error,
    FileNotFound,
    InvalidConfig,
    LanguageResources,
    LexiconEntry,
    SentimentModel,
    build_xlex,
    combine,
    compute_report,
    evaluate,
    grid_search,
    load_lexicon,
    normalize,
    prepare_lm,
    read_attributions,
    save_lexicon,
    tokenize,
    write_xlex,
)

__version__ = "1.0.0"


def resource_dir():
    """XLEX_RESOURCES if set, else the resources shipped with the package."""
    env = os.environ.get("XLEX_RESOURCES")
    if env:
        return Path(env)
    return Path(__file__).with_name("resources")


def load_resources(directory=None):
    return LanguageResources.load(str(directory or resource_dir()))


__all__ = [name for name in dir() if not name.startswith("_")]
