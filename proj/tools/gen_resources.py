#!/usr/bin/env python3
"""Regenerate the bundled language resources under resources/.

Sources:
  english.txt   GCIDE headwords (english-words package) plus every inflected
                form and lemma known to lemminflect
  lemmas.tsv    lemminflect lookup table, one lemma per surface form,
                preferring verb > noun > adjective > adverb readings
  stopwords.txt the classic NLTK English stopword list

Usage: pip install english-words lemminflect && python3 tools/gen_resources.py
"""
import csv
import gzip
import os
import re
import sys

import lemminflect
from english_words import get_english_words_set

STOPWORDS = """
i me my myself we our ours ourselves you your yours yourself yourselves he him
his himself she her hers herself it its itself they them their theirs
themselves what which who whom this that these those am is are was were be been
being have has had having do does did doing a an the and but if or because as
until while of at by for with about against between into through during before
after above below to from up down in out on off over under again further then
once here there when where why how all any both each few more most other some
such no nor not only own same so than too very s t can will just don should now
d ll m o re ve y ain aren couldn didn doesn hadn hasn haven isn ma mightn mustn
needn shan shouldn wasn weren won wouldn
""".split()

POS_PRIORITY = {"verb": 0, "noun": 1, "adj": 2, "adv": 3}
WORD_RE = re.compile(r"^[a-z][a-z'-]*[a-z]$|^[a-z]$")


def main(out_dir):
    res_dir = os.path.join(os.path.dirname(lemminflect.__file__), "resources")
    best = {}
    with gzip.open(os.path.join(res_dir, "lemma_lu.csv.gz"), "rt") as fh:
        for surface, upos, lemmas in csv.reader(fh):
            surface = surface.lower()
            upos = upos.lower()
            lemma = lemmas.split("/")[0].lower()
            if upos not in POS_PRIORITY:
                continue
            if not WORD_RE.match(surface) or not WORD_RE.match(lemma):
                continue
            rank = POS_PRIORITY[upos]
            if surface not in best or rank < best[surface][0]:
                best[surface] = (rank, lemma)

    lemma_map = {s: l for s, (_, l) in best.items() if s != l}
    # Every lemma must be a fixed point of the table.
    changed = True
    while changed:
        changed = False
        for lemma in set(lemma_map.values()):
            if lemma in lemma_map:
                del lemma_map[lemma]
                changed = True

    words = set(w for w in get_english_words_set(["gcide"], lower=True) if WORD_RE.match(w))
    words.update(best.keys())
    words.update(l for _, l in best.values())

    with open(os.path.join(out_dir, "lemmas.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# surface<TAB>lemma\n")
        for surface in sorted(lemma_map):
            fh.write(f"{surface}\t{lemma_map[surface]}\n")
    with open(os.path.join(out_dir, "english.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# English word list, one lowercase word per line\n")
        for w in sorted(words):
            fh.write(w + "\n")
    with open(os.path.join(out_dir, "stopwords.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# English stopwords\n")
        for w in sorted(set(STOPWORDS)):
            fh.write(w + "\n")
    print(f"lemmas={len(lemma_map)} english={len(words)} stopwords={len(set(STOPWORDS))}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "resources"))
