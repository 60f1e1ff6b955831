#!/usr/bin/env python3
"""Freeze reference VADER scores for the committed sentence suite.

Runs the public vaderSentiment package (pip install vaderSentiment==3.3.2)
against the lexicon files bundled under data/ and writes unrounded compound,
pos, neu and neg values to tests/data/vader_oracle.tsv.
"""
import os
import sys

import vaderSentiment.vaderSentiment as vs

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.abspath(os.path.join(HERE, "..", ".."))

# polarity_scores rounds its outputs; shadow the builtin inside the module so
# the frozen values keep full precision.
vs.round = lambda x, n=None: x


def main():
    analyzer = vs.SentimentIntensityAnalyzer(
        lexicon_file=os.path.join(ROOT, "data", "vader_lexicon.txt"),
        emoji_lexicon=os.path.join(ROOT, "data", "emoji_utf8_lexicon.txt"),
    )
    src = os.path.join(HERE, "vader_sentences.txt")
    dst = os.path.join(ROOT, "tests", "data", "vader_oracle.tsv")
    with open(src, encoding="utf-8") as f:
        sentences = [line.rstrip("\n") for line in f if line.strip()]
    with open(dst, "w", encoding="utf-8", newline="\n") as out:
        out.write("sentence\tcompound\tpos\tneu\tneg\n")
        for s in sentences:
            r = analyzer.polarity_scores(s)
            out.write("%s\t%r\t%r\t%r\t%r\n" % (s, r["compound"], r["pos"], r["neu"], r["neg"]))
    print("wrote %d rows to %s" % (len(sentences), dst), file=sys.stderr)


if __name__ == "__main__":
    main()
