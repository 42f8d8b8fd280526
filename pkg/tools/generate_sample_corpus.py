#!/usr/bin/env python3
"""Regenerate the bundled treebanks under data/.

Writes four files:

  data/sample.brackets / data/sample.conll
      250 synthetic sentences from the fixed-seed grammar. Every phrase
      is single-headed, so the two views fuse losslessly.

  data/multihead.brackets / data/multihead.conll
      A handful of hand-written sentences whose phrases have more than
      one externally attached token, exercising the split machinery.

Run from the repository root: python3 tools/generate_sample_corpus.py
"""

from __future__ import annotations

import pathlib
import sys

from headspan.synth import corpus_views, sample_corpus
from headspan.treebank import read_bracketed, read_conll, write_bracketed, write_conll
from headspan.fuse import fuse

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

SAMPLE_COUNT = 250
SAMPLE_SEED = 7

# Hand-written sentences with multi-headed phrases. The first block is the
# constituent view, the second the matching CoNLL rows. Coordinated phrases
# attach both conjunct heads to the verb, so the NP around them has two
# externally headed tokens and must be divided during fusion.
MULTIHEAD_BRACKETS = """\
(S (NP (NNP Federal) (NNP Paper) (NNP Board)) (VP (VBZ sells) (NP (NN paper) (CC and) (NN wood) (NNS products))) (. .))
(S (NP (NNP Avery) (CC and) (NNP Brook)) (VP (VBD moved)) (. .))
(S (NP (NNP Avery) (CC and) (NNP Brook)) (VP (VBZ sell) (NP (NN paper) (CC and) (NN wood) (NNS products))) (. .))
(S (NP (NP (DT the) (NN fox)) (CC and) (NP (DT the) (NN dog))) (VP (VBD ran)) (. .))
(S (NP (NNP Casey)) (VP (VBZ reviews) (NP (DT the) (NN report))) (. .))
"""

MULTIHEAD_CONLL = """\
1\tFederal\t_\tNNP\tNNP\t_\t3\tnn\t_\t_
2\tPaper\t_\tNNP\tNNP\t_\t3\tnn\t_\t_
3\tBoard\t_\tNNP\tNNP\t_\t4\tnsubj\t_\t_
4\tsells\t_\tVBZ\tVBZ\t_\t0\troot\t_\t_
5\tpaper\t_\tNN\tNN\t_\t4\tdobj\t_\t_
6\tand\t_\tCC\tCC\t_\t8\tcc\t_\t_
7\twood\t_\tNN\tNN\t_\t8\tnn\t_\t_
8\tproducts\t_\tNNS\tNNS\t_\t4\tdobj\t_\t_
9\t.\t_\t.\t.\t_\t4\tpunct\t_\t_

1\tAvery\t_\tNNP\tNNP\t_\t4\tnsubj\t_\t_
2\tand\t_\tCC\tCC\t_\t3\tcc\t_\t_
3\tBrook\t_\tNNP\tNNP\t_\t4\tconj\t_\t_
4\tmoved\t_\tVBD\tVBD\t_\t0\troot\t_\t_
5\t.\t_\t.\t.\t_\t4\tpunct\t_\t_

1\tAvery\t_\tNNP\tNNP\t_\t4\tnsubj\t_\t_
2\tand\t_\tCC\tCC\t_\t3\tcc\t_\t_
3\tBrook\t_\tNNP\tNNP\t_\t4\tconj\t_\t_
4\tsell\t_\tVBZ\tVBZ\t_\t0\troot\t_\t_
5\tpaper\t_\tNN\tNN\t_\t4\tdobj\t_\t_
6\tand\t_\tCC\tCC\t_\t8\tcc\t_\t_
7\twood\t_\tNN\tNN\t_\t8\tnn\t_\t_
8\tproducts\t_\tNNS\tNNS\t_\t4\tdobj\t_\t_
9\t.\t_\t.\t.\t_\t4\tpunct\t_\t_

1\tthe\t_\tDT\tDT\t_\t2\tdet\t_\t_
2\tfox\t_\tNN\tNN\t_\t6\tnsubj\t_\t_
3\tand\t_\tCC\tCC\t_\t5\tcc\t_\t_
4\tthe\t_\tDT\tDT\t_\t5\tdet\t_\t_
5\tdog\t_\tNN\tNN\t_\t6\tconj\t_\t_
6\tran\t_\tVBD\tVBD\t_\t0\troot\t_\t_
7\t.\t_\t.\t.\t_\t6\tpunct\t_\t_

1\tCasey\t_\tNNP\tNNP\t_\t2\tnsubj\t_\t_
2\treviews\t_\tVBZ\tVBZ\t_\t0\troot\t_\t_
3\tthe\t_\tDT\tDT\t_\t4\tdet\t_\t_
4\treport\t_\tNN\tNN\t_\t2\tdobj\t_\t_
5\t.\t_\t.\t.\t_\t2\tpunct\t_\t_
"""


def check_pairs(bracket_text: str, conll_text: str, name: str) -> None:
    consts = read_bracketed(bracket_text)
    deps = read_conll(conll_text)
    if len(consts) != len(deps):
        raise SystemExit(f"{name}: {len(consts)} trees vs {len(deps)} graphs")
    for k, (c, d) in enumerate(zip(consts, deps)):
        forms = [t.form for t in c.tokens]
        if forms != [t.form for t in d.tokens]:
            raise SystemExit(f"{name} sentence {k}: token mismatch")
        _, report = fuse(c, d, ordinal=k)
        if report.head_errors:
            raise SystemExit(f"{name} sentence {k}: {report.head_errors} head errors")


def main() -> None:
    DATA.mkdir(exist_ok=True)

    trees = sample_corpus(SAMPLE_COUNT, seed=SAMPLE_SEED)
    consts, deps = corpus_views(trees)
    with open(DATA / "sample.brackets", "w", encoding="utf-8") as f:
        write_bracketed(consts, f)
    with open(DATA / "sample.conll", "w", encoding="utf-8") as f:
        write_conll(deps, f)
    print(f"wrote {len(trees)} sentences to data/sample.brackets and data/sample.conll")

    (DATA / "multihead.brackets").write_text(MULTIHEAD_BRACKETS, encoding="utf-8")
    (DATA / "multihead.conll").write_text(MULTIHEAD_CONLL, encoding="utf-8")
    print("wrote 5 sentences to data/multihead.brackets and data/multihead.conll")

    check_pairs((DATA / "sample.brackets").read_text(encoding="utf-8"),
                (DATA / "sample.conll").read_text(encoding="utf-8"), "sample")
    check_pairs(MULTIHEAD_BRACKETS, MULTIHEAD_CONLL, "multihead")
    print("all pairs aligned and fusable")


if __name__ == "__main__":
    sys.exit(main())
