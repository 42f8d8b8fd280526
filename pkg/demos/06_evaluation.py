"""Scoring parses: bracket F1 and attachment accuracy.

Bracket scoring follows the standard conventions. Punctuation tokens are
deleted by their gold part of speech and the surviving positions renumber,
preterminals never count as brackets, duplicate brackets match by
multiset, and corpus scores micro-average the counts. The dependency side
counts correct heads (UAS) and correct head plus label (LAS) over the same
punctuation filter.
"""

from headspan.evaluate import DEFAULT_PUNCT, attachment_scores, bracket_f1
from headspan.trees import DependencyTree, Token
from headspan.treebank import read_bracketed

# --- brackets ------------------------------------------------------------
GOLD = "(S (NP (DT the) (NN dog)) (VP (VBD saw) (DT a) (NN fox)) (. .))"
PRED = "(S (NP (DT the) (NN dog)) (VP (VBD saw)) (NP (DT a) (NN fox)) (. .))"

print("gold:", GOLD)
print("pred:", PRED)
print("punctuation classes deleted:", sorted(DEFAULT_PUNCT))

# after deleting the period: gold {S(1,5), NP(1,2), VP(3,5)},
# pred {S(1,5), NP(1,2), VP(3,3), NP(4,5)}, two brackets shared
report = bracket_f1(read_bracketed(GOLD), read_bracketed(PRED))
print(f"gold {report.bracket_gold}, predicted {report.bracket_pred}, "
      f"matched {report.bracket_match}")
print(f"recall {report.recall:.2f}  precision {report.precision:.2f}  "
      f"F1 {report.f1:.2f}")
assert (report.bracket_gold, report.bracket_pred,
        report.bracket_match) == (3, 4, 2)

# deleting a mid-sentence comma renumbers the positions after it, so
# brackets over different raw indices can still describe the same spans
G2 = "(S (NP (NNP Avery)) (, ,) (ADVP (RB quickly)) (VP (VBD moved)) (. .))"
P2 = "(S (NP (NNP Avery)) (, ,) (VP (RB quickly) (VBD moved)) (. .))"
r2 = bracket_f1(read_bracketed(G2), read_bracketed(P2))
print(f"comma pair: recall {r2.recall:.2f}  precision {r2.precision:.2f}  "
      f"F1 {r2.f1:.2f}")

# --- dependencies --------------------------------------------------------
tokens = [Token(1, "the", "DT"), Token(2, "dog", "NN"),
          Token(3, "barked", "VBD"), Token(4, ".", ".")]
gold_d = DependencyTree(tokens=tokens, heads=[0, 2, 3, 0, 3],
                        labels=[None, "det", "nsubj", "root", "punct"])
pred_d = DependencyTree(tokens=tokens, heads=[0, 3, 3, 0, 2],
                        labels=[None, "det", "nsubj", "root", "punct"])

# the period is punctuation by gold POS, so 3 tokens are scored; the
# first head is wrong in both readings
att = attachment_scores([gold_d], [pred_d])
print(f"scored tokens {att.dep_total}, UAS {att.uas:.2f}, LAS {att.las:.2f}")
assert att.dep_total == 3
assert round(att.uas, 2) == 66.67

# one merged report covers both sides of a joint parse
merged = report.merge(att)
print("full report:")
for line in merged.format_text().splitlines():
    print(" ", line)
