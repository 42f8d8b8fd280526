"""Fusing a constituent tree with its dependency tree.

A phrase is headed by the token whose own head lies outside the phrase.
When two tokens qualify, the phrase is divided: its children regroup into
single-headed runs and runs of two or more get wrapped in the reserved
split category "#". The demo fuses such a sentence, audits the result,
and projects both original structures back out unchanged.
"""

import io
from pathlib import Path

from headspan.fuse import (
    external_heads,
    fuse,
    project_constituents,
    project_dependencies,
    validate,
)
from headspan.treebank import (
    pair_treebanks,
    read_bracketed,
    read_conll,
    write_hpsg,
)

DATA = Path(__file__).resolve().parent.parent / "data"

pairs = pair_treebanks(
    read_bracketed((DATA / "multihead.brackets").read_text(encoding="utf-8")),
    read_conll((DATA / "multihead.conll").read_text(encoding="utf-8")))

ctree, dtree = pairs[0]
print("sentence:", " ".join(t.form for t in ctree.tokens))
print("gold heads:", dtree.heads[1:])

# the object NP "paper and wood products" has two external heads: both
# "paper" and "products" attach to the verb outside the phrase
ext = external_heads(dtree.heads, 5, 8)
print(f"external heads of (5,8): {ext}")

tree, report = fuse(ctree, dtree)
print(f"fused: {report.multihead_before} phrase(s) divided, "
      f"{report.residuals} residuals")

buf = io.StringIO()
write_hpsg([tree], buf)
print("head-annotated tree:")
print(" ", buf.getvalue().strip())

# the audit re-derives every head set from scratch
audit = validate(tree)
print(f"audit: clean={audit.clean}")

# the dependency side survives division untouched
back_d = project_dependencies(tree)
assert back_d.heads == dtree.heads
assert back_d.labels == dtree.labels
print("dependency projection reproduces every head and label")


# the constituent side loses exactly the bracket that was divided: the
# phrase dissolved into its parent, so its span is gone and nothing else
# moved
def spans(root):
    out = set()
    stack = [root]
    while stack:
        nd = stack.pop()
        if nd.children:
            out.add((nd.label, nd.start, nd.end))
            stack.extend(nd.children)
    return out


back_c = project_constituents(tree)
lost = spans(ctree.root) - spans(back_c.root)
assert spans(back_c.root) <= spans(ctree.root)
print(f"constituent projection drops only the divided bracket: {lost}")

# one more fuse round is a fixed point: with the troublesome bracket gone
# there is nothing left to divide
tree2, report2 = fuse(back_c, back_d)
assert report2.multihead_before == 0
back2 = project_constituents(tree2)
assert spans(back2.root) == spans(back_c.root)
print("re-fusing the projections divides nothing further")
