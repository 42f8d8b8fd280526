"""Reading and writing the three treebank formats.

Loads the bundled corpus, shows one sentence in each format, and checks
that writing what was read reproduces the files byte for byte.
"""

import io
from pathlib import Path

from headspan.treebank import (
    pair_treebanks,
    read_bracketed,
    read_conll,
    write_bracketed,
    write_conll,
)

DATA = Path(__file__).resolve().parent.parent / "data"

# bracketed constituent trees, one per line
const_text = (DATA / "sample.brackets").read_text(encoding="utf-8")
trees = read_bracketed(const_text)
print(f"read {len(trees)} constituent trees")

first = trees[0]
print("tokens: ", " ".join(t.form for t in first.tokens))
print("tags:   ", " ".join(t.pos for t in first.tokens))

# every node knows its 1-based token span
for node in list(first.iter_nodes())[:4]:
    print(f"  {node.label:<5} spans ({node.start},{node.end})")

# the tab-separated dependency file for the same sentences
dep_text = (DATA / "sample.conll").read_text(encoding="utf-8")
deps = read_conll(dep_text)
print(f"read {len(deps)} dependency trees")
print("heads of sentence 1:", deps[0].heads[1:])

# pairing aligns the two files and verifies the tokens agree
pairs = pair_treebanks(trees, deps)
print(f"paired {len(pairs)} sentences, token for token")

# writing back is the exact inverse of reading
buf = io.StringIO()
write_bracketed(trees, buf)
assert buf.getvalue() == const_text
buf = io.StringIO()
write_conll(deps, buf)
assert buf.getvalue() == dep_text
print("write(read(file)) == file for both formats")
