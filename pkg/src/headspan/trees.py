"""Tree data structures shared across the package.

Spans are 1-based inclusive intervals over the token sequence: a sentence of
n tokens is covered by [1, n]. Preterminals are childless nodes spanning a
single position whose label is the POS tag; the surface form lives in the
owning tree's token list. Head indices are token positions, with 0 reserved
for the root attachment in dependency trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import StructureError

# Reserved category spellings. The empty category marks spans that carry no
# phrasal label (binarization intermediates and bare preterminal positions);
# the split category wraps sibling runs created when a multi-headed phrase is
# divided. Both use their on-disk ASCII spelling in memory as well.
EMPTY = "<E>"
SPLIT = "#"
HEAD_PREFIX = "H_"


@dataclass(frozen=True)
class Token:
    """One input token: 1-based position, surface form, POS tag."""

    index: int
    form: str
    pos: str


@dataclass
class ConstNode:
    """Node of a plain constituent tree (no head annotation)."""

    label: str
    children: list["ConstNode"] = field(default_factory=list)
    start: int = 0
    end: int = 0

    @property
    def is_preterminal(self) -> bool:
        return not self.children

    def iter_nodes(self) -> Iterator["ConstNode"]:
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class ConstituentTree:
    tokens: list[Token]
    root: ConstNode

    def __len__(self) -> int:
        return len(self.tokens)

    def iter_nodes(self) -> Iterator[ConstNode]:
        return self.root.iter_nodes()

    def internal_nodes(self) -> Iterator[ConstNode]:
        return (nd for nd in self.iter_nodes() if not nd.is_preterminal)

    def validate(self) -> None:
        """Check span bookkeeping: contiguous leaves, children partition parents."""
        leaves = [nd for nd in self.iter_nodes() if nd.is_preterminal]
        if [nd.start for nd in leaves] != list(range(1, len(self.tokens) + 1)):
            raise StructureError("preterminal spans must cover 1..n in order")
        for nd in self.iter_nodes():
            if nd.is_preterminal:
                if nd.start != nd.end:
                    raise StructureError(f"preterminal with span {nd.span()}")
                continue
            pos = nd.start
            for child in nd.children:
                if child.start != pos:
                    raise StructureError(
                        f"children of {nd.label}{nd.span()} do not partition the span"
                    )
                pos = child.end + 1
            if pos != nd.end + 1:
                raise StructureError(
                    f"children of {nd.label}{nd.span()} do not cover the span"
                )


@dataclass
class DependencyTree:
    """Single-rooted dependency tree; heads[i] is the head of token i, 0 = root.

    heads is 1-based with an unused slot at index 0. labels mirrors heads and
    may hold None where no relation label is known.
    """

    tokens: list[Token]
    heads: list[int]
    labels: Optional[list[Optional[str]]] = None

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def root(self) -> int:
        return self.heads.index(0, 1)

    def validate(self) -> None:
        n = len(self.tokens)
        if len(self.heads) != n + 1:
            raise StructureError("heads must have length n+1")
        if self.labels is not None and len(self.labels) != n + 1:
            raise StructureError("labels must have length n+1")
        roots = [i for i in range(1, n + 1) if self.heads[i] == 0]
        if len(roots) != 1:
            raise StructureError(f"expected exactly one root, found {len(roots)}")
        for i in range(1, n + 1):
            h = self.heads[i]
            if not 0 <= h <= n or h == i:
                raise StructureError(f"token {i} has invalid head {h}")
        # cycle check: every token must reach the root
        for i in range(1, n + 1):
            seen = set()
            j = i
            while j != 0:
                if j in seen:
                    raise StructureError(f"cycle through token {i}")
                seen.add(j)
                j = self.heads[j]

    def is_projective(self) -> bool:
        n = len(self.tokens)
        arcs = [(min(i, self.heads[i]), max(i, self.heads[i]))
                for i in range(1, n + 1) if self.heads[i] != 0]
        arcs.append((0, self.root))  # root arc from a virtual position 0
        for a, b in arcs:
            for c, d in arcs:
                if a < c < b < d:
                    return False
        return True


@dataclass
class HpsgNode:
    """Phrase node carrying both a category and a head token index.

    Every internal node's head equals the head of exactly one child (the head
    daughter); a preterminal's head is its own position.
    """

    label: str
    head: int
    children: list["HpsgNode"] = field(default_factory=list)
    start: int = 0
    end: int = 0

    @property
    def is_preterminal(self) -> bool:
        return not self.children

    def iter_nodes(self) -> Iterator["HpsgNode"]:
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(eq=False)
class HpsgTree:
    """Head-annotated constituent tree.

    dep_heads/dep_labels optionally carry the token-level dependency
    annotations the tree was fused from; they ride along for auditing and
    output fidelity and are excluded from equality (decoder outputs have
    none).
    """

    tokens: list[Token]
    root: HpsgNode
    dep_heads: Optional[list[int]] = None
    dep_labels: Optional[list[Optional[str]]] = None

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HpsgTree):
            return NotImplemented
        return self.tokens == other.tokens and self.root == other.root

    def iter_nodes(self) -> Iterator[HpsgNode]:
        return self.root.iter_nodes()

    def internal_nodes(self) -> Iterator[HpsgNode]:
        return (nd for nd in self.iter_nodes() if not nd.is_preterminal)

    def validate_spans(self) -> None:
        leaves = [nd for nd in self.iter_nodes() if nd.is_preterminal]
        if [nd.start for nd in leaves] != list(range(1, len(self.tokens) + 1)):
            raise StructureError("preterminal spans must cover 1..n in order")
        for nd in self.iter_nodes():
            if not nd.start <= nd.head <= nd.end:
                raise StructureError(
                    f"head {nd.head} outside span {nd.span()} at {nd.label}"
                )
            if nd.is_preterminal:
                continue
            pos = nd.start
            for child in nd.children:
                if child.start != pos:
                    raise StructureError(
                        f"children of {nd.label}{nd.span()} do not partition the span"
                    )
                pos = child.end + 1
            if pos != nd.end + 1:
                raise StructureError(
                    f"children of {nd.label}{nd.span()} do not cover the span"
                )


def preterminal(index: int, pos: str) -> HpsgNode:
    return HpsgNode(label=pos, head=index, start=index, end=index)


def const_preterminal(index: int, pos: str) -> ConstNode:
    return ConstNode(label=pos, start=index, end=index)


def make_node(label: str, children: list[HpsgNode], head: int) -> HpsgNode:
    if not children:
        raise StructureError("internal node needs children")
    return HpsgNode(
        label=label,
        head=head,
        children=children,
        start=children[0].start,
        end=children[-1].end,
    )


def make_const_node(label: str, children: list[ConstNode]) -> ConstNode:
    if not children:
        raise StructureError("internal node needs children")
    return ConstNode(
        label=label,
        children=children,
        start=children[0].start,
        end=children[-1].end,
    )
