"""Division encoding: head-annotated trees as plain labeled binary trees.

Expected bracketings were derived by hand from the encoding rules (chain
collapse, empty categories over bare preterminals, head-outward peeling,
prefix marks) and then frozen.
"""

import random

import pytest

from headspan.division import (
    binarize_head_outward,
    from_division,
    to_division,
)
from headspan.errors import StructureError
from headspan.synth import random_tree
from headspan.trees import EMPTY, HEAD_PREFIX
from headspan.treebank import format_bracketed, read_bracketed, read_hpsg


def encode_text(hpsg_text: str) -> str:
    tree = read_hpsg(hpsg_text)[0]
    return format_bracketed(to_division(tree))


class TestEncoding:
    def test_two_child_phrase(self):
        got = encode_text(
            "(S[3] (NP[2] (DT[1] the) (NN[2] dog)) (VBD[3] ran))")
        assert got == ("(S (H_NP (H_<E> (H_DT the)) (H_<E> (H_NN dog)))"
                       " (H_<E> (H_VBD ran)))")

    def test_unary_chain_collapses_to_atom(self):
        got = encode_text("(S[1] (VP[1] (VBZ[1] runs)))")
        assert got == "(S+VP (H_VBZ runs))"

    def test_head_outward_peeling_keeps_head_inside_intermediates(self):
        got = encode_text("(X[3] (A[1] a) (B[2] b) (C[3] c) (D[4] d))")
        assert got == ("(X (H_<E> (H_A a)) (H_<E> (H_<E> (H_B b))"
                       " (H_<E> (H_<E> (H_C c)) (<E> (H_D d)))))")

    def test_leftmost_head_peels_right_siblings(self):
        got = encode_text("(X[1] (A[1] a) (B[2] b) (C[3] c))")
        assert got == ("(X (H_<E> (H_<E> (H_A a)) (<E> (H_B b)))"
                       " (<E> (H_C c)))")

    def test_right_child_marked_only_when_it_holds_the_head(self):
        got = encode_text("(S[2] (NN[1] dogs) (VBD[2] ran))")
        assert got == "(S (H_<E> (H_NN dogs)) (H_<E> (H_VBD ran)))"
        got = encode_text("(S[1] (NN[1] dogs) (VBD[2] ran))")
        assert got == "(S (H_<E> (H_NN dogs)) (<E> (H_VBD ran)))"


class TestBinaryInvariants:
    def test_every_node_has_at_most_two_children(self, sample_fused):
        for tree in sample_fused:
            stack = [binarize_head_outward(tree)]
            while stack:
                node = stack.pop()
                assert len(node.children) <= 2
                stack.extend(node.children)

    def test_exactly_one_label_per_position_and_2n_minus_1_spans(
            self, sample_fused):
        for tree in sample_fused:
            encoded = binarize_head_outward(tree)
            internal = [nd for nd in encoded.iter_nodes()
                        if not nd.is_preterminal]
            assert len(internal) == 2 * len(tree) - 1
            single = [nd.span() for nd in internal if nd.start == nd.end]
            assert sorted(single) == [(i, i) for i in
                                      range(1, len(tree) + 1)]

    def test_intermediates_contain_the_head_daughter(self, sample_fused):
        for tree in sample_fused:
            encoded = binarize_head_outward(tree)
            for nd in encoded.iter_nodes():
                if nd.label == EMPTY and len(nd.children) == 2:
                    assert nd.start <= nd.head <= nd.end


class TestRoundTrip:
    def test_identity_on_fused_corpus(self, sample_fused):
        for tree in sample_fused:
            back, flags = from_division(to_division(tree))
            assert flags == []
            assert back == tree

    def test_identity_on_random_shapes(self):
        rng = random.Random(20)
        for _ in range(200):
            tree = random_tree(rng, rng.randint(1, 12))
            back, flags = from_division(to_division(tree))
            assert flags == []
            assert back == tree

    def test_bare_preterminal_labels_decode_without_flags(self,
                                                          sample_fused):
        # span decoders emit POS tags unprefixed; the only-child rule must
        # recover heads for single-token spans without raising flags
        for tree in sample_fused[:50]:
            encoded = to_division(tree)
            for node in encoded.iter_nodes():
                if node.is_preterminal and node.label.startswith(HEAD_PREFIX):
                    node.label = node.label[len(HEAD_PREFIX):]
            back, flags = from_division(encoded)
            assert flags == []
            assert back == tree


class TestDecodingFallbacks:
    def test_missing_marks_flag_and_keep_leftmost_head(self):
        tree = read_bracketed("(X (<E> (A a)) (<E> (B b)))",
                              strip_tags=False)[0]
        back, flags = from_division(tree)
        assert len(flags) == 1
        assert "(1,2)" in flags[0]
        assert back.root.head == 1
        assert [ch.label for ch in back.root.children] == ["A", "B"]

    def test_empty_root_over_two_pieces_rejected(self):
        tree = read_bracketed("(<E> (H_A a) (B b))", strip_tags=False)[0]
        with pytest.raises(StructureError):
            from_division(tree)

    def test_chain_atom_expands_in_original_order(self):
        tree = read_bracketed("(S+VP (H_VBZ runs))", strip_tags=False)[0]
        back, flags = from_division(tree)
        assert flags == []
        assert back.root.label == "S"
        assert back.root.children[0].label == "VP"
        assert back.root.children[0].children[0].label == "VBZ"
