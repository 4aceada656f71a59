import random

import pytest

from fstagger import (ACRONYM_TAG, PROPER_TAG, PUNCT_TAG, UNKNOWN_TAG,
                      Sentence, Token, WeightConfig, analyses,
                      ambiguity_profile, build_lattice, collapse_transducer,
                      compose, linear_acceptor, load_lexicon, load_tagset,
                      load_weight_config, shape_of, tag_symbol_table, tokenize)
from helpers import enumerate_paths, identity_tagset, relation, toy_lexicon

CFG = WeightConfig()


def tok(surface):
    return Token(surface, shape_of(surface))


# -- weight config -----------------------------------------------------------


def test_weight_config_ordering_enforced():
    WeightConfig(1.0, 1.0, 50.0, 500.0)  # w_proper == w_acronym allowed
    with pytest.raises(ValueError):
        WeightConfig(w_proper=0.0)
    with pytest.raises(ValueError):
        WeightConfig(w_acronym=1.0)
    with pytest.raises(ValueError):
        WeightConfig(w_unk=2000.0)


def test_weight_config_file(tmp_path):
    path = tmp_path / "weights.cfg"
    path.write_text("w_proper = 3\nw_unk=60  # comment\n", encoding="utf-8")
    cfg = load_weight_config(path)
    assert cfg.w_proper == 3.0 and cfg.w_unk == 60.0 and cfg.w_acronym == 5.0
    bad = tmp_path / "bad.cfg"
    bad.write_text("nope=1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        load_weight_config(bad)


# -- tag set -----------------------------------------------------------------


def test_load_tagset(tmp_path):
    path = tmp_path / "tags.tsv"
    path.write_text("RDM\tRDM\nBD3S\tBD3S\nJS\tJXS\nJFS\tJXS\n", encoding="utf-8")
    tags = load_tagset(path)
    assert tags.collapse("JS") == "JXS" and tags.collapse("JFS") == "JXS"
    assert tags.collapse(UNKNOWN_TAG) == UNKNOWN_TAG  # reserved auto-added
    assert UNKNOWN_TAG in tags.full_tags
    # collapse is total on the full inventory
    for tag in tags.full_tags:
        assert tags.collapse(tag) in tags.short_tags


def test_load_tagset_conflict(tmp_path):
    path = tmp_path / "tags.tsv"
    path.write_text("JS\tJXS\nJS\tJMS\n", encoding="utf-8")
    with pytest.raises(ValueError, match="tags.tsv:2"):
        load_tagset(path)


def test_expand_by_prefix():
    tags = identity_tagset(["RD", "RDP", "RDMP", "RDMS", "V1S", "NMS"])
    assert tags.expand("RD") == ["RD", "RDMP", "RDMS", "RDP"]
    assert tags.expand("V") == ["V1S"]
    assert tags.expand("ZZ") == []
    # reserved tags match exactly, never by prefix
    assert tags.expand("SB") == ["SB"]
    assert "PUNCT" not in tags.expand("P")


# -- lexicon loading ---------------------------------------------------------


def test_load_lexicon(tmp_path):
    tags = identity_tagset(["RDM", "BD3S"])
    path = tmp_path / "lex.tsv"
    path.write_text("le\tRDM\nle\tBD3S\t0\n", encoding="utf-8")
    lex = load_lexicon(path, tags)
    assert dict(lex.lookup("le")) == {"RDM": 0.0, "BD3S": 0.0}


def test_load_lexicon_empty(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text("", encoding="utf-8")
    lex = load_lexicon(path, identity_tagset(["X"]))
    assert len(lex) == 0
    assert dict(lex.lookup("anything")) == {}


def test_load_lexicon_duplicates_keep_minimum(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text("x\tNMS\t1\nx\tNMS\t2\n", encoding="utf-8")
    lex = load_lexicon(path, identity_tagset(["NMS"]))
    assert dict(lex.lookup("x")) == {"NMS": 1.0}


def test_load_lexicon_errors(tmp_path):
    tags = identity_tagset(["NMS"])
    bad_fields = tmp_path / "a.tsv"
    bad_fields.write_text("only-one-field\n", encoding="utf-8")
    with pytest.raises(ValueError, match="a.tsv:1"):
        load_lexicon(bad_fields, tags)
    bad_tag = tmp_path / "b.tsv"
    bad_tag.write_text("x\tNOPE\n", encoding="utf-8")
    with pytest.raises(ValueError, match="'NOPE'"):
        load_lexicon(bad_tag, tags)


# -- analyses ----------------------------------------------------------------


def test_analyses_capitalized_fallback():
    lex = toy_lexicon({"marché": ["NMS", "PP"]})
    got = analyses(tok("Marché"), lex, CFG)
    assert got == {"NMS": 0.0, "PP": 0.0,
                   PROPER_TAG: CFG.w_proper, UNKNOWN_TAG: CFG.w_unk}
    # the common-noun reading outranks the proper-noun reading
    assert got["NMS"] < got[PROPER_TAG]


def test_analyses_out_of_lexicon_lowercase():
    got = analyses(tok("zzz"), toy_lexicon({}), CFG)
    assert got == {UNKNOWN_TAG: CFG.w_unk}


def test_analyses_acronym():
    got = analyses(tok("ONU"), toy_lexicon({}), CFG)
    assert got == {ACRONYM_TAG: CFG.w_acronym, UNKNOWN_TAG: CFG.w_unk}
    assert got[ACRONYM_TAG] < got[UNKNOWN_TAG]


def test_analyses_allcaps_in_lexicon_keeps_both():
    lex = toy_lexicon({"ONU": ["NPR"]})
    got = analyses(tok("ONU"), lex, CFG)
    assert got["NPR"] == 0.0 and got[ACRONYM_TAG] == CFG.w_acronym


def test_analyses_allcaps_has_no_lowercase_fallback():
    lex = toy_lexicon({"onu": ["NMS"]})
    got = analyses(tok("ONU"), lex, CFG)
    assert "NMS" not in got


def test_analyses_punctuation():
    got = analyses(tok(","), toy_lexicon({}), CFG)
    assert got[PUNCT_TAG] == 0.0


def test_analyses_total_order_of_costs():
    lex = toy_lexicon({"marché": ["NMS"]})
    got = analyses(tok("Marché"), lex, CFG)
    assert (got["NMS"] < got[PROPER_TAG] <= CFG.w_acronym
            < got[UNKNOWN_TAG] < CFG.w_neg)


def test_analyses_never_empty():
    rng = random.Random(2)
    words = ["le", "Chat", "ONU", "zzz", ".", "3,5", "iPhone4"]
    lex = toy_lexicon({"le": ["RDM"], "chat": ["NMS"]})
    for _ in range(50):
        got = analyses(tok(rng.choice(words)), lex, CFG)
        assert got
        assert got[UNKNOWN_TAG] == CFG.w_unk


# -- lattice -----------------------------------------------------------------

TABLE1_LEXICON = toy_lexicon({
    "le": ["RDM", "BD3S"],
    "produit": ["NMS", "PPMS", "V3SPI"],
    "liquide": ["JS", "NMS", "V1S", "V2S", "V3S"],
})


def sentence_of(*words):
    return Sentence(tuple(tok(w) for w in words))


def test_lattice_paths_are_analysis_cross_product():
    sent = sentence_of("le", "produit", "liquide")
    lattice = build_lattice(sent, TABLE1_LEXICON, CFG)
    paths = enumerate_paths(lattice)
    # (2+1) * (3+1) * (5+1): every tag set plus its UNKNOWN reading
    assert len(paths) == 3 * 4 * 6
    for path in paths:
        non_unknown = [t for t in path.ostring if t != UNKNOWN_TAG]
        assert path.weight == CFG.w_unk * (len(path.ostring) - len(non_unknown))


def test_lattice_matches_figure_tag_combinations():
    sent = sentence_of("le", "produit", "liquide")
    lattice = build_lattice(sent, TABLE1_LEXICON, CFG)
    outputs = {p.ostring for p in enumerate_paths(lattice) if p.weight == 0.0}
    assert outputs == {(a, b, c)
                       for a in ("RDM", "BD3S")
                       for b in ("NMS", "PPMS", "V3SPI")
                       for c in ("JS", "NMS", "V1S", "V2S", "V3S")}


def test_lattice_single_unambiguous_token():
    lattice = build_lattice(sentence_of("produit"),
                            toy_lexicon({"produit": ["NMS"]}), CFG)
    paths = enumerate_paths(lattice)
    assert len(paths) == 2
    assert {p.ostring for p in paths} == {("NMS",), (UNKNOWN_TAG,)}


def test_lattice_path_count_with_mixed_ambiguity():
    lex = toy_lexicon({"a": ["T1", "T2"], "b": ["T1"], "c": ["T1", "T2", "T3"]})
    lattice = build_lattice(sentence_of("a", "b", "c"), lex, CFG)
    assert len(enumerate_paths(lattice)) == (2 + 1) * (1 + 1) * (3 + 1)


def test_lattice_path_weights_sum_analysis_weights():
    lex = toy_lexicon({"a": [("T1", 0.5), ("T2", 1.25)], "b": [("T1", 0.25)]})
    lattice = build_lattice(sentence_of("a", "b"), lex, CFG)
    costs = {p.ostring: p.weight for p in enumerate_paths(lattice)}
    assert costs[("T1", "T1")] == 0.75
    assert costs[("T2", "T1")] == 1.5
    assert costs[("T1", UNKNOWN_TAG)] == 0.5 + CFG.w_unk


def test_composing_acceptor_with_lattice_is_noop():
    sent = sentence_of("le", "produit", "liquide")
    lattice = build_lattice(sent, TABLE1_LEXICON, CFG)
    acceptor = linear_acceptor([t.surface for t in sent.tokens],
                               lattice.isymbols)
    assert relation(compose(acceptor, lattice)) == relation(lattice)


def test_collapse_transducer_maps_full_paths():
    tags = load_tagset_from(("JS", "JXS"), ("JFS", "JXS"), ("NMS", "NMS"))
    table = tag_symbol_table(tags)
    lattice = build_lattice(sentence_of("x"),
                            toy_lexicon({"x": ["JS", "NMS"]}), CFG, table)
    collapsed = compose(lattice, collapse_transducer(tags, table))
    outputs = {p.ostring for p in enumerate_paths(collapsed)}
    assert outputs == {("JXS",), ("NMS",), (UNKNOWN_TAG,)}


def load_tagset_from(*pairs):
    from fstagger import TagSet
    return TagSet(dict(pairs))


# -- ambiguity profile -------------------------------------------------------


def test_ambiguity_profile_all_unambiguous():
    lex = toy_lexicon({"a": ["T1"], "b": ["T2"]})
    corpus = tokenize("a b a b a")
    profile = ambiguity_profile(corpus, lex, CFG)
    assert profile.fraction("1") == 1.0


def test_ambiguity_profile_engineered_split():
    lex = toy_lexicon({
        "u": ["T1"],
        "d": ["T1", "T2"],
        "t": ["T1", "T2", "T3"],
    })
    # 5 tokens with one tag, 3 with two, 2 with three
    corpus = tokenize("u u u u u d d d t t")
    profile = ambiguity_profile(corpus, lex, CFG)
    assert profile.total == 10
    assert profile.fraction("1") == 0.5
    assert profile.fraction("2") == 0.3
    assert profile.fraction("3") == 0.2
    assert profile.fraction("4-8") == 0.0


def test_ambiguity_profile_counts_oov_in_zero_bucket():
    profile = ambiguity_profile(tokenize("zzz yyy"), toy_lexicon({}), CFG)
    assert profile.fraction("0") == 1.0
