import pytest

from spa.errors import DataConsistencyError, LexiconError
from spa.lexicon import (Template, VerbPair, align_template, build_examples,
                         de_align, load_lexicon, pattern_to_string,
                         read_dataset, regular_suffix, representation_from_tag,
                         save_lexicon, write_dataset)

MAIN = "CCCVVCCCVVCCCVVCCC"


def left(inv):
    return Template.from_string(MAIN, "left")


def right(inv):
    return Template.from_string(MAIN, "right")


# ---------------------------------------------------------------------------
# lexicon files

TABLE_ROWS = (
    "abandon\t6b&nd6n\tb\t0\n"
    "abandoned\t6b&nd6nd\td\t0\n"
    "benefit\tbEn6fIt\tb\t0\n"
    "benefited\tbEn6fItId\td\t0\n"
    "arise\t6r3z\tb\t0\n"
    "arose\t6roz\td\t1\n"
    "become\tbIk6m\tb\t0\n"
    "became\tbIkem\td\t1\n"
)


def test_load_lexicon(tmp_path, inv):
    path = tmp_path / "verbs.tsv"
    path.write_text(TABLE_ROWS, encoding="utf-8")
    pairs = load_lexicon(path, inv)
    assert pairs[0] == VerbPair("abandon", "6b&nd6n", "6b&nd6nd", True)
    assert pairs[2] == VerbPair("arise", "6r3z", "6roz", False)  # flag on the past row
    assert len(pairs) == 4


def test_load_empty_lexicon(tmp_path, inv):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    assert load_lexicon(path, inv) == []


def test_load_rejects_unknown_symbol(tmp_path, inv):
    path = tmp_path / "bad.tsv"
    path.write_text("walk\twQk\tb\t0\nwalked\twQkt\td\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError, match=r"line 1: unknown symbol 'Q'"):
        load_lexicon(path, inv)


def test_load_rejects_unpaired_rows(tmp_path, inv):
    path = tmp_path / "bad.tsv"
    path.write_text("walk\twOk\tb\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="unpaired"):
        load_lexicon(path, inv)


def test_load_rejects_wrong_marker_order(tmp_path, inv):
    path = tmp_path / "bad.tsv"
    path.write_text("walked\twOkt\td\t0\nwalk\twOk\tb\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="'b' row followed by a 'd' row"):
        load_lexicon(path, inv)


def test_load_rejects_duplicate_stems(tmp_path, inv):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "bet\tbEt\tb\t0\nbet\tbEt\td\t1\n"
        "bet2\tbEt\tb\t0\nbetted\tbEtId\td\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="duplicate stem"):
        load_lexicon(path, inv)


def test_save_load_round_trip(tmp_path, inv, small_corpus):
    path = tmp_path / "verbs.tsv"
    save_lexicon(small_corpus, path)
    assert load_lexicon(path, inv) == list(small_corpus)


# ---------------------------------------------------------------------------
# template alignment

def test_align_left_bet(inv):
    got = align_template("bEt", left(inv), inv)
    assert pattern_to_string(got) == "b__E_t____________"


def test_align_left_abandon(inv):
    got = align_template("6b&nd6n", left(inv), inv)
    assert pattern_to_string(got) == "___6_b__&_nd_6_n__"


def test_align_empty_string(inv):
    got = align_template("", left(inv), inv)
    assert got == ("_",) * 18
    assert align_template("", right(inv), inv) == ("_",) * 18


def test_align_right_attested_layouts(inv):
    cases = {
        "6b&nd6n": "___6_b__&_nd_6_n__",
        "bEn6fIt": "b__E_n__6_f__I_t__",
        "bIk6m": "_____b__I_k__6_m__",
        "bIkem": "_____b__I_k__e_m__",
        "6r3z": "________6_r__3_z__",
        "6roz": "________6_r__o_z__",
    }
    for s, want in cases.items():
        assert pattern_to_string(align_template(s, right(inv), inv)) == want


def test_align_unfit_returns_none(inv):
    # 8 clusters cannot fit the template's 7 slot groups
    assert align_template("IksEl6ret", left(inv), inv) is None
    assert align_template("IksEl6ret", right(inv), inv) is None


def test_align_round_trip_random_stems(inv, small_corpus):
    for pair in small_corpus:
        for t in (left(inv), right(inv)):
            for s in (pair.stem, pair.past):
                aligned = align_template(s, t, inv)
                if aligned is not None:
                    assert de_align(aligned, inv) == s


def test_aligned_symbols_respect_slot_classes(inv, small_corpus):
    for pair in small_corpus[:100]:
        for t in (left(inv), right(inv)):
            aligned = align_template(pair.past, t, inv)
            if aligned is None:
                continue
            for slot, sym in zip(t.slots, aligned):
                if sym != inv.blank_symbol:
                    assert inv.klass_of(sym) == slot


def test_align_rejects_unknown_symbol(inv):
    with pytest.raises(Exception, match="unknown symbol"):
        align_template("bXt", left(inv), inv)


# ---------------------------------------------------------------------------
# suffix rule

def test_regular_suffix_cases(inv):
    assert regular_suffix("IkstEnd", inv) == "Id"   # ends d
    assert regular_suffix("bEt", inv) == "Id"       # ends t
    assert regular_suffix("tOk", inv) == "t"        # unvoiced consonant
    assert regular_suffix("wIS", inv) == "t"
    assert regular_suffix("salv", inv) == "d"       # voiced consonant
    assert regular_suffix("go", inv) == "d"         # vowel
    with pytest.raises(LexiconError):
        regular_suffix("", inv)


# ---------------------------------------------------------------------------
# representations

def test_consecutive_drops_too_long(inv):
    pairs = [
        VerbPair("benefit", "bEn6fIt", "bEn6fItId", True),   # past is 9 symbols
        VerbPair("bet", "bEt", "bEtId", True),
    ]
    result = build_examples(pairs, "consecutive:8", inv)
    assert result.unfit_count == 1
    assert result.unfit[0].spelling == "benefit"
    assert len(result.examples) == 1
    assert result.examples[0].input == tuple("bEt_____")
    assert result.examples[0].output == tuple("bEtId___")


def test_left_template_examples(inv):
    pairs = [VerbPair("bet", "bEt", "bEtId", True)]
    result = build_examples(pairs, "left-template", inv)
    ex = result.examples[0]
    assert pattern_to_string(ex.input) == "b__E_t____________"
    assert pattern_to_string(ex.output) == "b__E_t__I_d_______"


def test_right_template_coda_regular(inv):
    pairs = [VerbPair("benefit", "bEn6fIt", "bEn6fItId", True)]
    result = build_examples(pairs, "right-template-coda", inv)
    ex = result.examples[0]
    assert pattern_to_string(ex.input) == "b__E_n__6_f__I_t__"
    assert pattern_to_string(ex.output[:18]) == "b__E_n__6_f__I_t__"
    assert pattern_to_string(ex.output[18:]) == "I_d__"


def test_right_template_coda_irregular(inv):
    pairs = [VerbPair("become", "bIk6m", "bIkem", False)]
    result = build_examples(pairs, "right-template-coda", inv)
    ex = result.examples[0]
    assert pattern_to_string(ex.input) == "_____b__I_k__6_m__"
    assert pattern_to_string(ex.output[:18]) == "_____b__I_k__e_m__"
    assert pattern_to_string(ex.output[18:]) == "_____"


def test_right_template_coda_inconsistent_regular_pair(inv):
    pairs = [VerbPair("sing", "sIN", "s&N", True)]  # flagged regular, is not
    with pytest.raises(DataConsistencyError, match="sing"):
        build_examples(pairs, "right-template-coda", inv)


def test_suffix_reconstruction_property(inv, small_corpus):
    rep = representation_from_tag("right-template-coda", inv)
    result = build_examples(small_corpus, rep)
    for pair, ex in zip(result.pairs, result.examples):
        assert rep.past_from_output(ex.output) == pair.past


def test_build_examples_is_deterministic(inv, small_corpus):
    a = build_examples(small_corpus, "left-template", inv)
    b = build_examples(small_corpus, "left-template", inv)
    assert a.examples == b.examples and a.unfit == b.unfit


def test_unknown_representation_tag(inv):
    with pytest.raises(LexiconError, match="unknown representation"):
        representation_from_tag("wickel", inv)


# ---------------------------------------------------------------------------
# dataset files

def test_dataset_round_trip(tmp_path, inv, small_corpus):
    result = build_examples(small_corpus, "right-template-coda", inv)
    path = tmp_path / "data.spa"
    write_dataset(result, path, inventory_fingerprint=inv.fingerprint())
    loaded = read_dataset(path)
    assert loaded.representation_tag == "right-template-coda"
    assert loaded.input_slots == tuple(MAIN)
    assert loaded.output_slots == tuple(MAIN + "VVCCC")
    assert loaded.inventory_fingerprint == inv.fingerprint()
    assert loaded.examples == result.examples
    assert loaded.regular == result.regular


def test_dataset_rejects_garbage(tmp_path):
    path = tmp_path / "bad.spa"
    path.write_text("not a dataset\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="not a dataset file"):
        read_dataset(path)
