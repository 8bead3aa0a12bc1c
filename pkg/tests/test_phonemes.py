import pytest

from spa.errors import InventoryError
from spa.phonemes import (BLANK, CONSONANT, VOWEL, Phoneme, PhonemeInventory,
                          parse_inventory)


def test_shipped_inventory_shape(inv):
    non_blank = [s for s in inv.symbols() if inv.klass_of(s) != BLANK]
    assert len(non_blank) == 36
    assert len(inv) == 37
    assert inv.blank_symbol == "_"
    assert inv["_"].features == (0,) * 10


def test_vowel_padding_bits_are_zero(inv):
    for sym in inv.vowels():
        assert inv[sym].features[8:] == (0, 0)


def test_feature_vectors_distinct_within_class(inv):
    for group in (inv.consonants(), inv.vowels()):
        vectors = [inv[s].features for s in group]
        assert len(set(vectors)) == len(vectors)


def test_no_phoneme_shares_the_blank_vector(inv):
    # otherwise nearest-feature decoding could tie with blank at distance 0
    for sym in inv.consonants() + inv.vowels():
        assert any(inv[sym].features)


def test_voicing(inv):
    assert inv["b"].voiced and not inv["p"].voiced
    assert inv["z"].voiced and not inv["s"].voiced
    for v in inv.vowels():
        assert inv[v].voiced


def test_candidates_for_slot(inv):
    cons = inv.candidates_for_slot(CONSONANT)
    assert cons[0] == "_" or "_" in cons
    assert set(cons) == {"_"} | set(inv.consonants())
    assert set(inv.candidates_for_slot(VOWEL)) == {"_"} | set(inv.vowels())
    assert set(inv.candidates_for_slot("A")) == set(inv.symbols())
    with pytest.raises(InventoryError):
        inv.candidates_for_slot("Q")


def test_unknown_symbol_lookup(inv):
    with pytest.raises(InventoryError, match="unknown symbol"):
        inv["X"]


def test_fingerprint_is_stable_and_content_sensitive(inv):
    again = parse_inventory(inv.to_text())
    assert again.fingerprint() == inv.fingerprint()
    other = parse_inventory(inv.to_text().replace(
        "h C 0 0 0 0 0 0 0 0 1 0", "h C 0 0 0 0 0 0 0 1 1 0", 1))
    assert other.fingerprint() != inv.fingerprint()


def test_text_round_trip(inv):
    again = parse_inventory(inv.to_text())
    assert again.symbols() == inv.symbols()
    for sym in inv.symbols():
        assert again[sym] == inv[sym]


def test_duplicate_symbol_rejected():
    with pytest.raises(InventoryError, match="duplicate"):
        PhonemeInventory([
            Phoneme("_", BLANK, (0,) * 10),
            Phoneme("b", CONSONANT, (1,) + (0,) * 9),
            Phoneme("b", CONSONANT, (0, 1) + (0,) * 8),
        ])


def test_exactly_one_blank_required():
    with pytest.raises(InventoryError, match="exactly one blank"):
        PhonemeInventory([Phoneme("b", CONSONANT, (1,) + (0,) * 9)])
    with pytest.raises(InventoryError, match="exactly one blank"):
        PhonemeInventory([
            Phoneme("_", BLANK, (0,) * 10),
            Phoneme("~", BLANK, (0,) * 10),
        ])


def test_blank_must_be_all_zero():
    with pytest.raises(InventoryError, match="all zeros"):
        Phoneme("_", BLANK, (1,) + (0,) * 9)


def test_vowel_padding_enforced():
    with pytest.raises(InventoryError, match="padding"):
        Phoneme("i", VOWEL, (1, 0, 0, 0, 0, 0, 0, 0, 1, 0))


def test_shared_vector_within_class_rejected():
    with pytest.raises(InventoryError, match="share"):
        PhonemeInventory([
            Phoneme("_", BLANK, (0,) * 10),
            Phoneme("b", CONSONANT, (1,) + (0,) * 9),
            Phoneme("d", CONSONANT, (1,) + (0,) * 9),
        ])


def test_parse_errors():
    with pytest.raises(InventoryError, match="expected symbol"):
        parse_inventory("_ B 0 0 0\n")
    with pytest.raises(InventoryError, match="non-integer"):
        parse_inventory("_ B x 0 0 0 0 0 0 0 0 0\n")
