"""Phoneme inventory: symbol alphabet, consonant/vowel classes, feature bits.

Every symbol is a single printable character. Consonants and vowels carry a
10-bit phonetic feature vector (vowels use 8 features plus two always-zero
padding bits); the blank filler is all zeros. The first consonant feature is
the voicing bit, which the suffix rule in :mod:`spa.lexicon` depends on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import InventoryError

CONSONANT = "C"
VOWEL = "V"
BLANK = "B"

N_FEATURES = 10

CONSONANT_FEATURE_NAMES = (
    "voiced", "labial", "dental", "palatal", "velar",
    "nasal", "liquid", "trill", "fricative", "interdental",
)
VOWEL_FEATURE_NAMES = (
    "front", "centre", "back", "high", "low", "middle", "round", "diphthong",
)


@dataclass(frozen=True)
class Phoneme:
    symbol: str
    klass: str  # CONSONANT, VOWEL or BLANK
    features: tuple[int, ...]

    def __post_init__(self):
        if len(self.symbol) != 1 or not self.symbol.isprintable() or self.symbol.isspace():
            raise InventoryError(f"phoneme symbol must be one printable non-space character, got {self.symbol!r}")
        if self.klass not in (CONSONANT, VOWEL, BLANK):
            raise InventoryError(f"unknown phoneme class {self.klass!r} for symbol {self.symbol!r}")
        if len(self.features) != N_FEATURES or any(b not in (0, 1) for b in self.features):
            raise InventoryError(f"symbol {self.symbol!r}: features must be {N_FEATURES} bits")
        if self.klass == BLANK and any(self.features):
            raise InventoryError("the blank phoneme's feature vector must be all zeros")
        if self.klass == VOWEL and any(self.features[len(VOWEL_FEATURE_NAMES):]):
            raise InventoryError(f"vowel {self.symbol!r}: padding features (9, 10) must be zero")

    @property
    def voiced(self) -> bool:
        """Voicing for consonants; vowels count as voiced."""
        if self.klass == VOWEL:
            return True
        return self.klass == CONSONANT and self.features[0] == 1


class PhonemeInventory:
    """Immutable symbol table with class and feature lookups."""

    def __init__(self, phonemes):
        entries: dict[str, Phoneme] = {}
        for ph in phonemes:
            if ph.symbol in entries:
                raise InventoryError(f"duplicate symbol {ph.symbol!r}")
            entries[ph.symbol] = ph
        blanks = [p for p in entries.values() if p.klass == BLANK]
        if len(blanks) != 1:
            raise InventoryError(f"inventory must contain exactly one blank phoneme, found {len(blanks)}")
        for klass in (CONSONANT, VOWEL):
            seen: dict[tuple[int, ...], str] = {}
            for p in entries.values():
                if p.klass != klass:
                    continue
                if p.features in seen:
                    raise InventoryError(
                        f"{p.symbol!r} and {seen[p.features]!r} share one feature vector; decoding would be ambiguous")
                seen[p.features] = p.symbol
        self._entries = entries
        self.blank_symbol = blanks[0].symbol

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, symbol: str) -> Phoneme:
        try:
            return self._entries[symbol]
        except KeyError:
            raise InventoryError(f"unknown symbol {symbol!r}") from None

    def symbols(self) -> list[str]:
        """All symbols including the blank, in a fixed sorted order."""
        return sorted(self._entries)

    def klass_of(self, symbol: str) -> str:
        return self[symbol].klass

    def consonants(self) -> list[str]:
        return sorted(s for s, p in self._entries.items() if p.klass == CONSONANT)

    def vowels(self) -> list[str]:
        return sorted(s for s, p in self._entries.items() if p.klass == VOWEL)

    def candidates_for_slot(self, slot_class: str) -> list[str]:
        """Symbols admissible in a template slot: blank plus the matching class.

        Slot class "A" (any) admits the whole inventory.
        """
        if slot_class == CONSONANT:
            return [self.blank_symbol] + self.consonants()
        if slot_class == VOWEL:
            return [self.blank_symbol] + self.vowels()
        if slot_class == "A":
            return self.symbols()
        raise InventoryError(f"unknown slot class {slot_class!r}")

    def check_string(self, s: str, context: str = "") -> None:
        """Raise if any character of ``s`` is not an inventory symbol."""
        for ch in s:
            if ch not in self._entries:
                where = f" in {context}" if context else ""
                raise InventoryError(f"unknown symbol {ch!r}{where}")

    def to_text(self) -> str:
        lines = []
        for sym in self.symbols():
            p = self._entries[sym]
            lines.append(f"{sym} {p.klass} " + " ".join(str(b) for b in p.features))
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        """Stable hash of the inventory contents, used to tag saved models."""
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]


def parse_inventory(text: str) -> PhonemeInventory:
    phonemes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 + N_FEATURES:
            raise InventoryError(f"inventory line {lineno}: expected symbol, class and {N_FEATURES} bits")
        symbol, klass, *bits = parts
        try:
            features = tuple(int(b) for b in bits)
        except ValueError:
            raise InventoryError(f"inventory line {lineno}: non-integer feature bit") from None
        phonemes.append(Phoneme(symbol=symbol, klass=klass, features=features))
    return PhonemeInventory(phonemes)


def load_inventory(path) -> PhonemeInventory:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_inventory(fh.read())


def save_inventory(inventory: PhonemeInventory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(inventory.to_text())


@lru_cache(maxsize=1)
def default_inventory() -> PhonemeInventory:
    """The 36-phoneme inventory shipped with the package (plus blank)."""
    text = resources.files("spa.data").joinpath("unibet_inventory.txt").read_text("utf-8")
    return parse_inventory(text)
