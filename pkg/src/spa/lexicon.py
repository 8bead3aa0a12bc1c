"""Verb lexicon ingestion and fixed-length pattern construction.

A lexicon row pairs a verb stem with its past tense, both as phoneme
strings. Three representations turn such a pair into fixed-length symbol
patterns:

* ``consecutive:<k>``      k slots, symbols left to right, blank padded;
* ``left-template``        both sides aligned into an 18-slot CV template;
* ``right-template-coda``  stem and past right-aligned, the regular suffix
                           stripped from the past and isolated in a 5-slot
                           coda.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DataConsistencyError, InventoryError, LexiconError
from .phonemes import BLANK, CONSONANT, VOWEL, PhonemeInventory

ANY = "A"

MAIN_TEMPLATE_SLOTS = "CCCVVCCCVVCCCVVCCC"
CODA_TEMPLATE_SLOTS = "VVCCC"


@dataclass(frozen=True)
class VerbPair:
    """One lexicon entry: stem and past tense in phoneme form."""
    spelling: str
    stem: str
    past: str
    regular: bool


@dataclass(frozen=True)
class Template:
    """A fixed skeleton of consonant/vowel/any slots with a justification."""
    slots: tuple[str, ...]
    justification: str = "left"

    def __post_init__(self):
        if not self.slots or any(s not in (CONSONANT, VOWEL, ANY) for s in self.slots):
            raise ValueError(f"template slots must be C, V or A, got {self.slots!r}")
        if self.justification not in ("left", "right"):
            raise ValueError(f"justification must be 'left' or 'right', got {self.justification!r}")

    @classmethod
    def from_string(cls, slots: str, justification: str = "left") -> "Template":
        return cls(tuple(slots), justification)

    def __len__(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class Example:
    """One training pair of fixed-length symbol patterns."""
    input: tuple[str, ...]
    output: tuple[str, ...]


def _slot_accepts(slot_class: str, klass: str) -> bool:
    return slot_class == ANY or slot_class == klass


def _runs(seq):
    """Maximal runs of equal values as (value, start, length) triples."""
    out = []
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        out.append((seq[i], i, j - i))
        i = j
    return out


def align_template(s: str, template: Template, inventory: PhonemeInventory):
    """Place a phoneme string into a template, or return None if it cannot fit.

    Left justification is a greedy scan: walk the slots left to right with a
    cursor into the string; a phoneme whose class matches the slot is placed
    and the cursor advances, otherwise the slot stays blank. Right
    justification assigns maximal consonant/vowel clusters of the string to
    the template's slot groups starting from the rightmost group, packing
    each cluster at the left edge of its group (this is what reproduces the
    attested right-justified layouts, where a word-final consonant sits at
    the start of the final consonant group rather than at the last slot).

    Dropping blanks from a successful alignment always restores ``s``.
    """
    inventory.check_string(s, context="align_template")
    blank = inventory.blank_symbol
    if any(inventory.klass_of(ch) == BLANK for ch in s):
        raise InventoryError("cannot align a string containing the blank filler")
    out = [blank] * len(template)
    if template.justification == "left":
        cursor = 0
        for i, slot in enumerate(template.slots):
            if cursor < len(s) and _slot_accepts(slot, inventory.klass_of(s[cursor])):
                out[i] = s[cursor]
                cursor += 1
        if cursor < len(s):
            return None
        return tuple(out)
    # right justification
    klasses = [inventory.klass_of(ch) for ch in s]
    clusters = [(k, s[start:start + n]) for k, start, n in _runs(klasses)]
    groups = _runs(template.slots)
    gi = len(groups) - 1
    for klass, chunk in reversed(clusters):
        while gi >= 0 and not _slot_accepts(groups[gi][0], klass):
            gi -= 1
        if gi < 0:
            return None
        _, start, width = groups[gi]
        if len(chunk) > width:
            return None
        for off, ch in enumerate(chunk):
            out[start + off] = ch
        gi -= 1
    return tuple(out)


def de_align(pattern, inventory: PhonemeInventory) -> str:
    """Drop blanks, restoring the phoneme string an alignment came from."""
    blank = inventory.blank_symbol
    return "".join(ch for ch in pattern if ch != blank)


def pattern_from_string(s: str) -> tuple[str, ...]:
    return tuple(s)


def pattern_to_string(pattern) -> str:
    return "".join(pattern)


def regular_suffix(stem: str, inventory: PhonemeInventory) -> str:
    """The regular past-tense suffix selected by the stem-final phoneme.

    "Id" after t or d, "t" after any other unvoiced consonant, "d" after a
    voiced consonant or a vowel.
    """
    if not stem:
        raise LexiconError("cannot suffix an empty stem")
    final = inventory[stem[-1]]
    if final.klass == BLANK:
        raise LexiconError("stem ends in the blank filler")
    if stem[-1] in ("t", "d"):
        return "Id"
    if final.klass == CONSONANT and not final.voiced:
        return "t"
    return "d"


def load_lexicon(path, inventory: PhonemeInventory) -> list[VerbPair]:
    """Read a tab-separated lexicon of adjacent stem/past row pairs.

    Columns: spelling, phoneme string, row marker (``b`` stem / ``d`` past),
    regularity marker on the past row (``0`` regular, ``1`` irregular).
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise LexiconError(f"line {lineno}: expected 4 tab-separated columns, got {len(parts)}")
            spelling, phon, marker, flag = (p.strip() for p in parts)
            if marker not in ("b", "d"):
                raise LexiconError(f"line {lineno}: row marker must be 'b' or 'd', got {marker!r}")
            if flag not in ("0", "1"):
                raise LexiconError(f"line {lineno}: regularity marker must be '0' or '1', got {flag!r}")
            if not phon:
                raise LexiconError(f"line {lineno}: empty phoneme string")
            for ch in phon:
                if ch not in inventory:
                    raise LexiconError(f"line {lineno}: unknown symbol {ch!r} in {phon!r}")
                if inventory.klass_of(ch) == BLANK:
                    raise LexiconError(f"line {lineno}: blank filler {ch!r} inside {phon!r}")
            rows.append((lineno, spelling, phon, marker, flag))

    if len(rows) % 2 != 0:
        raise LexiconError(f"line {rows[-1][0]}: unpaired row (odd number of rows)")
    pairs: list[VerbPair] = []
    seen_stems: dict[str, int] = {}
    for (ln_b, spell_b, stem, mark_b, _), (ln_d, _, past, mark_d, flag_d) in zip(rows[::2], rows[1::2]):
        if mark_b != "b" or mark_d != "d":
            raise LexiconError(f"lines {ln_b}/{ln_d}: expected a 'b' row followed by a 'd' row")
        if stem in seen_stems:
            raise LexiconError(f"line {ln_b}: duplicate stem {stem!r} (first seen on line {seen_stems[stem]})")
        seen_stems[stem] = ln_b
        pairs.append(VerbPair(spelling=spell_b, stem=stem, past=past, regular=(flag_d == "0")))
    return pairs


def save_lexicon(pairs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            flag = "0" if p.regular else "1"
            fh.write(f"{p.spelling}\t{p.stem}\tb\t0\n")
            fh.write(f"{p.spelling}\t{p.past}\td\t{flag}\n")


class Representation:
    """Shared machinery for turning verb pairs into fixed-length examples."""

    tag: str
    input_slots: tuple[str, ...]
    output_slots: tuple[str, ...]

    def __init__(self, inventory: PhonemeInventory):
        self.inventory = inventory

    @property
    def input_arity(self) -> int:
        return len(self.input_slots)

    @property
    def output_arity(self) -> int:
        return len(self.output_slots)

    def align_stem(self, stem: str):
        raise NotImplementedError

    def build_pair(self, pair: VerbPair):
        """(input_pattern, output_pattern) for a pair, or None if unfit."""
        raise NotImplementedError

    def past_from_output(self, pattern) -> str:
        """Collapse a predicted output pattern back to a phoneme string."""
        return de_align(pattern, self.inventory)


class Consecutive(Representation):
    """Symbols left to right, blank padded to a fixed number of holders."""

    def __init__(self, inventory: PhonemeInventory, arity: int):
        super().__init__(inventory)
        if arity < 1:
            raise ValueError("consecutive representation needs at least one holder")
        self.arity = arity
        self.tag = f"consecutive:{arity}"
        self.input_slots = (ANY,) * arity
        self.output_slots = (ANY,) * arity
        self._template = Template(self.input_slots, "left")

    def align_stem(self, stem: str):
        return align_template(stem, self._template, self.inventory)

    def build_pair(self, pair: VerbPair):
        inp = self.align_stem(pair.stem)
        out = align_template(pair.past, self._template, self.inventory)
        if inp is None or out is None:
            return None
        return inp, out


class LeftTemplate(Representation):
    """Stem and past both aligned into the left-justified CV template."""

    tag = "left-template"

    def __init__(self, inventory: PhonemeInventory):
        super().__init__(inventory)
        self.input_slots = tuple(MAIN_TEMPLATE_SLOTS)
        self.output_slots = tuple(MAIN_TEMPLATE_SLOTS)
        self._template = Template(self.input_slots, "left")

    def align_stem(self, stem: str):
        return align_template(stem, self._template, self.inventory)

    def build_pair(self, pair: VerbPair):
        inp = self.align_stem(pair.stem)
        out = align_template(pair.past, self._template, self.inventory)
        if inp is None or out is None:
            return None
        return inp, out


class RightTemplateCoda(Representation):
    """Right-aligned template with the regular suffix isolated in a coda.

    The output's main section holds the past tense with the regular suffix
    stripped, so for regular verbs it is identical to the input; the suffix
    sits left-aligned in a 5-slot coda. Irregular pasts keep their full form
    in the main section and an all-blank coda.
    """

    tag = "right-template-coda"

    def __init__(self, inventory: PhonemeInventory):
        super().__init__(inventory)
        self.input_slots = tuple(MAIN_TEMPLATE_SLOTS)
        self.output_slots = tuple(MAIN_TEMPLATE_SLOTS) + tuple(CODA_TEMPLATE_SLOTS)
        self._main = Template(tuple(MAIN_TEMPLATE_SLOTS), "right")
        self._coda = Template(tuple(CODA_TEMPLATE_SLOTS), "left")

    @property
    def main_arity(self) -> int:
        return len(MAIN_TEMPLATE_SLOTS)

    def align_stem(self, stem: str):
        return align_template(stem, self._main, self.inventory)

    def build_pair(self, pair: VerbPair):
        inp = self.align_stem(pair.stem)
        if inp is None:
            return None
        if pair.regular:
            suffix = regular_suffix(pair.stem, self.inventory)
            if pair.past != pair.stem + suffix:
                raise DataConsistencyError(
                    f"pair {pair.spelling!r} ({pair.stem} -> {pair.past}) is flagged regular "
                    f"but its past is not stem + {suffix!r}")
            main, coda_str = pair.stem, suffix
        else:
            main, coda_str = pair.past, ""
        out_main = align_template(main, self._main, self.inventory)
        coda = align_template(coda_str, self._coda, self.inventory)
        if out_main is None or coda is None:
            return None
        return inp, out_main + coda

    def past_from_output(self, pattern) -> str:
        main = pattern[:self.main_arity]
        coda = pattern[self.main_arity:]
        return de_align(main, self.inventory) + de_align(coda, self.inventory)


def representation_from_tag(tag: str, inventory: PhonemeInventory) -> Representation:
    if tag == LeftTemplate.tag:
        return LeftTemplate(inventory)
    if tag == RightTemplateCoda.tag:
        return RightTemplateCoda(inventory)
    if tag.startswith("consecutive:"):
        try:
            arity = int(tag.split(":", 1)[1])
        except ValueError:
            raise LexiconError(f"bad consecutive arity in representation tag {tag!r}") from None
        return Consecutive(inventory, arity)
    raise LexiconError(f"unknown representation tag {tag!r}")


@dataclass
class BuildResult:
    """Fixed-length examples built from a lexicon, plus what was dropped."""
    representation: Representation
    examples: list[Example]
    regular: list[bool]
    pairs: list[VerbPair]
    unfit: list[VerbPair] = field(default_factory=list)

    @property
    def unfit_count(self) -> int:
        return len(self.unfit)


def build_examples(pairs, rep, inventory: PhonemeInventory | None = None) -> BuildResult:
    """Build examples under a representation, dropping pairs that do not fit.

    ``rep`` may be a Representation or a tag string (then ``inventory`` is
    required). Regular pairs whose past tense contradicts the suffix rule
    raise DataConsistencyError where the representation depends on it.
    """
    if isinstance(rep, str):
        if inventory is None:
            raise ValueError("an inventory is required when rep is given as a tag")
        rep = representation_from_tag(rep, inventory)
    result = BuildResult(representation=rep, examples=[], regular=[], pairs=[])
    for pair in pairs:
        built = rep.build_pair(pair)
        if built is None:
            result.unfit.append(pair)
            continue
        inp, out = built
        result.examples.append(Example(input=inp, output=out))
        result.regular.append(pair.regular)
        result.pairs.append(pair)
    return result


DATASET_MAGIC = "spa-dataset v1"


def write_dataset(result: BuildResult, path, inventory_fingerprint: str = "") -> None:
    """Persist built examples as a documented plain-text dataset file."""
    rep = result.representation
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(DATASET_MAGIC + "\n")
        fh.write(f"representation {rep.tag}\n")
        fh.write(f"input_slots {''.join(rep.input_slots)}\n")
        fh.write(f"output_slots {''.join(rep.output_slots)}\n")
        fh.write(f"inventory_fingerprint {inventory_fingerprint}\n")
        fh.write(f"examples {len(result.examples)}\n")
        fh.write("columns input output regular\n")
        for ex, reg in zip(result.examples, result.regular):
            fh.write(f"{pattern_to_string(ex.input)}\t{pattern_to_string(ex.output)}\t{int(reg)}\n")


@dataclass
class Dataset:
    representation_tag: str
    input_slots: tuple[str, ...]
    output_slots: tuple[str, ...]
    inventory_fingerprint: str
    examples: list[Example]
    regular: list[bool]


def read_dataset(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != DATASET_MAGIC:
        raise LexiconError(f"{path}: not a dataset file (missing {DATASET_MAGIC!r} header)")
    header: dict[str, str] = {}
    idx = 1
    while idx < len(lines) and not lines[idx].startswith("columns "):
        key, _, value = lines[idx].partition(" ")
        header[key] = value
        idx += 1
    idx += 1  # skip the columns line
    required = ("representation", "input_slots", "output_slots", "examples")
    for key in required:
        if key not in header:
            raise LexiconError(f"{path}: missing dataset header field {key!r}")
    examples = []
    regular = []
    for lineno, line in enumerate(lines[idx:], start=idx + 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconError(f"{path} line {lineno}: expected 3 tab-separated fields")
        inp, out, reg = parts
        if len(inp) != len(header["input_slots"]) or len(out) != len(header["output_slots"]):
            raise LexiconError(f"{path} line {lineno}: pattern length does not match declared slots")
        examples.append(Example(input=tuple(inp), output=tuple(out)))
        regular.append(reg == "1")
    if len(examples) != int(header["examples"]):
        raise LexiconError(f"{path}: header declares {header['examples']} examples, found {len(examples)}")
    return Dataset(
        representation_tag=header["representation"],
        input_slots=tuple(header["input_slots"]),
        output_slots=tuple(header["output_slots"]),
        inventory_fingerprint=header.get("inventory_fingerprint", ""),
        examples=examples,
        regular=regular,
    )
