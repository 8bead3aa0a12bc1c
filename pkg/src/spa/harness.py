"""Reproducible experiments: seeded splits, scoring, multi-run reports.

Three experiment kinds are supported:

* ``past-tense``     k independent train/test runs on one representation,
                     reported per run with an averages row;
* ``default-probe``  the two single-attribute micro datasets that separate
                     the majority and adaptive default strategies;
* ``size-ladder``    averaged word accuracy per training size for several
                     strategies (regulars-only learning curves).

Every run derives its randomness from the experiment's master seed, so a
config file reproduces its report bit for bit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from ._validation import as_pattern_matrix, check_rng
from .associator import PatternAssociator, examples_to_matrices
from .encoding import CodebookEncoder, DistributedEncoder, build_codebook
from .errors import ConfigError, SpaError
from .lexicon import (Representation, VerbPair, build_examples, load_lexicon,
                      regular_suffix, representation_from_tag)
from .phonemes import PhonemeInventory, default_inventory, load_inventory
from .tree import induce, classify


# ---------------------------------------------------------------------------
# splitting

@dataclass(frozen=True)
class SplitSpec:
    """How to draw one train/test sample from a corpus."""
    train_size: int
    test_size: int | None = None
    seed: int = 0
    regulars_only: bool = False
    test_rest: bool = False  # test set = every unsampled item


def split(pairs, spec: SplitSpec):
    """Sample disjoint train/test sets without replacement, seeded."""
    pool = [p for p in pairs if p.regular] if spec.regulars_only else list(pairs)
    n = len(pool)
    if spec.train_size < 1:
        raise ConfigError("train_size must be positive")
    if spec.test_rest:
        if spec.train_size >= n:
            raise ConfigError(f"train_size {spec.train_size} leaves no test items (corpus {n})")
    else:
        if spec.test_size is None or spec.test_size < 1:
            raise ConfigError("test_size must be positive unless test_rest is set")
        if spec.train_size + spec.test_size > n:
            raise ConfigError(
                f"train_size + test_size = {spec.train_size + spec.test_size} exceeds corpus size {n}")
    perm = np.random.default_rng(spec.seed).permutation(n)
    train = [pool[i] for i in perm[:spec.train_size]]
    if spec.test_rest:
        test = [pool[i] for i in perm[spec.train_size:]]
    else:
        test = [pool[i] for i in perm[spec.train_size:spec.train_size + spec.test_size]]
    return train, test


# ---------------------------------------------------------------------------
# scoring

@dataclass
class GroupCounts:
    words_correct: int = 0
    words_total: int = 0
    letters_correct: int = 0
    letters_total: int = 0


def _rate(correct, total):
    return None if total == 0 else correct / total


@dataclass
class Metrics:
    """Word/letter (and optionally bit) accuracy with a regularity split."""
    regular: GroupCounts = field(default_factory=GroupCounts)
    irregular: GroupCounts = field(default_factory=GroupCounts)
    bits_correct: int = 0
    bits_total: int = 0

    @property
    def word_rate(self):
        return _rate(self.regular.words_correct + self.irregular.words_correct,
                     self.regular.words_total + self.irregular.words_total)

    @property
    def letter_rate(self):
        return _rate(self.regular.letters_correct + self.irregular.letters_correct,
                     self.regular.letters_total + self.irregular.letters_total)

    @property
    def bit_rate(self):
        return _rate(self.bits_correct, self.bits_total)

    @property
    def regular_word_rate(self):
        return _rate(self.regular.words_correct, self.regular.words_total)

    @property
    def irregular_word_rate(self):
        return _rate(self.irregular.words_correct, self.irregular.words_total)

    @property
    def regular_letter_rate(self):
        return _rate(self.regular.letters_correct, self.regular.letters_total)

    @property
    def irregular_letter_rate(self):
        return _rate(self.irregular.letters_correct, self.irregular.letters_total)

    def check_identities(self) -> None:
        """Word rate cannot beat letter rate; groups must sum to the total."""
        w, l = self.word_rate, self.letter_rate
        if w is not None and l is not None and w > l + 1e-12:
            raise AssertionError(f"word rate {w} exceeds letter rate {l}")
        total = self.regular.words_total + self.irregular.words_total
        if total:
            combined = (self.regular.words_correct + self.irregular.words_correct) / total
            weighted = 0.0
            for g in (self.regular, self.irregular):
                if g.words_total:
                    weighted += (g.words_total / total) * (g.words_correct / g.words_total)
            if abs(combined - weighted) > 1e-12:
                raise AssertionError("combined rate is not the count-weighted group mean")


def _normalize_encoders(encoder):
    if encoder is None:
        return None, None
    if isinstance(encoder, tuple):
        return encoder
    return encoder, encoder


def encode_for_training(inputs, outputs, encoder):
    """Map symbol matrices to '0'/'1' attribute matrices via an encoder pair."""
    enc_in, enc_out = _normalize_encoders(encoder)
    X = enc_in.transform(inputs).astype("<U1")
    Y = enc_out.transform(outputs).astype("<U1")
    return X, Y


def evaluate(assoc: PatternAssociator, inputs, outputs, regular=None,
             encoder=None, rng=None) -> Metrics:
    """Score predictions word- and letter-wise, split by regularity.

    When the forest was trained on a bit encoding, pass the same encoder
    (or an ``(input_encoder, output_encoder)`` pair): inputs are encoded,
    the predicted bits are scored against the encoded truth, then decoded
    back to symbols for letter/word scoring.
    """
    inputs = as_pattern_matrix(inputs, name="inputs")
    outputs = as_pattern_matrix(outputs, name="outputs")
    if inputs.shape[0] != outputs.shape[0]:
        raise ValueError("inputs and outputs differ in length")
    if regular is None:
        flags = [True] * inputs.shape[0]
    else:
        flags = list(regular)
        if len(flags) != inputs.shape[0]:
            raise ValueError("one regularity flag per example is required")

    metrics = Metrics()
    enc_in, enc_out = _normalize_encoders(encoder)
    if enc_in is None:
        predictions = assoc.predict(inputs)
    else:
        rng = check_rng(rng)
        bit_attrs = enc_in.transform(inputs).astype("<U1")
        predicted_attrs = assoc.predict(bit_attrs)
        predicted_bits = predicted_attrs.astype(np.int8)
        true_bits = enc_out.transform(outputs)
        metrics.bits_correct = int((predicted_bits == true_bits).sum())
        metrics.bits_total = int(true_bits.size)
        predictions = enc_out.inverse_transform(predicted_bits, rng=rng)

    for pred, truth, is_regular in zip(predictions, outputs, flags):
        group = metrics.regular if is_regular else metrics.irregular
        hits = int((pred == truth).sum())
        group.letters_correct += hits
        group.letters_total += len(truth)
        group.words_correct += int(hits == len(truth))
        group.words_total += 1
    metrics.check_identities()
    return metrics


# ---------------------------------------------------------------------------
# synthetic corpus

_IRREGULAR_KINDS = ("vowel-change", "identity", "vowel-change-d")


def generate_corpus(n_regular: int, n_irregular: int = 0, seed=0,
                    inventory: PhonemeInventory | None = None,
                    max_syllables: int = 3) -> list[VerbPair]:
    """Random phonotactically plausible verb corpus.

    Stems are built from alternating consonant/vowel clusters sized so that
    stem and past tense fit the 18-slot templates under both justifications
    (checked, with rejection). Regular pasts apply the phonological suffix
    rule; irregular pasts draw from a small mutation catalogue: change one
    vowel, keep the stem unchanged, or change a vowel and append ``d``.
    """
    inv = inventory or default_inventory()
    rng = check_rng(seed)
    consonants = inv.consonants()
    vowels = inv.vowels()
    rep_left = representation_from_tag("left-template", inv)
    rep_right = representation_from_tag("right-template-coda", inv)

    def draw_stem() -> str:
        n_syll = int(rng.integers(1, max_syllables + 1))
        parts = []
        onset = int(rng.choice([0, 1, 2], p=[0.2, 0.6, 0.2]))
        parts.append("".join(rng.choice(consonants, size=onset)))
        for s in range(n_syll):
            parts.append(str(rng.choice(vowels)))
            if s < n_syll - 1:
                inner = int(rng.choice([1, 2], p=[0.75, 0.25]))
            else:
                inner = int(rng.choice([0, 1, 2], p=[0.15, 0.6, 0.25]))
            parts.append("".join(rng.choice(consonants, size=inner)))
        return "".join(parts)

    def fits(pair: VerbPair) -> bool:
        return rep_left.build_pair(pair) is not None and rep_right.build_pair(pair) is not None

    pairs: list[VerbPair] = []
    stems_seen: set[str] = set()

    def add_regular():
        while True:
            stem = draw_stem()
            if stem in stems_seen:
                continue
            past = stem + regular_suffix(stem, inv)
            pair = VerbPair(spelling=stem, stem=stem, past=past, regular=True)
            if fits(pair):
                stems_seen.add(stem)
                pairs.append(pair)
                return

    def add_irregular():
        while True:
            stem = draw_stem()
            if stem in stems_seen:
                continue
            kind = rng.choice(_IRREGULAR_KINDS, p=[0.6, 0.25, 0.15])
            if kind == "identity":
                past = stem
            else:
                positions = [i for i, ch in enumerate(stem) if ch in vowels]
                pos = positions[-1]
                alternatives = [v for v in vowels if v != stem[pos]]
                past = stem[:pos] + str(rng.choice(alternatives)) + stem[pos + 1:]
                if kind == "vowel-change-d" and stem[-1] not in ("t", "d"):
                    past = past + "d"
            pair = VerbPair(spelling=stem, stem=stem, past=past, regular=False)
            if fits(pair):
                stems_seen.add(stem)
                pairs.append(pair)
                return

    for _ in range(n_regular):
        add_regular()
    for _ in range(n_irregular):
        add_irregular()
    return pairs


# ---------------------------------------------------------------------------
# experiment configuration

_LIST_KEYS = {"sizes", "strategies"}
_INT_KEYS = {"train_size", "test_size", "runs", "seed"}
_BOOL_KEYS = {"test_rest", "regulars_only"}


@dataclass
class ExperimentConfig:
    kind: str = "past-tense"
    corpus: str = ""
    inventory: str | None = None
    representation: str = "left-template"
    encoding: str = "symbolic"
    strategy: str = "adaptive"
    passthrough_reference: str = "split"
    train_size: int = 500
    test_size: int | None = 500
    test_rest: bool = False
    regulars_only: bool = False
    runs: int = 3
    seed: int = 0
    sizes: tuple[int, ...] = (50, 100, 300, 500, 1000)
    strategies: tuple[str, ...] = ("adaptive", "majority")
    out_dir: str | None = None


def parse_config(text: str) -> ExperimentConfig:
    """Parse a plain-text ``key = value`` experiment description."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _BOOL_KEYS:
                if value.lower() not in ("true", "false", "0", "1", "yes", "no"):
                    raise ValueError(value)
                values[key] = value.lower() in ("true", "1", "yes")
            elif key == "sizes":
                values[key] = tuple(int(v) for v in value.split(","))
            elif key == "strategies":
                values[key] = tuple(v.strip() for v in value.split(","))
            else:
                values[key] = value
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def resolve_corpus(corpus: str, inventory: PhonemeInventory) -> list[VerbPair]:
    """A corpus string is either a lexicon path or ``synthetic:reg[:irr[:seed]]``."""
    if corpus.startswith("synthetic:"):
        parts = corpus.split(":")[1:]
        if not parts or len(parts) > 3:
            raise ConfigError(f"bad synthetic corpus spec {corpus!r}")
        n_reg = int(parts[0])
        n_irr = int(parts[1]) if len(parts) > 1 else 0
        seed = int(parts[2]) if len(parts) > 2 else 0
        return generate_corpus(n_reg, n_irr, seed=seed, inventory=inventory)
    if not corpus:
        raise ConfigError("no corpus given")
    return load_lexicon(corpus, inventory)


def _resolve_inventory(config: ExperimentConfig) -> PhonemeInventory:
    return load_inventory(config.inventory) if config.inventory else default_inventory()


def make_encoders(encoding: str, rep: Representation, inventory: PhonemeInventory,
                  rng=None, codebook=None):
    """Build the (input, output) encoder pair for an encoding tag.

    Returns (None, codebook_or_None) for the symbolic encoding; for
    ``ecc:<length>:<distance>`` a codebook is searched (or reused when
    passed in) and shared by both sides.
    """
    if encoding == "symbolic":
        return None, None
    if encoding == "distributed":
        enc_in = DistributedEncoder(inventory, rep.input_slots)
        enc_out = DistributedEncoder(inventory, rep.output_slots)
        return (enc_in, enc_out), None
    if encoding.startswith("ecc:"):
        parts = encoding.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad encoding tag {encoding!r}; expected ecc:<length>:<distance>")
        length, distance = int(parts[1]), int(parts[2])
        if codebook is None:
            codebook = build_codebook(inventory.symbols(), length, distance, rng=rng)
        enc = CodebookEncoder(codebook)
        return (enc, enc), codebook
    raise ConfigError(f"unknown encoding {encoding!r}")


def output_legal_classes(rep: Representation, inventory: PhonemeInventory):
    return [set(inventory.candidates_for_slot(c)) for c in rep.output_slots]


def train_for_run(train_examples, rep, inventory, strategy, passthrough_reference,
                  encoder=None) -> PatternAssociator:
    """Fit an associator on examples, honoring an optional bit encoding."""
    inputs, outputs = examples_to_matrices(train_examples)
    assoc = PatternAssociator(strategy=strategy, passthrough_reference=passthrough_reference)
    if encoder is None:
        assoc.fit(inputs, outputs, output_legal_classes=output_legal_classes(rep, inventory))
    else:
        X, Y = encode_for_training(inputs, outputs, encoder)
        assoc.fit(X, Y)
    assoc.representation_ = rep.tag
    assoc.inventory_fingerprint_ = inventory.fingerprint()
    return assoc


# ---------------------------------------------------------------------------
# reports

def _pct(rate) -> str:
    return "-" if rate is None else f"{100 * rate:.1f}"


def _mean(values):
    vals = [v for v in values if v is not None]
    return None if not vals else sum(vals) / len(vals)


def _render_table(headers, rows) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)


@dataclass
class PastTenseReport:
    config: ExperimentConfig
    metrics: list[Metrics]

    @property
    def has_bits(self) -> bool:
        return any(m.bits_total for m in self.metrics)

    def average(self, attr: str):
        return _mean([getattr(m, attr) for m in self.metrics])

    def _rows(self):
        rows = []
        for i, m in enumerate(self.metrics, start=1):
            row = [str(i), _pct(m.regular_word_rate), _pct(m.irregular_word_rate),
                   _pct(m.word_rate), _pct(m.letter_rate)]
            if self.has_bits:
                row.append(_pct(m.bit_rate))
            rows.append(row)
        avg = ["avg", _pct(self.average("regular_word_rate")),
               _pct(self.average("irregular_word_rate")),
               _pct(self.average("word_rate")), _pct(self.average("letter_rate"))]
        if self.has_bits:
            avg.append(_pct(self.average("bit_rate")))
        rows.append(avg)
        return rows

    def table(self) -> str:
        headers = ["run", "reg%", "irrg%", "comb%", "letter%"]
        if self.has_bits:
            headers.append("bit%")
        title = (f"{self.config.representation} / {self.config.encoding} / "
                 f"{self.config.strategy}")
        if self.config.train_size:
            title += f" ({self.config.train_size} train)"
        if self.config.corpus:
            title += f" on {self.config.corpus}"
        return title + "\n" + _render_table(headers, self._rows())

    def csv_text(self) -> str:
        out = io.StringIO()
        headers = ["run", "reg_word", "irrg_word", "comb_word", "comb_letter"]
        if self.has_bits:
            headers.append("comb_bit")
        out.write(",".join(headers) + "\n")
        for row in self._rows():
            out.write(",".join(row) + "\n")
        return out.getvalue()


@dataclass
class ProbeReport:
    """Classification of the reserved value on the two probe datasets."""
    cells: dict[tuple[str, int], str]
    methods: tuple[str, ...] = ("majority", "adaptive")

    def table(self) -> str:
        rows = [[m] + [self.cells[(m, d)] for d in (1, 2)] for m in self.methods]
        return "default strategy probe\n" + _render_table(["method", "set 1", "set 2"], rows)

    def csv_text(self) -> str:
        lines = ["method,set1,set2"]
        lines += [f"{m},{self.cells[(m, 1)]},{self.cells[(m, 2)]}" for m in self.methods]
        return "\n".join(lines) + "\n"


@dataclass
class LadderReport:
    config: ExperimentConfig
    # word accuracy averaged over seeds: {(size, strategy): rate}
    cells: dict[tuple[int, str], float]

    def average(self, size: int, strategy: str) -> float:
        return self.cells[(size, strategy)]

    def table(self) -> str:
        headers = ["train"] + [f"{s}%" for s in self.config.strategies]
        rows = [[str(size)] + [_pct(self.cells[(size, s)]) for s in self.config.strategies]
                for size in self.config.sizes]
        return (f"regulars-only learning curve on {self.config.corpus} "
                f"({self.config.runs} seeds)\n") + _render_table(headers, rows)

    def csv_text(self) -> str:
        lines = ["train_size," + ",".join(self.config.strategies)]
        for size in self.config.sizes:
            lines.append(str(size) + "," + ",".join(
                f"{self.cells[(size, s)]:.6f}" for s in self.config.strategies))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# experiment driver

def probe_datasets():
    """The two single-attribute datasets separating the default strategies.

    Set 1: 10 a->a, 2 b->b, 3 c->c (passthrough coincidences beat the
    majority). Set 2: 10 a->c, 6 b->b, 7 c->c (majority wins).
    """
    set1_x = [["a"]] * 10 + [["b"]] * 2 + [["c"]] * 3
    set1_y = ["a"] * 10 + ["b"] * 2 + ["c"] * 3
    set2_x = [["a"]] * 10 + [["b"]] * 6 + [["c"]] * 7
    set2_y = ["c"] * 10 + ["b"] * 6 + ["c"] * 7
    return [(set1_x, set1_y), (set2_x, set2_y)]


def run_probe(methods=("majority", "adaptive")) -> ProbeReport:
    cells = {}
    for d, (X, y) in enumerate(probe_datasets(), start=1):
        for method in methods:
            root = induce(X, y, strategy=method)
            cells[(method, d)] = classify(root, ["d"])
    return ProbeReport(cells=cells, methods=tuple(methods))


def _persist(out_dir, name, text):
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def run_experiment(config: ExperimentConfig):
    """Execute a config; returns the report object for its kind.

    Randomness: the master seed spawns one child sequence per run (plus one
    for codebook construction), and each run draws its split seed and its
    decoding tie-break stream from its own child.
    """
    if config.kind == "default-probe":
        report = run_probe()
        if config.out_dir:
            _persist(config.out_dir, "report.txt", report.table() + "\n")
            _persist(config.out_dir, "report.csv", report.csv_text())
        return report
    if config.kind == "past-tense":
        return _run_past_tense(config)
    if config.kind == "size-ladder":
        return _run_size_ladder(config)
    raise ConfigError(f"unknown experiment kind {config.kind!r}")


def _prepare(config: ExperimentConfig):
    inventory = _resolve_inventory(config)
    pairs = resolve_corpus(config.corpus, inventory)
    rep = representation_from_tag(config.representation, inventory)
    built = build_examples(pairs, rep)
    if not built.examples:
        raise SpaError("no verb pairs fit the chosen representation")
    by_stem = {pair.stem: (ex, pair.regular)
               for pair, ex in zip(built.pairs, built.examples)}
    return inventory, rep, built, by_stem


def _examples_for(pairs, by_stem):
    examples = [by_stem[p.stem][0] for p in pairs]
    flags = [by_stem[p.stem][1] for p in pairs]
    return examples, flags


def _run_past_tense(config: ExperimentConfig) -> PastTenseReport:
    inventory, rep, built, by_stem = _prepare(config)
    master = np.random.SeedSequence(config.seed)
    codebook_seq, *run_seqs = master.spawn(config.runs + 1)
    encoder, codebook = make_encoders(
        config.encoding, rep, inventory, rng=np.random.default_rng(codebook_seq))
    metrics = []
    run_artifacts = []
    for i, seq in enumerate(run_seqs):
        rng = np.random.default_rng(seq)
        spec = SplitSpec(train_size=config.train_size, test_size=config.test_size,
                         seed=int(rng.integers(2 ** 63)),
                         regulars_only=config.regulars_only, test_rest=config.test_rest)
        train_pairs, test_pairs = split(built.pairs, spec)
        train_ex, _ = _examples_for(train_pairs, by_stem)
        test_ex, test_flags = _examples_for(test_pairs, by_stem)
        assoc = train_for_run(train_ex, rep, inventory, config.strategy,
                              config.passthrough_reference, encoder=encoder)
        test_in = [ex.input for ex in test_ex]
        test_out = [ex.output for ex in test_ex]
        metrics.append(evaluate(assoc, test_in, test_out, regular=test_flags,
                                encoder=encoder, rng=rng))
        run_artifacts.append((i + 1, train_pairs, test_pairs))
    report = PastTenseReport(config=config, metrics=metrics)
    if config.out_dir:
        _persist(config.out_dir, "report.txt", report.table() + "\n")
        _persist(config.out_dir, "report.csv", report.csv_text())
        if codebook is not None:
            _persist(config.out_dir, "codebook.txt", codebook.to_text())
        for run_no, train_pairs, test_pairs in run_artifacts:
            _persist(config.out_dir, f"run{run_no}_train.txt",
                     "\n".join(p.stem for p in train_pairs) + "\n")
            _persist(config.out_dir, f"run{run_no}_test.txt",
                     "\n".join(p.stem for p in test_pairs) + "\n")
    return report


def _run_size_ladder(config: ExperimentConfig) -> LadderReport:
    base = replace(config, regulars_only=True, test_rest=True)
    inventory, rep, built, by_stem = _prepare(base)
    master = np.random.SeedSequence(base.seed)
    run_seqs = master.spawn(base.runs)
    cells: dict[tuple[int, str], float] = {}
    for size in base.sizes:
        sums = {s: [] for s in base.strategies}
        for seq in run_seqs:
            # same stream per run index across sizes and strategies: samples are
            # paired along the ladder, which keeps the size comparison low-variance
            rng = np.random.default_rng(seq)
            spec = SplitSpec(train_size=size, seed=int(rng.integers(2 ** 63)),
                             regulars_only=True, test_rest=True)
            train_pairs, test_pairs = split(built.pairs, spec)
            train_ex, _ = _examples_for(train_pairs, by_stem)
            test_ex, test_flags = _examples_for(test_pairs, by_stem)
            test_in = [ex.input for ex in test_ex]
            test_out = [ex.output for ex in test_ex]
            for strategy in base.strategies:
                assoc = train_for_run(train_ex, rep, inventory, strategy,
                                      base.passthrough_reference)
                m = evaluate(assoc, test_in, test_out, regular=test_flags)
                sums[strategy].append(m.word_rate)
        for strategy in base.strategies:
            cells[(size, strategy)] = float(np.mean(sums[strategy]))
    report = LadderReport(config=base, cells=cells)
    if base.out_dir:
        _persist(base.out_dir, "report.txt", report.table() + "\n")
        _persist(base.out_dir, "report.csv", report.csv_text())
    return report
