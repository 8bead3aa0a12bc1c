"""Bit-vector encodings of symbol patterns and nearest-match decoding.

Two encoders are provided. The distributed encoder concatenates each slot
symbol's 10 phonetic feature bits and decodes per slot against the symbols
admissible there. The codebook encoder maps every symbol (the blank
included) to a codeword of guaranteed minimum pairwise Hamming distance,
so up to ``(d - 1) // 2`` corrupted bits per block still decode to the
original symbol. Decoding ties are broken uniformly at random from the
caller's generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import as_bit_matrix, as_pattern_matrix, check_rng
from .errors import CodebookSearchError, EncodingError
from .lexicon import Template
from .phonemes import N_FEATURES, PhonemeInventory


def hamming_distance(a, b) -> int:
    a = np.asarray(a, dtype=np.int8)
    b = np.asarray(b, dtype=np.int8)
    if a.shape != b.shape:
        raise EncodingError(f"length mismatch: {a.shape} vs {b.shape}")
    return int((a != b).sum())


def _argmin_with_random_ties(dist, rng) -> np.ndarray:
    """Row-wise argmin over a 2-D distance array, ties drawn uniformly."""
    dist = np.asarray(dist)
    best = dist.min(axis=1, keepdims=True)
    picks = np.empty(dist.shape[0], dtype=np.int64)
    for i, row in enumerate(dist == best):
        tied = np.flatnonzero(row)
        picks[i] = tied[0] if len(tied) == 1 else rng.choice(tied)
    return picks


def _slot_classes(template) -> tuple[str, ...]:
    if isinstance(template, Template):
        return template.slots
    return tuple(template)


def encode_distributed(pattern, template, inventory: PhonemeInventory) -> np.ndarray:
    """Concatenate the feature bits of each slot symbol, slot order kept.

    The pattern must be aligned to the template: a non-blank symbol in a
    consonant or vowel slot must carry that class.
    """
    slots = _slot_classes(template)
    pattern = tuple(pattern)
    if len(pattern) != len(slots):
        raise EncodingError(f"pattern has {len(pattern)} slots, template {len(slots)}")
    bits = np.empty(len(slots) * N_FEATURES, dtype=np.int8)
    for i, (sym, slot) in enumerate(zip(pattern, slots)):
        ph = inventory[sym]
        if slot != "A" and ph.klass not in (slot, "B"):
            raise EncodingError(
                f"slot {i + 1} expects class {slot}, got {sym!r} ({ph.klass})")
        bits[i * N_FEATURES:(i + 1) * N_FEATURES] = ph.features
    return bits


def decode_distributed(bits, template, inventory: PhonemeInventory, rng=None) -> tuple[str, ...]:
    """Per slot, the admissible symbol with the nearest feature vector."""
    slots = _slot_classes(template)
    bits = np.asarray(bits, dtype=np.int8)
    if bits.ndim != 1 or bits.size != len(slots) * N_FEATURES:
        raise EncodingError(f"expected {len(slots) * N_FEATURES} bits, got {bits.size}")
    rng = check_rng(rng)
    out = []
    for i, slot in enumerate(slots):
        block = bits[i * N_FEATURES:(i + 1) * N_FEATURES]
        candidates = inventory.candidates_for_slot(slot)
        vectors = np.array([inventory[c].features for c in candidates], dtype=np.int8)
        dist = (vectors != block[None, :]).sum(axis=1)
        pick = _argmin_with_random_ties(dist[None, :], rng)[0]
        out.append(candidates[pick])
    return tuple(out)


@dataclass
class Codebook:
    """Symbol-to-codeword map with a verified minimum pairwise distance."""
    code_length: int
    min_distance: int
    words: dict[str, tuple[int, ...]]

    def __post_init__(self):
        for sym, w in self.words.items():
            if len(sym) != 1:
                raise EncodingError(f"codebook symbol {sym!r} is not a single character")
            if len(w) != self.code_length or any(b not in (0, 1) for b in w):
                raise EncodingError(f"codeword for {sym!r} is not {self.code_length} bits")
        actual = self.verify()
        if actual < self.min_distance:
            raise EncodingError(
                f"codebook claims distance {self.min_distance} but achieves {actual}")

    def verify(self) -> int:
        """Exhaustive pairwise scan; the true minimum distance."""
        mat = self.matrix()
        if mat.shape[0] < 2:
            return self.code_length
        dist = (mat[:, None, :] != mat[None, :, :]).sum(axis=2)
        np.fill_diagonal(dist, self.code_length + 1)
        best = int(dist.min())
        if best == 0:
            raise EncodingError("codebook contains duplicate codewords")
        return best

    def symbols(self) -> list[str]:
        return sorted(self.words)

    def matrix(self) -> np.ndarray:
        return np.array([self.words[s] for s in self.symbols()], dtype=np.int8)

    def correctable_bits(self) -> int:
        return (self.min_distance - 1) // 2

    def to_text(self) -> str:
        lines = [f"{self.code_length} {self.min_distance}"]
        for sym in self.symbols():
            lines.append(f"{sym} " + "".join(str(b) for b in self.words[sym]))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "Codebook":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise EncodingError("empty codebook file")
        try:
            length, distance = (int(x) for x in lines[0].split())
        except ValueError:
            raise EncodingError("codebook header must be 'length distance'") from None
        words = {}
        for ln in lines[1:]:
            sym, _, bits = ln.partition(" ")
            if sym in words:
                raise EncodingError(f"duplicate codebook symbol {sym!r}")
            if not set(bits) <= {"0", "1"}:
                raise EncodingError(f"codeword for {sym!r} contains non-bit characters")
            words[sym] = tuple(int(b) for b in bits)
        return cls(code_length=length, min_distance=distance, words=words)

    @classmethod
    def load(cls, path) -> "Codebook":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def build_codebook(symbols, code_length: int, min_distance: int, rng=None,
                   max_steps: int = 200_000, restarts: int = 20) -> Codebook:
    """Search for codewords with the requested minimum pairwise distance.

    Seeded random start followed by min-conflicts repair: repeatedly take
    the word with the largest total distance deficit and flip whichever bit
    shrinks that deficit most (a random bit when stuck), restarting from a
    fresh random table when a restart budget is hit. The result is verified
    exhaustively before being returned.
    """
    symbols = list(symbols)
    if len(symbols) < 2:
        raise ValueError("need at least two symbols")
    if len(set(symbols)) != len(symbols):
        raise ValueError("duplicate symbols")
    n = len(symbols)
    if code_length < 1 or min_distance < 1:
        raise ValueError("code_length and min_distance must be positive")
    if min_distance > code_length:
        raise CodebookSearchError(
            f"distance {min_distance} impossible at length {code_length}", best_distance=code_length)
    master = check_rng(rng)
    best_seen = 0
    for _ in range(restarts):
        gen = np.random.default_rng(master.integers(2 ** 63))
        words = gen.integers(0, 2, size=(n, code_length), dtype=np.int8)
        dist = (words[:, None, :] != words[None, :, :]).sum(axis=2)
        np.fill_diagonal(dist, code_length + 1)
        for _ in range(max_steps):
            shortfall = np.where(dist < min_distance, min_distance - dist, 0)
            if not shortfall.any():
                book = Codebook(
                    code_length=code_length, min_distance=min_distance,
                    words={sym: tuple(int(b) for b in row) for sym, row in zip(symbols, words)})
                return book
            w = int(shortfall.sum(axis=1).argmax())
            others = np.delete(np.arange(n), w)
            d_w = dist[w, others]
            # flipping bit j moves d(w, o) by +1 where the bits agree, -1 otherwise
            delta = 2 * (words[others] == words[w]).astype(np.int32) - 1
            new_d = d_w[:, None] + delta
            new_deficit = np.where(new_d < min_distance, min_distance - new_d, 0).sum(axis=0)
            j = int(new_deficit.argmin())
            if new_deficit[j] >= shortfall[w].sum():
                j = int(gen.integers(code_length))
            words[w, j] ^= 1
            row = (words != words[w]).sum(axis=1)
            row[w] = code_length + 1
            dist[w, :] = row
            dist[:, w] = row
        best_seen = max(best_seen, int(dist.min()))
    raise CodebookSearchError(
        f"no codebook of length {code_length} with distance {min_distance} for {n} symbols "
        f"within {restarts} restarts x {max_steps} steps (best distance reached: {best_seen})",
        best_distance=best_seen)


def encode_ecc(pattern, codebook: Codebook) -> np.ndarray:
    """Concatenate the codewords of each pattern symbol."""
    pattern = tuple(pattern)
    bits = np.empty(len(pattern) * codebook.code_length, dtype=np.int8)
    for i, sym in enumerate(pattern):
        if sym not in codebook.words:
            raise EncodingError(f"symbol {sym!r} has no codeword")
        bits[i * codebook.code_length:(i + 1) * codebook.code_length] = codebook.words[sym]
    return bits


def decode_ecc(bits, codebook: Codebook, rng=None) -> tuple[str, ...]:
    """Per block, the nearest codeword by Hamming distance."""
    bits = np.asarray(bits, dtype=np.int8)
    L = codebook.code_length
    if bits.ndim != 1 or bits.size % L != 0:
        raise EncodingError(f"bit count {bits.size} is not a multiple of the code length {L}")
    rng = check_rng(rng)
    symbols = codebook.symbols()
    mat = codebook.matrix()
    blocks = bits.reshape(-1, L)
    dist = (blocks[:, None, :] != mat[None, :, :]).sum(axis=2)
    picks = _argmin_with_random_ties(dist, rng)
    return tuple(symbols[p] for p in picks)


def bits_to_attributes(bits) -> tuple[str, ...]:
    """Present a bit vector as a pattern of '0'/'1' symbols."""
    bits = np.asarray(bits)
    if bits.size == 0:
        return ()
    if bits.ndim != 1:
        raise EncodingError("bits_to_attributes expects a 1-D vector")
    arr = bits.astype(np.int8)
    if not np.isin(arr, (0, 1)).all():
        raise EncodingError("bit vector must contain only 0 and 1")
    return tuple(arr.astype("<U1"))


def attributes_to_bits(pattern) -> np.ndarray:
    """Inverse of bits_to_attributes."""
    if len(pattern) == 0:
        return np.zeros(0, dtype=np.int8)
    arr = np.asarray(tuple(pattern), dtype="<U1")
    if not np.isin(arr, ("0", "1")).all():
        raise EncodingError("pattern contains symbols other than '0' and '1'")
    return arr.astype(np.int8)


class _PatternBitEncoder(TransformerMixin, BaseEstimator):
    """Shared fit/validation plumbing for the two bit encoders."""

    def fit(self, X, y=None):
        X = as_pattern_matrix(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        X = as_pattern_matrix(X)
        return np.stack([self._encode_row(tuple(row)) for row in X])

    def inverse_transform(self, B, rng=None) -> np.ndarray:
        """Decode a bit matrix back to symbol patterns.

        With ``rng=None`` a generator is seeded from ``random_state``, so
        repeated calls resolve ties identically.
        """
        B = as_bit_matrix(B)
        rng = check_rng(self.random_state if rng is None else rng)
        return np.array([self._decode_row(row, rng) for row in B], dtype="<U1")

    def _encode_row(self, row):
        raise NotImplementedError

    def _decode_row(self, row, rng):
        raise NotImplementedError


class DistributedEncoder(_PatternBitEncoder):
    """Transformer view of the distributed (phonetic feature) encoding.

    Parameters
    ----------
    inventory : PhonemeInventory
    slots : template slot classes ("C"/"V"/"A" string or tuple)
    random_state : seed for tie-breaking in inverse_transform
    """

    def __init__(self, inventory, slots, random_state=None):
        self.inventory = inventory
        self.slots = slots
        self.random_state = random_state

    @property
    def bits_per_pattern(self) -> int:
        return len(_slot_classes(self.slots)) * N_FEATURES

    def _encode_row(self, row):
        return encode_distributed(row, self.slots, self.inventory)

    def _decode_row(self, row, rng):
        return decode_distributed(row, self.slots, self.inventory, rng)


class CodebookEncoder(_PatternBitEncoder):
    """Transformer view of the error-correcting-code encoding."""

    def __init__(self, codebook, random_state=None):
        self.codebook = codebook
        self.random_state = random_state

    @property
    def bits_per_symbol(self) -> int:
        return self.codebook.code_length

    def _encode_row(self, row):
        return encode_ecc(row, self.codebook)

    def _decode_row(self, row, rng):
        return decode_ecc(row, self.codebook, rng)
