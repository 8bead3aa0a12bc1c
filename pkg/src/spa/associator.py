"""N-to-M pattern association: one decision tree per output attribute.

``PatternAssociator`` trains ``output_arity`` independent trees, each seeing
every input attribute and predicting one output position; prediction runs
all trees jointly. Trees can be exported as precedence-ordered production
rules (more conditions first), and fitted forests round-trip through a
plain-text file format.

Per-output training only reads the shared input matrix, so the trees are
order-independent; fitted forests are immutable and safe to share across
threads for prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_pattern_matrix
from .errors import SpaError
from .tree import DecisionTree, TreeNode, induce

FOREST_MAGIC = "spa-forest v1"


def examples_to_matrices(examples) -> tuple[np.ndarray, np.ndarray]:
    """Stack Example objects into input and output symbol matrices."""
    X = as_pattern_matrix([ex.input for ex in examples], name="inputs")
    Y = as_pattern_matrix([ex.output for ex in examples], name="outputs")
    return X, Y


@dataclass(frozen=True)
class ProductionRule:
    """One leaf of a tree as an IF/THEN rule over attribute equalities."""
    conditions: tuple[tuple[int, str], ...]
    output_index: int
    value: str

    @property
    def condition_count(self) -> int:
        return len(self.conditions)

    def matches(self, x) -> bool:
        return all(x[attr] == val for attr, val in self.conditions)

    def text(self) -> str:
        """Rendered rule; attribute positions are 1-based in this form."""
        conclusion = f"o{self.output_index + 1} = {self.value}"
        if not self.conditions:
            return f"THEN {conclusion}"
        clause = " AND ".join(f"i{attr + 1} = {val}" for attr, val in self.conditions)
        return f"IF {clause} THEN {conclusion}"

    def __str__(self) -> str:
        return self.text()


def export_rules(tree: DecisionTree | TreeNode, output_index: int | None = None) -> list[ProductionRule]:
    """All leaves of a tree as rules, most conditions first (stable order).

    Applied first-match, the list reproduces tree traversal on every input
    whose branch path exists in the tree. Default behavior for unseen
    values is not materialized as rules; it stays attached to the tree.
    """
    if isinstance(tree, DecisionTree):
        root = tree.root
        out_idx = tree.output_index if output_index is None else output_index
    else:
        root = tree
        out_idx = 0 if output_index is None else output_index
    rules: list[ProductionRule] = []

    def walk(node: TreeNode, path):
        if node.is_leaf:
            rules.append(ProductionRule(conditions=tuple(path), output_index=out_idx,
                                        value=node.label))
            return
        for value in sorted(node.branches):
            walk(node.branches[value], path + [(node.attribute, value)])

    walk(root, [])
    rules.sort(key=lambda r: -r.condition_count)  # sort is stable
    return rules


def apply_rules(rules, x):
    """First-match rule evaluation; None when no rule covers the input."""
    for rule in rules:
        if rule.matches(x):
            return rule.value
    return None


class PatternAssociator(BaseEstimator):
    """Forest of per-output-attribute decision trees.

    Parameters
    ----------
    strategy : "adaptive", "majority" or "passthrough"
        Default-rule strategy handed to every tree.
    passthrough_reference : "split" or "twin"
        Under "twin", tree i's passthrough default copies input attribute i
        instead of the node's own split attribute.

    Attributes (after fit)
    ----------------------
    trees_ : list of DecisionTree, one per output attribute.
    input_arity_, output_arity_ : pattern widths seen at fit time.
    """

    def __init__(self, strategy="adaptive", passthrough_reference="split"):
        self.strategy = strategy
        self.passthrough_reference = passthrough_reference

    def fit(self, X, Y, output_legal_classes=None):
        """Train one tree per output column.

        ``output_legal_classes`` optionally restricts passthrough answers:
        element i is the set of symbols admissible for output i (or None).
        """
        X = as_pattern_matrix(X, name="X")
        Y = as_pattern_matrix(Y, name="Y")
        if X.shape[0] != Y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows, Y has {Y.shape[0]}")
        self._check_noise_free(X, Y)
        n_out = Y.shape[1]
        if output_legal_classes is not None and len(output_legal_classes) != n_out:
            raise ValueError("output_legal_classes must have one entry per output attribute")
        self.trees_ = []
        for i in range(n_out):
            twin = i if i < X.shape[1] else None
            root = induce(X, Y[:, i], strategy=self.strategy,
                          passthrough_reference=self.passthrough_reference, twin_index=twin)
            legal = None
            if output_legal_classes is not None and output_legal_classes[i] is not None:
                legal = frozenset(output_legal_classes[i])
            self.trees_.append(DecisionTree(
                root=root, output_index=i, strategy=self.strategy,
                passthrough_reference=self.passthrough_reference,
                twin_index=twin, legal_classes=legal))
        self.input_arity_ = X.shape[1]
        self.output_arity_ = n_out
        self.n_features_in_ = X.shape[1]
        self.representation_ = getattr(self, "representation_", None)
        self.encoding_ = getattr(self, "encoding_", None)
        self.inventory_fingerprint_ = getattr(self, "inventory_fingerprint_", None)
        return self

    @staticmethod
    def _check_noise_free(X, Y):
        seen: dict[tuple, tuple] = {}
        for idx in range(X.shape[0]):
            key = tuple(X[idx])
            out = tuple(Y[idx])
            prev = seen.setdefault(key, out)
            if prev != out:
                raise ValueError(
                    f"contradictory examples: input {''.join(key)!r} maps to both "
                    f"{''.join(prev)!r} and {''.join(out)!r}")

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "trees_")
        X = as_pattern_matrix(X, arity=self.input_arity_)
        out = np.empty((X.shape[0], self.output_arity_), dtype="<U1")
        for i, tree in enumerate(self.trees_):
            out[:, i] = [tree.classify(row) for row in X]
        return out

    def predict_one(self, x) -> tuple[str, ...]:
        return tuple(self.predict([list(x)])[0])

    def rules(self, output_index: int) -> list[ProductionRule]:
        check_is_fitted(self, "trees_")
        if not 0 <= output_index < self.output_arity_:
            raise ValueError(f"output index {output_index} out of range")
        return export_rules(self.trees_[output_index])

    def save(self, path) -> None:
        check_is_fitted(self, "trees_")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(FOREST_MAGIC + "\n")
            fh.write(f"input_arity {self.input_arity_}\n")
            fh.write(f"output_arity {self.output_arity_}\n")
            fh.write(f"strategy {self.strategy}\n")
            fh.write(f"passthrough_reference {self.passthrough_reference}\n")
            fh.write(f"representation {self.representation_ or '-'}\n")
            fh.write(f"encoding {self.encoding_ or '-'}\n")
            fh.write(f"inventory_fingerprint {self.inventory_fingerprint_ or '-'}\n")
            for tree in self.trees_:
                fh.write(tree.to_text())
            fh.write("end\n")

    @classmethod
    def load(cls, path, inventory=None) -> "PatternAssociator":
        """Read a forest file; verifies the inventory fingerprint if given."""
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != FOREST_MAGIC:
            raise SpaError(f"{path}: not a forest file (missing {FOREST_MAGIC!r})")
        header: dict[str, str] = {}
        idx = 1
        while idx < len(lines) and not lines[idx].startswith("tree "):
            key, _, value = lines[idx].partition(" ")
            header[key] = value
            idx += 1
        fingerprint = header.get("inventory_fingerprint", "-")
        if inventory is not None and fingerprint != "-" and fingerprint != inventory.fingerprint():
            raise SpaError(
                f"{path}: forest was trained with inventory {fingerprint}, "
                f"got {inventory.fingerprint()}")
        blocks: list[list[str]] = []
        for line in lines[idx:]:
            if line == "end":
                break
            if line.startswith("tree "):
                blocks.append([line])
            elif blocks:
                blocks[-1].append(line)
            else:
                raise SpaError(f"{path}: tree body before any tree header")
        assoc = cls(strategy=header.get("strategy", "adaptive"),
                    passthrough_reference=header.get("passthrough_reference", "split"))
        assoc.trees_ = [DecisionTree.from_text("\n".join(block)) for block in blocks]
        assoc.input_arity_ = int(header["input_arity"])
        assoc.output_arity_ = int(header["output_arity"])
        assoc.n_features_in_ = assoc.input_arity_
        if len(assoc.trees_) != assoc.output_arity_:
            raise SpaError(f"{path}: header declares {assoc.output_arity_} trees, "
                           f"found {len(assoc.trees_)}")
        assoc.representation_ = None if header.get("representation", "-") == "-" else header["representation"]
        assoc.encoding_ = None if header.get("encoding", "-") == "-" else header["encoding"]
        assoc.inventory_fingerprint_ = None if fingerprint == "-" else fingerprint
        return assoc


def train(examples, strategy: str = "adaptive", passthrough_reference: str = "split",
          output_legal_classes=None) -> PatternAssociator:
    """Convenience wrapper: fit a PatternAssociator from Example objects."""
    X, Y = examples_to_matrices(examples)
    assoc = PatternAssociator(strategy=strategy, passthrough_reference=passthrough_reference)
    return assoc.fit(X, Y, output_legal_classes=output_legal_classes)
