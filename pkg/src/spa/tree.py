"""Decision-tree induction over categorical symbol attributes.

Trees are grown to purity with gain-ratio splitting (no pruning; the data
this package targets is noise free). Every internal node carries a default
rule for branch values never observed in training:

* ``majority``     answer with the most frequent class at that node;
* ``passthrough``  answer with the unseen attribute value itself.

Under the ``adaptive`` strategy each node picks between the two by
comparing how many of its training rows each default would have gotten
right: M rows match the node majority class, P rows have a class equal to
their own value of the split attribute, and passthrough is chosen only
when P > M.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_label_vector, as_pattern_matrix

STRATEGIES = ("majority", "passthrough", "adaptive")
_INDENT = "  "


def entropy(counts) -> float:
    """Shannon entropy in bits of a class-count multiset."""
    if hasattr(counts, "values"):
        counts = list(counts.values())
    arr = np.asarray(list(counts), dtype=float)
    if arr.size == 0 or arr.sum() <= 0:
        raise ValueError("entropy of an empty multiset is undefined")
    if (arr < 0).any():
        raise ValueError("negative counts")
    return _entropy_from_counts(arr)


def _entropy_from_counts(counts: np.ndarray) -> float:
    positive = counts[counts > 0]
    p = positive / positive.sum()
    return float(-(p * np.log2(p)).sum())


def _gain_ratio_from_codes(x_codes, y_codes, n_values, n_classes) -> float:
    n = y_codes.shape[0]
    value_counts = np.bincount(x_codes, minlength=n_values)
    observed = value_counts > 0
    if observed.sum() < 2:
        return 0.0  # a single observed value cannot split
    base = _entropy_from_counts(np.bincount(y_codes, minlength=n_classes).astype(float))
    joint = np.bincount(x_codes * n_classes + y_codes,
                        minlength=n_values * n_classes).reshape(n_values, n_classes)
    weights = value_counts[observed] / n
    conditional = 0.0
    for w, row in zip(weights, joint[observed]):
        conditional += w * _entropy_from_counts(row.astype(float))
    split_info = float(-(weights * np.log2(weights)).sum())
    if split_info <= 0.0:
        return 0.0
    return (base - conditional) / split_info


def gain_ratio(X, y, attr: int) -> float:
    """Information gain of splitting on ``attr``, normalized by split info."""
    X = as_pattern_matrix(X)
    y = as_label_vector(y, X.shape[0])
    if not 0 <= attr < X.shape[1]:
        raise ValueError(f"attribute index {attr} out of range")
    _, x_codes = np.unique(X[:, attr], return_inverse=True)
    y_vocab, y_codes = np.unique(y, return_inverse=True)
    return _gain_ratio_from_codes(x_codes.astype(np.int64), y_codes.astype(np.int64),
                                  int(x_codes.max()) + 1, len(y_vocab))


@dataclass(frozen=True)
class DefaultRule:
    """What an internal node answers for a branch value it never saw."""
    mode: str  # "majority" or "passthrough"
    majority_class: str


@dataclass
class TreeNode:
    """Leaf (label) or internal node (attribute, branches, default)."""
    label: str | None = None
    attribute: int | None = None
    branches: dict[str, "TreeNode"] = field(default_factory=dict)
    default: DefaultRule | None = None

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def leaves(self) -> int:
        if self.is_leaf:
            return 1
        return sum(child.leaves() for child in self.branches.values())


def choose_default(X, y, split_attr: int, strategy: str, reference: int | None = None) -> DefaultRule:
    """Pick the default rule for a node from the rows that reach it.

    ``reference`` is the attribute whose values the passthrough count P is
    measured against; it defaults to the split attribute itself. Ties
    (P == M) go to majority: passthrough must be employed by strictly more
    rows to win.
    """
    X = as_pattern_matrix(X)
    y = as_label_vector(y, X.shape[0])
    vocab, codes = np.unique(y, return_inverse=True)
    counts = np.bincount(codes)
    majority_class = str(vocab[int(counts.argmax())])  # first max = smallest symbol
    if strategy == "majority":
        return DefaultRule("majority", majority_class)
    ref = split_attr if reference is None else reference
    p_count = int(np.count_nonzero(X[:, ref] == y))
    if strategy == "passthrough":
        return DefaultRule("passthrough", majority_class)
    if strategy != "adaptive":
        raise ValueError(f"unknown strategy {strategy!r}")
    m_count = int(counts.max())
    mode = "passthrough" if p_count > m_count else "majority"
    return DefaultRule(mode, majority_class)


class _Induction:
    """One induction run: symbol matrices factorized to integer codes."""

    def __init__(self, X, y, strategy, passthrough_reference, twin_index):
        self.X = X
        self.y = y
        self.strategy = strategy
        self.n, self.d = X.shape
        self.x_codes = np.empty((self.n, self.d), dtype=np.int64)
        self.x_vocabs = []
        for j in range(self.d):
            vocab, inv = np.unique(X[:, j], return_inverse=True)
            self.x_codes[:, j] = inv
            self.x_vocabs.append(vocab)
        self.y_vocab, self.y_codes = np.unique(y, return_inverse=True)
        self.n_classes = len(self.y_vocab)
        if passthrough_reference == "split":
            self.reference = None
        elif passthrough_reference == "twin":
            self.reference = twin_index
        else:
            raise ValueError(f"unknown passthrough reference {passthrough_reference!r}")

    def grow(self, rows: np.ndarray, available: tuple[int, ...]) -> TreeNode:
        y_here = self.y_codes[rows]
        counts = np.bincount(y_here, minlength=self.n_classes)
        present = np.flatnonzero(counts)
        if len(present) == 1:
            return TreeNode(label=str(self.y_vocab[present[0]]))
        best_ratio, best_attr = 0.0, None
        for a in available:
            ratio = _gain_ratio_from_codes(
                self.x_codes[rows, a], y_here, len(self.x_vocabs[a]), self.n_classes)
            if ratio > best_ratio:  # strict: equal ratios keep the smaller index
                best_ratio, best_attr = ratio, a
        majority_class = str(self.y_vocab[int(counts.argmax())])
        if best_attr is None:
            return TreeNode(label=majority_class)
        default = self._default_for(rows, best_attr, counts)
        column = self.x_codes[rows, best_attr]
        remaining = tuple(a for a in available if a != best_attr)
        node = TreeNode(attribute=best_attr, default=default)
        for code in np.unique(column):
            node.branches[str(self.x_vocabs[best_attr][code])] = self.grow(
                rows[column == code], remaining)
        return node

    def _default_for(self, rows, split_attr, counts) -> DefaultRule:
        majority_class = str(self.y_vocab[int(counts.argmax())])
        if self.strategy == "majority":
            return DefaultRule("majority", majority_class)
        if self.strategy == "passthrough":
            return DefaultRule("passthrough", majority_class)
        ref = split_attr if self.reference is None else self.reference
        if ref is None:
            return DefaultRule("majority", majority_class)
        p_count = int(np.count_nonzero(self.X[rows, ref] == self.y[rows]))
        m_count = int(counts.max())
        mode = "passthrough" if p_count > m_count else "majority"
        return DefaultRule(mode, majority_class)


def induce(X, y, strategy: str = "adaptive", available=None,
           passthrough_reference: str = "split", twin_index: int | None = None) -> TreeNode:
    """Grow a tree for one output attribute from symbol patterns and labels."""
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    X = as_pattern_matrix(X)
    y = as_label_vector(y, X.shape[0])
    run = _Induction(X, y, strategy, passthrough_reference, twin_index)
    if available is None:
        available = range(X.shape[1])
    avail = tuple(sorted(set(int(a) for a in available)))
    if avail and not (0 <= avail[0] and avail[-1] < X.shape[1]):
        raise ValueError("available attribute index out of range")
    return run.grow(np.arange(X.shape[0]), avail)


def classify(node: TreeNode, x, passthrough_reference: str = "split",
             twin_index: int | None = None, legal_classes=None) -> str:
    """Traverse a tree; defaults make this total on any well-formed input."""
    x = tuple(x)
    while not node.is_leaf:
        child = node.branches.get(x[node.attribute])
        if child is not None:
            node = child
            continue
        rule = node.default
        if rule.mode == "passthrough":
            ref = node.attribute if passthrough_reference == "split" else twin_index
            if ref is not None:
                candidate = x[ref]
                if legal_classes is None or candidate in legal_classes:
                    return candidate
        return rule.majority_class
    return node.label


@dataclass
class DecisionTree:
    """An induced tree plus the context needed to classify with it."""
    root: TreeNode
    output_index: int = 0
    strategy: str = "adaptive"
    passthrough_reference: str = "split"
    twin_index: int | None = None
    legal_classes: frozenset | None = None

    def classify(self, x) -> str:
        return classify(self.root, x, self.passthrough_reference,
                        self.twin_index, self.legal_classes)

    def to_text(self) -> str:
        """Render the tree in a plain-text nested format.

        One header line, then one line per node, children indented two
        spaces under their parent with a ``value -> `` branch marker::

            tree output=0 strategy=adaptive reference=split twin=- legal=*
            split 0 default=passthrough majority=a
              a -> leaf a
              l -> split 2 default=majority majority=l
                u -> leaf l

        ``legal`` is ``*`` (unrestricted) or ``<count>:<symbols>``.
        ``from_text`` parses this exactly: parse(print) is the identity.
        """
        twin = "-" if self.twin_index is None else str(self.twin_index)
        if self.legal_classes is None:
            legal = "*"
        else:
            syms = "".join(sorted(self.legal_classes))
            legal = f"{len(syms)}:{syms}"
        header = (f"tree output={self.output_index} strategy={self.strategy} "
                  f"reference={self.passthrough_reference} twin={twin} legal={legal}")
        lines = [header]
        _render_node(self.root, 0, lines)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DecisionTree":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("tree "):
            raise ValueError("tree text must start with a 'tree' header line")
        fields = dict(part.split("=", 1) for part in lines[0].split()[1:])
        twin = None if fields["twin"] == "-" else int(fields["twin"])
        if fields["legal"] == "*":
            legal = None
        else:
            count, _, syms = fields["legal"].partition(":")
            if len(syms) != int(count):
                raise ValueError("corrupt legal-class list in tree header")
            legal = frozenset(syms)
        root, consumed = _parse_node(lines, 1, 0)
        if consumed != len(lines):
            raise ValueError("trailing content after tree body")
        return cls(root=root, output_index=int(fields["output"]), strategy=fields["strategy"],
                   passthrough_reference=fields["reference"], twin_index=twin, legal_classes=legal)


def _render_node(node: TreeNode, depth: int, lines: list[str], prefix: str = "") -> None:
    pad = _INDENT * depth
    if node.is_leaf:
        lines.append(f"{pad}{prefix}leaf {node.label}")
        return
    lines.append(f"{pad}{prefix}split {node.attribute} "
                 f"default={node.default.mode} majority={node.default.majority_class}")
    for value, child in node.branches.items():
        _render_node(child, depth + 1, lines, prefix=f"{value} -> ")


def _parse_node(lines: list[str], idx: int, depth: int) -> tuple[TreeNode, int]:
    body = lines[idx][len(_INDENT) * depth:]
    if body.startswith("leaf "):
        return TreeNode(label=body[len("leaf "):]), idx + 1
    if not body.startswith("split "):
        raise ValueError(f"unparseable tree line: {lines[idx]!r}")
    parts = body.split()
    attribute = int(parts[1])
    mode = parts[2].split("=", 1)[1]
    majority = parts[3].split("=", 1)[1]
    node = TreeNode(attribute=attribute, default=DefaultRule(mode, majority))
    idx += 1
    child_pad = _INDENT * (depth + 1)
    while idx < len(lines) and lines[idx].startswith(child_pad) and " -> " in lines[idx]:
        branch_body = lines[idx][len(child_pad):]
        value, _, rest = branch_body.partition(" -> ")
        if len(value) != 1:
            break  # deeper content of a nested split, not a branch of this node
        lines[idx] = child_pad + rest  # strip the branch marker, parse the node in place
        child, idx = _parse_node(lines, idx, depth + 1)
        node.branches[value] = child
    if not node.branches:
        raise ValueError(f"split node without branches at line {idx}")
    return node, idx


class PatternTreeClassifier(ClassifierMixin, BaseEstimator):
    """Single-output decision tree over categorical symbol attributes.

    Parameters
    ----------
    strategy : "adaptive", "majority" or "passthrough"
        How internal nodes answer unseen branch values.
    passthrough_reference : "split" or "twin"
        Attribute the passthrough default copies from: the node's own split
        attribute, or a fixed twin input attribute (``twin_index``).
    twin_index : int, optional
        Input attribute paired with this output under "twin" referencing.
    legal_classes : iterable of symbols, optional
        If given, a passthrough answer outside this set falls back to the
        node's majority class.
    """

    def __init__(self, strategy="adaptive", passthrough_reference="split",
                 twin_index=None, legal_classes=None):
        self.strategy = strategy
        self.passthrough_reference = passthrough_reference
        self.twin_index = twin_index
        self.legal_classes = legal_classes

    def fit(self, X, y):
        X = as_pattern_matrix(X)
        y = as_label_vector(y, X.shape[0])
        root = induce(X, y, strategy=self.strategy,
                      passthrough_reference=self.passthrough_reference,
                      twin_index=self.twin_index)
        legal = None if self.legal_classes is None else frozenset(self.legal_classes)
        self.tree_ = DecisionTree(root=root, strategy=self.strategy,
                                  passthrough_reference=self.passthrough_reference,
                                  twin_index=self.twin_index, legal_classes=legal)
        self.classes_ = np.unique(y)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "tree_")
        X = as_pattern_matrix(X, arity=self.n_features_in_)
        return np.array([self.tree_.classify(row) for row in X], dtype="<U1")
