"""Symbolic pattern associator.

Decision-tree forests that learn fixed-length symbol-pattern mappings,
with adaptive majority/passthrough defaults for unseen attribute values,
phoneme-template and bit-vector representations of verb stem/past-tense
data, and a seeded experiment harness.
"""

from .associator import (PatternAssociator, ProductionRule, apply_rules,
                         examples_to_matrices, export_rules, train)
from .encoding import (Codebook, CodebookEncoder, DistributedEncoder,
                       attributes_to_bits, bits_to_attributes, build_codebook,
                       decode_distributed, decode_ecc, encode_distributed,
                       encode_ecc, hamming_distance)
from .errors import (CodebookSearchError, ConfigError, DataConsistencyError,
                     EncodingError, InventoryError, LexiconError, SpaError)
from .harness import (ExperimentConfig, Metrics, SplitSpec, evaluate,
                      generate_corpus, load_config, parse_config, run_experiment,
                      run_probe, split)
from .lexicon import (Example, Representation, Template, VerbPair, align_template,
                      build_examples, de_align, load_lexicon, read_dataset,
                      regular_suffix, representation_from_tag, save_lexicon,
                      write_dataset)
from .phonemes import (Phoneme, PhonemeInventory, default_inventory,
                       load_inventory, parse_inventory, save_inventory)
from .tree import (DecisionTree, DefaultRule, PatternTreeClassifier, TreeNode,
                   choose_default, classify, entropy, gain_ratio, induce)

__version__ = "0.1.0"

__all__ = [
    "PatternAssociator", "ProductionRule", "apply_rules", "examples_to_matrices",
    "export_rules", "train",
    "Codebook", "CodebookEncoder", "DistributedEncoder", "attributes_to_bits",
    "bits_to_attributes", "build_codebook", "decode_distributed", "decode_ecc",
    "encode_distributed", "encode_ecc", "hamming_distance",
    "CodebookSearchError", "ConfigError", "DataConsistencyError", "EncodingError",
    "InventoryError", "LexiconError", "SpaError",
    "ExperimentConfig", "Metrics", "SplitSpec", "evaluate", "generate_corpus",
    "load_config", "parse_config", "run_experiment", "run_probe", "split",
    "Example", "Representation", "Template", "VerbPair", "align_template",
    "build_examples", "de_align", "load_lexicon", "read_dataset", "regular_suffix",
    "representation_from_tag", "save_lexicon", "write_dataset",
    "Phoneme", "PhonemeInventory", "default_inventory", "load_inventory",
    "parse_inventory", "save_inventory",
    "DecisionTree", "DefaultRule", "PatternTreeClassifier", "TreeNode",
    "choose_default", "classify", "entropy", "gain_ratio", "induce",
    "__version__",
]
