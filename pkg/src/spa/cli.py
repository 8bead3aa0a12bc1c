"""Command-line interface: prepare, train, predict, eval, experiment, rules, codebook.

Each subcommand is a thin shell over the library; results go to stdout,
diagnostics to stderr, and any package error exits with status 1.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness
from .associator import PatternAssociator
from .encoding import Codebook, CodebookEncoder, DistributedEncoder, build_codebook
from .errors import SpaError
from .lexicon import (build_examples, read_dataset, representation_from_tag,
                      write_dataset)
from .phonemes import default_inventory, load_inventory


def _inventory(args):
    return load_inventory(args.inventory) if args.inventory else default_inventory()


def cmd_prepare(args) -> int:
    inventory = _inventory(args)
    pairs = harness.resolve_corpus(args.lexicon, inventory)
    result = build_examples(pairs, args.rep, inventory)
    write_dataset(result, args.out, inventory_fingerprint=inventory.fingerprint())
    print(f"wrote {len(result.examples)} examples to {args.out} "
          f"({result.unfit_count} pairs did not fit {args.rep})")
    if not result.examples:
        print("warning: the dataset is empty", file=sys.stderr)
    return 0


def _encoders_for(encoding, input_slots, output_slots, inventory, codebook_path):
    """Encoder pair matching the dataset's slot layout, or None for symbolic."""
    if encoding == "symbolic":
        return None
    if encoding == "distributed":
        return (DistributedEncoder(inventory, input_slots),
                DistributedEncoder(inventory, output_slots))
    if encoding == "ecc":
        if not codebook_path:
            raise SpaError("--codebook is required for the ecc encoding")
        enc = CodebookEncoder(Codebook.load(codebook_path))
        return (enc, enc)
    raise SpaError(f"unknown encoding {encoding!r}")


def cmd_train(args) -> int:
    inventory = _inventory(args)
    dataset = read_dataset(args.data)
    if dataset.inventory_fingerprint and dataset.inventory_fingerprint != inventory.fingerprint():
        raise SpaError(f"{args.data}: dataset was prepared with a different inventory")
    rep = representation_from_tag(dataset.representation_tag, inventory)
    encoder = _encoders_for(args.encoding, dataset.input_slots, dataset.output_slots,
                            inventory, args.codebook)
    assoc = harness.train_for_run(dataset.examples, rep, inventory, args.strategy,
                                  args.passthrough_reference, encoder=encoder)
    assoc.encoding_ = None if args.encoding == "symbolic" else args.encoding
    assoc.save(args.out)
    print(f"trained {assoc.output_arity_} trees on {len(dataset.examples)} examples; "
          f"forest written to {args.out}")
    return 0


def _load_forest(args, inventory):
    assoc = PatternAssociator.load(args.forest, inventory=inventory)
    if assoc.representation_ is None:
        raise SpaError(f"{args.forest}: forest has no representation tag; cannot align stems")
    rep = representation_from_tag(assoc.representation_, inventory)
    kind = (assoc.encoding_ or "symbolic").split(":")[0]
    encoder = _encoders_for(kind, rep.input_slots, rep.output_slots,
                            inventory, args.codebook)
    return assoc, rep, encoder


def cmd_predict(args) -> int:
    inventory = _inventory(args)
    assoc, rep, encoder = _load_forest(args, inventory)
    inventory.check_string(args.stem, context="stem")
    aligned = rep.align_stem(args.stem)
    if aligned is None:
        raise SpaError(f"stem {args.stem!r} does not fit representation {rep.tag}")
    rng = np.random.default_rng(args.seed)
    if encoder is None:
        predicted = assoc.predict_one(aligned)
    else:
        enc_in, enc_out = encoder
        bits = enc_in.transform([aligned]).astype("<U1")
        out_attrs = assoc.predict(bits)
        predicted = tuple(enc_out.inverse_transform(out_attrs.astype(np.int8), rng=rng)[0])
    print(rep.past_from_output(predicted))
    return 0


def cmd_eval(args) -> int:
    inventory = _inventory(args)
    dataset = read_dataset(args.data)
    assoc = PatternAssociator.load(args.forest, inventory=inventory)
    encoding = assoc.encoding_ or "symbolic"
    encoder = _encoders_for(encoding.split(":")[0], dataset.input_slots,
                            dataset.output_slots, inventory, args.codebook)
    metrics = harness.evaluate(
        assoc,
        [ex.input for ex in dataset.examples],
        [ex.output for ex in dataset.examples],
        regular=dataset.regular,
        encoder=encoder,
        rng=np.random.default_rng(args.seed),
    )
    report = harness.PastTenseReport(
        config=harness.ExperimentConfig(representation=dataset.representation_tag,
                                        encoding=encoding, strategy=assoc.strategy,
                                        train_size=0),
        metrics=[metrics])
    print(report.table())
    return 0


def cmd_experiment(args) -> int:
    config = harness.load_config(args.config)
    if args.out_dir:
        config.out_dir = args.out_dir
    report = harness.run_experiment(config)
    print(report.table())
    if config.out_dir:
        print(f"artifacts written to {config.out_dir}", file=sys.stderr)
    return 0


def cmd_rules(args) -> int:
    inventory = _inventory(args)
    assoc = PatternAssociator.load(args.forest, inventory=inventory)
    index = args.output - 1
    if not 0 <= index < assoc.output_arity_:
        raise SpaError(f"--output must be between 1 and {assoc.output_arity_}")
    rules = assoc.rules(index)
    if args.max is not None:
        rules = rules[:args.max]
    for rule in rules:
        print(rule.text())
    return 0


def cmd_codebook(args) -> int:
    inventory = _inventory(args)
    codebook = build_codebook(inventory.symbols(), args.length, args.distance,
                              rng=np.random.default_rng(args.seed))
    codebook.save(args.out)
    print(f"codebook for {len(inventory)} symbols: {args.length} bits, "
          f"verified distance >= {codebook.verify()}; written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spa",
        description="Symbolic pattern associator: train decision-tree forests "
                    "on verb stem/past-tense patterns and run experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="build a fixed-length dataset from a lexicon")
    p.add_argument("--lexicon", required=True,
                   help="lexicon path or synthetic:<regulars>[:<irregulars>[:<seed>]]")
    p.add_argument("--inventory", help="phoneme inventory file (default: shipped)")
    p.add_argument("--rep", required=True,
                   help="consecutive:<k> | left-template | right-template-coda")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train a forest on a prepared dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--inventory")
    p.add_argument("--strategy", default="adaptive",
                   choices=("adaptive", "majority", "passthrough"))
    p.add_argument("--passthrough-reference", default="split", choices=("split", "twin"))
    p.add_argument("--encoding", default="symbolic",
                   choices=("symbolic", "distributed", "ecc"))
    p.add_argument("--codebook", help="codebook file (ecc encoding)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict the past tense of one stem")
    p.add_argument("--forest", required=True)
    p.add_argument("--inventory")
    p.add_argument("--stem", required=True, help="stem as a phoneme string")
    p.add_argument("--codebook")
    p.add_argument("--seed", type=int, default=0, help="tie-break seed for bit decoding")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score a forest against a prepared dataset")
    p.add_argument("--forest", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--inventory")
    p.add_argument("--codebook")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run a config-described experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", help="override the config's artifact directory")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("rules", help="print a tree as precedence-ordered rules")
    p.add_argument("--forest", required=True)
    p.add_argument("--inventory")
    p.add_argument("--output", type=int, required=True,
                   help="output attribute position, 1-based")
    p.add_argument("--max", type=int, help="print at most this many rules")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("codebook", help="search and save an error-correcting codebook")
    p.add_argument("--inventory")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--distance", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_codebook)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
