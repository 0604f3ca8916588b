"""Command line entry point: one subcommand per experiment.

Exit status: 0 on success, 2 for configuration errors, 3 when a numerical
contract is violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ConfigError, ContractViolation, InvalidParameterError
from .harness import EXPERIMENTS, ExperimentConfig, load_config_file, run

log = logging.getLogger("randmaps")

# flag -> parameter key
_FLAGS = {
    "d": ("--d", int, "system dimension d"),
    "M": ("--env", int, "environment dimension M"),
    "L": ("--L", int, "unitary baker steps per measurement"),
    "s": ("--steps", int, "number of factors / maps / time steps s"),
    "N": ("--dim", int, "matrix dimension N"),
    "xi": ("--xi", float, "scale xi"),
    "q": ("--q", float, "edge parameter q (synthetic fits, finite-radial curves)"),
    "samples": ("--samples", int, "number of samples"),
    "bins": ("--bins", int, "histogram bins"),
    "seed": ("--seed", int, "master seed"),
    "phases": ("--phases", str, "random | fixed:PHI1,PHI2"),
    "variant": ("--variant", str, "standard-erfc | gaussian-q"),
    "kind": ("--kind", str, "complex | real Ginibre"),
    "order": ("--order", int, "Fuss-Catalan order"),
    "points": ("--points", int, "curve grid size"),
    "law": ("--law", str, "curve law: fc1 fc2 fc3 radial finite-radial ginibre-finite"),
    "source": ("--source", str, "fit-q data: maps | baker | ginibre | synthetic"),
    "spacing": ("--spacing", str, "curve grid: auto | uniform | graded"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for key, (flag, typ, help_) in _FLAGS.items():
        common.add_argument(flag, dest=key, type=typ, default=None, help=help_)
    common.add_argument("--out", default=None, help="output CSV path")
    common.add_argument("--config", default=None, help="JSON file of parameters; flags override it")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="randmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=f"run the {name} experiment")
    return parser


def config_from_args(args) -> ExperimentConfig:
    params = {}
    out = None
    if args.config:
        data = load_config_file(args.config)
        exp = data.pop("experiment", args.experiment)
        if exp != args.experiment:
            raise ConfigError(f"config is for {exp!r}, not {args.experiment!r}")
        out = data.pop("out", None)
        params.update(data)
    params.update({k: getattr(args, k) for k in _FLAGS if getattr(args, k) is not None})
    return ExperimentConfig(args.experiment, params, args.out or out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = config_from_args(args)
        result = run(config, workers=args.workers)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return 3
    log.info("wrote %s", ", ".join(result.files))
    print(json.dumps(result.summary, indent=2, sort_keys=True, default=float))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
