"""Command-line interface: run / sweep / validate experiment configs."""

from __future__ import annotations

import argparse
import sys

from .experiments import (ConfigError, emit_report, parse_config,
                          render_report, run_scenario)


def _load_config(path, args):
    with open(path) as fh:
        config = parse_config(fh.read())
    overrides = {}
    if args.output:
        overrides["output_path"] = args.output
    if args.format:
        overrides["output_format"] = args.format
    if args.seed is not None:
        if config.monte_carlo is None:
            raise ConfigError("--seed given but config has no monte_carlo section")
        overrides["monte_carlo"] = type(config.monte_carlo)(
            shots=config.monte_carlo.shots, seed=args.seed)
    if overrides:
        import dataclasses
        config = dataclasses.replace(config, **overrides)
    return config


def _execute(config):
    report = run_scenario(config)
    if config.output_path:
        path = emit_report(report, config.output_path, config.output_format)
        print(f"wrote {path} ({len(report.rows)} rows)")
    else:
        sys.stdout.write(render_report(report, config.output_format))


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cvbeams",
        description="Spatial entanglement scenarios for bright optical beams")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run a scenario config"),
                            ("sweep", "run a config with a parameter sweep"),
                            ("validate", "parse and validate a config only")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to JSON config file")
        p.add_argument("--output", help="override output path")
        p.add_argument("--format", choices=("csv", "json"),
                       help="override output format")
        p.add_argument("--seed", type=int, help="override Monte Carlo seed")
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config, args)
        if args.command == "validate":
            print(f"config ok: scenario={config.scenario}")
            return 0
        if args.command == "sweep" and config.sweep is None:
            raise ConfigError("field 'sweep': required by the sweep command")
        _execute(config)
        return 0
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
