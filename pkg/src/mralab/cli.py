"""Command-line front end.

    mralab run --suite <name> [--param key=value]... [--config file.json]
               [--out path] [--format json|csv-summary]
    mralab list-checks --suite <name>

Exit codes: 0 all pass, 1 a check failed, 2 bad configuration, 3 internal
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .report import to_csv_summary, to_json
from .suites import SUITES, ConfigError, SuiteConfig, list_checks, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL, EXIT_IO = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"mralab: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mralab", description="Run mralab verification suites.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run a suite and emit a report")
    run.add_argument("--suite", required=True, choices=SUITES + ("all",))
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="numeric override; repeatable")
    run.add_argument("--config", help="flat JSON document of parameters (flags win)")
    run.add_argument("--out", help="output file (default: stdout)")
    run.add_argument("--format", choices=("json", "csv-summary"), default="json")
    ls = sub.add_parser("list-checks", help="list the check ids of a suite")
    ls.add_argument("--suite", required=True, choices=SUITES + ("all",))
    return ap


def _parse_params(items, config_path) -> dict:
    params = {}
    if config_path:
        try:
            with open(config_path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(doc, dict) or any(isinstance(v, (dict, list)) for v in doc.values()):
            raise ConfigError("config must be a flat JSON object")
        params.update(doc)
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "list-checks":
            print("\n".join(list_checks(args.suite)))
            return EXIT_OK
        config = SuiteConfig(args.suite, _parse_params(args.param, args.config), args.out)
    except ConfigError as exc:
        print(f"mralab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_suite(config)
        text = to_json(report) if args.format == "json" else to_csv_summary(report)
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL
    try:
        if config.output_path:
            with open(config.output_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"mralab: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    c = report.counts()
    print(f"mralab: suite {config.suite}: {c['pass']} pass, {c['fail']} fail, "
          f"{c['reported']} reported ({report.wall_time:.1f} s)", file=sys.stderr)
    return EXIT_FAIL if report.failed else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
