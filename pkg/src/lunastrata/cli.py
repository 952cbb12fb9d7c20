"""Command line entry point: ``lunastrata {strata,cox,report} SPEC``.

Exit codes: 0 success, 2 schema error, 3 cap or ceiling exceeded,
4 oracle mismatch.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from pydantic import ValidationError

from .errors import CapExceeded, OracleMismatch, SchemaError
from .report import emit, run
from .schema import parse


def bundled_examples() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("lunastrata.data").iterdir() if p.name.endswith(".json") and p.name != "problem-spec.schema.json")


def read_spec_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    if source in bundled_examples():
        return resources.files("lunastrata.data").joinpath(f"{source}.json").read_text(encoding="utf-8")
    raise SchemaError([("$", f"no such file or bundled example: {source}")])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lunastrata", description="Luna strata, class groups and Cox rings of V//G.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "strata": "list the strata with admissibility and class groups",
        "cox": "add a graded Cox ring presentation for every stratum",
        "report": "full report: Cox rings, quotient cones, boundary check, invariant ring",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", help=f"JSON file, '-' for stdin, or a bundled example ({', '.join(bundled_examples())})")
        p.add_argument("--max-degree", type=int, help="generator degree bound (default: Noether bound)")
        p.add_argument("--rel-degree", type=int, help="relation degree bound (default: twice the top generator degree)")
        p.add_argument("--oracle", action="store_true", help="cross-check against slow independent oracles")
        p.add_argument("--format", choices=["json", "text"], help="output format (default json)")
        p.add_argument("--cap-order", type=int, help="maximal group order (default 1000)")
        p.add_argument("--cap-weights", type=int, help="maximal number of distinct weights (default 16)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse(read_spec_text(args.spec))
        overrides = {
            "max_degree": args.max_degree,
            "rel_degree": args.rel_degree,
            "format": args.format,
            "cap_order": args.cap_order,
            "cap_weights": args.cap_weights,
        }
        opts = spec.options.model_dump()
        opts.update({k: v for k, v in overrides.items() if v is not None})
        if args.oracle:
            opts["oracle"] = True
        spec = spec.model_copy(update={"options": type(spec.options).model_validate(opts)})
        report = run(spec, section=args.command)
        sys.stdout.buffer.write(emit(report, spec.options.format))
        sys.stdout.flush()
        return 0
    except ValidationError as exc:
        for err in exc.errors():
            print(f"schema error at $.options.{'.'.join(map(str, err['loc']))}: {err['msg']}", file=sys.stderr)
        return SchemaError.exit_code
    except SchemaError as exc:
        for path, msg in exc.errors:
            print(f"schema error at {path}: {msg}", file=sys.stderr)
        return exc.exit_code
    except (CapExceeded, OracleMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
