#!/usr/bin/env python3
"""
Check cnecc CLI outputs against golden reference values.

Each golden case is one cnecc invocation with the exit code it should
return and expectations on its output: substrings, or JSON fields compared
with an operator expression ('>=0.0115', '==0.0015432', bare numbers mean ==).

Assumptions:
- Golden file defaults to goldens/reference_values.yaml
- Requires: PyYAML  (install via: uv sync --extra dev)
"""

from __future__ import annotations
import argparse
import json
import re
import sys
import time
from typing import Any, Dict, List

import yaml
from click.testing import CliRunner

from cnecc.cli.main import cli


def parse_args() -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Check cnecc CLI outputs against golden values.")
    p.add_argument(
        "--file",
        default="goldens/reference_values.yaml",
        help="Path to golden cases YAML (default: %(default)s)",
    )
    p.add_argument(
        "--stop-on-fail",
        action="store_true",
        help="Stop after the first failure (default: continue).",
    )
    p.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Verbose output (print command output).",
    )
    return p.parse_args()


def color(s: str, c: str) -> str:
    codes = {"red": "31", "green": "32", "yellow": "33", "cyan": "36", "white": "37", "green_dim": "32;2"}
    return f"\x1b[{codes.get(c,'0')}m{s}\x1b[0m"


def load_goldens(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict) or "cases" not in data:
        raise ValueError("Golden file missing top-level 'cases' key.")
    return data


def parse_value_expr(expr: Any) -> tuple[str, Any]:
    """
    Parse expressions like '>=0.0115', '<=0.5', '==5'.
    Non-string values and strings without an operator compare with '=='.
    """
    if not isinstance(expr, str):
        return "==", expr
    m = re.match(r"^(>=|<=|==|>|<)\s*(-?[0-9]*\.?[0-9]+(?:[eE]-?[0-9]+)?)$", expr.strip())
    if m:
        return m.group(1), float(m.group(2))
    return "==", expr


def check_value(op: str, expected: Any, actual: Any) -> bool:
    if op == "==":
        if isinstance(expected, float) and isinstance(actual, (int, float)):
            return abs(actual - expected) <= 1e-6
        return actual == expected
    actual = float(actual)
    if op == ">=":
        return actual >= expected
    if op == "<=":
        return actual <= expected
    if op == ">":
        return actual > expected
    if op == "<":
        return actual < expected
    return False


def json_field(doc: Any, path: str) -> Any:
    """Dotted path lookup, e.g. 'sinks.T1.min_threshold'."""
    for part in path.split("."):
        doc = doc[int(part)] if isinstance(doc, list) else doc[part]
    return doc


def run_cases(goldens: Dict[str, Any], verbose: bool, stop_on_fail: bool) -> int:
    runner = CliRunner()
    total = 0
    total_fail = 0
    start_time = time.time()

    for case in goldens.get("cases", []):
        total += 1
        name = case.get("name", "<unnamed>")
        args: List[str] = [str(a) for a in case["args"]]
        expect = case.get("expect", {})

        result = runner.invoke(cli, args)
        print(color("cnecc", "yellow"), color(" ".join(args), "white"))
        if verbose:
            print(color(result.stdout, "green_dim"))

        ok = True
        details: List[str] = []

        exp_exit = expect.get("exit_code", 0)
        if result.exit_code != exp_exit:
            ok = False
            details.append(f"exit code {result.exit_code} != {exp_exit}")

        for needle in expect.get("output_contains", []):
            if str(needle) not in result.stdout:
                ok = False
                details.append(f"output missing {needle!r}")

        exp_json = expect.get("json", {})
        if exp_json:
            try:
                doc = json.loads(result.stdout)
                for path, expr in exp_json.items():
                    op, val = parse_value_expr(expr)
                    actual = json_field(doc, path)
                    if not check_value(op, val, actual):
                        ok = False
                        details.append(f"{path} = {actual!r}, expected {op}{val}")
            except (ValueError, KeyError, IndexError, TypeError) as e:
                ok = False
                details.append(f"json check error: {e}")

        if ok:
            print(color(f"[OK]   {name}", "green"))
        else:
            print(color(f"[FAIL] {name}", "red"))
            for d in details:
                print("       -", d)
            total_fail += 1
            if stop_on_fail:
                return total_fail
        print()

    dur_ms = int((time.time() - start_time) * 1000)
    passed = total - total_fail
    print()
    print(color(f"Summary: {passed}/{total} passed in {dur_ms} ms", "yellow" if total_fail else "green"))
    return total_fail


def main() -> int:
    args = parse_args()
    try:
        goldens = load_goldens(args.file)
    except Exception as e:
        print(color(f"Failed to load goldens: {e}", "red"))
        return 2

    failures = run_cases(goldens=goldens, verbose=args.verbose, stop_on_fail=args.stop_on_fail)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
