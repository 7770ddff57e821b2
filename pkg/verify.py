#!/usr/bin/env python3
"""Smoke check for a fresh install: imports, settings and one worked reduction."""

import sys
import traceback


def check_imports() -> list[str]:
    from builder import build_dd_system, build_ss_system  # noqa: F401
    from cli.main import main  # noqa: F401
    from exact import PuiseuxSeriesTrunc, RatFunc, RatMatrix  # noqa: F401
    from mahler import fixed_point_gauge, reduce_2m_constants  # noqa: F401
    from operators import OperatorCase, ScalarOperator  # noqa: F401
    from solver import pade_reconstruct, solve_rational  # noqa: F401
    from systems import check_consistency, gauge  # noqa: F401

    return ["exact, operators, systems, builder, mahler, solver and cli load"]


def check_settings() -> list[str]:
    from config.settings import get_settings

    settings = get_settings()
    return [
        f"environment={settings.environment} log_level={settings.log_level}",
        f"orders {settings.default_order}..{settings.max_order}, step budget {settings.step_budget}",
    ]


def check_reduction() -> list[str]:
    from cli.catalogue import block_example_2m
    from mahler import reduce_2m_constants
    from systems import check_consistency

    system = block_example_2m()
    if not check_consistency(system).consistent:
        raise AssertionError("catalogue pair is not consistent")
    B1, B2, certificate = reduce_2m_constants(system)
    if not certificate.verify():
        raise AssertionError("reduction certificate does not verify")
    return [f"B1 = {B1}", f"B2 = {B2}", f"ramification {certificate.ramification}"]


CHECKS = [
    ("Imports", check_imports),
    ("Settings", check_settings),
    ("2M reduction", check_reduction),
]


def main() -> int:
    print("mahlerpairs install check")
    failed = []
    for name, check in CHECKS:
        print(f"\n[{name}]")
        try:
            for line in check():
                print(f"  ✓ {line}")
        except Exception as e:
            print(f"  ❌ {e}")
            traceback.print_exc()
            failed.append(name)

    print()
    if failed:
        print(f"⚠️  failed: {', '.join(failed)}")
        print("  pip install -r requirements.txt")
        return 1
    print("🎉 all checks passed; next: pytest -m 'not slow'")
    return 0


if __name__ == "__main__":
    sys.exit(main())
