#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys
import json
import datetime
from typing import Any, Dict, List

# -----------------------------------
# Run tracking
# -----------------------------------
# Progress and diagnostics go to stderr; stdout is kept for machine output.

CRITICAL_TYPES = {"io_failure", "parse_failure", "domain_error", "consistency_error", "budget_exhausted"}


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class RunTracker:
    def __init__(self):
        self.errors: List[Dict[str, Any]] = []
        self.warnings: List[Dict[str, Any]] = []
        self.stats: Dict[str, Any] = {}
        self.quiet = False
        self.verbose = False

    def reset(self) -> None:
        self.errors.clear()
        self.warnings.clear()
        self.stats.clear()

    def add_error(self, error_type: str, context: str, exception: Any):
        self.errors.append({
            "type": error_type,
            "context": context,
            "exception": str(exception)[:200],
            "timestamp": _now(),
        })
        print(f"❌ ERROR [{error_type}]: {context} - {exception}", file=sys.stderr)

    def add_warning(self, warning_type: str, context: str):
        self.warnings.append({
            "type": warning_type,
            "context": context,
            "timestamp": _now(),
        })
        if not self.quiet:
            print(f"⚠️  WARNING [{warning_type}]: {context}", file=sys.stderr)

    def set_stat(self, key: str, value: Any):
        self.stats[key] = value
        if not self.quiet:
            print(f"📊 {key}: {value}", file=sys.stderr)

    def has_critical_errors(self) -> bool:
        return any(e["type"] in CRITICAL_TYPES for e in self.errors)

    def get_summary(self) -> str:
        summary = f"\n{'='*70}\n🔺 KNUB RUN SUMMARY\n{'='*70}\n"
        summary += f"STATS:\n{json.dumps(self.stats, indent=2, default=str)}\n"
        if self.warnings:
            summary += f"\n⚠️  WARNINGS ({len(self.warnings)}):\n"
            for w in self.warnings:
                summary += f"  - {w['type']}: {w['context']}\n"
        if self.errors:
            summary += f"\n❌ ERRORS ({len(self.errors)}):\n"
            for e in self.errors:
                summary += f"  - {e['type']}: {e['context']}\n    {e['exception']}\n"
        else:
            summary += "\n✅ No critical errors\n"
        summary += f"{'='*70}\n"
        return summary

    def should_exit_with_error(self) -> bool:
        return self.has_critical_errors()


tracker = RunTracker()


def say(message: str, detail: bool = False) -> None:
    """Progress line on stderr; `detail` lines only show in verbose mode."""
    if tracker.quiet or (detail and not tracker.verbose):
        return
    print(message, file=sys.stderr)
