#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from typing import Optional


class KnubError(Exception):
    """Base class for every error raised by the knub modules."""


class GraphParseError(KnubError, ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class DomainError(KnubError, ValueError):
    """An argument is outside the domain of the operation (r < 2, l >= k, ...)."""


class ConsistencyError(KnubError):
    """Stats do not belong to the graph, or an internal invariant broke."""


class BudgetExhausted(KnubError):
    """Counting did not finish before its deadline."""


class OracleRefused(KnubError):
    """Brute-force oracle called on a graph that is too large."""
