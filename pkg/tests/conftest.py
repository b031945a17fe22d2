# -*- coding: utf-8 -*-

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from knub_tracker import tracker  # noqa: E402

RUN_SLOW = os.environ.get("KNUB_RUN_SLOW") == "1"


def pytest_collection_modifyitems(config, items):
    if RUN_SLOW:
        return
    skip = pytest.mark.skip(reason="set KNUB_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def quiet_tracker():
    tracker.reset()
    tracker.quiet = True
    tracker.verbose = False
    yield
    tracker.quiet = False


@pytest.fixture
def fig1():
    from sample_graphs import fig1 as build
    return build()
