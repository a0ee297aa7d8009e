"""Shared hosts and catalogs; building them once keeps the suite fast."""

from __future__ import annotations

import pytest

from prt.antichain import build, host, host_for_levels
from prt.enumeration import SEVEN_CASES, cross_check


@pytest.fixture(scope="session")
def S60():
    return host(60, 0)


@pytest.fixture(scope="session")
def H24():
    return host_for_levels(24, 0)


@pytest.fixture(scope="session")
def A24(H24):
    return build(H24, 24)


@pytest.fixture(scope="session")
def cc2(H24):
    return cross_check(2, H24, 24)


@pytest.fixture(scope="session")
def case_chains(cc2):
    """One witness 2-chain per case number."""
    out = {}
    for d, C in cc2.census.witness.items():
        for k, ws in SEVEN_CASES.items():
            if d.critical_set == frozenset(ws):
                out[k] = C
    return out
