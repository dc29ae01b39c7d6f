from __future__ import annotations

import pytest

from quandlehom import (
    OperatorCalculus,
    RackSpace,
    build_dihedral,
    inner_group,
    make_xset,
)


@pytest.fixture(scope="session")
def r3():
    return build_dihedral(3)


@pytest.fixture(scope="session")
def aug3(r3):
    return inner_group(r3)


@pytest.fixture(scope="session")
def r5():
    return build_dihedral(5)


@pytest.fixture(scope="session")
def aug5(r5):
    return inner_group(r5)


@pytest.fixture(scope="session")
def spaces3(aug3):
    return {tag: RackSpace(make_xset(aug3, tag)) for tag in ("point", "self", "group")}


@pytest.fixture(scope="session")
def spaces5(aug5):
    return {tag: RackSpace(make_xset(aug5, tag)) for tag in ("point", "self", "group")}


@pytest.fixture(scope="session")
def calc3(aug3):
    return OperatorCalculus(aug3, 3)


@pytest.fixture(scope="session")
def calc5(aug5):
    return OperatorCalculus(aug5, 5)
