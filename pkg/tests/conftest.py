from __future__ import annotations

import datetime

import pytest

from choreo import Location, LocationSet
from choreo.protocols import Catalog


@pytest.fixture
def buyer():
    return Location("buyer")


@pytest.fixture
def seller():
    return Location("seller")


@pytest.fixture
def pair(buyer, seller):
    return LocationSet(buyer, seller)


@pytest.fixture
def trio():
    return LocationSet(Location("buyer1"), Location("buyer2"), Location("seller"))


@pytest.fixture
def catalog():
    return Catalog(
        prices={"TAPL": 80, "HoTT": 120},
        deliveries={
            "TAPL": datetime.date(2023, 1, 15),
            "HoTT": datetime.date(2023, 2, 1),
        },
    )
