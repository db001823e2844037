"""Book catalog shared by the bookseller-style protocols."""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class Catalog:
    """Price and delivery tables; every priced title has a delivery date."""

    prices: Mapping[str, int]
    deliveries: Mapping[str, datetime.date]

    def __post_init__(self):
        missing = sorted(set(self.prices) - set(self.deliveries))
        if missing:
            raise ValueError(f"titles priced but without delivery dates: {missing}")

    def get_price(self, title: str) -> int | None:
        return self.prices.get(title)

    def get_delivery(self, title: str) -> datetime.date:
        return self.deliveries[title]


def demo_catalog() -> Catalog:
    """Small default catalog for demos and tests."""
    return Catalog(
        prices={"TAPL": 80, "HoTT": 120, "SF": 35},
        deliveries={
            "TAPL": datetime.date(2023, 1, 15),
            "HoTT": datetime.date(2023, 2, 1),
            "SF": datetime.date(2023, 1, 3),
        },
    )
