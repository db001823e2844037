"""Two-buyer protocol: two buyers pool budgets to buy from one seller.

buyer1 drives the purchase; buyer2 only contributes.  The naive variant
broadcasts buyer1's decision to the whole group, which also tells
buyer2 an outcome it has no use for.  The enclave variant confines the
decision branch to {buyer1, seller}, so buyer2 sees no traffic after
sending its contribution.
"""

from __future__ import annotations

from ..core import Choreography, LocatedValue, Location, LocationSet
from .bookseller import UNKNOWN_TITLE


class _Shared:
    def __init__(
        self,
        buyer1: Location,
        buyer2: Location,
        seller: Location,
        title: LocatedValue,
        buyer1_budget: LocatedValue,
        buyer2_budget: LocatedValue,
        catalog: LocatedValue,
    ):
        self.buyer1 = buyer1
        self.buyer2 = buyer2
        self.seller = seller
        self.location_set = LocationSet(buyer1, buyer2, seller)
        self.result_owner = buyer1
        self.title = title
        self.buyer1_budget = buyer1_budget
        self.buyer2_budget = buyer2_budget
        self.catalog = catalog

    def _negotiate(self, op):
        """Common prefix: share the title and price, collect the contribution.

        Returns (title_at_seller, price_at_buyer1, decision_at_buyer1).
        """
        buyer1, buyer2, seller = self.buyer1, self.buyer2, self.seller
        title_at_seller = op.comm(buyer1, seller, self.title)
        price_at_seller = op.locally(
            seller, lambda un: un.unwrap(self.catalog).get_price(un.unwrap(title_at_seller))
        )
        price_at_buyer1 = op.comm(seller, buyer1, price_at_seller)
        op.comm(seller, buyer2, price_at_seller)
        contribution = op.comm(buyer2, buyer1, self.buyer2_budget)
        decision_at_buyer1 = op.locally(
            buyer1,
            lambda un: un.unwrap(price_at_buyer1) is not None
            and un.unwrap(price_at_buyer1)
            <= un.unwrap(self.buyer1_budget) + un.unwrap(contribution),
        )
        return title_at_seller, price_at_buyer1, decision_at_buyer1

    def _close_deal(self, op, title_at_seller, price_at_buyer1, decision):
        """Decision branch; runs over whatever active set `op` carries."""
        buyer1, seller = self.buyer1, self.seller
        if decision:
            delivery_at_seller = op.locally(
                seller,
                lambda un: un.unwrap(self.catalog).get_delivery(un.unwrap(title_at_seller)),
            )
            return op.comm(seller, buyer1, delivery_at_seller)
        return op.locally(
            buyer1,
            lambda un: None if un.unwrap(price_at_buyer1) is not None else UNKNOWN_TITLE,
        )


class TwoBuyerNaive(_Shared, Choreography):
    """Decision broadcast goes to the whole group, buyer2 included."""

    def run(self, op):
        title_at_seller, price_at_buyer1, decision_at_buyer1 = self._negotiate(op)
        decision = op.broadcast(self.buyer1, decision_at_buyer1)
        return self._close_deal(op, title_at_seller, price_at_buyer1, decision)


class _DecisionEnclave(Choreography):
    """The decision branch, confined to {buyer1, seller}.

    Located values made before the enclave opened (the priced title,
    buyer1's decision) stay usable inside it.
    """

    def __init__(self, outer: _Shared, title_at_seller, price_at_buyer1, decision_at_buyer1):
        self.outer = outer
        self.location_set = LocationSet(outer.buyer1, outer.seller)
        self.result_owner = outer.buyer1
        self.title_at_seller = title_at_seller
        self.price_at_buyer1 = price_at_buyer1
        self.decision_at_buyer1 = decision_at_buyer1

    def run(self, op):
        decision = op.broadcast(self.outer.buyer1, self.decision_at_buyer1)
        return self.outer._close_deal(
            op, self.title_at_seller, self.price_at_buyer1, decision
        )


class TwoBuyerEnclave(_Shared, Choreography):
    """Same deal, but the decision stays between buyer1 and the seller."""

    def run(self, op):
        title_at_seller, price_at_buyer1, decision_at_buyer1 = self._negotiate(op)
        sub = _DecisionEnclave(self, title_at_seller, price_at_buyer1, decision_at_buyer1)
        return op.enclave(sub.location_set, sub)
