"""Bookseller protocol: one buyer negotiates a purchase with a seller.

The buyer sends a title, the seller answers with the price, the buyer
shares the buy/pass decision, and on a buy the seller sends the
delivery date.  The decision is a broadcast so both sides can branch on
it with a plain host-language conditional.
"""

from __future__ import annotations

from ..core import Choreography, LocatedValue, Location, LocationSet

# Distinguished buyer outcome for a title the seller does not stock.
# It rides the same message shape as a decline: the seller prices an
# unknown title as None, the decision broadcast is False, and the buyer
# tells the two cases apart locally from the priced value.
UNKNOWN_TITLE = "#unknown-title"


class Bookseller(Choreography):
    """Returns the delivery date at the buyer: a date, None, or UNKNOWN_TITLE."""

    def __init__(
        self,
        buyer: Location,
        seller: Location,
        title: LocatedValue,
        budget: LocatedValue,
        catalog: LocatedValue,
    ):
        self.buyer = buyer
        self.seller = seller
        self.location_set = LocationSet(buyer, seller)
        self.result_owner = buyer
        self.title = title
        self.budget = budget
        self.catalog = catalog

    def run(self, op):
        buyer, seller = self.buyer, self.seller
        title_at_seller = op.comm(buyer, seller, self.title)
        price_at_seller = op.locally(
            seller, lambda un: un.unwrap(self.catalog).get_price(un.unwrap(title_at_seller))
        )
        price_at_buyer = op.comm(seller, buyer, price_at_seller)
        decision_at_buyer = op.locally(
            buyer,
            lambda un: un.unwrap(price_at_buyer) is not None
            and un.unwrap(price_at_buyer) <= un.unwrap(self.budget),
        )
        decision = op.broadcast(buyer, decision_at_buyer)
        if decision:
            delivery_at_seller = op.locally(
                seller, lambda un: un.unwrap(self.catalog).get_delivery(un.unwrap(title_at_seller))
            )
            return op.comm(seller, buyer, delivery_at_seller)
        return op.locally(
            buyer,
            lambda un: None if un.unwrap(price_at_buyer) is not None else UNKNOWN_TITLE,
        )
