"""Core model: locations, located values, unwrapping, operator semantics."""

from __future__ import annotations

import threading

import pytest

from choreo import (
    FunctionChoreography,
    InputBinder,
    LocatedValue,
    Location,
    LocationSet,
    OracleProvider,
    ProjectedProvider,
    Unwrapper,
)
from choreo.errors import (
    ConfigurationError,
    InternalInvariantError,
    LocationSetViolationError,
    ScopeViolationError,
    SelfCommunicationError,
)
from choreo.transport import CountingEndpoint, InProcessFabric, TraceRecord
from choreo import wire


def counted_fabric(location_set, timeout=5.0):
    fabric = InProcessFabric(location_set, default_timeout=timeout)
    trace = TraceRecord()
    endpoints = {loc: CountingEndpoint(fabric.endpoint(loc), trace) for loc in location_set}
    return endpoints, trace


class TestLocation:
    def test_equality_is_by_name(self):
        assert Location("alice") == Location("alice")
        assert Location("alice") != Location("bob")
        assert len({Location("alice"), Location("alice")}) == 1

    def test_name_must_be_non_empty(self):
        with pytest.raises(ValueError):
            Location("")

    def test_name_is_immutable(self):
        loc = Location("alice")
        with pytest.raises(AttributeError):
            loc.name = "mallory"


class TestLocationSet:
    def test_insertion_order_is_kept_and_duplicates_collapse(self):
        a, b = Location("a"), Location("b")
        group = LocationSet(b, a, b)
        assert group.names == ("b", "a")
        assert len(group) == 2

    def test_subset(self):
        a, b, c = Location("a"), Location("b"), Location("c")
        assert LocationSet(a, b).issubset(LocationSet(a, b, c))
        assert not LocationSet(a, c).issubset(LocationSet(a, b))
        assert LocationSet().issubset(LocationSet(a))

    def test_equality_ignores_order(self):
        a, b = Location("a"), Location("b")
        assert LocationSet(a, b) == LocationSet(b, a)
        assert LocationSet(a) != LocationSet(a, b)

    def test_membership(self):
        a, b = Location("a"), Location("b")
        assert a in LocationSet(a)
        assert b not in LocationSet(a)


class TestUnwrap:
    def test_unwrap_local_is_identity(self, buyer, seller):
        assert Unwrapper(buyer).unwrap(LocatedValue.local(42, buyer)) == 42
        assert Unwrapper(seller).unwrap(LocatedValue.local("TAPL", seller)) == "TAPL"

    def test_owner_mismatch_is_a_scope_violation(self, buyer, seller):
        with pytest.raises(ScopeViolationError):
            Unwrapper(buyer).unwrap(LocatedValue.remote(seller))

    def test_remote_content_is_an_impossible_state(self, buyer):
        with pytest.raises(InternalInvariantError, match="unreachable"):
            Unwrapper(buyer).unwrap(LocatedValue.remote(buyer))

    def test_unwrapper_is_callable(self, buyer):
        un = Unwrapper(buyer)
        assert un(LocatedValue.local("x", buyer)) == "x"


class TestLocatedValue:
    def test_equality(self, buyer, seller):
        assert LocatedValue.local(1, buyer) == LocatedValue.local(1, buyer)
        assert LocatedValue.local(1, buyer) != LocatedValue.local(2, buyer)
        assert LocatedValue.local(1, buyer) != LocatedValue.remote(buyer)
        assert LocatedValue.remote(buyer) == LocatedValue.remote(buyer)
        assert LocatedValue.remote(buyer) != LocatedValue.remote(seller)

    def test_repr_shows_owner(self, buyer):
        assert "buyer" in repr(LocatedValue.local(1, buyer))
        assert "remote" in repr(LocatedValue.remote(buyer))


class TestInputBinder:
    def test_target_view(self, buyer, seller):
        binder = InputBinder(buyer)
        assert binder.at(buyer, 10) == LocatedValue.local(10, buyer)
        assert binder.at(seller, 99) == LocatedValue.remote(seller)
        assert binder.at(seller) == LocatedValue.remote(seller)

    def test_global_view_requires_all_payloads(self, buyer, seller):
        binder = InputBinder(None)
        assert binder.at(seller, 7) == LocatedValue.local(7, seller)
        with pytest.raises(ConfigurationError):
            binder.at(buyer)

    def test_target_view_requires_own_payload(self, buyer):
        with pytest.raises(ConfigurationError):
            InputBinder(buyer).at(buyer)


class TestLocally:
    def test_at_target_evaluates(self, buyer, pair):
        op = OracleProvider(pair)
        assert op.locally(buyer, lambda un: 7) == LocatedValue.local(7, buyer)

    def test_elsewhere_skips_computation(self, buyer, seller, pair):
        endpoints, _ = counted_fabric(pair)
        op = ProjectedProvider(seller, pair, endpoints[seller])
        ran = []
        result = op.locally(buyer, lambda un: ran.append(True))
        assert result == LocatedValue.remote(buyer)
        assert not ran

    def test_out_of_set_location_is_rejected(self, buyer, seller, pair):
        endpoints, _ = counted_fabric(pair)
        op = ProjectedProvider(buyer, pair, endpoints[buyer])
        with pytest.raises(LocationSetViolationError, match="[Ii]nvalid use of location carol"):
            op.locally(Location("carol"), lambda un: 0)


class TestComm:
    def test_sender_emits_exactly_one_envelope(self, buyer, seller, pair):
        endpoints, trace = counted_fabric(pair)
        op = ProjectedProvider(buyer, pair, endpoints[buyer])
        result = op.comm(buyer, seller, LocatedValue.local("TAPL", buyer))
        assert result == LocatedValue.remote(seller)
        assert trace.payloads("buyer", "seller") == [wire.encode("TAPL")]

    def test_round_trip_between_threads(self, buyer, seller, pair):
        endpoints, _ = counted_fabric(pair)
        value = LocatedValue.local("TAPL", buyer)
        received = {}

        def run(target):
            op = ProjectedProvider(target, pair, endpoints[target])
            received[target] = op.comm(buyer, seller, value if target == buyer else LocatedValue.remote(buyer))

        threads = [threading.Thread(target=run, args=(loc,)) for loc in pair]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert received[seller] == LocatedValue.local("TAPL", seller)
        assert received[buyer] == LocatedValue.remote(seller)

    def test_third_party_sees_no_traffic(self, trio):
        buyer1, buyer2, seller = trio.members
        endpoints, trace = counted_fabric(trio)
        op = ProjectedProvider(buyer2, trio, endpoints[buyer2])
        result = op.comm(buyer1, seller, LocatedValue.remote(buyer1))
        assert result == LocatedValue.remote(seller)
        assert len(trace) == 0

    def test_self_communication_is_rejected(self, buyer, pair):
        op = OracleProvider(pair)
        with pytest.raises(SelfCommunicationError):
            op.comm(buyer, buyer, LocatedValue.local(1, buyer))

    def test_wrong_owner_is_a_scope_violation(self, buyer, seller, pair):
        op = OracleProvider(pair)
        with pytest.raises(ScopeViolationError):
            op.comm(buyer, seller, LocatedValue.local(1, seller))


class TestBroadcast:
    def test_fan_out_follows_set_order(self, trio):
        buyer1, buyer2, seller = trio.members
        endpoints, trace = counted_fabric(trio)
        op = ProjectedProvider(buyer1, trio, endpoints[buyer1])
        assert op.broadcast(buyer1, LocatedValue.local(True, buyer1)) is True
        assert [(e.sender, e.receiver) for e in trace.sends] == [
            ("buyer1", "buyer2"),
            ("buyer1", "seller"),
        ]

    def test_two_member_set_sends_one_envelope(self, buyer, seller, pair):
        endpoints, trace = counted_fabric(pair)
        op = ProjectedProvider(buyer, pair, endpoints[buyer])
        assert op.broadcast(buyer, LocatedValue.local(True, buyer)) is True
        assert len(trace) == 1

    def test_singleton_set_sends_nothing(self):
        alice = Location("alice")
        group = LocationSet(alice)
        endpoints, trace = counted_fabric(group)
        op = ProjectedProvider(alice, group, endpoints[alice])
        assert op.broadcast(alice, LocatedValue.local(5, alice)) == 5
        assert len(trace) == 0

    def test_receivers_agree_with_sender(self, trio):
        buyer1, buyer2, seller = trio.members
        endpoints, _ = counted_fabric(trio)
        results = {}

        def run(target):
            op = ProjectedProvider(target, trio, endpoints[target])
            value = (
                LocatedValue.local({"k": [1, 2]}, buyer1)
                if target == buyer1
                else LocatedValue.remote(buyer1)
            )
            results[target] = op.broadcast(buyer1, value)

        threads = [threading.Thread(target=run, args=(loc,)) for loc in trio]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results[buyer1] == results[buyer2] == results[seller] == {"k": [1, 2]}


class TestOracleProvider:
    def test_comm_rebinds_payload(self, buyer, seller, pair):
        op = OracleProvider(pair)
        assert op.comm(buyer, seller, LocatedValue.local("x", buyer)) == LocatedValue.local("x", seller)

    def test_broadcast_returns_bare_payload(self, buyer, pair):
        op = OracleProvider(pair)
        assert op.broadcast(buyer, LocatedValue.local(41, buyer)) == 41

    def test_locally_always_evaluates_with_scoped_unwrapper(self, buyer, seller, pair):
        op = OracleProvider(pair)
        mine = op.locally(seller, lambda un: "secret")
        # seller's value is populated globally, but only seller may open it
        assert op.locally(seller, lambda un: un.unwrap(mine)) == LocatedValue.local("secret", seller)
        with pytest.raises(ScopeViolationError):
            op.locally(buyer, lambda un: un.unwrap(mine))


class TestCall:
    def test_empty_choreography_returns_plainly(self, pair):
        sub = FunctionChoreography(pair, lambda op: 0)
        assert OracleProvider(pair).call(sub) == 0

    def test_set_mismatch_is_rejected(self, buyer, pair):
        sub = FunctionChoreography(LocationSet(buyer), lambda op: 0)
        with pytest.raises(LocationSetViolationError):
            OracleProvider(pair).call(sub)
