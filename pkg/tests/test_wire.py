"""Canonical serialization: round trips, golden bytes, rejection rules."""

from __future__ import annotations

import datetime
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from choreo import wire
from choreo.errors import WireFormatError
from choreo.protocols import (
    AckResponse,
    Board,
    GetRequest,
    PutRequest,
    ValueResponse,
)

FIXTURES = Path(__file__).parent / "fixtures" / "wire"

GOLDEN_CASES = {
    "string": "TAPL",
    "integer": 80,
    "boolean": True,
    "option_date_none": None,
    "option_date_some": datetime.date(2023, 1, 15),
    "kv_get": GetRequest("key03"),
    "kv_put": PutRequest("key03", "a1b2c3d4"),
    "kv_value_some": ValueResponse("a1b2c3d4"),
    "kv_value_none": ValueResponse(None),
    "kv_ack": AckResponse(),
    "board": Board((None, "X", None, "O", "X", None, None, None, "O")),
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_bytes_are_stable(name):
    value = GOLDEN_CASES[name]
    golden = (FIXTURES / f"{name}.golden").read_bytes()
    assert wire.encode(value) == golden
    assert wire.decode(golden) == value


@pytest.mark.parametrize(
    "value",
    [
        "hello",
        "unicode: प्रेम, 愛, ❤",
        0,
        -17,
        2**80,
        3.5,
        True,
        False,
        None,
        [1, [2, "three"], None],
        {"a": 1, "b": {"c": [True]}},
        datetime.date(1999, 12, 31),
        [GetRequest("k"), PutRequest("k", "v"), AckResponse()],
        {"nested": ValueResponse(None)},
    ],
)
def test_round_trip_identity(value):
    assert wire.decode(wire.encode(value)) == value


def test_encoding_is_canonical():
    assert wire.encode({"b": 1, "a": 2}) == b'{"a":2,"b":1}'
    assert wire.encode("héllo") == '"héllo"'.encode("utf-8")


class TestRejection:
    @pytest.mark.parametrize(
        "value",
        [
            (1, 2),
            {1: "int key"},
            {"$type": "sneaky"},
            object(),
            {1, 2},
            b"raw bytes",
            float("nan"),
            float("inf"),
        ],
    )
    def test_unsupported_values_fail_at_encode(self, value):
        with pytest.raises(WireFormatError):
            wire.encode(value)

    @pytest.mark.parametrize("data", [b"not json", b"\xff\xfe", b'{"$type":"nope","fields":{}}'])
    def test_garbage_fails_at_decode(self, data):
        with pytest.raises(WireFormatError):
            wire.decode(data)


class TestRegistry:
    def test_reregistering_same_class_is_idempotent(self):
        wire.register_codec(
            GetRequest, "kv.get", lambda r: {"key": r.key}, lambda f: GetRequest(f["key"])
        )

    def test_conflicting_name_is_rejected(self):
        class Impostor:
            pass

        with pytest.raises(WireFormatError):
            wire.register_codec(Impostor, "kv.get", lambda r: {}, lambda f: Impostor())

    def test_conflicting_class_is_rejected(self):
        with pytest.raises(WireFormatError):
            wire.register_codec(GetRequest, "kv.other", lambda r: {}, lambda f: None)


# Payload trees built from the JSON-native vocabulary plus records.
json_values = st.recursive(
    st.none()
    | st.booleans()
    | st.integers()
    | st.floats(allow_nan=False, allow_infinity=False)
    | st.text()
    | st.dates()
    | st.builds(PutRequest, st.text(max_size=5), st.text(max_size=5)),
    lambda children: st.lists(children, max_size=4)
    | st.dictionaries(st.text(max_size=5).filter(lambda s: s != "$type"), children, max_size=4),
    max_leaves=20,
)


@given(json_values)
def test_round_trip_identity_property(value):
    assert wire.decode(wire.encode(value)) == value
