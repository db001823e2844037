"""Canonical payload serialization.

Every value crossing a transport is one envelope whose payload is the
canonical encoding of exactly one value: UTF-8 JSON text with sorted
keys and compact separators.  JSON-native values (None, bool, int,
float, str, lists, string-keyed dicts) encode as themselves.  Anything
else must be registered as a record codec and travels as a tagged
object:

    {"$type": "<registered name>", "fields": {...}}

The "$type" key is reserved: plain payload dicts may not use it.  For
every supported value, ``decode(encode(v)) == v``.  Unsupported values
(tuples, sets, NaN/infinite floats, non-string dict keys, unregistered
classes) are rejected with :class:`WireFormatError` at encode time so
non-portable payloads fail on the sender, not the receiver.
"""

from __future__ import annotations

import datetime
import json
from typing import Any, Callable

from .errors import WireFormatError

_TAG_KEY = "$type"

# name -> (cls, to_fields, from_fields); class id -> name
_codecs: dict[str, tuple[type, Callable[[Any], dict], Callable[[dict], Any]]] = {}
_codec_names: dict[type, str] = {}


def register_codec(
    cls: type,
    name: str,
    to_fields: Callable[[Any], dict],
    from_fields: Callable[[dict], Any],
) -> None:
    """Register a record type so its instances can cross the wire.

    `to_fields` must produce a dict of supported values; `from_fields`
    must invert it.  Re-registering the same class under the same name
    is a no-op; conflicting registrations are rejected.
    """
    if name in _codecs and _codecs[name][0] is not cls:
        raise WireFormatError(f"wire tag {name!r} already bound to {_codecs[name][0].__name__}")
    if cls in _codec_names and _codec_names[cls] != name:
        raise WireFormatError(f"{cls.__name__} already registered as {_codec_names[cls]!r}")
    _codecs[name] = (cls, to_fields, from_fields)
    _codec_names[cls] = name


def encode(value: Any) -> bytes:
    """Encode one value to canonical bytes."""
    try:
        text = json.dumps(
            _to_jsonable(value),
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
            allow_nan=False,
        )
    except ValueError as exc:  # allow_nan=False rejects nan/inf
        raise WireFormatError(f"payload is not canonically encodable: {exc}") from exc
    return text.encode("utf-8")


def decode(data: bytes) -> Any:
    """Decode canonical bytes back to the value they encode."""
    try:
        raw = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise WireFormatError(f"payload is not canonical JSON: {exc}") from exc
    return _from_jsonable(raw)


def _to_jsonable(value: Any) -> Any:
    if value is None or value is True or value is False:
        return value
    kind = type(value)
    if kind is int or kind is float or kind is str:
        return value
    if kind is list:
        return [_to_jsonable(item) for item in value]
    if kind is dict:
        if _TAG_KEY in value:
            raise WireFormatError(f"payload dicts may not use the reserved key {_TAG_KEY!r}")
        out = {}
        for key, item in value.items():
            if type(key) is not str:
                raise WireFormatError(f"payload dict keys must be strings, got {key!r}")
            out[key] = _to_jsonable(item)
        return out
    name = _codec_names.get(kind)
    if name is not None:
        _, to_fields, _ = _codecs[name]
        return {_TAG_KEY: name, "fields": _to_jsonable(to_fields(value))}
    raise WireFormatError(f"no wire representation for {kind.__name__}: {value!r}")


def _from_jsonable(raw: Any) -> Any:
    if isinstance(raw, list):
        return [_from_jsonable(item) for item in raw]
    if isinstance(raw, dict):
        if _TAG_KEY in raw:
            name = raw[_TAG_KEY]
            entry = _codecs.get(name)
            if entry is None:
                raise WireFormatError(f"unknown wire tag {name!r}")
            _, _, from_fields = entry
            return from_fields(_from_jsonable(raw.get("fields", {})))
        return {key: _from_jsonable(item) for key, item in raw.items()}
    return raw


register_codec(
    datetime.date,
    "date",
    lambda d: {"iso": d.isoformat()},
    lambda f: datetime.date.fromisoformat(f["iso"]),
)
