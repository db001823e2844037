"""Replicated key-value store: client, primary, and one backup.

The client sends each request to the primary.  The request kind is then
branched on inside an enclave of {primary, backup}: gets are served
from the primary's state, puts are forwarded to the backup, which
applies and acknowledges before the primary applies and responds.  The
client never exchanges a byte with the backup; were the kind broadcast
outside the enclave, that implementation detail would leak.

The handwritten twin (`run_handwritten`) implements the same wire
conversations as three explicit node-local programs over the same
transport, serving as the differential and benchmarking baseline.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass

from .. import wire
from ..core import (
    Choreography,
    LocatedValue,
    Location,
    LocationSet,
)
from ..transport.base import TransportEndpoint


@dataclass(frozen=True)
class GetRequest:
    key: str


@dataclass(frozen=True)
class PutRequest:
    key: str
    value: str


@dataclass(frozen=True)
class ValueResponse:
    value: str | None


@dataclass(frozen=True)
class AckResponse:
    pass


KvRequest = GetRequest | PutRequest
KvResponse = ValueResponse | AckResponse

wire.register_codec(GetRequest, "kv.get", lambda r: {"key": r.key}, lambda f: GetRequest(f["key"]))
wire.register_codec(
    PutRequest,
    "kv.put",
    lambda r: {"key": r.key, "value": r.value},
    lambda f: PutRequest(f["key"], f["value"]),
)
wire.register_codec(
    ValueResponse, "kv.value", lambda r: {"value": r.value}, lambda f: ValueResponse(f["value"])
)
wire.register_codec(AckResponse, "kv.ack", lambda r: {}, lambda f: AckResponse())


class _DoBackup(Choreography):
    """Per-request branch at {primary, backup}: serve a get or replicate a put.

    The backup applies a put and acknowledges before the primary applies
    it, so the backup is never behind a response the client has seen.
    """

    def __init__(self, primary, backup, location_set, request_at_primary, primary_store, backup_store):
        self.primary = primary
        self.backup = backup
        self.location_set = location_set
        self.result_owner = primary
        self.request_at_primary = request_at_primary
        self.primary_store = primary_store
        self.backup_store = backup_store

    def run(self, op):
        primary, backup = self.primary, self.backup
        kind_at_primary = op.locally(
            primary,
            lambda un: "put" if isinstance(un.unwrap(self.request_at_primary), PutRequest) else "get",
        )
        kind = op.broadcast(primary, kind_at_primary)
        if kind == "put":
            request_at_backup = op.comm(primary, backup, self.request_at_primary)
            ack_at_backup = op.locally(
                backup, lambda un: _apply_put(un.unwrap(self.backup_store), un.unwrap(request_at_backup))
            )
            ack_at_primary = op.comm(backup, primary, ack_at_backup)

            def apply_then_respond(un):
                _apply_put(un.unwrap(self.primary_store), un.unwrap(self.request_at_primary))
                return un.unwrap(ack_at_primary)

            return op.locally(primary, apply_then_respond)
        return op.locally(
            primary,
            lambda un: ValueResponse(
                un.unwrap(self.primary_store).get(un.unwrap(self.request_at_primary).key)
            ),
        )


def _apply_put(store: dict, request: PutRequest) -> AckResponse:
    store[request.key] = request.value
    return AckResponse()


class ReplicatedKv(Choreography):
    """Processes `request_count` requests, one at a time.

    `requests` is located at the client; the count is an ordinary shared
    parameter because all three node-local programs need the same loop
    bound and the backup must learn nothing else from the client.
    Returns the responses at the client and each node's final store.
    """

    def __init__(
        self,
        client: Location,
        primary: Location,
        backup: Location,
        requests: LocatedValue,
        request_count: int,
    ):
        self.client = client
        self.primary = primary
        self.backup = backup
        self.location_set = LocationSet(client, primary, backup)
        self.requests = requests
        self.request_count = request_count

    def run(self, op):
        client, primary, backup = self.client, self.primary, self.backup
        primary_store = op.locally(primary, lambda un: {})
        backup_store = op.locally(backup, lambda un: {})
        responses = op.locally(client, lambda un: [])
        enclave_set = LocationSet(primary, backup)
        for index in range(self.request_count):
            request_at_client = op.locally(
                client, lambda un, i=index: un.unwrap(self.requests)[i]
            )
            request_at_primary = op.comm(client, primary, request_at_client)
            response_at_primary = op.enclave(
                enclave_set,
                _DoBackup(primary, backup, enclave_set, request_at_primary, primary_store, backup_store),
            )
            response_at_client = op.comm(primary, client, response_at_primary)
            op.locally(
                client,
                lambda un: un.unwrap(responses).append(un.unwrap(response_at_client)),
            )
        return {
            "responses": responses,
            "primary_store": primary_store,
            "backup_store": backup_store,
        }


def replay_reference(requests: list[KvRequest]) -> tuple[list[KvResponse], dict[str, str]]:
    """Independent in-memory replay: expected responses and final store."""
    store: dict[str, str] = {}
    responses: list[KvResponse] = []
    for request in requests:
        if isinstance(request, PutRequest):
            store[request.key] = request.value
            responses.append(AckResponse())
        else:
            responses.append(ValueResponse(store.get(request.key)))
    return responses, dict(store)


def random_requests(
    seed: int,
    count: int,
    get_ratio: float = 0.5,
    *,
    key_count: int = 16,
    value_length: int = 8,
) -> list[KvRequest]:
    """Seeded workload: uniformly random keys, fixed-length random values."""
    rng = random.Random(seed)
    keys = [f"key{i:02d}" for i in range(key_count)]
    alphabet = "abcdefghijklmnopqrstuvwxyz0123456789"
    requests: list[KvRequest] = []
    for _ in range(count):
        key = rng.choice(keys)
        if rng.random() < get_ratio:
            requests.append(GetRequest(key))
        else:
            value = "".join(rng.choice(alphabet) for _ in range(value_length))
            requests.append(PutRequest(key, value))
    return requests


# --- handwritten twin -------------------------------------------------------
#
# Three explicit node-local programs over the same endpoints and wire
# format as the choreography, so any runtime difference between the two
# is the projection layer itself.


def client_node(
    endpoint: TransportEndpoint, primary: str, requests: list[KvRequest]
) -> list[KvResponse]:
    responses = []
    for request in requests:
        endpoint.send(primary, wire.encode(request))
        responses.append(wire.decode(endpoint.receive(primary)))
    return responses


def primary_node(
    endpoint: TransportEndpoint, client: str, backup: str, request_count: int
) -> dict[str, str]:
    store: dict[str, str] = {}
    for _ in range(request_count):
        request = wire.decode(endpoint.receive(client))
        if isinstance(request, PutRequest):
            endpoint.send(backup, wire.encode("put"))
            endpoint.send(backup, wire.encode(request))
            ack = wire.decode(endpoint.receive(backup))
            store[request.key] = request.value
            endpoint.send(client, wire.encode(ack))
        else:
            endpoint.send(backup, wire.encode("get"))
            endpoint.send(client, wire.encode(ValueResponse(store.get(request.key))))
    return store


def backup_node(endpoint: TransportEndpoint, primary: str, request_count: int) -> dict[str, str]:
    store: dict[str, str] = {}
    for _ in range(request_count):
        kind = wire.decode(endpoint.receive(primary))
        if kind == "put":
            request = wire.decode(endpoint.receive(primary))
            store[request.key] = request.value
            endpoint.send(primary, wire.encode(AckResponse()))
    return store


def run_handwritten(
    endpoints: dict[str, TransportEndpoint],
    requests: list[KvRequest],
    *,
    client: str = "client",
    primary: str = "primary",
    backup: str = "backup",
) -> tuple[list[KvResponse], dict[str, str], dict[str, str]]:
    """Drive the three node programs concurrently; returns responses and stores."""
    outcome: dict[str, object] = {}
    failures: list[BaseException] = []

    def guard(name, fn):
        def runner():
            try:
                outcome[name] = fn()
            except BaseException as exc:  # noqa: BLE001 (re-raised below)
                failures.append(exc)

        return runner

    threads = [
        threading.Thread(
            target=guard("client", lambda: client_node(endpoints[client], primary, requests)),
            daemon=True,
        ),
        threading.Thread(
            target=guard(
                "primary",
                lambda: primary_node(endpoints[primary], client, backup, len(requests)),
            ),
            daemon=True,
        ),
        threading.Thread(
            target=guard("backup", lambda: backup_node(endpoints[backup], primary, len(requests))),
            daemon=True,
        ),
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    if failures:
        raise failures[0]
    return outcome["client"], outcome["primary"], outcome["backup"]
