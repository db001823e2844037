"""Role-based demo runner for the bundled protocols.

Each participant starts its own process with its role, a listen
address, and its peers' addresses, then supplies only the inputs its
role owns; everything else is a remote placeholder.  Example, two
terminals:

    choreo-demo bookseller --role buyer --listen 127.0.0.1:9001 \\
        --peer seller=127.0.0.1:9002 --title TAPL --budget 100
    choreo-demo bookseller --role seller --listen 127.0.0.1:9002 \\
        --peer buyer=127.0.0.1:9001
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from ..core import Location, LocationSet, Projector
from ..errors import ChoreoError, ConfigurationError
from ..transport.http import HttpEndpoint, HttpTransportConfig
from .bookseller import Bookseller
from .catalog import Catalog, demo_catalog
from .kvs import GetRequest, PutRequest, ReplicatedKv
from .password import PasswordAuth
from .tictactoe import DistributedGame, first_empty_brain, last_empty_brain, minimax_brain
from .two_buyer import TwoBuyerEnclave, TwoBuyerNaive

_BRAINS = {
    "first-empty": first_empty_brain,
    "last-empty": last_empty_brain,
    "minimax": minimax_brain,
}


def _load_catalog(path: str | None) -> Catalog:
    if path is None:
        return demo_catalog()
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return Catalog(
        prices={title: entry["price"] for title, entry in raw.items()},
        deliveries={
            title: datetime.date.fromisoformat(entry["delivery"]) for title, entry in raw.items()
        },
    )


def _load_requests(path: str):
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    requests = []
    for entry in raw:
        if entry["op"] == "put":
            requests.append(PutRequest(entry["key"], entry["value"]))
        elif entry["op"] == "get":
            requests.append(GetRequest(entry["key"]))
        else:
            raise ConfigurationError(f"unknown request op {entry['op']!r}")
    return requests


def _endpoint(args, role: str) -> HttpEndpoint:
    peers = {}
    for item in args.peer or []:
        name, sep, address = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--peer must be name=host:port, got {item!r}")
        peers[name] = address
    config = HttpTransportConfig(self_name=role, listen=args.listen, peers=peers)
    if args.transport_config:
        config = HttpTransportConfig.from_file(args.transport_config)
    return HttpEndpoint(config)


def _ask(prompt: str) -> str:
    print(prompt, end="", flush=True)
    return sys.stdin.readline().strip()


def run_bookseller(args) -> str:
    buyer, seller = Location("buyer"), Location("seller")
    me = Location(args.role)
    with _endpoint(args, args.role) as endpoint:
        projector = Projector(me, LocationSet(buyer, seller), endpoint)
        if args.role == "buyer":
            title = args.title if args.title is not None else _ask("title? ")
            choreography = Bookseller(
                buyer,
                seller,
                projector.local(title),
                projector.local(args.budget),
                projector.remote(seller),
            )
        else:
            choreography = Bookseller(
                buyer,
                seller,
                projector.remote(buyer),
                projector.remote(buyer),
                projector.local(_load_catalog(args.catalog)),
            )
        result = projector.epp_and_run(choreography)
        if args.role == "buyer":
            return f"delivery: {projector.unwrap(result)}"
        return "done"


def run_two_buyer(args) -> str:
    buyer1, buyer2, seller = Location("buyer1"), Location("buyer2"), Location("seller")
    me = Location(args.role)
    cls = TwoBuyerEnclave if args.variant == "enclave" else TwoBuyerNaive
    with _endpoint(args, args.role) as endpoint:
        projector = Projector(me, LocationSet(buyer1, buyer2, seller), endpoint)

        def mine(owner, value):
            return projector.local(value) if owner == me else projector.remote(owner)

        title = args.title if (args.role != "buyer1" or args.title is not None) else _ask("title? ")
        choreography = cls(
            buyer1,
            buyer2,
            seller,
            mine(buyer1, title),
            mine(buyer1, args.budget),
            mine(buyer2, args.budget),
            mine(seller, _load_catalog(args.catalog)),
        )
        result = projector.epp_and_run(choreography)
        if args.role == "buyer1":
            return f"delivery: {projector.unwrap(result)}"
        return "done"


def run_password(args) -> str:
    client, server = Location("client"), Location("server")
    me = Location(args.role)
    with _endpoint(args, args.role) as endpoint:
        projector = Projector(me, LocationSet(client, server), endpoint)
        if args.role == "client":
            attempt = args.attempt if args.attempt is not None else _ask("password? ")
            choreography = PasswordAuth(
                client, server, projector.local(attempt), projector.remote(server)
            )
        else:
            choreography = PasswordAuth(
                client, server, projector.remote(client), projector.local(args.correct)
            )
        result = projector.epp_and_run(choreography)
        if args.role == "client":
            return f"authenticated: {projector.unwrap(result)}"
        return "done"


def run_kvs(args) -> str:
    client, primary, backup = Location("client"), Location("primary"), Location("backup")
    me = Location(args.role)
    with _endpoint(args, args.role) as endpoint:
        projector = Projector(me, LocationSet(client, primary, backup), endpoint)
        if args.role == "client":
            requests = _load_requests(args.requests)
            if args.count is not None and args.count != len(requests):
                raise ConfigurationError(
                    f"--count {args.count} does not match {len(requests)} requests"
                )
            count = len(requests)
            located = projector.local(requests)
        else:
            if args.count is None:
                raise ConfigurationError("primary/backup need --count (the shared loop bound)")
            count = args.count
            located = projector.remote(client)
        result = projector.epp_and_run(
            ReplicatedKv(client, primary, backup, located, count)
        )
        if args.role == "client":
            return "\n".join(repr(r) for r in projector.unwrap(result["responses"]))
        key = "primary_store" if args.role == "primary" else "backup_store"
        return f"final store: {projector.unwrap(result[key])}"


def run_tictactoe(args) -> str:
    player_x, player_o = Location("player_x"), Location("player_o")
    me = player_x if args.role == "x" else player_o
    brain = _BRAINS[args.brain](args.role.upper())
    with _endpoint(args, me.name) as endpoint:
        projector = Projector(me, LocationSet(player_x, player_o), endpoint)
        choreography = DistributedGame(
            player_x,
            player_o,
            projector.local(brain) if me == player_x else projector.remote(player_x),
            projector.local(brain) if me == player_o else projector.remote(player_o),
        )
        status = projector.epp_and_run(choreography)
        return f"game over: {status.value}"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="choreo-demo", description=__doc__)
    sub = parser.add_subparsers(dest="protocol", required=True)

    def common(p):
        p.add_argument("--listen", required=True, help="host:port to listen on")
        p.add_argument("--peer", action="append", help="name=host:port (repeatable)")
        p.add_argument("--transport-config", help="JSON transport config; overrides flags")

    p = sub.add_parser("bookseller")
    common(p)
    p.add_argument("--role", choices=["buyer", "seller"], required=True)
    p.add_argument("--title")
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--catalog", help="JSON catalog file (seller)")
    p.set_defaults(run=run_bookseller)

    p = sub.add_parser("two-buyer")
    common(p)
    p.add_argument("--role", choices=["buyer1", "buyer2", "seller"], required=True)
    p.add_argument("--variant", choices=["naive", "enclave"], default="enclave")
    p.add_argument("--title")
    p.add_argument("--budget", type=int, default=50, help="this buyer's own budget")
    p.add_argument("--catalog")
    p.set_defaults(run=run_two_buyer)

    p = sub.add_parser("password")
    common(p)
    p.add_argument("--role", choices=["client", "server"], required=True)
    p.add_argument("--attempt", help="client's password attempt")
    p.add_argument("--correct", default="password", help="server's stored password")
    p.set_defaults(run=run_password)

    p = sub.add_parser("kvs")
    common(p)
    p.add_argument("--role", choices=["client", "primary", "backup"], required=True)
    p.add_argument("--requests", help="JSON request list (client)")
    p.add_argument("--count", type=int, help="request count (primary/backup)")
    p.set_defaults(run=run_kvs)

    p = sub.add_parser("tic-tac-toe")
    common(p)
    p.add_argument("--role", choices=["x", "o"], required=True)
    p.add_argument("--brain", choices=sorted(_BRAINS), default="minimax")
    p.set_defaults(run=run_tictactoe)

    args = parser.parse_args(argv)
    try:
        print(args.run(args))
    except ChoreoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
