"""Core model: locations, located values, choreographies, projection.

A choreography is a single program describing every participant's
behavior from a third-party view.  Instead of compiling it ahead of
time, projection happens at run time by dependency injection: the body
receives an operator provider bound to one projection target, and each
operator call (`locally`, `comm`, `broadcast`, `enclave`, `call`)
specializes itself to that target's node-local action: evaluate, send,
receive, or skip.  The same body can also be handed the global
interpreter (see :func:`oracle_run`), which executes every location's
actions inline and serves as the reference semantics in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator

from . import wire
from .errors import (
    ConfigurationError,
    EnclaveScopeError,
    InternalInvariantError,
    LocationSetViolationError,
    ScopeViolationError,
    SelfCommunicationError,
)


@dataclass(frozen=True)
class Location:
    """A named participant.  Two locations are equal iff their names are."""

    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("location name must be a non-empty string")

    def __str__(self) -> str:
        return self.name


class LocationSet:
    """Ordered collection of distinct locations.

    Iteration follows insertion order (first occurrence wins), which
    fixes broadcast send order and makes traces reproducible.  Equality
    ignores order: two sets are equal iff they contain the same names.
    """

    __slots__ = ("_members", "_names")

    def __init__(self, *locations: Location):
        members: list[Location] = []
        seen: set[str] = set()
        for loc in locations:
            if not isinstance(loc, Location):
                raise TypeError(f"expected Location, got {type(loc).__name__}")
            if loc.name not in seen:
                seen.add(loc.name)
                members.append(loc)
        self._members = tuple(members)
        self._names = frozenset(seen)

    @property
    def members(self) -> tuple[Location, ...]:
        return self._members

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(loc.name for loc in self._members)

    def issubset(self, other: "LocationSet") -> bool:
        return self._names <= other._names

    def __contains__(self, loc: Location) -> bool:
        return isinstance(loc, Location) and loc.name in self._names

    def __iter__(self) -> Iterator[Location]:
        return iter(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocationSet):
            return NotImplemented
        return self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"LocationSet({', '.join(self.names)})"


_REMOTE = object()  # payload slot marker: value lives elsewhere


class LocatedValue:
    """A value bound to one location.

    Carries a payload only where the owner is the projection target;
    everywhere else it is an opaque placeholder.  `owner` is None only
    for the placeholder produced by skipping an enclave that did not
    declare its result owner.
    """

    __slots__ = ("owner", "_payload")

    def __init__(self, owner: Location | None, payload: Any = _REMOTE):
        self.owner = owner
        self._payload = payload

    @classmethod
    def local(cls, payload: Any, owner: Location) -> "LocatedValue":
        if not isinstance(owner, Location):
            raise TypeError("owner must be a Location")
        return cls(owner, payload)

    @classmethod
    def remote(cls, owner: Location | None) -> "LocatedValue":
        return cls(owner)

    @property
    def is_local(self) -> bool:
        return self._payload is not _REMOTE

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocatedValue):
            return NotImplemented
        if self.owner != other.owner:
            return False
        if self.is_local != other.is_local:
            return False
        return (not self.is_local) or self._payload == other._payload

    __hash__ = None  # payloads are not generally hashable

    def __repr__(self) -> str:
        at = self.owner.name if self.owner else "?"
        if self.is_local:
            return f"<{self._payload!r} @ {at}>"
        return f"<remote @ {at}>"


class Unwrapper:
    """Opens located values owned by exactly one location."""

    __slots__ = ("scope",)

    def __init__(self, scope: Location):
        self.scope = scope

    def unwrap(self, value: LocatedValue) -> Any:
        owner = value.owner
        if owner is None or owner.name != self.scope.name:
            name = owner.name if owner else "an undeclared location"
            raise ScopeViolationError(
                f"cannot unwrap a value owned by {name} at {self.scope.name}"
            )
        payload = value._payload
        if payload is _REMOTE:
            raise InternalInvariantError(
                f"value owned by {self.scope.name} carries no payload here; "
                "this state is unreachable under correct projection"
            )
        return payload

    __call__ = unwrap


class Choreography:
    """One global program over a fixed location set.

    Subclasses set `location_set`, implement `run`, and may declare
    `result_owner` when the result is a single located value, so that
    locations skipping an enclave can still name the result's owner.
    `run` must interact with the world only through the given provider;
    ambient I/O or communication breaks projection.
    """

    location_set: LocationSet
    result_owner: Location | None = None

    def run(self, op: "OperatorProvider") -> Any:
        raise NotImplementedError


class FunctionChoreography(Choreography):
    """Adapter turning a plain function of the provider into a choreography."""

    def __init__(
        self,
        location_set: LocationSet,
        body: Callable[["OperatorProvider"], Any],
        result_owner: Location | None = None,
    ):
        self.location_set = location_set
        self.result_owner = result_owner
        self._body = body

    def run(self, op: "OperatorProvider") -> Any:
        return self._body(op)


_ABSENT = object()


@dataclass(frozen=True)
class InputBinder:
    """Builds located inputs for one point of view.

    For a projection target, `at` wraps the payload only when the owner
    is the target and returns a placeholder otherwise (the payload may
    then be omitted).  With `target=None` it builds the global view in
    which every input carries its payload, as the oracle requires.
    """

    target: Location | None

    def at(self, owner: Location, payload: Any = _ABSENT) -> LocatedValue:
        if self.target is None or owner == self.target:
            if payload is _ABSENT:
                where = self.target.name if self.target else "the global view"
                raise ConfigurationError(
                    f"input owned by {owner.name} needs a payload at {where}"
                )
            return LocatedValue.local(payload, owner)
        return LocatedValue.remote(owner)


class OperatorProvider:
    """The injected implementation of the choreographic operators.

    `target` is the projection target (None for the global interpreter)
    and `active_set` is the location set the current (sub-)choreography
    runs over.  Every location argument is validated against the active
    set at run time; host type systems that can express the same check
    statically are welcome to, but the dynamic check is the floor.
    """

    __slots__ = ("target", "active_set", "_member_names", "_target_name")

    def __init__(self, target: Location | None, active_set: LocationSet):
        self.target = target
        self.active_set = active_set
        self._member_names = active_set._names
        self._target_name = target.name if target is not None else None

    def locally(self, at: Location, computation: Callable[[Unwrapper], Any]) -> LocatedValue:
        """Run `computation` at `at`; elsewhere produce a placeholder."""
        if at.name not in self._member_names:
            self._reject(at)
        return self._locally(at, computation)

    def comm(self, sender: Location, receiver: Location, value: LocatedValue) -> LocatedValue:
        """Move a value owned by `sender` to `receiver`."""
        if sender.name not in self._member_names:
            self._reject(sender)
        if receiver.name not in self._member_names:
            self._reject(receiver)
        if sender.name == receiver.name:
            raise SelfCommunicationError(
                f"comm from {sender.name} to itself is not projectable; "
                "use locally for node-local steps"
            )
        self._check_owner(value, sender, "comm")
        return self._comm(sender, receiver, value)

    def broadcast(self, sender: Location, value: LocatedValue) -> Any:
        """Share a value owned by `sender` with every active location.

        Returns the bare payload, equal at all members, so host-language
        conditionals may branch on it.
        """
        if sender.name not in self._member_names:
            self._reject(sender)
        self._check_owner(value, sender, "broadcast")
        return self._broadcast(sender, value)

    def enclave(self, subset: LocationSet, sub: Choreography) -> LocatedValue:
        """Run `sub` at `subset` only; other locations skip it entirely.

        Broadcasts inside `sub` reach only `subset`, so knowledge of a
        choice made inside stays inside.
        """
        if not subset.issubset(self.active_set):
            extra = sorted(set(subset.names) - set(self.active_set.names))
            raise EnclaveScopeError(
                f"enclave members {extra} are outside the active set {list(self.active_set.names)}"
            )
        if sub.location_set != subset:
            raise EnclaveScopeError(
                f"sub-choreography declares {list(sub.location_set.names)} "
                f"but the enclave was opened for {list(subset.names)}"
            )
        return self._enclave(subset, sub)

    def call(self, sub: Choreography) -> Any:
        """Run `sub` over the same active set and return its result directly."""
        if sub.location_set != self.active_set:
            raise LocationSetViolationError(
                f"called choreography runs on {list(sub.location_set.names)}, "
                f"not the active set {list(self.active_set.names)}"
            )
        return self._call(sub)

    def _reject(self, loc: Location) -> None:
        raise LocationSetViolationError(
            f"invalid use of location {loc.name}: not in the active set "
            f"{list(self.active_set.names)}"
        )

    @staticmethod
    def _check_owner(value: LocatedValue, expected: Location, op: str) -> None:
        if not isinstance(value, LocatedValue):
            raise TypeError(f"{op} needs a LocatedValue, got {type(value).__name__}")
        owner = value.owner
        if owner is None or owner.name != expected.name:
            raise ScopeViolationError(
                f"{op} from {expected.name}: value is owned by "
                f"{owner.name if owner else 'an undeclared location'}"
            )

    @staticmethod
    def _open(value: LocatedValue) -> Any:
        # Only called on values the current view must hold a payload for.
        if not value.is_local:
            raise InternalInvariantError(
                "located value carries no payload where projection guarantees one"
            )
        return value._payload

    def _locally(self, at, computation):
        raise NotImplementedError

    def _comm(self, sender, receiver, value):
        raise NotImplementedError

    def _broadcast(self, sender, value):
        raise NotImplementedError

    def _enclave(self, subset, sub):
        raise NotImplementedError

    def _call(self, sub):
        raise NotImplementedError


class ProjectedProvider(OperatorProvider):
    """Operators specialized for one projection target over a transport.

    Every payload that moves is round-tripped through the canonical
    wire format, on every transport, so in-process and networked runs
    are observationally identical and non-portable payloads fail early.
    """

    __slots__ = ("_endpoint", "_unwrapper")

    def __init__(self, target: Location, active_set: LocationSet, endpoint):
        super().__init__(target, active_set)
        self._endpoint = endpoint
        self._unwrapper = Unwrapper(target)

    def _locally(self, at, computation):
        if at.name == self._target_name:
            return LocatedValue(at, computation(self._unwrapper))
        return LocatedValue(at)

    def _comm(self, sender, receiver, value):
        if sender.name == self._target_name:
            self._endpoint.send(receiver.name, wire.encode(self._open(value)))
            return LocatedValue(receiver)
        if receiver.name == self._target_name:
            payload = wire.decode(self._endpoint.receive(sender.name))
            return LocatedValue(receiver, payload)
        return LocatedValue(receiver)

    def _broadcast(self, sender, value):
        if sender.name == self._target_name:
            data = wire.encode(self._open(value))
            for member in self.active_set:
                if member.name != sender.name:
                    self._endpoint.send(member.name, data)
            # Return the decoded form so every member sees the same value.
            return wire.decode(data)
        return wire.decode(self._endpoint.receive(sender.name))

    def _enclave(self, subset, sub):
        if self._target_name in subset._names:
            return sub.run(ProjectedProvider(self.target, subset, self._endpoint))
        return LocatedValue.remote(sub.result_owner)

    def _call(self, sub):
        return sub.run(self)


class OracleProvider(OperatorProvider):
    """Global interpreter: every location's actions happen inline.

    Communication rebinds payloads instead of moving bytes and every
    located value is populated, so a run under this provider is the
    choreography's global reading.  Distributed runs are checked
    against it location by location.
    """

    __slots__ = ()

    def __init__(self, active_set: LocationSet):
        super().__init__(None, active_set)

    def _locally(self, at, computation):
        return LocatedValue.local(computation(Unwrapper(at)), at)

    def _comm(self, sender, receiver, value):
        return LocatedValue.local(self._open(value), receiver)

    def _broadcast(self, sender, value):
        return self._open(value)

    def _enclave(self, subset, sub):
        return sub.run(OracleProvider(subset))

    def _call(self, sub):
        return sub.run(self)


class Projector:
    """Binds a projection target, the full location set, and a transport.

    Offers located input/output (`local`, `remote`, `unwrap`) so that
    embedding code can hand located arguments to a choreography and
    open its located results, plus `epp_and_run` to project a
    choreography for the target and execute it.
    """

    def __init__(self, target: Location, full_set: LocationSet, endpoint):
        if target not in full_set:
            raise ConfigurationError(
                f"projection target {target.name} is not in the location set "
                f"{list(full_set.names)}"
            )
        missing = [
            name
            for name in full_set.names
            if name != target.name and name not in endpoint.peer_names
        ]
        if missing:
            raise ConfigurationError(
                f"transport for {target.name} lacks endpoints for {missing}"
            )
        self.target = target
        self.full_set = full_set
        self._endpoint = endpoint

    def local(self, payload: Any) -> LocatedValue:
        """Wrap a payload the target itself contributes."""
        return LocatedValue.local(payload, self.target)

    def remote(self, at: Location) -> LocatedValue:
        """Placeholder for an input another location contributes."""
        if at == self.target:
            raise ConfigurationError(
                "remote() must name a location other than the projection target; "
                "use local() for the target's own inputs"
            )
        if at not in self.full_set:
            raise LocationSetViolationError(
                f"{at.name} is not in the location set {list(self.full_set.names)}"
            )
        return LocatedValue.remote(at)

    def unwrap(self, value: LocatedValue) -> Any:
        """Open a located result owned by the projection target."""
        if value.owner != self.target:
            owner = value.owner.name if value.owner else "an undeclared location"
            raise ScopeViolationError(
                f"cannot unwrap a value owned by {owner} at {self.target.name}"
            )
        if not value.is_local:
            raise InternalInvariantError(
                f"result owned by {self.target.name} carries no payload; "
                "this state is unreachable under correct projection"
            )
        return value._payload

    def inputs(self) -> InputBinder:
        """Binder producing located inputs from this target's point of view."""
        return InputBinder(self.target)

    def epp_and_run(self, choreography: Choreography) -> Any:
        """Project `choreography` for the target and execute it.

        The caller must only invoke this at locations that participate;
        non-members simply do not run the choreography.
        """
        if not choreography.location_set.issubset(self.full_set):
            raise LocationSetViolationError(
                f"choreography runs on {list(choreography.location_set.names)}, "
                f"outside this projector's set {list(self.full_set.names)}"
            )
        if self.target not in choreography.location_set:
            raise LocationSetViolationError(
                f"{self.target.name} does not participate in this choreography; "
                "do not run it here"
            )
        op = ProjectedProvider(self.target, choreography.location_set, self._endpoint)
        return choreography.run(op)


def localize_view(value: Any, viewer: Location) -> Any:
    """Rewrite a global result as it appears at `viewer`.

    Located values owned elsewhere become placeholders; dicts and lists
    are rewritten recursively; everything else is shared as-is.
    """
    if isinstance(value, LocatedValue):
        if value.owner == viewer:
            return value
        return LocatedValue.remote(value.owner)
    if isinstance(value, dict):
        return {key: localize_view(item, viewer) for key, item in value.items()}
    if isinstance(value, list):
        return [localize_view(item, viewer) for item in value]
    if isinstance(value, tuple):
        return tuple(localize_view(item, viewer) for item in value)
    return value


def oracle_run(choreography: Choreography) -> dict[Location, Any]:
    """Interpret `choreography` globally and return every location's view.

    The choreography must be constructed with all located inputs
    populated (see `InputBinder` with ``target=None``).  The returned
    mapping is the ground truth a distributed run must reproduce at
    each location.
    """
    raw = choreography.run(OracleProvider(choreography.location_set))
    return {loc: localize_view(raw, loc) for loc in choreography.location_set}
