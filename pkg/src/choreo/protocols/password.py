"""Password authentication between a client and a server.

The inputs are located: the attempt lives at the client and the correct
password at the server.  Each side constructs the choreography with its
projector's located I/O and only the client can open the boolean
result.  Always exactly two envelopes: the attempt and the verdict.
"""

from __future__ import annotations

from ..core import Choreography, LocatedValue, Location, LocationSet


class PasswordAuth(Choreography):
    """Returns whether the attempt matched, as a bool located at the client."""

    def __init__(
        self,
        client: Location,
        server: Location,
        attempt: LocatedValue,
        correct: LocatedValue,
    ):
        self.client = client
        self.server = server
        self.location_set = LocationSet(client, server)
        self.result_owner = client
        self.attempt = attempt
        self.correct = correct

    def run(self, op):
        attempt_at_server = op.comm(self.client, self.server, self.attempt)
        verdict = op.locally(
            self.server,
            lambda un: un.unwrap(attempt_at_server) == un.unwrap(self.correct),
        )
        return op.comm(self.server, self.client, verdict)
