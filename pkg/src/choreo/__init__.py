"""Library-level choreographic programming.

Write one global program over named locations; run it at each location
and it specializes itself, at run time, into that node's local program.
Messages flow over pluggable transports, conditionals branch on
broadcast (or enclave-confined) values, and located inputs/outputs let
choreographies embed in larger applications.
"""

from .core import (
    Choreography,
    FunctionChoreography,
    InputBinder,
    LocatedValue,
    Location,
    LocationSet,
    OperatorProvider,
    OracleProvider,
    ProjectedProvider,
    Projector,
    Unwrapper,
    localize_view,
    oracle_run,
)
from .errors import (
    ChoreoError,
    CommunicationError,
    ConfigurationError,
    EnclaveScopeError,
    InternalInvariantError,
    LocationSetViolationError,
    ScopeViolationError,
    SelfCommunicationError,
    WireFormatError,
)
from .harness import RunReport, assert_trace, run_all
from .wire import decode, encode, register_codec

__all__ = [
    "Choreography",
    "FunctionChoreography",
    "InputBinder",
    "LocatedValue",
    "Location",
    "LocationSet",
    "OperatorProvider",
    "OracleProvider",
    "ProjectedProvider",
    "Projector",
    "Unwrapper",
    "localize_view",
    "oracle_run",
    "ChoreoError",
    "CommunicationError",
    "ConfigurationError",
    "EnclaveScopeError",
    "InternalInvariantError",
    "LocationSetViolationError",
    "ScopeViolationError",
    "SelfCommunicationError",
    "WireFormatError",
    "RunReport",
    "assert_trace",
    "run_all",
    "decode",
    "encode",
    "register_codec",
]
