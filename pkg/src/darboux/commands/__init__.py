"""Commands module for the darboux CLI."""

from .catalog import catalog_command
from .cover import cover_command
from .displace import displace_command
from .init import init_command
from .invariants import invariants_command
from .translate import translate_command
from .transport import transport_command

__all__ = [
    "init_command",
    "cover_command",
    "transport_command",
    "displace_command",
    "translate_command",
    "invariants_command",
    "catalog_command",
]
