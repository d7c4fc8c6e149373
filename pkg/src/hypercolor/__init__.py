"""2-colorability of hypergraphs under random perturbation."""

from .hypergraph import (
    Hypergraph,
    InputError,
    degree,
    is_proper,
    link,
    load,
    loads,
    dumps,
    neighborhood,
    save,
)

__version__ = "0.1.0"

__all__ = [
    "Hypergraph",
    "InputError",
    "degree",
    "dumps",
    "is_proper",
    "link",
    "load",
    "loads",
    "neighborhood",
    "save",
]
