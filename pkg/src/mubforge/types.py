"""Common type aliases shared across the package.

The JSON aliases give the type checker more context than plain ``Any`` for
error payloads and the documents emitted by the command line.
"""

from __future__ import annotations

from typing import Dict, List, Tuple, TypeAlias, Union

# Containers use ``object`` rather than recursive aliases so pydantic can
# build schemas without hitting recursion limits.
JSONPrimitive: TypeAlias = Union[str, int, float, bool, None]
JSONValue: TypeAlias = Union[JSONPrimitive, Dict[str, object], List[object]]
JSONDict: TypeAlias = Dict[str, JSONValue]

Digits: TypeAlias = Tuple[int, ...]
"""Coefficient or digit vector with entries in ``Z_p``."""

__all__ = ["JSONPrimitive", "JSONValue", "JSONDict", "Digits"]
