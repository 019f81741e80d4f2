from typing import Any, Dict

import msgpack

from .record import EventRecord


def serialize_event(event_data: Dict[str, Any]) -> bytes:
    return msgpack.packb(event_data, use_bin_type=True)


def deserialize_event(event_bytes: bytes) -> Dict[str, Any]:
    return msgpack.unpackb(event_bytes, raw=False)


__all__ = ['EventRecord', 'serialize_event', 'deserialize_event']
