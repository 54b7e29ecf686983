"""Hash-consing of towers and theory handles.

Every tower and handle is created through :data:`STORE`, so two live values
are structurally equal exactly when they are the same object.  Identity
hashing then makes nested frozensets cheap to build and compare.  The table
holds its values weakly: once nothing refers to a value it is dropped, and
an equal value built later simply takes its place.
"""
from __future__ import annotations

import hashlib
import struct
import threading
import weakref


class TheoryStore:
    """Append-only interning table.

    Concurrent interning behaves as if serialized: equal keys always come
    back as the one object that was stored first.
    """

    def __init__(self):
        self._table = weakref.WeakValueDictionary()
        self._lock = threading.Lock()

    def intern(self, key, factory):
        obj = self._table.get(key)
        if obj is not None:
            return obj
        with self._lock:
            obj = self._table.get(key)
            if obj is None:
                obj = factory()
                self._table[key] = obj
            return obj

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, key) -> bool:
        return key in self._table


STORE = TheoryStore()


def _u32(*values: int) -> bytes:
    return struct.pack(f">{len(values)}I", *values)


def node_encoding(tag: bytes, header: tuple[int, ...], payload: bytes, children) -> bytes:
    """Canonical byte string of one node.

    Children are represented by their digests, sorted, each length-prefixed,
    so the encoding of a node is linear in its fan-out rather than in the
    size of the whole hereditarily finite value.
    """
    kids = sorted(c.digest_bytes() for c in children)
    parts = [tag, _u32(len(header), *header), _u32(len(payload)), payload, _u32(len(kids))]
    for k in kids:
        parts.append(_u32(len(k)))
        parts.append(k)
    return b"".join(parts)


def content_hash(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()
