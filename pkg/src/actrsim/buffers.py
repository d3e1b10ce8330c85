"""Named buffers, each holding at most one chunk from a shared store."""

from .chunks import ChunkDescription, ChunkStore
from .errors import (
    DescriptionMismatch,
    DuplicateBuffer,
    EmptyBuffer,
    UnknownBuffer,
    UnknownSlot,
)


class BufferSystem:
    def __init__(self, store: ChunkStore):
        self.store = store
        self._held: dict[str, str | None] = {}

    def declare_buffer(self, name: str) -> None:
        if name in self._held:
            raise DuplicateBuffer(f"buffer {name!r} already declared")
        self._held[name] = None

    def buffers(self):
        return self._held.keys()

    def held(self, buffer: str) -> str | None:
        """Name of the held chunk, or None for an empty buffer."""
        try:
            return self._held[buffer]
        except KeyError:
            raise UnknownBuffer(f"no buffer named {buffer!r}") from None

    def set_buffer(self, buffer: str, chunk: str) -> None:
        self.held(buffer)  # raises on unknown buffer
        self.store.chunk(chunk)  # raises on unknown chunk
        self._held[buffer] = chunk

    def modify_buffer(self, buffer: str, desc: ChunkDescription) -> None:
        """Overwrite the listed slots of the held chunk; unlisted slots stay."""
        chunk_name = self.held(buffer)
        if chunk_name is None:
            raise EmptyBuffer(f"buffer {buffer!r} holds no chunk")
        chunk = self.store.chunk(chunk_name)
        if desc.name is not None and desc.name != chunk.name:
            raise DescriptionMismatch(
                f"description names {desc.name!r} but buffer holds {chunk.name!r}"
            )
        if desc.type is not None and desc.type != chunk.type:
            raise DescriptionMismatch(
                f"description types {desc.type!r} but chunk is a {chunk.type!r}"
            )
        ctype = self.store.chunk_type(chunk.type)
        for slot, _ in desc.slot_values:
            if slot not in ctype.slots:
                raise UnknownSlot(f"type {chunk.type!r} has no slot {slot!r}")
        for slot, value in desc.slot_values:
            chunk.slot_values[slot] = value

    def clear_buffer(self, buffer: str) -> None:
        """Empty the buffer; the chunk stays in the store. Idempotent."""
        self.held(buffer)
        self._held[buffer] = None

    def check_consistency(self) -> None:
        for chunk in self._held.values():
            assert chunk is None or self.store.has_chunk(chunk)
