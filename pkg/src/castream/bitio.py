"""Bitstream and diagram file formats used by the command-line tool.

Two stream encodings: ASCII ('0'/'1' characters, all whitespace ignored on
read) and raw (packed bytes, most significant bit first, with an explicit
bit count to disambiguate the final byte's padding).  Diagrams render as
plain text (one row per line) or as an ASCII portable bitmap (P1) where a
live cell is a black pixel.
"""
from __future__ import annotations

from .engine import SpaceTimeDiagram

__all__ = [
    "parse_bits",
    "format_bits",
    "pack_bits",
    "unpack_bits",
    "diagram_text",
    "diagram_pbm",
]

Bits = tuple[int, ...]


def parse_bits(text: str) -> Bits:
    """Bits from ASCII text; whitespace (including newlines) is ignored."""
    bits = []
    for ch in text:
        if ch in "01":
            bits.append(ord(ch) - ord("0"))
        elif not ch.isspace():
            raise ValueError(f"invalid character {ch!r} in bitstream text")
    return tuple(bits)


def format_bits(bits: Bits) -> str:
    return "".join(str(b) for b in bits) + "\n"


def pack_bits(bits: Bits) -> bytes:
    """Pack MSB-first; the final byte is zero-padded."""
    out = bytearray((len(bits) + 7) // 8)
    for i, bit in enumerate(bits):
        if bit:
            out[i >> 3] |= 0x80 >> (i & 7)
    return bytes(out)


def unpack_bits(data: bytes, count: int) -> Bits:
    """First ``count`` bits of packed data, MSB-first."""
    if count < 0 or count > 8 * len(data):
        raise ValueError(f"cannot read {count} bits from {len(data)} bytes")
    return tuple((data[i >> 3] >> (7 - (i & 7))) & 1 for i in range(count))


def diagram_text(diagram: SpaceTimeDiagram) -> str:
    return "\n".join(str(row) for row in diagram.rows) + "\n"


def diagram_pbm(diagram: SpaceTimeDiagram) -> str:
    """P1 portable bitmap, one pixel per cell, 1 = live cell (black)."""
    lines = ["P1", f"{diagram.width} {len(diagram.rows)}"]
    for row in diagram.rows:
        lines.append(" ".join(str(b) for b in row.cells))
    return "\n".join(lines) + "\n"
