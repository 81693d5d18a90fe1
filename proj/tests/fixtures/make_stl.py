#!/usr/bin/env python3
"""Writes the unit-cube STL fixtures (ASCII and binary) next to this script."""

import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent

CORNERS = [(x, y, z) for z in (0.0, 1.0) for y in (0.0, 1.0) for x in (0.0, 1.0)]

# Two outward-wound triangles per face, as corner indices into CORNERS.
FACES = [
    (0, 2, 3), (0, 3, 1),  # z = 0
    (4, 5, 7), (4, 7, 6),  # z = 1
    (0, 1, 5), (0, 5, 4),  # y = 0
    (2, 6, 7), (2, 7, 3),  # y = 1
    (0, 4, 6), (0, 6, 2),  # x = 0
    (1, 3, 7), (1, 7, 5),  # x = 1
]


def normal(tri):
    a, b, c = (CORNERS[i] for i in tri)
    u = [b[k] - a[k] for k in range(3)]
    v = [c[k] - a[k] for k in range(3)]
    n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
    length = sum(x * x for x in n) ** 0.5
    return [x / length for x in n]


def write_ascii(path):
    lines = ["solid cube"]
    for tri in FACES:
        lines.append("  facet normal %g %g %g" % tuple(normal(tri)))
        lines.append("    outer loop")
        for i in tri:
            lines.append("      vertex %g %g %g" % CORNERS[i])
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append("endsolid cube")
    path.write_text("\n".join(lines) + "\n")


def write_binary(path):
    header = b"solid cube".ljust(80, b" ")
    body = bytearray(header + struct.pack("<I", len(FACES)))
    for tri in FACES:
        body += struct.pack("<3f", *normal(tri))
        for i in tri:
            body += struct.pack("<3f", *CORNERS[i])
        body += struct.pack("<H", 0)
    path.write_bytes(bytes(body))


if __name__ == "__main__":
    write_ascii(HERE / "cube_ascii.stl")
    write_binary(HERE / "cube_binary.stl")
    # Binary cube with the last record cut short.
    data = (HERE / "cube_binary.stl").read_bytes()
    (HERE / "malformed" / "truncated_binary.stl").write_bytes(data[:-20])
