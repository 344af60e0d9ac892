"""Versioned binary oracle files.

An oracle is a deterministic function of its build inputs (graph, kind,
parameters, seed), so the file persists exactly those inputs; loading
rebuilds the identical structure. All integers are little-endian.

Field order (offsets in bytes):
    0   magic            4 bytes, b"MFDO"
    4   format version   u16
    6   kind             u8 (see KIND_* constants)
    7   param count      u16
    --  params           repeated (key, value); key = u16 length + utf-8
                         bytes; value = tag u8 + payload:
                         tag 0 none, tag 1 u8 bool, tag 2 i64, tag 3 f64,
                         tag 4 u32 length + utf-8 bytes
    --  graph            n u32, m u32, weighted u8, then per edge in
                         edge_id order: tail u32, head u32, weight f64
    --  checksum         u32, CRC32 of every byte after the magic

Any mismatch of magic, version, checksum, or truncation raises
OracleFileError.
"""

from __future__ import annotations

import struct
import zlib

from .graph import DiGraph, Edge

MAGIC = b"MFDO"
FORMAT_VERSION = 1

KIND_UNWEIGHTED = 1
KIND_WEIGHTED = 2
KIND_DECR = 3
KIND_BOTTLENECK = 4
KIND_APPROX = 5

KIND_NAMES = {
    "unweighted": KIND_UNWEIGHTED,
    "weighted": KIND_WEIGHTED,
    "decr": KIND_DECR,
    "bottleneck": KIND_BOTTLENECK,
    "approx": KIND_APPROX,
}
KIND_CODES = {v: k for k, v in KIND_NAMES.items()}


class OracleFileError(ValueError):
    pass


def _pack_value(v) -> bytes:
    if v is None:
        return struct.pack("<B", 0)
    if isinstance(v, bool):
        return struct.pack("<BB", 1, int(v))
    if isinstance(v, int):
        return struct.pack("<Bq", 2, v)
    if isinstance(v, float):
        return struct.pack("<Bd", 3, v)
    if isinstance(v, str):
        raw = v.encode("utf-8")
        return struct.pack("<BI", 4, len(raw)) + raw
    raise OracleFileError(f"unsupported parameter type {type(v).__name__}")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise OracleFileError("truncated oracle file")
        out = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return out

    def raw(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise OracleFileError("truncated oracle file")
        out = self.data[self.pos:self.pos + size]
        self.pos += size
        return out


def _unpack_value(r: _Reader):
    (tag,) = r.take("<B")
    if tag == 0:
        return None
    if tag == 1:
        return bool(r.take("<B")[0])
    if tag == 2:
        return r.take("<q")[0]
    if tag == 3:
        return r.take("<d")[0]
    if tag == 4:
        (size,) = r.take("<I")
        return r.raw(size).decode("utf-8")
    raise OracleFileError(f"unknown value tag {tag}")


def write_oracle_file(path: str, kind: str, params: dict, g: DiGraph) -> None:
    if kind not in KIND_NAMES:
        raise OracleFileError(f"unknown oracle kind {kind!r}")
    body = bytearray()
    body += struct.pack("<HBH", FORMAT_VERSION, KIND_NAMES[kind], len(params))
    for key in sorted(params):
        raw = key.encode("utf-8")
        body += struct.pack("<H", len(raw)) + raw
        body += _pack_value(params[key])
    body += struct.pack("<IIB", g.n, g.m, int(g.weighted))
    for e in g.edges:
        body += struct.pack("<IId", e.tail, e.head, e.weight)
    body += struct.pack("<I", zlib.crc32(bytes(body)))
    with open(path, "wb") as f:
        f.write(MAGIC + bytes(body))


def read_oracle_file(path: str) -> tuple[str, dict, DiGraph]:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != MAGIC:
        raise OracleFileError("bad magic; not an oracle file")
    body, trailer = data[4:-4], data[-4:]
    if len(data) < 12:
        raise OracleFileError("truncated oracle file")
    (stored_crc,) = struct.unpack("<I", trailer)
    if zlib.crc32(body) != stored_crc:
        raise OracleFileError("checksum mismatch; oracle file corrupted")
    r = _Reader(body)
    version, kind_code, nparams = r.take("<HBH")
    if version != FORMAT_VERSION:
        raise OracleFileError(f"unsupported format version {version}")
    if kind_code not in KIND_CODES:
        raise OracleFileError(f"unknown oracle kind code {kind_code}")
    params = {}
    for _ in range(nparams):
        (klen,) = r.take("<H")
        key = r.raw(klen).decode("utf-8")
        params[key] = _unpack_value(r)
    n, m, weighted = r.take("<IIB")
    edges = []
    for i in range(m):
        tail, head, weight = r.take("<IId")
        edges.append(Edge(tail, head, weight, i))
    g = DiGraph(n, tuple(edges), bool(weighted))
    return KIND_CODES[kind_code], params, g


def build_oracle(kind: str, params: dict, g: DiGraph):
    """Construct the oracle named by a (kind, params) pair from a file."""
    r = int(params.get("r", 16))
    seed = int(params.get("seed", 0))
    if kind == "unweighted":
        from .unweighted import UnweightedOracle
        return UnweightedOracle(g, r, seed=seed)
    if kind == "weighted":
        from .weighted import WeightedOracle
        return WeightedOracle(g, r, seed=seed)
    if kind == "decr":
        from .decremental import DecReachOracle
        return DecReachOracle(g, r, seed=seed)
    if kind == "bottleneck":
        from .decremental import BottleneckOracle
        return BottleneckOracle(g, r, seed=seed)
    if kind == "approx":
        from .approx import ApproxOracle
        return ApproxOracle(
            g, r, float(params["eps"]),
            mode=params.get("mode", "bounded"),
            W=params.get("W"),
            seed=seed,
        )
    raise OracleFileError(f"unknown oracle kind {kind!r}")


def load_oracle(path: str):
    """Read an oracle file and rebuild the oracle it describes."""
    kind, params, g = read_oracle_file(path)
    return kind, params, build_oracle(kind, params, g)
