"""File formats: the MOBE binary embedding container, a plain-CSV embedding
importer, and the selection-result document.

MOBE layout (all little-endian): magic "MOBE", u16 version (=1), u8 dtype
(0 = float32, 1 = float64), u8 reserved (=0), u64 n, u64 d, then n*d scalars
row-major. Round-trips are bit-exact at the stored precision.

Selection documents are JSON with a fixed key order and every float printed
with 17 significant digits, so identical results serialize to identical
bytes.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .core import EmbeddingSet, IndexList
from .covering import PruneConfig, SelectionResult
from .errors import (
    BadMagicError,
    IoFailureError,
    NonFiniteValueError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)

__all__ = [
    "read_mobe",
    "write_mobe",
    "read_embeddings_csv",
    "load_embeddings",
    "write_selection",
    "read_selection",
    "selection_to_text",
]

MAGIC = b"MOBE"
VERSION = 1
_HEADER = struct.Struct("<4sHBBQQ")
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_DTYPE_CODES = {"f32": 0, "f64": 1}


def write_mobe(s: EmbeddingSet, dtype: str, path) -> None:
    """Write a set as MOBE; dtype is 'f32' or 'f64'."""
    if dtype not in _DTYPE_CODES:
        raise ValueError(f"dtype must be one of {sorted(_DTYPE_CODES)}, got {dtype!r}")
    code = _DTYPE_CODES[dtype]
    payload = np.ascontiguousarray(s.data, dtype=_DTYPES[code])
    header = _HEADER.pack(MAGIC, VERSION, code, 0, s.n, s.d)
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload.tobytes())
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_mobe(path) -> EmbeddingSet:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise TruncatedPayloadError(f"{path}: file shorter than the header")
    magic, version, code, reserved, n, d = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: magic {magic!r} != {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: version {version} unsupported")
    if code not in _DTYPES or reserved != 0:
        raise UnsupportedVersionError(
            f"{path}: dtype byte {code} / reserved byte {reserved} unsupported"
        )
    expected = n * d * _DTYPES[code].itemsize
    body = raw[_HEADER.size :]
    if len(body) != expected:
        raise TruncatedPayloadError(
            f"{path}: payload is {len(body)} bytes, header implies {expected}"
        )
    data = np.frombuffer(body, dtype=_DTYPES[code]).reshape(n, d)
    if not np.isfinite(data).all():
        raise NonFiniteValueError(f"{path}: payload contains NaN or Inf")
    return EmbeddingSet(np.asarray(data, dtype=np.float64))


def read_embeddings_csv(path) -> EmbeddingSet:
    """Comma-separated floats, one embedding per row, optional header row."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise TruncatedPayloadError(f"{path}: empty file")
    start = 0
    try:
        [float(tok) for tok in lines[0].split(",")]
    except ValueError:
        start = 1  # header row
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[start:]]
    return EmbeddingSet(np.asarray(rows, dtype=np.float64))


def load_embeddings(path) -> EmbeddingSet:
    """Dispatch on content: MOBE magic -> binary, anything else -> CSV."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(4)
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    return read_mobe(path) if head == MAGIC else read_embeddings_csv(path)


def _fmt(x: float) -> str:
    if np.isposinf(x):
        return "Infinity"
    if np.isneginf(x):
        return "-Infinity"
    return format(float(x), ".17g")


def selection_to_text(result: SelectionResult) -> str:
    """Deterministic JSON text for a selection result (exactly eight fields)."""
    cfg = result.config
    parts = [
        '"indices_prompt": [%s]' % ", ".join(str(i) for i in result.prompt_centers),
        '"indices_visual": [%s]' % ", ".join(str(i) for i in result.visual_centers),
        '"eps_p_directed": %s' % _fmt(result.eps_p_directed),
        '"eps_p_symmetric": %s' % _fmt(result.eps_p_symmetric),
        '"eps_v": %s' % _fmt(result.eps_v),
        '"eta": %s' % _fmt(result.eta),
        '"shortfall_reassigned": %d' % result.shortfall_reassigned,
        '"config": {"budget_k": %d, "budget_kp": %d, "fold_k": %d, "heuristic": %s}'
        % (cfg.budget_K, cfg.budget_Kp, cfg.fold_k, json.dumps(cfg.heuristic)),
    ]
    return "{\n  " + ",\n  ".join(parts) + "\n}\n"


def write_selection(result: SelectionResult, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(selection_to_text(result))
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_selection(path) -> SelectionResult:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)  # accepts the Infinity literal
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    cfg = doc["config"]
    return SelectionResult(
        prompt_centers=IndexList(tuple(doc["indices_prompt"])),
        visual_centers=IndexList(tuple(doc["indices_visual"])),
        eps_p_directed=float(doc["eps_p_directed"]),
        eps_p_symmetric=float(doc["eps_p_symmetric"]),
        eps_v=float(doc["eps_v"]),
        eta=float(doc["eta"]),
        shortfall_reassigned=int(doc["shortfall_reassigned"]),
        config=PruneConfig(
            budget_K=int(cfg["budget_k"]),
            budget_Kp=int(cfg["budget_kp"]),
            fold_k=int(cfg["fold_k"]),
            heuristic=str(cfg["heuristic"]),
        ),
    )
