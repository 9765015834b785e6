"""Lossless semantic compression of statement streams.

The container holds a factorized dictionary (name pools plus per-statement
index tuples) and the symbol stream over the distinct-statement alphabet,
all entropy-coded in a single arithmetic-coder block.  The stream section
uses the adaptive add-one model whose price for a statement with n_i prior
occurrences out of t is (n_i + 1) / (t + k): the smoothed next-case rule
with weight equal to the alphabet size k.  A character-level coder with the
same model over raw bytes serves as the baseline.

Container layout (all integers unsigned LEB128 varints):

    magic "SEMC" | version 0x01 | n_pred | n_ent | n_distinct | n_stream
    | coded block length | coded block | crc32 (big endian, whole prefix)

Inside the coded block, in order: predicate names, entity names (length
symbol then raw bytes per name, shared adaptive models), one tuple per
distinct statement (polarity, predicate index, subject index, object index
with a sentinel for one-place statements), then the statement stream.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

from .coder import (
    RangeDecoder,
    RangeEncoder,
    decode_block_adaptive,
    encode_block_adaptive,
)
from .errors import CapacityError, DecodeError
from .fol import AtomicStatement, EvidenceSet, Vocabulary

_MAGIC = b"SEMC"
_VERSION = 1
_MAX_NAME = 63  # name length symbol alphabet is 0..63


def _write_uvarint(buf: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varint value must be nonnegative")
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            buf.append(b | 0x80)
        else:
            buf.append(b)
            return


def _read_uvarint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise DecodeError(f"truncated varint at byte {pos}")
        b = data[pos]
        pos += 1
        result |= (b & 0x7F) << shift
        if not b & 0x80:
            return result, pos
        shift += 7
        if shift > 63:
            raise DecodeError(f"varint overflow at byte {pos}")


class _Adaptive:
    """Add-one adaptive frequency table driving the coder incrementally."""

    __slots__ = ("counts", "total")

    def __init__(self, k: int):
        self.counts = [1] * k
        self.total = k

    def encode(self, enc: RangeEncoder, s: int) -> float:
        counts = self.counts
        cum = 0
        for i in range(s):
            cum += counts[i]
        c = counts[s]
        enc.encode(cum, cum + c, self.total)
        bits = -math.log2(c / self.total)
        counts[s] = c + 1
        self.total += 1
        return bits

    def decode(self, dec: RangeDecoder) -> int:
        counts = self.counts
        target = dec.decode_target(self.total)
        cum = 0
        s = 0
        while cum + counts[s] <= target:
            cum += counts[s]
            s += 1
        dec.decode_update(cum, cum + counts[s], self.total)
        counts[s] += 1
        self.total += 1
        return s


class SemanticCodec:
    """Statement-stream coder over a fixed distinct-statement alphabet.

    Integer counts keep every symbol price at or above 1/total, and totals
    stay far below the coder's 2^30 cap, so any declared symbol remains
    decodable at every position.
    """

    def __init__(self, alphabet: tuple[str, ...]):
        self.alphabet = alphabet

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def encode_stream(self, symbols, enc: RangeEncoder) -> float:
        return encode_block_adaptive(symbols, self.k, enc)

    def decode_stream(self, n: int, dec: RangeDecoder) -> list:
        return decode_block_adaptive(n, self.k, dec)


@dataclass(frozen=True, slots=True)
class LosslessReport:
    """Bit accounting for one encoded stream."""

    semantic_bits: int          # whole container, framing included
    header_bits: int            # framing outside the coded block
    coded_block_bits: int       # measured size of the arithmetic-coded block
    dictionary_bits_ideal: float
    payload_bits_ideal: float   # ideal length of the statement-stream section
    n_statements: int
    alphabet_size: int

    def as_json(self) -> dict:
        return {
            "semantic_bits": self.semantic_bits,
            "header_bits": self.header_bits,
            "coded_block_bits": self.coded_block_bits,
            "dictionary_bits_ideal": round(self.dictionary_bits_ideal, 2),
            "payload_bits_ideal": round(self.payload_bits_ideal, 2),
            "n_statements": self.n_statements,
            "alphabet_size": self.alphabet_size,
        }


def _name_symbols(name: str) -> bytes:
    raw = name.encode("ascii")
    if len(raw) > _MAX_NAME:
        raise CapacityError(f"name {name!r} longer than {_MAX_NAME} bytes")
    return raw


def lossless_encode_report(ev: EvidenceSet) -> tuple[bytes, LosslessReport]:
    """Encode an evidence stream; returns the container and its accounting."""
    preds = ev.predicates
    ents = ev.entities
    distinct = ev.distinct_statements
    pred_index = {p: i for i, p in enumerate(preds)}
    ent_index = {e: i for i, e in enumerate(ents)}
    distinct_index = {st: i for i, st in enumerate(distinct)}

    enc = RangeEncoder()
    dict_bits = 0.0
    if preds or ents:
        len_model = _Adaptive(_MAX_NAME + 1)
        char_model = _Adaptive(256)
        for name in [p.name for p in preds] + [e.name for e in ents]:
            raw = _name_symbols(name)
            dict_bits += len_model.encode(enc, len(raw))
            for b in raw:
                dict_bits += char_model.encode(enc, b)
    if distinct:
        sign_model = _Adaptive(2)
        pred_model = _Adaptive(len(preds))
        subj_model = _Adaptive(len(ents))
        obj_model = _Adaptive(len(ents) + 1)  # last index means "no object"
        for st in distinct:
            dict_bits += sign_model.encode(enc, 0 if st.positive else 1)
            dict_bits += pred_model.encode(enc, pred_index[st.predicate])
            dict_bits += subj_model.encode(enc, ent_index[st.subject])
            obj = len(ents) if st.obj is None else ent_index[st.obj]
            dict_bits += obj_model.encode(enc, obj)

    payload_bits = 0.0
    if distinct:
        codec = SemanticCodec(tuple(st.text() for st in distinct))
        payload_bits = codec.encode_stream(
            [distinct_index[st] for st in ev.statements], enc)
    coded = enc.finish() if (preds or ents or distinct) else b""

    buf = bytearray(_MAGIC)
    buf.append(_VERSION)
    _write_uvarint(buf, len(preds))
    _write_uvarint(buf, len(ents))
    _write_uvarint(buf, len(distinct))
    _write_uvarint(buf, len(ev.statements))
    _write_uvarint(buf, len(coded))
    header_bits = len(buf) * 8 + 32  # framing plus the trailing checksum
    buf.extend(coded)
    buf.extend(zlib.crc32(bytes(buf)).to_bytes(4, "big"))

    report = LosslessReport(
        semantic_bits=len(buf) * 8,
        header_bits=header_bits,
        coded_block_bits=len(coded) * 8,
        dictionary_bits_ideal=dict_bits,
        payload_bits_ideal=payload_bits,
        n_statements=len(ev.statements),
        alphabet_size=len(distinct),
    )
    return bytes(buf), report


def lossless_encode(ev: EvidenceSet) -> bytes:
    """Encode an evidence stream into a self-contained container."""
    blob, _ = lossless_encode_report(ev)
    return blob


def lossless_decode(blob: bytes) -> EvidenceSet:
    """Rebuild the statement stream from a container.

    The result reproduces the normalized form of the encoded evidence
    exactly: same statements, same order, duplicates included.
    """
    if len(blob) < len(_MAGIC) + 1 + 4:
        raise DecodeError("container shorter than the fixed framing")
    if blob[:4] != _MAGIC:
        raise DecodeError("bad magic bytes (not a SEMC container)")
    if blob[4] != _VERSION:
        raise DecodeError(f"unsupported container version {blob[4]}")
    body, crc_raw = blob[:-4], blob[-4:]
    if zlib.crc32(body) != int.from_bytes(crc_raw, "big"):
        raise DecodeError(f"checksum mismatch at byte {len(blob) - 4}")

    pos = 5
    n_pred, pos = _read_uvarint(body, pos)
    n_ent, pos = _read_uvarint(body, pos)
    n_distinct, pos = _read_uvarint(body, pos)
    n_stream, pos = _read_uvarint(body, pos)
    coded_len, pos = _read_uvarint(body, pos)
    coded = body[pos:pos + coded_len]
    if len(coded) != coded_len:
        raise DecodeError(f"coded block truncated at byte {pos + len(coded)}")
    if pos + coded_len != len(body):
        raise DecodeError(f"trailing bytes after coded block at byte {pos + coded_len}")
    if n_distinct > 0 and (n_pred == 0 or n_ent == 0):
        raise DecodeError("statements declared without names to build them")
    if n_stream > 0 and n_distinct == 0:
        raise DecodeError("stream declared without a statement alphabet")

    dec = RangeDecoder(coded)
    pred_names: list[str] = []
    ent_names: list[str] = []
    if n_pred or n_ent:
        len_model = _Adaptive(_MAX_NAME + 1)
        char_model = _Adaptive(256)

        def read_name() -> str:
            length = len_model.decode(dec)
            raw = bytes(char_model.decode(dec) for _ in range(length))
            try:
                return raw.decode("ascii")
            except UnicodeDecodeError as exc:
                raise DecodeError(f"undecodable name bytes {raw!r}") from exc

        pred_names = [read_name() for _ in range(n_pred)]
        ent_names = [read_name() for _ in range(n_ent)]

    vocab = Vocabulary()
    entities = [vocab.entity(name) for name in ent_names]
    distinct: list[AtomicStatement] = []
    if n_distinct:
        sign_model = _Adaptive(2)
        pred_model = _Adaptive(n_pred)
        subj_model = _Adaptive(n_ent)
        obj_model = _Adaptive(n_ent + 1)
        for _ in range(n_distinct):
            positive = sign_model.decode(dec) == 0
            p_i = pred_model.decode(dec)
            s_i = subj_model.decode(dec)
            o_i = obj_model.decode(dec)
            obj = None if o_i == n_ent else entities[o_i]
            pred = vocab.predicate(pred_names[p_i], 1 if obj is None else 2)
            distinct.append(AtomicStatement(pred, entities[s_i], obj, positive))

    codec = SemanticCodec(tuple(st.text() for st in distinct))
    stream = codec.decode_stream(n_stream, dec) if n_stream else []
    statements = tuple(distinct[i] for i in stream)
    return EvidenceSet(statements, vocab, source_id="decoded")


def shannon_baseline(text: bytes) -> int:
    """Measured bits of the order-0 adaptive byte-level coding of the text."""
    if not text:
        return 0
    enc = RangeEncoder()
    encode_block_adaptive(text, 256, enc)
    return len(enc.finish()) * 8


def shannon_baseline_ideal(text: bytes) -> float:
    """Ideal order-0 adaptive code length of the text in bits."""
    from .coder import ideal_bits

    return ideal_bits(text, 256) if text else 0.0


def gzip_bits(text: bytes) -> int:
    """DEFLATE size of the text in bits; context only, not a contract."""
    return len(zlib.compress(text, 9)) * 8
