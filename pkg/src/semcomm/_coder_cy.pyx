# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure-Python arithmetic coder.

Same register widths, same renormalization order, same adaptive model;
encoded streams are bit-identical with the fallback implementation for
every input, which the test suite enforces.
"""

from libc.stdlib cimport free, malloc
from libc.math cimport log2

BACKEND = "cython"

cdef unsigned long long _TOP = (<unsigned long long> 1) << 32
cdef unsigned long long _MASK = _TOP - 1
cdef unsigned long long _HALF = (<unsigned long long> 1) << 31
cdef unsigned long long _QUARTER = (<unsigned long long> 1) << 30
cdef unsigned long long _THREE_QUARTER = _HALF + _QUARTER

MAX_TOTAL = int(_QUARTER)


cdef class _BitWriter:
    cdef bytearray data
    cdef unsigned int _acc
    cdef int _n
    cdef public long long bit_count

    def __cinit__(self):
        self.data = bytearray()
        self._acc = 0
        self._n = 0
        self.bit_count = 0

    cdef void put(self, int bit):
        self._acc = (self._acc << 1) | <unsigned int> bit
        self._n += 1
        self.bit_count += 1
        if self._n == 8:
            self.data.append(self._acc & 0xFF)
            self._acc = 0
            self._n = 0

    cdef bytes getvalue(self):
        out = bytearray(self.data)
        if self._n:
            out.append((self._acc << (8 - self._n)) & 0xFF)
        return bytes(out)


cdef class _BitReader:
    cdef bytes data
    cdef const unsigned char* buf
    cdef Py_ssize_t size
    cdef Py_ssize_t _pos

    def __cinit__(self, bytes data):
        self.data = data
        self.buf = data
        self.size = len(data)
        self._pos = 0

    cdef int get(self):
        cdef Py_ssize_t i = self._pos >> 3
        cdef int r = <int> (self._pos & 7)
        self._pos += 1
        if i >= self.size:
            return 0
        return (self.buf[i] >> (7 - r)) & 1


cdef class RangeEncoder:
    """Streaming arithmetic encoder over cumulative integer frequencies."""

    cdef unsigned long long _low
    cdef unsigned long long _high
    cdef long long _pending
    cdef _BitWriter _writer
    cdef bint _done

    def __cinit__(self):
        self._low = 0
        self._high = _MASK
        self._pending = 0
        self._writer = _BitWriter()
        self._done = False

    @property
    def bits_emitted(self):
        """Bits already materialized (pending underflow bits excluded)."""
        return self._writer.bit_count

    cdef void _put(self, int bit):
        self._writer.put(bit)
        cdef int other = bit ^ 1
        while self._pending:
            self._writer.put(other)
            self._pending -= 1

    cdef void _encode_c(self, unsigned long long cum_lo,
                        unsigned long long cum_hi,
                        unsigned long long total):
        cdef unsigned long long rng = self._high - self._low + 1
        self._high = self._low + (rng * cum_hi) // total - 1
        self._low = self._low + (rng * cum_lo) // total
        while True:
            if self._high < _HALF:
                self._put(0)
            elif self._low >= _HALF:
                self._put(1)
                self._low -= _HALF
                self._high -= _HALF
            elif self._low >= _QUARTER and self._high < _THREE_QUARTER:
                self._pending += 1
                self._low -= _QUARTER
                self._high -= _QUARTER
            else:
                break
            self._low = (self._low << 1) & _MASK
            self._high = ((self._high << 1) | 1) & _MASK

    def encode(self, cum_lo, cum_hi, total):
        if self._done:
            raise ValueError("encoder already finished")
        if not 0 <= cum_lo < cum_hi <= total <= MAX_TOTAL:
            raise ValueError("invalid frequency interval")
        self._encode_c(cum_lo, cum_hi, total)

    def finish(self):
        """Flush the disambiguating tail and return the whole bitstream."""
        if not self._done:
            self._pending += 1
            if self._low < _QUARTER:
                self._put(0)
            else:
                self._put(1)
            self._done = True
        return self._writer.getvalue()


cdef class RangeDecoder:
    """Mirror image of :class:`RangeEncoder` over one finished bitstream."""

    cdef unsigned long long _low
    cdef unsigned long long _high
    cdef unsigned long long _code
    cdef _BitReader _reader

    def __cinit__(self, bytes data):
        self._low = 0
        self._high = _MASK
        self._reader = _BitReader(data)
        cdef unsigned long long code = 0
        cdef int i
        for i in range(32):
            code = (code << 1) | <unsigned long long> self._reader.get()
        self._code = code

    cdef unsigned long long _target_c(self, unsigned long long total):
        cdef unsigned long long rng = self._high - self._low + 1
        return ((self._code - self._low + 1) * total - 1) // rng

    def decode_target(self, total):
        """Scaled position of the pending symbol inside [0, total)."""
        if not 1 <= total <= MAX_TOTAL:
            raise ValueError("invalid total")
        target = self._target_c(total)
        if target >= total:
            raise ValueError(
                f"decoder target {target} outside alphabet total {total}")
        return int(target)

    cdef void _update_c(self, unsigned long long cum_lo,
                        unsigned long long cum_hi,
                        unsigned long long total):
        cdef unsigned long long rng = self._high - self._low + 1
        self._high = self._low + (rng * cum_hi) // total - 1
        self._low = self._low + (rng * cum_lo) // total
        while True:
            if self._high < _HALF:
                pass
            elif self._low >= _HALF:
                self._low -= _HALF
                self._high -= _HALF
                self._code -= _HALF
            elif self._low >= _QUARTER and self._high < _THREE_QUARTER:
                self._low -= _QUARTER
                self._high -= _QUARTER
                self._code -= _QUARTER
            else:
                break
            self._low = (self._low << 1) & _MASK
            self._high = ((self._high << 1) | 1) & _MASK
            self._code = ((self._code << 1)
                          | <unsigned long long> self._reader.get()) & _MASK

    def decode_update(self, cum_lo, cum_hi, total):
        if not 0 <= cum_lo < cum_hi <= total <= MAX_TOTAL:
            raise ValueError("invalid frequency interval")
        self._update_c(cum_lo, cum_hi, total)


def encode_block_adaptive(symbols, k, encoder):
    """Encode a symbol block under an adaptive add-one model over k symbols.

    Every symbol starts with count 1, so symbol s at time t is priced at
    count_s(t) / (t + k): the smoothed next-case rule with weight equal to
    the alphabet size.  Returns the ideal code length sum -log2(price) in
    bits; the actual emitted bits trail it by at most the coder overhead.
    """
    cdef long long kk = k
    if kk < 1:
        raise ValueError("alphabet must be non-empty")
    cdef RangeEncoder enc = <RangeEncoder?> encoder
    if enc._done:
        raise ValueError("encoder already finished")
    cdef long long* counts = <long long*> malloc(kk * sizeof(long long))
    if counts is NULL:
        raise MemoryError()
    cdef long long total = kk
    cdef long long cum, c, s, i
    cdef double ideal = 0.0
    try:
        for i in range(kk):
            counts[i] = 1
        for sym in symbols:
            s = sym
            if s < 0 or s >= kk:
                raise ValueError(f"symbol {sym} outside alphabet of {k}")
            if total > MAX_TOTAL:
                raise ValueError("invalid frequency interval")
            cum = 0
            for i in range(s):
                cum += counts[i]
            c = counts[s]
            enc._encode_c(cum, cum + c, total)
            ideal -= log2((<double> c) / (<double> total))
            counts[s] = c + 1
            total += 1
    finally:
        free(counts)
    return ideal


def decode_block_adaptive(n, k, decoder):
    """Decode n symbols written by :func:`encode_block_adaptive`."""
    cdef long long kk = k
    cdef long long nn = n
    if kk < 1:
        raise ValueError("alphabet must be non-empty")
    if nn < 0:
        raise ValueError("n must be >= 0")
    cdef RangeDecoder dec = <RangeDecoder?> decoder
    cdef long long* counts = <long long*> malloc(kk * sizeof(long long))
    if counts is NULL:
        raise MemoryError()
    cdef long long total = kk
    cdef long long target, cum, s, i, t
    out = []
    try:
        for i in range(kk):
            counts[i] = 1
        for t in range(nn):
            if total > MAX_TOTAL:
                raise ValueError("invalid total")
            target = <long long> dec._target_c(total)
            if target >= total:
                raise ValueError(
                    f"decoder target {target} outside alphabet total {total}")
            cum = 0
            s = 0
            while cum + counts[s] <= target:
                cum += counts[s]
                s += 1
            dec._update_c(cum, cum + counts[s], total)
            out.append(int(s))
            counts[s] += 1
            total += 1
    finally:
        free(counts)
    return out


def ideal_bits(symbols, k):
    """Ideal adaptive code length of a block without encoding it."""
    cdef long long kk = k
    if kk < 1:
        raise ValueError("alphabet must be non-empty")
    cdef long long* counts = <long long*> malloc(kk * sizeof(long long))
    if counts is NULL:
        raise MemoryError()
    cdef long long total = kk
    cdef long long s
    cdef double ideal = 0.0
    try:
        for s in range(kk):
            counts[s] = 1
        for sym in symbols:
            s = sym
            if s < 0 or s >= kk:
                raise ValueError(f"symbol {sym} outside alphabet of {k}")
            ideal -= log2((<double> counts[s]) / (<double> total))
            counts[s] += 1
            total += 1
    finally:
        free(counts)
    return ideal
