# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels for the two quadratic phases of lattice construction.

Same contracts as ``_kernels_py``: the assembly pair loop
(``merge_concept_pairs``) and the Hasse-edge computation
(``lower_covers``). Int bitsets are packed into little-endian 64-bit word
arrays at the call boundary; the quadratic loops then run entirely on C
words (the pair loop deduplicates extents through a C open-addressing
hash table), so no Python objects are touched per pair.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport calloc, free, malloc, realloc
from libc.string cimport memcmp, memcpy

ctypedef unsigned long long u64


cdef Py_ssize_t _word_width(list masks, Py_ssize_t floor_words):
    cdef Py_ssize_t words = floor_words
    cdef Py_ssize_t need
    for m in masks:
        need = (m.bit_length() + 63) // 64
        if need > words:
            words = need
    return words


cdef u64* _pack(list masks, Py_ssize_t words) except NULL:
    cdef Py_ssize_t n = len(masks)
    cdef u64* buf = <u64*> malloc(max(n, 1) * words * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef bytes raw
    for i in range(n):
        raw = masks[i].to_bytes(words * 8, "little")
        memcpy(buf + i * words, <const unsigned char*> raw, words * 8)
    return buf


cdef object _unpack_one(u64* buf, Py_ssize_t words):
    cdef bytes raw = PyBytes_FromStringAndSize(<char*> buf, words * 8)
    return int.from_bytes(raw, "little")


cdef inline u64 _hash_words(u64* words, Py_ssize_t n) nogil:
    # FNV-1a over the raw words, finished with a splitmix round
    cdef u64 h = <u64> 0xcbf29ce484222325ULL
    cdef Py_ssize_t i
    for i in range(n):
        h = (h ^ words[i]) * <u64> 0x100000001b3ULL
    h ^= h >> 30
    h *= <u64> 0xbf58476d1ce4e5b9ULL
    h ^= h >> 27
    return h


cdef struct MergeState:
    u64* out_e          # distinct extents, row-major
    u64* out_i          # matching intents
    Py_ssize_t* table   # open addressing; 0 = empty, else index + 1
    u64* hashes         # cached hash per stored extent
    Py_ssize_t count
    Py_ssize_t cap      # output capacity
    Py_ssize_t tcap     # table capacity, power of two


cdef int _grow_table(MergeState* st) except -1:
    cdef Py_ssize_t new_cap = st.tcap * 2
    cdef Py_ssize_t* fresh = <Py_ssize_t*> calloc(new_cap, sizeof(Py_ssize_t))
    if fresh == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, slot
    cdef u64 mask = new_cap - 1
    for i in range(st.count):
        slot = <Py_ssize_t> (st.hashes[i] & mask)
        while fresh[slot] != 0:
            slot = <Py_ssize_t> ((slot + 1) & mask)
        fresh[slot] = i + 1
    free(st.table)
    st.table = fresh
    st.tcap = new_cap
    return 0


def merge_concept_pairs(list extents1, list intents1, list extents2, list intents2):
    """See ``_kernels_py.merge_concept_pairs``; identical behavior."""
    cdef Py_ssize_t n1 = len(extents1)
    cdef Py_ssize_t n2 = len(extents2)
    if len(intents1) != n1 or len(intents2) != n2:
        raise ValueError("extent and intent lists must have equal lengths")
    if n1 == 0 or n2 == 0:
        return [], []

    cdef Py_ssize_t ow = _word_width(extents2, _word_width(extents1, 1))
    cdef Py_ssize_t aw = _word_width(intents2, _word_width(intents1, 1))

    cdef u64* e1 = NULL
    cdef u64* i1 = NULL
    cdef u64* e2 = NULL
    cdef u64* i2 = NULL
    cdef u64* scratch = NULL
    cdef MergeState st
    st.out_e = NULL
    st.out_i = NULL
    st.table = NULL
    st.hashes = NULL
    st.count = 0
    st.cap = 256
    st.tcap = 1024

    cdef Py_ssize_t a, b, w, slot, idx
    cdef u64 h, tmask
    cdef bint hit
    cdef u64* row_e
    cdef u64* row_i
    cdef u64* other_i
    cdef void* grown

    try:
        e1 = _pack(extents1, ow)
        i1 = _pack(intents1, aw)
        e2 = _pack(extents2, ow)
        i2 = _pack(intents2, aw)
        scratch = <u64*> malloc(ow * sizeof(u64))
        st.out_e = <u64*> malloc(st.cap * ow * sizeof(u64))
        st.out_i = <u64*> malloc(st.cap * aw * sizeof(u64))
        st.hashes = <u64*> malloc(st.cap * sizeof(u64))
        st.table = <Py_ssize_t*> calloc(st.tcap, sizeof(Py_ssize_t))
        if (scratch == NULL or st.out_e == NULL or st.out_i == NULL
                or st.hashes == NULL or st.table == NULL):
            raise MemoryError()

        for a in range(n1):
            row_e = e1 + a * ow
            row_i = i1 + a * aw
            for b in range(n2):
                for w in range(ow):
                    scratch[w] = row_e[w] & e2[b * ow + w]
                h = _hash_words(scratch, ow)
                tmask = st.tcap - 1
                slot = <Py_ssize_t> (h & tmask)
                hit = False
                while st.table[slot] != 0:
                    idx = st.table[slot] - 1
                    if st.hashes[idx] == h and memcmp(
                            st.out_e + idx * ow, scratch, ow * 8) == 0:
                        hit = True
                        break
                    slot = <Py_ssize_t> ((slot + 1) & tmask)
                other_i = i2 + b * aw
                if hit:
                    for w in range(aw):
                        st.out_i[idx * aw + w] |= row_i[w] | other_i[w]
                    continue
                if st.count == st.cap:
                    st.cap *= 2
                    grown = realloc(st.out_e, st.cap * ow * sizeof(u64))
                    if grown == NULL:
                        raise MemoryError()
                    st.out_e = <u64*> grown
                    grown = realloc(st.out_i, st.cap * aw * sizeof(u64))
                    if grown == NULL:
                        raise MemoryError()
                    st.out_i = <u64*> grown
                    grown = realloc(st.hashes, st.cap * sizeof(u64))
                    if grown == NULL:
                        raise MemoryError()
                    st.hashes = <u64*> grown
                st.table[slot] = st.count + 1
                memcpy(st.out_e + st.count * ow, scratch, ow * 8)
                for w in range(aw):
                    st.out_i[st.count * aw + w] = row_i[w] | other_i[w]
                st.hashes[st.count] = h
                st.count += 1
                if st.count * 3 >= st.tcap * 2:
                    _grow_table(&st)

        result_extents = [_unpack_one(st.out_e + a * ow, ow)
                          for a in range(st.count)]
        result_intents = [_unpack_one(st.out_i + a * aw, aw)
                          for a in range(st.count)]
        return result_extents, result_intents
    finally:
        free(e1)
        free(i1)
        free(e2)
        free(i2)
        free(scratch)
        free(st.out_e)
        free(st.out_i)
        free(st.hashes)
        free(st.table)


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define lc_popcount64(x) __builtin_popcountll(x)
    #else
    static int lc_popcount64(unsigned long long x) {
        int n = 0;
        while (x) { x &= x - 1; n++; }
        return n;
    }
    #endif
    """
    int lc_popcount64(u64 x) nogil


def lower_covers(list extents):
    """See ``_kernels_py.lower_covers``; identical behavior."""
    cdef Py_ssize_t n = len(extents)
    if n == 0:
        return []
    cdef Py_ssize_t ow = _word_width(extents, 1)
    cdef u64* packed = NULL
    cdef Py_ssize_t* order = NULL
    cdef Py_ssize_t* accepted = NULL
    cdef Py_ssize_t c, pos, d, k, w, acc_count
    cdef u64* ec
    cdef u64* ed
    cdef u64* ea
    cdef bint sup, strict, blocked
    cdef list edges = []

    counts = []
    try:
        packed = _pack(extents, ow)
        order = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
        accepted = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
        if order == NULL or accepted == NULL:
            raise MemoryError()
        for c in range(n):
            total = 0
            for w in range(ow):
                total += lc_popcount64(packed[c * ow + w])
            counts.append(total)
        for pos, d in enumerate(sorted(range(n), key=counts.__getitem__)):
            order[pos] = d

        for c in range(n):
            ec = packed + c * ow
            acc_count = 0
            for pos in range(n):
                d = order[pos]
                ed = packed + d * ow
                sup = True
                strict = False
                for w in range(ow):
                    if ec[w] & ~ed[w]:
                        sup = False
                        break
                    if ed[w] & ~ec[w]:
                        strict = True
                if not sup or not strict:
                    continue
                blocked = False
                for k in range(acc_count):
                    ea = packed + accepted[k] * ow
                    sup = True
                    for w in range(ow):
                        if ea[w] & ~ed[w]:
                            sup = False
                            break
                    if sup:
                        blocked = True
                        break
                if not blocked:
                    accepted[acc_count] = d
                    acc_count += 1
                    edges.append((c, d))
        edges.sort()
        return edges
    finally:
        free(packed)
        free(order)
        free(accepted)
