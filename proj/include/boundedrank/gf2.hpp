#pragma once

// Bit-packed GF(2) kernels. A matrix with at most 64 columns is a span of
// words, column j of row i being bit j of word i.

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace boundedrank::gf2 {

using Word = std::uint64_t;

/// Rank by XOR elimination. Clobbers `rows`.
inline std::size_t rank_inplace(std::span<Word> rows) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Word pivot = rows[i];
        if (pivot == 0) continue;
        ++rank;
        Word low = pivot & (~pivot + 1);
        for (std::size_t k = i + 1; k < rows.size(); ++k)
            if (rows[k] & low) rows[k] ^= pivot;
    }
    return rank;
}

inline std::size_t rank(std::span<const Word> rows) {
    Word buf[64];
    std::size_t n = rows.size();
    std::vector<Word> heap;
    Word* w = buf;
    if (n > 64) {
        heap.assign(rows.begin(), rows.end());
        w = heap.data();
    } else {
        for (std::size_t i = 0; i < n; ++i) buf[i] = rows[i];
    }
    return rank_inplace(std::span<Word>(w, n));
}

/// Reduced row echelon form with pivot choice matching the generic path
/// (leftmost column first, first eligible row). `transform` rows start as
/// the identity and receive the same row operations. Returns pivot columns.
inline std::vector<std::size_t> rref_inplace(std::span<Word> rows, std::span<Word> transform,
                                             std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        Word bit = Word{1} << c;
        std::size_t found = rows.size();
        for (std::size_t i = r; i < rows.size(); ++i)
            if (rows[i] & bit) {
                found = i;
                break;
            }
        if (found == rows.size()) continue;
        std::swap(rows[r], rows[found]);
        std::swap(transform[r], transform[found]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && (rows[i] & bit)) {
                rows[i] ^= rows[r];
                transform[i] ^= transform[r];
            }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

/// Insert `v` into an echelon basis kept as (pivot bit -> word) with distinct
/// lowest set bits. Returns false if v was already in the span.
inline bool reduce_and_insert(std::vector<Word>& basis, Word v) {
    for (Word b : basis) {
        Word low = b & (~b + 1);
        if (v & low) v ^= b;
    }
    if (v == 0) return false;
    Word low = v & (~v + 1);
    for (Word& b : basis)
        if (b & low) b ^= v;
    basis.push_back(v);
    return true;
}

}  // namespace boundedrank::gf2
