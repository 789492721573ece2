#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "boundedrank/vecspace.hpp"

namespace boundedrank {

/// Number of d-dimensional subspaces of GF(q)^m. Throws BudgetExceeded if it
/// does not fit in 64 bits.
std::uint64_t gaussian_binomial(std::size_t m, std::size_t d, int q);

/// Walks the d-dimensional subspaces of GF(q)^m by reduced echelon form:
/// pivot sets in lexicographic order, then the free entries as an odometer
/// (last free position fastest). Every subspace has a rank in [0, count()).
class SubspaceIter {
public:
    SubspaceIter(Field field, std::size_t m, std::size_t d);

    std::uint64_t count() const noexcept { return total_; }
    /// Restrict the walk to ranks [begin, end).
    void set_range(std::uint64_t begin, std::uint64_t end);
    bool done() const noexcept { return index_ >= end_; }
    std::uint64_t index() const noexcept { return index_; }
    void next();

    const std::vector<Vec>& basis() const noexcept { return rows_; }
    const std::vector<std::size_t>& pivots() const noexcept { return profiles_[profile_].pivots; }
    VecSpace space() const;

    /// The subspace with the given rank, without disturbing the walk.
    VecSpace at(std::uint64_t index) const;

private:
    struct Profile {
        std::vector<std::size_t> pivots;
        std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, col)
        std::uint64_t first;                                    // rank of its first subspace
        std::uint64_t size;
    };
    void seek(std::uint64_t index);
    void load_profile(std::size_t k, std::uint64_t offset);

    Field field_;
    std::size_t m_, d_;
    std::vector<Profile> profiles_;
    std::uint64_t total_ = 0;
    std::uint64_t index_ = 0, end_ = 0;
    std::size_t profile_ = 0;
    std::vector<Digit> counter_;
    std::vector<Vec> rows_;
};

}  // namespace boundedrank
