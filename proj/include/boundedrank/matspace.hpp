#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "boundedrank/mat.hpp"
#include "boundedrank/vecspace.hpp"

namespace boundedrank {

/// Default cap on the number of members an enumeration may visit (2^24).
inline constexpr std::uint64_t kDefaultMemberBudget = std::uint64_t{1} << 24;

/// A linear subspace of Mat_{n,p}(GF(q)), stored as the canonical RREF basis
/// of the row-major vectorizations of its matrices.
class MatSpace {
public:
    MatSpace(Field field, std::size_t n, std::size_t p);
    MatSpace(std::size_t n, std::size_t p, VecSpace vectorized);

    static MatSpace from_spanning(Field field, std::size_t n, std::size_t p, const std::vector<Mat>& mats);
    /// Shape and field taken from the first matrix; the list must be nonempty.
    static MatSpace from_spanning(const std::vector<Mat>& mats);
    static MatSpace full(Field field, std::size_t n, std::size_t p);

    const Field& field() const noexcept { return vs_.field(); }
    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return p_; }
    std::size_t dim() const noexcept { return vs_.dim(); }
    const VecSpace& vectorized() const noexcept { return vs_; }

    std::vector<Mat> basis() const;
    Mat basis_matrix(std::size_t i) const;
    Mat to_mat(std::span<const Digit> vectorized) const;
    bool contains(const Mat& m) const;
    /// Number of members, or nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> member_count() const;

    MatSpace transpose() const;
    MatSpace orthogonal() const;

    friend bool operator==(const MatSpace& a, const MatSpace& b) noexcept {
        return a.n_ == b.n_ && a.p_ == b.p_ && a.vs_ == b.vs_;
    }

private:
    std::size_t n_;
    std::size_t p_;
    VecSpace vs_;
};

MatSpace space_from_spanning(const std::vector<Mat>& mats);
MatSpace sum(const MatSpace& a, const MatSpace& b);
MatSpace intersect(const MatSpace& a, const MatSpace& b);
inline bool equal(const MatSpace& a, const MatSpace& b) { return a == b; }
inline MatSpace orthogonal(const MatSpace& v) { return v.orthogonal(); }
bool is_subspace(const MatSpace& small, const MatSpace& big);

/// Trace form b(A, B) = tr(A^T B).
Digit trace_form(const Mat& a, const Mat& b);

/// Walks every member of a space, in lexicographic order of the coefficient
/// tuple over the stored basis (last coefficient fastest). Value type; copy
/// it to fork an enumeration.
class MemberCursor {
public:
    explicit MemberCursor(const VecSpace& space);

    const Vec& coefficients() const noexcept { return coeffs_; }
    const Vec& member() const noexcept { return member_; }
    /// Advance; false once every member has been visited.
    bool next();

private:
    const VecSpace* space_;
    Vec coeffs_;
    Vec member_;
};

/// Throws BudgetExceeded when the space has more than `budget` members.
void check_member_budget(const MatSpace& v, std::uint64_t budget);

/// Calls fn(member, coefficients) for every member; stops early if fn returns false.
void for_each_member(const MatSpace& v, std::uint64_t budget,
                     const std::function<bool(const Mat&, const Vec&)>& fn);

/// Rank of the n x p matrix whose row-major digits are `v`. Uses a cached
/// lookup table for small ambients.
std::size_t vec_rank(const Field& field, std::size_t n, std::size_t p, std::span<const Digit> v);

/// The table behind vec_rank, or nullptr when the ambient is too large for
/// one. Index: sum of digit_k * q^k over the row-major digits.
const std::vector<std::uint8_t>* rank_lookup_table(const Field& field, std::size_t n, std::size_t p);

/// Maximal rank of a member. The zero space has rank 0.
std::size_t space_rank(const MatSpace& v, std::uint64_t budget = kDefaultMemberBudget);
/// space_rank(v) <= r, stopping at the first member of larger rank.
bool rank_at_most(const MatSpace& v, std::size_t r, std::uint64_t budget = kDefaultMemberBudget);
/// Number of members of each rank 0..min(n,p).
std::vector<std::uint64_t> rank_distribution(const MatSpace& v, std::uint64_t budget = kDefaultMemberBudget);

/// Sum of the column spaces of the members, a subspace of GF(q)^n.
VecSpace sum_of_images(const MatSpace& v);
/// Intersection of the kernels of the members, a subspace of GF(q)^p.
VecSpace common_kernel(const MatSpace& v);

MatSpace rank_one_span(const MatSpace& v, std::uint64_t budget = kDefaultMemberBudget);
/// Span of the members of rank exactly r.
MatSpace rank_span(const MatSpace& v, std::size_t r, std::uint64_t budget = kDefaultMemberBudget);
bool spanned_by_max_rank(const MatSpace& v, std::size_t r, std::uint64_t budget = kDefaultMemberBudget);

// Model spaces. Blocks are placed with the free s x t corner top-left.

/// R(s,t) = {[[M, N], [P, 0]]} with M of size s x t.
MatSpace model_R(std::size_t s, std::size_t t, std::size_t n, std::size_t p, Field field);
/// The exceptional 5-dimensional rank-2 space of 3x3 matrices over GF(2).
MatSpace model_J3(Field field = Field(2));
/// H_r = {[[N, C], [0, alpha]]}, stabilizing a hyperplane.
MatSpace model_Hr(std::size_t r, Field field);
/// K_r = {[[alpha, L], [0, N]]}, stabilizing a line.
MatSpace model_Kr(std::size_t r, Field field);
MatSpace model_sl(std::size_t n, Field field);
MatSpace model_Tplus(std::size_t n, Field field);
MatSpace model_Tminus(std::size_t n, Field field);

}  // namespace boundedrank
