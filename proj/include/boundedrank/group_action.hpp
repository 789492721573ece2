#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "boundedrank/matspace.hpp"

namespace boundedrank {

/// Default cap on group elements visited by an orbit search (2^24).
inline constexpr std::uint64_t kDefaultGroupBudget = std::uint64_t{1} << 24;

/// (P, Q, transposed) acting by X -> P * (transposed ? X^T : X) * Q^{-1}.
///
/// For a space in Mat_{n,p}: without transposition P is n x n and Q is p x p;
/// with it P is p x p and Q is n x n.
struct EquivalenceWitness {
    Mat P;
    Mat Q;
    bool transposed = false;

    static EquivalenceWitness identity(Field field, std::size_t n, std::size_t p);
    /// Shape of the image of a Mat_{n,p} space.
    std::pair<std::size_t, std::size_t> output_shape(std::size_t n, std::size_t p) const;
};

/// Throws PreconditionError if P or Q is not invertible or shapes do not fit.
void validate(const EquivalenceWitness& w, std::size_t n, std::size_t p);

Mat apply_witness(const Mat& x, const EquivalenceWitness& w);
MatSpace apply_witness(const MatSpace& v, const EquivalenceWitness& w);

/// The witness acting as `second` after `first`.
EquivalenceWitness compose(const EquivalenceWitness& second, const EquivalenceWitness& first);
EquivalenceWitness inverse(const EquivalenceWitness& w);

/// |GL_n(GF(q))|.
std::uint64_t gl_order(std::size_t n, int q);

/// Every invertible n x n matrix, in increasing order of its row-major digit
/// string. Throws BudgetExceeded when q^(n^2) > cap.
std::vector<Mat> enumerate_GL(std::size_t n, Field field, std::uint64_t cap = kDefaultGroupBudget);

/// Number of (P, Q, transpose) elements acting on Mat_{n,p}; transposition
/// is included exactly when n == p.
std::uint64_t group_size(std::size_t n, std::size_t p, int q);

struct CanonicalForm {
    MatSpace space;
    EquivalenceWitness witness;  ///< maps the input onto `space`
};

/// Orbit representative with the lexicographically least basis key, found by
/// scanning the whole group. Throws BudgetExceeded if the group is larger than `budget`.
CanonicalForm canonical_form(const MatSpace& v, std::uint64_t budget = kDefaultGroupBudget, unsigned workers = 1);

/// Orbit-invariant data used to rule out equivalence cheaply.
struct SpaceInvariants {
    std::size_t dim;
    std::vector<std::uint64_t> rank_histogram;
    std::size_t image_dim;
    std::size_t kernel_dim;
};

SpaceInvariants invariants(const MatSpace& v, std::uint64_t budget = kDefaultMemberBudget);

enum class TransposePolicy {
    Forbid,  ///< the plain (P, Q) action: PVQ^{-1}
    Allow,   ///< also try V^T; required when the shapes are swapped
};

/// A witness w with apply_witness(a, w) == b, or nullopt when the orbits differ.
/// The default is plain equivalence; canonical_form() uses the larger group,
/// so it agrees with TransposePolicy::Allow.
std::optional<EquivalenceWitness> are_equivalent(const MatSpace& a, const MatSpace& b,
                                                 std::uint64_t budget = kDefaultGroupBudget,
                                                 TransposePolicy policy = TransposePolicy::Forbid);

/// Visits every element of the acting group as (P, Q^{-1}, transposed).
void for_each_group_element(std::size_t n, std::size_t p, Field field, bool allow_transpose, std::uint64_t budget,
                            const std::function<void(const Mat&, const Mat&, bool)>& fn);

/// The full orbit of one space, keyed by canonical basis, for O(1)
/// equivalence lookups during campaigns.
class OrbitIndex {
public:
    OrbitIndex(const MatSpace& representative, bool allow_transpose, std::uint64_t budget = kDefaultGroupBudget);

    const MatSpace& representative() const noexcept { return rep_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool contains(const MatSpace& v) const;
    /// A witness mapping v onto the representative, if v lies in the orbit.
    std::optional<EquivalenceWitness> witness_to_representative(const MatSpace& v) const;

private:
    struct Entry {
        Mat P;
        Mat Qinv;
        bool transposed;
    };
    MatSpace rep_;
    std::unordered_map<std::string, Entry> members_;
};

}  // namespace boundedrank
