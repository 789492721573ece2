#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boundedrank/group_action.hpp"
#include "boundedrank/matspace.hpp"

namespace boundedrank {

enum class Label {
    ImageConfined,
    KernelConfined,
    PrimitiveCol,   // equivalent to R(1, r-1)
    PrimitiveRow,   // equivalent to R(r-1, 1)
    ExceptionalJ3,
    BelowThreshold,
    Counterexample,
};

std::string to_string(Label l);
std::optional<Label> label_from_string(const std::string& s);

struct ClassificationResult {
    std::vector<Label> labels;  // sorted, no repeats
    std::optional<VecSpace> image;   // F: every member has image inside F
    std::optional<VecSpace> kernel;  // G: every member vanishes on G
    std::optional<EquivalenceWitness> primitive_col;
    std::optional<EquivalenceWitness> primitive_row;
    std::optional<EquivalenceWitness> exceptional;
    std::size_t threshold = 0;  // the critical dimension for this shape and r

    bool has(Label l) const;
};

/// Orbits of the limit models for one (n, p, r, field), so equivalence
/// questions become hash lookups. Models whose group is over budget are
/// skipped and the classifier falls back to a direct search.
class ModelCatalog {
public:
    ModelCatalog(std::size_t n, std::size_t p, std::size_t r, Field field,
                 std::uint64_t budget = kDefaultGroupBudget);

    bool matches(std::size_t n, std::size_t p, std::size_t r, const Field& field) const;
    const OrbitIndex* col() const { return col_.get(); }
    const OrbitIndex* row() const { return row_.get(); }
    const OrbitIndex* j3() const { return j3_.get(); }

private:
    std::size_t n_, p_, r_;
    Field field_;
    std::unique_ptr<OrbitIndex> col_, row_, j3_;
};

/// The dimension at which the limit cases appear: nr-r+1+p-n with n >= p
/// (after transposing if needed).
std::size_t critical_dimension(std::size_t n, std::size_t p, std::size_t r);

/// Labels a space of rank <= r. Throws PreconditionError if r is outside
/// [1, min(n,p)-1] or the space has a member of rank > r.
ClassificationResult classify(const MatSpace& v, std::size_t r, std::uint64_t budget = kDefaultGroupBudget,
                              const ModelCatalog* catalog = nullptr);

/// Every witness and subspace carried by the result checks out against v.
bool verify_result(const MatSpace& v, std::size_t r, const ClassificationResult& res);

// Graph spaces {[M | phi(M)] : M in W}. phi is given by the images of the
// stored basis of W, in that order.

/// Splits V into W = first r columns and the images of W's basis under phi.
/// Throws PreconditionError when V is not a graph over its first r columns.
std::pair<MatSpace, std::vector<Mat>> graph_decomposition(const MatSpace& v, std::size_t r);
MatSpace graph_space(const MatSpace& w, const std::vector<Mat>& phi);

/// rk [M | phi(M)] == rk M for every member M of W.
bool rank_preservation_check(const MatSpace& w, const std::vector<Mat>& phi,
                             std::uint64_t budget = kDefaultMemberBudget);

/// Some C with phi(M) = M C on W. Among all solutions, the one whose free
/// unknowns (in reduced echelon order) are all zero. Throws PreconditionError
/// if im phi(M) is not inside im M for a basis matrix, NoSolution if the
/// system is inconsistent.
Mat representation_solver(const MatSpace& w, const std::vector<Mat>& phi);

/// Column space of [C; -I], a common kernel of the graph space.
VecSpace common_kernel_from_rep(const MatSpace& w, const std::vector<Mat>& phi);

/// A basis f_1..f_n with span(f_i, f_{i+1}) meeting H only in 0. Throws
/// CodimTooSmall when codim H < 2.
std::vector<Vec> nice_basis(const VecSpace& h);
bool is_nice_basis(const VecSpace& h, const std::vector<Vec>& basis);

/// Span of A^{-1} x over the invertible members A of a square space.
VecSpace inverse_orbit_span(const MatSpace& v, const Vec& x, std::uint64_t budget = kDefaultMemberBudget);

enum class StabModel { Hr, Kr };

struct StabilizedSubspace {
    VecSpace F;
    StabModel model;
    EquivalenceWitness witness;  // a similarity (P, P) taking Y onto the model
};

/// A proper nonzero subspace stabilized by every invertible member of Y,
/// searched by increasing dimension. Y must be square with dim r^2-r+1.
std::optional<StabilizedSubspace> stabilized_subspace_analysis(const MatSpace& y,
                                                               std::uint64_t budget = kDefaultMemberBudget);

/// Block bookkeeping for a rank-r space normalized to contain J_r. Blocks of
/// M are K (r x r), C (r x (p-r)), L ((n-r) x r) and alpha.
struct ReductionDiagnostics {
    EquivalenceWitness normalizer;
    MatSpace normalized;
    MatSpace W;        // members with K = 0
    MatSpace H;        // members of W with L = 0
    MatSpace H_prime;  // members of W with C = 0
    MatSpace K_image;  // K(V)
    MatSpace L_image;  // L(W)
    MatSpace C_image;  // C(H)
    VecSpace G;        // sum of the images of C(H)
    std::size_t qdim = 0;
    bool eq1 = false;  // L1 P1^{-1} C1 = alpha1 whenever K(A) = P1 is invertible
    bool eq2 = false;  // the quadratic identity over W
    bool eq3 = false;  // its polarization over W x W
    bool eq4 = false;  // L(M) P^{-1} C(N) = 0 for M in W, N in H, P in K(V) invertible
    bool dimension_identity = false;  // dim V = dim K(V) + dim L(W) + dim C(H)
};

/// When no normalizer is given: the identity if J_r is already in V, else
/// one built from the first rank-r member in coefficient order.
ReductionDiagnostics reduction_diagnostics(const MatSpace& v, std::size_t r,
                                           std::optional<EquivalenceWitness> normalizer = std::nullopt,
                                           std::uint64_t budget = kDefaultMemberBudget);

/// Witness (P, Q) with P * m * Q^{-1} = J_r, for m of rank r.
EquivalenceWitness normalizing_witness(const Mat& m);

struct GateResult {
    std::optional<Label> label;  // PrimitiveCol or ExceptionalJ3
    std::optional<EquivalenceWitness> witness;
    bool counterexample = false;
};

/// Decides the final dichotomy for a space with K(Y) = K_r containing the
/// sparse corner matrices. Throws PreconditionError when those do not hold.
GateResult lastlemma_gate(const MatSpace& y, std::size_t r, std::uint64_t budget = kDefaultGroupBudget);

}  // namespace boundedrank
