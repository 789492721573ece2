#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boundedrank/classify.hpp"
#include "boundedrank/grassmann.hpp"
#include "boundedrank/matspace.hpp"

namespace boundedrank {

/// Default cap on subspaces visited by one campaign (2^25).
inline constexpr std::uint64_t kDefaultCampaignBudget = std::uint64_t{1} << 25;

enum class Theorem { Square_a, Square_b, Rect_a, Rect_b, M3F2, FlandersBound, GenInverse, ReprLemma, NoncomkerM3F2 };
enum class Mode { Exhaustive, OrbitReduced, Sampled };

std::string to_string(Theorem t);
std::string to_string(Mode m);
std::optional<Theorem> theorem_from_string(const std::string& s);
std::optional<Mode> mode_from_string(const std::string& s);

/// One verification run. For ReprLemma and NoncomkerM3F2, W lives in
/// Mat_{n,r} and phi maps into Mat_{n,p} (ReprLemma) or Mat_{n,p-r}
/// (NoncomkerM3F2); target_dim is dim W. For GenInverse, every space of
/// dimension >= target_dim in Mat_n is visited.
struct CampaignSpec {
    Theorem theorem = Theorem::M3F2;
    std::size_t n = 3, p = 3, r = 2;
    int order = 2;
    std::size_t target_dim = 5;
    Mode mode = Mode::Exhaustive;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::uint64_t budget = kDefaultCampaignBudget;
    unsigned workers = 1;
};

/// A CampaignSpec with target_dim set to the dimension the theorem speaks about.
CampaignSpec default_campaign(Theorem t, std::size_t n, std::size_t p, std::size_t r, int order);

/// Throws PreconditionError / UnsupportedField / BudgetExceeded for specs that
/// cannot run.
void validate(const CampaignSpec& spec);

struct ClassCensus {
    MatSpace representative;  // canonical form of the class
    std::uint64_t size = 0;   // members among the survivors
    std::vector<Label> labels;
};

struct CampaignReport {
    CampaignSpec spec;
    std::uint64_t visited = 0;    // subspaces (or samples) examined
    std::uint64_t survivors = 0;  // those passing the rank filter
    std::map<std::string, std::uint64_t> label_census;
    std::vector<ClassCensus> classes;  // OrbitReduced only
    std::map<std::string, std::uint64_t> counters;  // theorem-specific tallies
    std::vector<MatSpace> violations;
    double elapsed_seconds = 0;
    bool deterministic = true;

    bool pass() const { return violations.empty(); }
};

CampaignReport run_campaign(const CampaignSpec& spec);

/// Rejects a space as soon as a member exceeds rank r. Uses the packed GF(2)
/// representation and the rank lookup table when they apply.
class RankFilter {
public:
    RankFilter(Field field, std::size_t n, std::size_t p, std::size_t r);
    /// `basis` holds vectorizations of n x p matrices.
    bool accepts(const std::vector<Vec>& basis) const;

private:
    Field field_;
    std::size_t n_, p_, r_;
    const std::vector<std::uint8_t>* table_;
};

/// Calls fn for every d-dimensional subspace of Mat_{n,p} with rank <= r,
/// in subspace_iter order. Throws BudgetExceeded if there are more than
/// `budget` subspaces to visit.
void for_each_bounded_rank(std::size_t n, std::size_t p, Field field, std::size_t d, std::size_t r,
                           std::uint64_t budget, const std::function<void(const MatSpace&)>& fn);

/// Partition of the rank <= r spaces of dimension d into equivalence classes
/// (transposition included when n == p), in order of first appearance.
std::vector<ClassCensus> orbit_census(std::size_t n, std::size_t p, Field field, std::size_t d, std::size_t r,
                                      std::uint64_t budget = kDefaultCampaignBudget, unsigned workers = 1);

}  // namespace boundedrank
