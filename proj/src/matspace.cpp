#include "boundedrank/matspace.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <string>

#include "boundedrank/gf2.hpp"

namespace boundedrank {

MatSpace::MatSpace(Field field, std::size_t n, std::size_t p) : n_(n), p_(p), vs_(field, n * p) {}

MatSpace::MatSpace(std::size_t n, std::size_t p, VecSpace vectorized) : n_(n), p_(p), vs_(std::move(vectorized)) {
    if (vs_.ambient() != n * p) throw DimensionMismatch("vectorized ambient does not match shape");
}

MatSpace MatSpace::from_spanning(Field field, std::size_t n, std::size_t p, const std::vector<Mat>& mats) {
    std::vector<Vec> vecs;
    vecs.reserve(mats.size());
    for (const Mat& m : mats) {
        if (!(m.field() == field) || m.rows() != n || m.cols() != p)
            throw DimensionMismatch("spanning matrices must share one shape and field");
        vecs.emplace_back(m.data().begin(), m.data().end());
    }
    return MatSpace(n, p, VecSpace::span(field, n * p, vecs));
}

MatSpace MatSpace::from_spanning(const std::vector<Mat>& mats) {
    if (mats.empty()) throw DimensionMismatch("cannot infer a shape from an empty list");
    return from_spanning(mats.front().field(), mats.front().rows(), mats.front().cols(), mats);
}

MatSpace MatSpace::full(Field field, std::size_t n, std::size_t p) {
    return MatSpace(n, p, VecSpace::full(field, n * p));
}

std::vector<Mat> MatSpace::basis() const {
    std::vector<Mat> out;
    out.reserve(dim());
    for (const Vec& v : vs_.basis()) out.push_back(to_mat(v));
    return out;
}

Mat MatSpace::basis_matrix(std::size_t i) const { return to_mat(vs_.basis().at(i)); }

Mat MatSpace::to_mat(std::span<const Digit> vectorized) const { return Mat(field(), n_, p_, vectorized); }

bool MatSpace::contains(const Mat& m) const {
    if (!(m.field() == field()) || m.rows() != n_ || m.cols() != p_) throw DimensionMismatch("shape mismatch");
    return vs_.contains(m.data());
}

std::optional<std::uint64_t> MatSpace::member_count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (c > (~std::uint64_t{0}) / static_cast<std::uint64_t>(field().order())) return std::nullopt;
        c *= static_cast<std::uint64_t>(field().order());
    }
    return c;
}

MatSpace MatSpace::transpose() const {
    std::vector<Mat> t;
    for (const Mat& m : basis()) t.push_back(m.transpose());
    return from_spanning(field(), p_, n_, t);
}

MatSpace MatSpace::orthogonal() const { return MatSpace(n_, p_, vs_.orthogonal()); }

MatSpace space_from_spanning(const std::vector<Mat>& mats) { return MatSpace::from_spanning(mats); }

namespace {
void check_ambient(const MatSpace& a, const MatSpace& b) {
    if (!(a.field() == b.field()) || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("ambient mismatch");
}
}  // namespace

MatSpace sum(const MatSpace& a, const MatSpace& b) {
    check_ambient(a, b);
    return MatSpace(a.rows(), a.cols(), sum(a.vectorized(), b.vectorized()));
}

MatSpace intersect(const MatSpace& a, const MatSpace& b) {
    check_ambient(a, b);
    return MatSpace(a.rows(), a.cols(), intersect(a.vectorized(), b.vectorized()));
}

bool is_subspace(const MatSpace& small, const MatSpace& big) {
    check_ambient(small, big);
    return is_subspace(small.vectorized(), big.vectorized());
}

Digit trace_form(const Mat& a, const Mat& b) {
    if (!(a.field() == b.field()) || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("trace form needs equal shapes");
    int acc = 0;
    for (std::size_t k = 0; k < a.data().size(); ++k) acc += a.data()[k] * b.data()[k];
    return a.field().reduce(acc);
}

MemberCursor::MemberCursor(const VecSpace& space)
    : space_(&space), coeffs_(space.dim(), 0), member_(space.ambient(), 0) {}

bool MemberCursor::next() {
    const Field& f = space_->field();
    const Digit top = static_cast<Digit>(f.order() - 1);
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        // Going from c to c+1, or from p-1 back to 0, both add one copy of basis k.
        const Vec& b = space_->basis()[k];
        for (std::size_t j = 0; j < member_.size(); ++j) member_[j] = f.add(member_[j], b[j]);
        if (coeffs_[k] < top) {
            ++coeffs_[k];
            return true;
        }
        coeffs_[k] = 0;
    }
    return false;
}

void check_member_budget(const MatSpace& v, std::uint64_t budget) {
    auto count = v.member_count();
    if (!count || *count > budget)
        throw BudgetExceeded("space of dimension " + std::to_string(v.dim()) + " over GF(" +
                             std::to_string(v.field().order()) + ") exceeds member budget " +
                             std::to_string(budget));
}

void for_each_member(const MatSpace& v, std::uint64_t budget,
                     const std::function<bool(const Mat&, const Vec&)>& fn) {
    check_member_budget(v, budget);
    MemberCursor cur(v.vectorized());
    do {
        if (!fn(v.to_mat(cur.member()), cur.coefficients())) return;
    } while (cur.next());
}

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 17;
constexpr std::size_t kMaxSide = 8;

struct RankTables {
    std::array<std::atomic<const std::vector<std::uint8_t>*>, (Field::kMaxOrder + 1) * (kMaxSide + 1) * (kMaxSide + 1)>
        slots{};
    std::mutex build;
};

RankTables& tables() {
    static RankTables t;
    return t;
}

std::size_t direct_rank(const Field& f, std::size_t n, std::size_t p, std::span<const Digit> v) {
    if (f.order() == 2 && p <= 64 && n <= 64) {
        gf2::Word rows[64];
        for (std::size_t i = 0; i < n; ++i) {
            gf2::Word w = 0;
            for (std::size_t j = 0; j < p; ++j)
                if (v[i * p + j]) w |= gf2::Word{1} << j;
            rows[i] = w;
        }
        return gf2::rank_inplace(std::span<gf2::Word>(rows, n));
    }
    return generic::rank(Mat(f, n, p, v));
}

// Table indexed by the base-q value of the row-major digits, digit k having weight q^k.
const std::vector<std::uint8_t>* rank_table(const Field& f, std::size_t n, std::size_t p) {
    if (n > kMaxSide || p > kMaxSide) return nullptr;
    std::size_t entries = 1;
    for (std::size_t k = 0; k < n * p; ++k) {
        entries *= static_cast<std::size_t>(f.order());
        if (entries > kMaxTableEntries) return nullptr;
    }
    RankTables& t = tables();
    auto& slot = t.slots[(static_cast<std::size_t>(f.order()) * (kMaxSide + 1) + n) * (kMaxSide + 1) + p];
    if (const auto* ready = slot.load(std::memory_order_acquire)) return ready;
    std::lock_guard lock(t.build);
    if (const auto* ready = slot.load(std::memory_order_acquire)) return ready;
    auto table = std::make_unique<std::vector<std::uint8_t>>(entries);
    Vec digits(n * p, 0);
    for (std::size_t code = 0; code < entries; ++code) {
        std::size_t c = code;
        for (std::size_t k = 0; k < n * p; ++k) {
            digits[k] = static_cast<Digit>(c % static_cast<std::size_t>(f.order()));
            c /= static_cast<std::size_t>(f.order());
        }
        (*table)[code] = static_cast<std::uint8_t>(direct_rank(f, n, p, digits));
    }
    const auto* raw = table.release();  // lives for the program
    slot.store(raw, std::memory_order_release);
    return raw;
}

}  // namespace

const std::vector<std::uint8_t>* rank_lookup_table(const Field& field, std::size_t n, std::size_t p) {
    return rank_table(field, n, p);
}

std::size_t vec_rank(const Field& field, std::size_t n, std::size_t p, std::span<const Digit> v) {
    if (const auto* table = rank_table(field, n, p)) {
        std::size_t code = 0;
        for (std::size_t k = n * p; k-- > 0;) code = code * static_cast<std::size_t>(field.order()) + v[k];
        return (*table)[code];
    }
    return direct_rank(field, n, p, v);
}

std::size_t space_rank(const MatSpace& v, std::uint64_t budget) {
    check_member_budget(v, budget);
    const std::size_t cap = std::min(v.rows(), v.cols());
    std::size_t best = 0;
    MemberCursor cur(v.vectorized());
    do {
        best = std::max(best, vec_rank(v.field(), v.rows(), v.cols(), cur.member()));
        if (best == cap) break;
    } while (cur.next());
    return best;
}

bool rank_at_most(const MatSpace& v, std::size_t r, std::uint64_t budget) {
    check_member_budget(v, budget);
    MemberCursor cur(v.vectorized());
    do {
        if (vec_rank(v.field(), v.rows(), v.cols(), cur.member()) > r) return false;
    } while (cur.next());
    return true;
}

std::vector<std::uint64_t> rank_distribution(const MatSpace& v, std::uint64_t budget) {
    check_member_budget(v, budget);
    std::vector<std::uint64_t> hist(std::min(v.rows(), v.cols()) + 1, 0);
    MemberCursor cur(v.vectorized());
    do {
        ++hist[vec_rank(v.field(), v.rows(), v.cols(), cur.member())];
    } while (cur.next());
    return hist;
}

VecSpace sum_of_images(const MatSpace& v) {
    std::vector<Vec> cols;
    for (const Mat& m : v.basis())
        for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    return VecSpace::span(v.field(), v.rows(), cols);
}

VecSpace common_kernel(const MatSpace& v) {
    std::vector<Vec> rows;
    for (const Mat& m : v.basis())
        for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
    return VecSpace::span(v.field(), v.cols(), rows).orthogonal();
}

MatSpace rank_span(const MatSpace& v, std::size_t r, std::uint64_t budget) {
    check_member_budget(v, budget);
    std::vector<Vec> found;
    VecSpace acc(v.field(), v.rows() * v.cols());
    MemberCursor cur(v.vectorized());
    do {
        if (vec_rank(v.field(), v.rows(), v.cols(), cur.member()) != r) continue;
        if (acc.contains(cur.member())) continue;
        found.push_back(cur.member());
        acc = VecSpace::span(v.field(), acc.ambient(), found);
        if (acc.dim() == v.dim()) break;
    } while (cur.next());
    return MatSpace(v.rows(), v.cols(), std::move(acc));
}

MatSpace rank_one_span(const MatSpace& v, std::uint64_t budget) { return rank_span(v, 1, budget); }

bool spanned_by_max_rank(const MatSpace& v, std::size_t r, std::uint64_t budget) {
    return rank_span(v, r, budget) == v;
}

namespace {

MatSpace from_cells(Field field, std::size_t n, std::size_t p,
                    const std::function<bool(std::size_t, std::size_t)>& free_cell) {
    std::vector<Mat> gens;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (free_cell(i, j)) gens.push_back(Mat::unit(field, n, p, i, j));
    return MatSpace::from_spanning(field, n, p, gens);
}

}  // namespace

MatSpace model_R(std::size_t s, std::size_t t, std::size_t n, std::size_t p, Field field) {
    if (s > n || t > p) throw PreconditionError("R(s,t) needs s <= n and t <= p");
    return from_cells(field, n, p, [&](std::size_t i, std::size_t j) { return i < s || j < t; });
}

MatSpace model_J3(Field field) {
    if (field.order() != 2) throw PreconditionError("J3 is defined over GF(2) only");
    auto e = [&](std::size_t i, std::size_t j) { return Mat::unit(field, 3, 3, i, j); };
    return MatSpace::from_spanning(field, 3, 3,
                                   {e(0, 0) + e(2, 2), e(1, 1) + e(2, 2), e(1, 0), e(2, 0), e(2, 1)});
}

MatSpace model_Hr(std::size_t r, Field field) {
    if (r < 1) throw PreconditionError("H_r needs r >= 1");
    return from_cells(field, r, r, [&](std::size_t i, std::size_t j) { return i + 1 < r || j + 1 == r; });
}

MatSpace model_Kr(std::size_t r, Field field) {
    if (r < 1) throw PreconditionError("K_r needs r >= 1");
    return from_cells(field, r, r, [&](std::size_t i, std::size_t j) { return i == 0 || j >= 1; });
}

MatSpace model_sl(std::size_t n, Field field) {
    std::vector<Mat> gens;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) gens.push_back(Mat::unit(field, n, n, i, j));
    for (std::size_t i = 1; i < n; ++i)
        gens.push_back(Mat::unit(field, n, n, 0, 0) - Mat::unit(field, n, n, i, i));
    return MatSpace::from_spanning(field, n, n, gens);
}

MatSpace model_Tplus(std::size_t n, Field field) {
    return from_cells(field, n, n, [](std::size_t i, std::size_t j) { return i <= j; });
}

MatSpace model_Tminus(std::size_t n, Field field) {
    return from_cells(field, n, n, [](std::size_t i, std::size_t j) { return i >= j; });
}

}  // namespace boundedrank
