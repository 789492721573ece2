#include "boundedrank/group_action.hpp"

#include <algorithm>
#include <thread>

namespace boundedrank {

EquivalenceWitness EquivalenceWitness::identity(Field field, std::size_t n, std::size_t p) {
    return {Mat::identity(field, n), Mat::identity(field, p), false};
}

std::pair<std::size_t, std::size_t> EquivalenceWitness::output_shape(std::size_t n, std::size_t p) const {
    return transposed ? std::pair{p, n} : std::pair{n, p};
}

void validate(const EquivalenceWitness& w, std::size_t n, std::size_t p) {
    auto [on, op] = w.output_shape(n, p);
    if (w.P.rows() != on || !w.P.is_square() || w.Q.rows() != op || !w.Q.is_square())
        throw PreconditionError("witness shapes do not fit the ambient space");
    if (mat_rank(w.P) != on) throw PreconditionError("witness P is not invertible");
    if (mat_rank(w.Q) != op) throw PreconditionError("witness Q is not invertible");
}

namespace {

Mat act(const Mat& x, const Mat& P, const Mat& Qinv, bool transposed) {
    return transposed ? P * x.transpose() * Qinv : P * x * Qinv;
}

VecSpace act_space(const std::vector<Mat>& basis, Field f, std::size_t out_dim, const Mat& P, const Mat& Qinv,
                   bool transposed) {
    std::vector<Vec> vecs;
    vecs.reserve(basis.size());
    for (const Mat& x : basis) {
        Mat y = act(x, P, Qinv, transposed);
        vecs.emplace_back(y.data().begin(), y.data().end());
    }
    return VecSpace::span(f, out_dim, vecs);
}

}  // namespace

Mat apply_witness(const Mat& x, const EquivalenceWitness& w) {
    validate(w, x.rows(), x.cols());
    return act(x, w.P, inverse(w.Q), w.transposed);
}

MatSpace apply_witness(const MatSpace& v, const EquivalenceWitness& w) {
    validate(w, v.rows(), v.cols());
    auto [on, op] = w.output_shape(v.rows(), v.cols());
    return MatSpace(on, op, act_space(v.basis(), v.field(), on * op, w.P, inverse(w.Q), w.transposed));
}

EquivalenceWitness compose(const EquivalenceWitness& second, const EquivalenceWitness& first) {
    if (!second.transposed) return {second.P * first.P, second.Q * first.Q, first.transposed};
    // P2 (P1 X' Q1^-1)^T Q2^-1 = (P2 Q1^-T) X'^T (Q2 P1^-T)^-1
    Mat q1_inv_t = inverse(first.Q).transpose();
    Mat p1_inv_t = inverse(first.P).transpose();
    return {second.P * q1_inv_t, second.Q * p1_inv_t, !first.transposed};
}

EquivalenceWitness inverse(const EquivalenceWitness& w) {
    if (!w.transposed) return {inverse(w.P), inverse(w.Q), false};
    // Y = P X^T Q^-1  =>  X = Q^T Y^T (P^T)^-1
    return {w.Q.transpose(), w.P.transpose(), true};
}

std::uint64_t gl_order(std::size_t n, int q) {
    std::uint64_t qn = 1;
    for (std::size_t i = 0; i < n; ++i) qn *= static_cast<std::uint64_t>(q);
    std::uint64_t order = 1, qi = 1;
    for (std::size_t i = 0; i < n; ++i) {
        order *= qn - qi;
        qi *= static_cast<std::uint64_t>(q);
    }
    return order;
}

std::vector<Mat> enumerate_GL(std::size_t n, Field field, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < n * n; ++k) {
        total *= static_cast<std::uint64_t>(field.order());
        if (total > cap)
            throw BudgetExceeded("enumerating GL_" + std::to_string(n) + "(GF(" + std::to_string(field.order()) +
                                 ")) needs more than " + std::to_string(cap) + " candidates");
    }
    std::vector<Mat> out;
    out.reserve(gl_order(n, field.order()));
    Vec digits(n * n, 0);
    const Digit top = static_cast<Digit>(field.order() - 1);
    for (std::uint64_t c = 0; c < total; ++c) {
        if (vec_rank(field, n, n, digits) == n) out.emplace_back(field, n, n, digits);
        for (std::size_t k = digits.size(); k-- > 0;) {
            if (digits[k] < top) {
                ++digits[k];
                break;
            }
            digits[k] = 0;
        }
    }
    return out;
}

std::uint64_t group_size(std::size_t n, std::size_t p, int q) {
    return gl_order(n, q) * gl_order(p, q) * (n == p ? 2 : 1);
}

void for_each_group_element(std::size_t n, std::size_t p, Field field, bool allow_transpose, std::uint64_t budget,
                            const std::function<void(const Mat&, const Mat&, bool)>& fn) {
    std::uint64_t size = gl_order(n, field.order()) * gl_order(p, field.order()) * (allow_transpose ? 2 : 1);
    if (size > budget)
        throw BudgetExceeded("group of order " + std::to_string(size) + " exceeds budget " + std::to_string(budget));
    auto gl_n = enumerate_GL(n, field);
    auto gl_p = n == p ? gl_n : enumerate_GL(p, field);
    for (int t = 0; t < (allow_transpose ? 2 : 1); ++t) {
        const auto& lefts = t ? gl_p : gl_n;
        const auto& rights = t ? gl_n : gl_p;
        for (const Mat& P : lefts)
            for (const Mat& Qinv : rights) fn(P, Qinv, t == 1);
    }
}

CanonicalForm canonical_form(const MatSpace& v, std::uint64_t budget, unsigned workers) {
    const std::size_t n = v.rows(), p = v.cols();
    const bool with_t = n == p;
    std::uint64_t size = group_size(n, p, v.field().order());
    if (size > budget)
        throw BudgetExceeded("group of order " + std::to_string(size) + " exceeds budget " + std::to_string(budget));
    auto gl_n = enumerate_GL(n, v.field());
    auto gl_p = n == p ? gl_n : enumerate_GL(p, v.field());
    const auto basis = v.basis();

    struct Best {
        std::string key;
        VecSpace space;
        std::size_t t = 0, pi = 0, qi = 0;
        bool set = false;
    };
    // Work items are (transpose, P index) pairs, dealt round-robin.
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t t = 0; t < (with_t ? 2u : 1u); ++t)
        for (std::size_t pi = 0; pi < (t ? gl_p : gl_n).size(); ++pi) items.emplace_back(t, pi);

    workers = std::max(1u, workers);
    std::vector<Best> best(workers, Best{{}, VecSpace(v.field(), n * p)});
    auto run = [&](unsigned w) {
        Best& b = best[w];
        for (std::size_t k = w; k < items.size(); k += workers) {
            auto [t, pi] = items[k];
            const Mat& P = t ? gl_p[pi] : gl_n[pi];
            const auto& rights = t ? gl_n : gl_p;
            std::vector<Mat> left;
            left.reserve(basis.size());
            for (const Mat& x : basis) left.push_back(t ? P * x.transpose() : P * x);
            for (std::size_t qi = 0; qi < rights.size(); ++qi) {
                std::vector<Vec> vecs;
                vecs.reserve(left.size());
                for (const Mat& l : left) {
                    Mat y = l * rights[qi];
                    vecs.emplace_back(y.data().begin(), y.data().end());
                }
                VecSpace img = VecSpace::span(v.field(), n * p, vecs);
                std::string key = img.key();
                // Ties resolve to the earliest element in enumeration order.
                auto order_key = std::tuple(key, t, pi, qi);
                if (!b.set || order_key < std::tuple(b.key, b.t, b.pi, b.qi)) {
                    b = Best{std::move(key), std::move(img), t, pi, qi, true};
                }
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    const Best* winner = nullptr;
    for (const Best& b : best) {
        if (!b.set) continue;
        if (!winner || std::tuple(b.key, b.t, b.pi, b.qi) < std::tuple(winner->key, winner->t, winner->pi, winner->qi))
            winner = &b;
    }
    const auto& lefts = winner->t ? gl_p : gl_n;
    const auto& rights = winner->t ? gl_n : gl_p;
    auto [on, op] = winner->t ? std::pair{p, n} : std::pair{n, p};
    EquivalenceWitness w{lefts[winner->pi], inverse(rights[winner->qi]), winner->t == 1};
    return {MatSpace(on, op, winner->space), std::move(w)};
}

SpaceInvariants invariants(const MatSpace& v, std::uint64_t budget) {
    return {v.dim(), rank_distribution(v, budget), sum_of_images(v).dim(), common_kernel(v).dim()};
}

std::optional<EquivalenceWitness> are_equivalent(const MatSpace& a, const MatSpace& b, std::uint64_t budget,
                                                 TransposePolicy policy) {
    if (!(a.field() == b.field())) throw DimensionMismatch("spaces over different fields");
    const std::size_t n = a.rows(), p = a.cols();
    std::vector<bool> options;
    if (b.rows() == n && b.cols() == p) {
        options.push_back(false);
        if (n == p && policy == TransposePolicy::Allow) options.push_back(true);
    } else if (b.rows() == p && b.cols() == n && policy == TransposePolicy::Allow) {
        options.push_back(true);
    } else {
        return std::nullopt;
    }
    if (a.dim() != b.dim()) return std::nullopt;

    SpaceInvariants ia = invariants(a), ib = invariants(b);
    if (ia.rank_histogram != ib.rank_histogram) return std::nullopt;

    const auto basis = a.basis();
    const std::size_t bn = b.rows(), bp = b.cols();
    std::uint64_t cost = 0;
    for (bool t : options) {
        bool plausible = t ? (ia.image_dim + ib.kernel_dim == n && ia.kernel_dim + ib.image_dim == p)
                           : (ia.image_dim == ib.image_dim && ia.kernel_dim == ib.kernel_dim);
        if (!plausible) continue;
        cost += gl_order(bn, a.field().order()) * gl_order(bp, a.field().order());
        if (cost > budget)
            throw BudgetExceeded("equivalence search exceeds budget " + std::to_string(budget));
        auto lefts = enumerate_GL(bn, a.field());
        auto rights = bn == bp ? lefts : enumerate_GL(bp, a.field());
        for (const Mat& P : lefts) {
            std::vector<Mat> left;
            for (const Mat& x : basis) left.push_back(t ? P * x.transpose() : P * x);
            for (const Mat& Qinv : rights) {
                bool ok = true;
                for (const Mat& l : left)
                    if (!b.vectorized().contains((l * Qinv).data())) {
                        ok = false;
                        break;
                    }
                if (ok) return EquivalenceWitness{P, inverse(Qinv), t};
            }
        }
    }
    return std::nullopt;
}

OrbitIndex::OrbitIndex(const MatSpace& representative, bool allow_transpose, std::uint64_t budget)
    : rep_(representative) {
    const std::size_t n = rep_.rows(), p = rep_.cols();
    if (allow_transpose && n != p) throw PreconditionError("orbit index with transposition needs square shape");
    const auto basis = rep_.basis();
    for_each_group_element(n, p, rep_.field(), allow_transpose, budget,
                           [&](const Mat& P, const Mat& Qinv, bool t) {
                               VecSpace img = act_space(basis, rep_.field(), n * p, P, Qinv, t);
                               members_.try_emplace(img.key(), Entry{P, Qinv, t});
                           });
}

bool OrbitIndex::contains(const MatSpace& v) const {
    if (v.rows() != rep_.rows() || v.cols() != rep_.cols() || v.dim() != rep_.dim()) return false;
    return members_.contains(v.vectorized().key());
}

std::optional<EquivalenceWitness> OrbitIndex::witness_to_representative(const MatSpace& v) const {
    if (v.rows() != rep_.rows() || v.cols() != rep_.cols() || v.dim() != rep_.dim()) return std::nullopt;
    auto it = members_.find(v.vectorized().key());
    if (it == members_.end()) return std::nullopt;
    // Stored element maps the representative onto v; invert it.
    EquivalenceWitness forward{it->second.P, inverse(it->second.Qinv), it->second.transposed};
    return inverse(forward);
}

}  // namespace boundedrank
