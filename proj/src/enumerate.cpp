#include "boundedrank/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_set>

#include "boundedrank/errors.hpp"

namespace boundedrank {

namespace {

constexpr std::array<std::pair<Theorem, const char*>, 9> kTheoremNames{{
    {Theorem::Square_a, "Square_a"},
    {Theorem::Square_b, "Square_b"},
    {Theorem::Rect_a, "Rect_a"},
    {Theorem::Rect_b, "Rect_b"},
    {Theorem::M3F2, "M3F2"},
    {Theorem::FlandersBound, "FlandersBound"},
    {Theorem::GenInverse, "GenInverse"},
    {Theorem::ReprLemma, "ReprLemma"},
    {Theorem::NoncomkerM3F2, "NoncomkerM3F2"},
}};

constexpr std::array<std::pair<Mode, const char*>, 3> kModeNames{{
    {Mode::Exhaustive, "Exhaustive"},
    {Mode::OrbitReduced, "OrbitReduced"},
    {Mode::Sampled, "Sampled"},
}};

std::uint64_t ipow(std::uint64_t q, std::size_t e, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (out > cap / q) throw BudgetExceeded("enumeration exceeds budget");
        out *= q;
    }
    return out;
}

// Row codes of a reduced basis, 8 bytes each; equal strings mean equal spaces.
std::string encode(const std::vector<Vec>& basis, int q) {
    std::string out;
    out.reserve(basis.size() * 8);
    for (const Vec& row : basis) {
        std::uint64_t code = 0;
        for (std::size_t k = row.size(); k-- > 0;) code = code * static_cast<std::uint64_t>(q) + row[k];
        out.append(reinterpret_cast<const char*>(&code), sizeof code);
    }
    return out;
}

VecSpace decode(const std::string& s, const Field& f, std::size_t m) {
    std::vector<Vec> rows;
    std::vector<std::size_t> pivots;
    for (std::size_t off = 0; off < s.size(); off += 8) {
        std::uint64_t code;
        std::copy_n(s.data() + off, 8, reinterpret_cast<char*>(&code));
        Vec row(m);
        for (std::size_t k = 0; k < m; ++k) {
            row[k] = static_cast<Digit>(code % static_cast<std::uint64_t>(f.order()));
            code /= static_cast<std::uint64_t>(f.order());
        }
        pivots.push_back(static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](Digit d) { return d; }) - row.begin()));
        rows.push_back(std::move(row));
    }
    return VecSpace::from_rref(f, m, std::move(rows), std::move(pivots));
}

struct Partial {
    std::uint64_t visited = 0;
    std::uint64_t survivors = 0;
    std::map<std::string, std::uint64_t> labels;
    std::map<std::string, std::uint64_t> counters;
    std::vector<MatSpace> violations;
    std::vector<std::string> survivor_codes;
};

void merge(CampaignReport& rep, std::vector<Partial>& parts, std::vector<std::string>* codes = nullptr) {
    for (Partial& p : parts) {
        rep.visited += p.visited;
        rep.survivors += p.survivors;
        for (auto& [k, v] : p.labels) rep.label_census[k] += v;
        for (auto& [k, v] : p.counters) rep.counters[k] += v;
        for (MatSpace& v : p.violations) rep.violations.push_back(std::move(v));
        if (codes)
            for (std::string& c : p.survivor_codes) codes->push_back(std::move(c));
    }
}

// Runs fn(begin, end, part) over [0, total) in chunks. Chunks are merged in
// index order, so the outcome does not depend on the worker count.
template <class Fn>
std::vector<Partial> run_chunks(std::uint64_t total, unsigned workers, Fn fn) {
    workers = std::max(1u, workers);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, total / (std::uint64_t{workers} * 64));
    const std::uint64_t nchunks = total == 0 ? 0 : (total + chunk - 1) / chunk;
    std::vector<Partial> parts(nchunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto work = [&] {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            try {
                fn(c * chunk, std::min(total, (c + 1) * chunk), parts[c]);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!err) err = std::current_exception();
                next = nchunks;
                return;
            }
        }
    };
    if (workers == 1 || nchunks <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::uint64_t>(workers, nchunks); ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    return parts;
}

std::uint64_t sample_rank(std::uint64_t seed, std::uint64_t i, std::uint64_t total) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    return std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
}

bool is_rank_family(Theorem t) {
    switch (t) {
        case Theorem::Square_a:
        case Theorem::Square_b:
        case Theorem::Rect_a:
        case Theorem::Rect_b:
        case Theorem::M3F2:
        case Theorem::FlandersBound: return true;
        default: return false;
    }
}

// The disjunction each theorem asserts for a surviving space.
bool theorem_holds(const CampaignSpec& s, const ClassificationResult& res) {
    const bool image = res.has(Label::ImageConfined), kern = res.has(Label::KernelConfined);
    const bool col = res.has(Label::PrimitiveCol), row = res.has(Label::PrimitiveRow);
    switch (s.theorem) {
        case Theorem::Square_a: return image || kern;
        case Theorem::Square_b: return image || kern || col || row;
        case Theorem::Rect_a: return kern;
        case Theorem::Rect_b: return kern || col || (image && (s.n == s.p + 1 || s.r == 1));
        case Theorem::M3F2: return image || kern || col || row || res.has(Label::ExceptionalJ3);
        default: return false;
    }
}

std::vector<ClassCensus> flood(const std::vector<std::string>& codes, std::size_t n, std::size_t p, const Field& f,
                               std::size_t r) {
    const bool allow_t = n == p;
    std::unordered_set<std::string> seen;
    std::vector<ClassCensus> out;
    for (const std::string& code : codes) {
        if (seen.contains(code)) continue;
        MatSpace v(n, p, decode(code, f, n * p));
        const auto basis = v.basis();
        std::uint64_t size = 0;
        for_each_group_element(n, p, f, allow_t, kDefaultGroupBudget, [&](const Mat& P, const Mat& Qinv, bool t) {
            std::vector<Vec> imgs;
            for (const Mat& x : basis) {
                Mat y = P * (t ? x.transpose() : x) * Qinv;
                imgs.emplace_back(y.data().begin(), y.data().end());
            }
            if (seen.insert(encode(VecSpace::span(f, n * p, imgs).basis(), f.order())).second) ++size;
        });
        ClassCensus c{canonical_form(v).space, size, {}};
        if (r >= 1 && r < std::min(n, p)) c.labels = classify(c.representative, r).labels;
        out.push_back(std::move(c));
    }
    return out;
}

void check_mode(const CampaignSpec& s, bool sampled_ok, bool orbit_ok) {
    if (s.mode == Mode::Sampled && !sampled_ok) throw PreconditionError(to_string(s.theorem) + " has no sampled mode");
    if (s.mode == Mode::OrbitReduced && !orbit_ok)
        throw PreconditionError(to_string(s.theorem) + " has no orbit-reduced mode");
}

// ---- rank-bounded subspaces of Mat_{n,p} -----------------------------------

CampaignReport run_rank_family(const CampaignSpec& s) {
    const Field f(s.order);
    CampaignReport rep;
    rep.spec = s;
    SubspaceIter base(f, s.n * s.p, s.target_dim);
    RankFilter filter(f, s.n, s.p, s.r);
    const bool flanders = s.theorem == Theorem::FlandersBound;
    std::unique_ptr<ModelCatalog> catalog;
    if (!flanders) catalog = std::make_unique<ModelCatalog>(s.n, s.p, s.r, f);
    const bool orbit = s.mode == Mode::OrbitReduced;

    auto visit = [&](const SubspaceIter& it, Partial& part) {
        ++part.visited;
        if (!filter.accepts(it.basis())) return;
        ++part.survivors;
        if (flanders) {
            part.violations.emplace_back(s.n, s.p, it.space());
            return;
        }
        if (orbit) {
            part.survivor_codes.push_back(encode(it.basis(), s.order));
            return;
        }
        MatSpace v(s.n, s.p, it.space());
        ClassificationResult res = classify(v, s.r, kDefaultGroupBudget, catalog.get());
        for (Label l : res.labels) ++part.labels[to_string(l)];
        if (!theorem_holds(s, res) || res.has(Label::Counterexample) || !verify_result(v, s.r, res))
            part.violations.push_back(std::move(v));
    };

    std::vector<Partial> parts;
    if (s.mode == Mode::Sampled) {
        const std::uint64_t total = base.count();
        parts = run_chunks(s.samples, s.workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
            SubspaceIter it(base);
            for (std::uint64_t i = b; i < e; ++i) {
                it.set_range(sample_rank(*s.seed, i, total), total);
                visit(it, part);
            }
        });
    } else {
        parts = run_chunks(base.count(), s.workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
            SubspaceIter it(base);
            for (it.set_range(b, e); !it.done(); it.next()) visit(it, part);
        });
    }
    std::vector<std::string> codes;
    merge(rep, parts, &codes);
    if (orbit) {
        rep.classes = flood(codes, s.n, s.p, f, s.r);
        for (const ClassCensus& c : rep.classes) {
            ClassificationResult res = classify(c.representative, s.r, kDefaultGroupBudget, catalog.get());
            for (Label l : res.labels) ++rep.label_census[to_string(l)];
            if (!theorem_holds(s, res) || res.has(Label::Counterexample) ||
                !verify_result(c.representative, s.r, res))
                rep.violations.push_back(c.representative);
        }
    }
    return rep;
}

// ---- inverse orbits ----------------------------------------------------------

CampaignReport run_geninverse(const CampaignSpec& s) {
    const Field f(s.order);
    const std::size_t n = s.n, m = n * n;
    CampaignReport rep;
    rep.spec = s;
    std::vector<SubspaceIter> iters;
    std::vector<std::uint64_t> offsets{0};
    for (std::size_t d = s.target_dim; d <= m; ++d) {
        iters.emplace_back(f, m, d);
        offsets.push_back(offsets.back() + iters.back().count());
    }
    std::vector<Vec> xs;
    for (std::uint64_t code = 1; code < ipow(s.order, n, ~0ull); ++code) {
        Vec x(n);
        std::uint64_t c = code;
        for (std::size_t k = 0; k < n; ++k, c /= s.order) x[k] = static_cast<Digit>(c % s.order);
        xs.push_back(std::move(x));
    }
    auto visit = [&](const MatSpace& v, Partial& part) {
        ++part.visited;
        std::vector<Mat> invertible;
        for_each_member(v, kDefaultMemberBudget, [&](const Mat& a, const Vec&) {
            if (mat_rank(a) == n) invertible.push_back(a);
            return true;
        });
        // Inverses are computed on demand; most spans fill up after a few.
        std::vector<std::optional<Mat>> inverses(invertible.size());
        bool bad = false;
        for (const Vec& x : xs) {
            ++part.counters["vectors"];
            VecSpace span(f, n);
            for (std::size_t i = 0; i < invertible.size() && span.dim() < n; ++i) {
                if (!inverses[i]) inverses[i] = inverse(invertible[i]);
                Vec y = inverses[i]->apply(x);
                if (span.contains(y)) continue;
                std::vector<Vec> gens = span.basis();
                gens.push_back(std::move(y));
                span = VecSpace::span(f, n, gens);
            }
            if (span.dim() != n) bad = true;
        }
        if (bad) part.violations.push_back(v);
    };
    const std::uint64_t total = s.mode == Mode::Sampled ? s.samples : offsets.back();
    auto parts = run_chunks(total, s.workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
        for (std::uint64_t i = b; i < e; ++i) {
            std::uint64_t g = s.mode == Mode::Sampled ? sample_rank(*s.seed, i, offsets.back()) : i;
            std::size_t k = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), g) - offsets.begin()) - 1;
            visit(MatSpace(n, n, iters[k].at(g - offsets[k])), part);
        }
    });
    merge(rep, parts);
    rep.survivors = rep.visited;
    return rep;
}

// ---- graphs {[M | phi(M)]} over subspaces W of Mat_{n,r} -------------------

struct GraphWalk {
    // Members of W, as coefficient tuples and matrices.
    std::vector<Vec> coeffs;
    std::vector<Mat> mats;
};

GraphWalk walk_members(const MatSpace& w) {
    GraphWalk g;
    for_each_member(w, kDefaultMemberBudget, [&](const Mat& m, const Vec& c) {
        g.coeffs.push_back(c);
        g.mats.push_back(m);
        return true;
    });
    return g;
}

// Odometer over the digits of phi: k images, each n x s. step() returns the
// list of positions that moved by +1 (mod q).
class PhiOdometer {
public:
    PhiOdometer(std::size_t digits, int q) : d_(digits, 0), q_(static_cast<Digit>(q)) {}
    const std::vector<Digit>& digits() const { return d_; }
    bool step(std::vector<std::size_t>& moved) {
        moved.clear();
        for (std::size_t k = d_.size(); k-- > 0;) {
            moved.push_back(k);
            if (++d_[k] < q_) return true;
            d_[k] = 0;
        }
        return false;
    }

private:
    std::vector<Digit> d_;
    Digit q_;
};

std::vector<Mat> phi_from_digits(const Field& f, const std::vector<Digit>& d, std::size_t k, std::size_t n,
                                 std::size_t s) {
    std::vector<Mat> out;
    for (std::size_t i = 0; i < k; ++i)
        out.emplace_back(f, n, s, std::span<const Digit>(d).subspan(i * n * s, n * s));
    return out;
}

CampaignReport run_repr(const CampaignSpec& s) {
    const Field f(s.order);
    const std::size_t n = s.n, r = s.r, cols = s.p;
    const int q = s.order;
    CampaignReport rep;
    rep.spec = s;
    std::vector<SubspaceIter> iters;
    std::vector<std::uint64_t> offsets{0};
    for (std::size_t d = s.target_dim; d <= n * r; ++d) {
        iters.emplace_back(f, n * r, d);
        offsets.push_back(offsets.back() + iters.back().count());
    }
    auto visit = [&](const MatSpace& w, Partial& part) {
        ++part.visited;
        const std::size_t k = w.dim();
        const GraphWalk g = walk_members(w);
        // Annihilators of each member's image: phi(M) must be orthogonal to them.
        std::vector<std::vector<Vec>> ann;
        for (const Mat& m : g.mats) ann.push_back(VecSpace::span(f, n, image_basis(m)).orthogonal().basis());
        // vals[j][a][b] = ann[j][a] . column b of phi(M_j)
        std::vector<std::vector<std::vector<Digit>>> vals(g.mats.size());
        for (std::size_t j = 0; j < g.mats.size(); ++j)
            vals[j].assign(ann[j].size(), std::vector<Digit>(cols, 0));
        std::uint64_t bad = 0;
        const std::size_t ndig = k * n * cols;
        ipow(q, ndig, s.budget);
        PhiOdometer od(ndig, q);
        std::vector<std::size_t> moved;
        const auto basis = w.basis();
        do {
            ++part.counters["candidate_maps"];
            if (bad == 0) {
                ++part.counters["admissible_maps"];
                auto phi = phi_from_digits(f, od.digits(), k, n, cols);
                bool ok = true;
                try {
                    Mat c = representation_solver(w, phi);
                    for (std::size_t j = 0; j < g.mats.size() && ok; ++j) {
                        Mat image(f, n, cols);
                        for (std::size_t i = 0; i < k; ++i) image = image + phi[i].scaled(g.coeffs[j][i]);
                        ok = g.mats[j] * c == image;
                    }
                } catch (const NoSolution&) {
                    ok = false;
                }
                if (!ok) part.violations.push_back(graph_space(w, phi));
            }
            if (!od.step(moved)) break;
            for (std::size_t pos : moved) {
                const std::size_t i = pos / (n * cols), e = (pos / cols) % n, b = pos % cols;
                for (std::size_t j = 0; j < g.mats.size(); ++j) {
                    const Digit c = g.coeffs[j][i];
                    if (!c) continue;
                    for (std::size_t a = 0; a < ann[j].size(); ++a) {
                        Digit& v = vals[j][a][b];
                        const Digit nv = f.add(v, f.mul(c, ann[j][a][e]));
                        bad += (nv != 0) - (v != 0);
                        v = nv;
                    }
                }
            }
        } while (true);
    };
    auto parts = run_chunks(offsets.back(), s.workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
        for (std::uint64_t i = b; i < e; ++i) {
            std::size_t k = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), i) - offsets.begin()) - 1;
            visit(MatSpace(n, r, iters[k].at(i - offsets[k])), part);
        }
    });
    merge(rep, parts);
    rep.survivors = rep.counters["admissible_maps"];
    return rep;
}

MatSpace padded_j3(std::size_t p) {
    if (p == 3) return model_J3();
    std::vector<Mat> gens;
    for (const Mat& m : model_J3().basis()) gens.push_back(hstack(m, Mat(Field(2), 3, p - 3)));
    return MatSpace::from_spanning(gens);
}

CampaignReport run_noncomker(const CampaignSpec& s) {
    const Field f(2);
    const std::size_t n = s.n, r = s.r, p = s.p, cols = p - r;
    CampaignReport rep;
    rep.spec = s;
    SubspaceIter base(f, n * r, s.target_dim);
    const auto* table = rank_lookup_table(f, n, p);
    if (!table) throw BudgetExceeded("no rank table for this shape");
    OrbitIndex j3(padded_j3(p), false);

    auto visit = [&](const MatSpace& w, Partial& part) {
        const std::size_t k = w.dim();
        const GraphWalk g = walk_members(w);
        std::vector<std::uint64_t> code(g.mats.size(), 0);
        for (std::size_t j = 0; j < g.mats.size(); ++j)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t a = 0; a < r; ++a)
                    if (g.mats[j](e, a)) code[j] |= std::uint64_t{1} << (e * p + a);
        const std::size_t ndig = k * n * cols;
        ipow(2, ndig, s.budget);
        PhiOdometer od(ndig, 2);
        std::vector<std::size_t> moved;
        do {
            ++part.visited;
            bool small = std::all_of(code.begin(), code.end(), [&](std::uint64_t c) { return (*table)[c] <= r; });
            if (small) {
                ++part.survivors;
                MatSpace v = graph_space(w, phi_from_digits(f, od.digits(), k, n, cols));
                if (common_kernel(v).dim() + r >= p) {
                    ++part.labels[to_string(Label::KernelConfined)];
                } else if (j3.contains(v)) {
                    ++part.labels[to_string(Label::ExceptionalJ3)];
                } else {
                    part.violations.push_back(std::move(v));
                }
            }
            if (!od.step(moved)) break;
            for (std::size_t pos : moved) {
                const std::size_t i = pos / (n * cols), e = (pos / cols) % n, b = pos % cols;
                const std::uint64_t bit = std::uint64_t{1} << (e * p + r + b);
                for (std::size_t j = 0; j < g.mats.size(); ++j)
                    if (g.coeffs[j][i]) code[j] ^= bit;
            }
        } while (true);
    };
    auto parts = run_chunks(base.count(), s.workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
        for (std::uint64_t i = b; i < e; ++i) visit(MatSpace(n, r, base.at(i)), part);
    });
    merge(rep, parts);
    rep.counters["subspaces_W"] = base.count();
    return rep;
}

}  // namespace

std::string to_string(Theorem t) {
    for (auto [k, name] : kTheoremNames)
        if (k == t) return name;
    return "?";
}

std::string to_string(Mode m) {
    for (auto [k, name] : kModeNames)
        if (k == m) return name;
    return "?";
}

std::optional<Theorem> theorem_from_string(const std::string& s) {
    for (auto [k, name] : kTheoremNames)
        if (s == name) return k;
    return std::nullopt;
}

std::optional<Mode> mode_from_string(const std::string& s) {
    for (auto [k, name] : kModeNames)
        if (s == name) return k;
    return std::nullopt;
}

CampaignSpec default_campaign(Theorem t, std::size_t n, std::size_t p, std::size_t r, int order) {
    CampaignSpec s;
    s.theorem = t;
    s.n = n;
    s.p = p;
    s.r = r;
    s.order = order;
    const std::size_t crit = critical_dimension(n, p, r);
    switch (t) {
        case Theorem::Square_a:
        case Theorem::Rect_a: s.target_dim = crit + 1; break;
        case Theorem::Square_b:
        case Theorem::Rect_b:
        case Theorem::M3F2: s.target_dim = crit; break;
        case Theorem::FlandersBound: s.target_dim = r * std::max(n, p) + 1; break;
        case Theorem::GenInverse: s.target_dim = n * n - 1; break;
        case Theorem::ReprLemma: s.target_dim = n * r - n + 2; break;
        case Theorem::NoncomkerM3F2: s.target_dim = 5; break;
    }
    return s;
}

void validate(const CampaignSpec& s) {
    Field f(s.order);  // rejects unsupported orders
    if (s.n == 0 || s.p == 0) throw PreconditionError("empty shape");
    if (s.mode == Mode::Sampled) {
        if (!s.seed) throw PreconditionError("sampled mode needs a seed");
        if (s.samples == 0) throw PreconditionError("sampled mode needs a positive sample count");
        if (s.samples > s.budget) throw BudgetExceeded("sample count exceeds budget");
    }
    auto need = [](bool ok, const char* what) {
        if (!ok) throw PreconditionError(what);
    };
    if (is_rank_family(s.theorem)) {
        need(s.r >= 1 && s.r < std::min(s.n, s.p), "r must lie in [1, min(n,p)-1]");
        need(s.target_dim <= s.n * s.p, "dimension exceeds n*p");
        const std::size_t crit = critical_dimension(s.n, s.p, s.r);
        switch (s.theorem) {
            case Theorem::Square_a: need(s.n == s.p && s.target_dim > crit, "Square_a needs n = p and dim > nr-r+1"); break;
            case Theorem::Square_b:
                need(s.n == s.p && s.target_dim == crit, "Square_b needs n = p and dim = nr-r+1");
                need(!(s.n == 3 && s.r == 2 && s.order == 2), "Square_b excludes (3,2,2); use M3F2");
                break;
            case Theorem::Rect_a: need(s.n > s.p && s.target_dim > crit, "Rect_a needs n > p and dim > nr-r+1+p-n"); break;
            case Theorem::Rect_b: need(s.n > s.p && s.target_dim == crit, "Rect_b needs n > p and dim = nr-r+1+p-n"); break;
            case Theorem::M3F2:
                need(s.n == 3 && s.p == 3 && s.r == 2 && s.order == 2 && s.target_dim == 5, "M3F2 is (n,p,r,q,d) = (3,3,2,2,5)");
                break;
            case Theorem::FlandersBound:
                need(s.target_dim > s.r * std::max(s.n, s.p), "FlandersBound needs dim > r*max(n,p)");
                check_mode(s, true, false);
                break;
            default: break;
        }
        if (s.mode != Mode::Sampled && gaussian_binomial(s.n * s.p, s.target_dim, s.order) > s.budget)
            throw BudgetExceeded("subspace count exceeds budget");
        if (s.mode == Mode::OrbitReduced && group_size(s.n, s.p, s.order) > kDefaultGroupBudget)
            throw BudgetExceeded("group too large for orbit reduction");
        return;
    }
    switch (s.theorem) {
        case Theorem::GenInverse:
            need(s.n == s.p, "GenInverse works in square matrices");
            need(s.target_dim <= s.n * s.n && s.n * s.n - s.target_dim + 1 < s.n, "GenInverse needs codim V < n-1");
            check_mode(s, true, false);
            if (s.mode == Mode::Exhaustive) {
                std::uint64_t total = 0;
                for (std::size_t d = s.target_dim; d <= s.n * s.n; ++d) total += gaussian_binomial(s.n * s.n, d, s.order);
                if (total > s.budget) throw BudgetExceeded("subspace count exceeds budget");
            }
            break;
        case Theorem::ReprLemma:
            need(s.r >= 1 && s.r < s.n && s.p >= 1, "ReprLemma needs n > r >= 1 and p >= 1");
            need(s.target_dim + s.n >= s.n * s.r + 2 && s.target_dim <= s.n * s.r, "ReprLemma needs dim W >= nr-n+2");
            check_mode(s, false, false);
            break;
        case Theorem::NoncomkerM3F2:
            need(s.n == 3 && s.r == 2 && s.order == 2 && s.target_dim == 5 && s.p >= 3,
                 "NoncomkerM3F2 is n = 3, r = 2, q = 2, dim W = 5, p >= 3");
            check_mode(s, false, false);
            break;
        default: break;
    }
}

CampaignReport run_campaign(const CampaignSpec& spec) {
    validate(spec);
    const auto start = std::chrono::steady_clock::now();
    CampaignReport rep;
    if (is_rank_family(spec.theorem))
        rep = run_rank_family(spec);
    else if (spec.theorem == Theorem::GenInverse)
        rep = run_geninverse(spec);
    else if (spec.theorem == Theorem::ReprLemma)
        rep = run_repr(spec);
    else
        rep = run_noncomker(spec);
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

RankFilter::RankFilter(Field field, std::size_t n, std::size_t p, std::size_t r)
    : field_(field), n_(n), p_(p), r_(r), table_(rank_lookup_table(field, n, p)) {}

bool RankFilter::accepts(const std::vector<Vec>& basis) const {
    if (r_ >= std::min(n_, p_)) return true;
    const std::size_t m = n_ * p_;
    if (table_ && field_.order() == 2) {
        // Gray code: each step adds one basis vector.
        std::uint32_t codes[64];
        const std::size_t k = basis.size();
        if (k >= 32) goto generic;
        for (std::size_t i = 0; i < k; ++i) {
            std::uint32_t c = 0;
            for (std::size_t j = 0; j < m; ++j)
                if (basis[i][j]) c |= std::uint32_t{1} << j;
            codes[i] = c;
        }
        std::uint32_t cur = 0;
        for (std::uint64_t g = 1; g < (std::uint64_t{1} << k); ++g) {
            cur ^= codes[std::countr_zero(g)];
            if ((*table_)[cur] > r_) return false;
        }
        return true;
    }
generic:
    const VecSpace vs = VecSpace::span(field_, m, basis);
    MemberCursor cur(vs);
    do {
        if (vec_rank(field_, n_, p_, cur.member()) > r_) return false;
    } while (cur.next());
    return true;
}

void for_each_bounded_rank(std::size_t n, std::size_t p, Field field, std::size_t d, std::size_t r,
                           std::uint64_t budget, const std::function<void(const MatSpace&)>& fn) {
    if (gaussian_binomial(n * p, d, field.order()) > budget) throw BudgetExceeded("subspace count exceeds budget");
    RankFilter filter(field, n, p, r);
    for (SubspaceIter it(field, n * p, d); !it.done(); it.next())
        if (filter.accepts(it.basis())) fn(MatSpace(n, p, it.space()));
}

std::vector<ClassCensus> orbit_census(std::size_t n, std::size_t p, Field field, std::size_t d, std::size_t r,
                                      std::uint64_t budget, unsigned workers) {
    if (gaussian_binomial(n * p, d, field.order()) > budget) throw BudgetExceeded("subspace count exceeds budget");
    if (group_size(n, p, field.order()) > kDefaultGroupBudget) throw BudgetExceeded("group too large for a census");
    SubspaceIter base(field, n * p, d);
    RankFilter filter(field, n, p, r);
    auto parts = run_chunks(base.count(), workers, [&](std::uint64_t b, std::uint64_t e, Partial& part) {
        SubspaceIter it(base);
        for (it.set_range(b, e); !it.done(); it.next())
            if (filter.accepts(it.basis())) part.survivor_codes.push_back(encode(it.basis(), field.order()));
    });
    std::vector<std::string> codes;
    for (Partial& pt : parts)
        for (std::string& c : pt.survivor_codes) codes.push_back(std::move(c));
    return flood(codes, n, p, field, r);
}

}  // namespace boundedrank
