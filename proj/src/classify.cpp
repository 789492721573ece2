#include "boundedrank/classify.hpp"

#include <algorithm>
#include <array>

#include "boundedrank/errors.hpp"
#include "boundedrank/grassmann.hpp"

namespace boundedrank {

namespace {

constexpr std::array<std::pair<Label, const char*>, 7> kLabelNames{{
    {Label::ImageConfined, "ImageConfined"},
    {Label::KernelConfined, "KernelConfined"},
    {Label::PrimitiveCol, "PrimitiveCol"},
    {Label::PrimitiveRow, "PrimitiveRow"},
    {Label::ExceptionalJ3, "ExceptionalJ3"},
    {Label::BelowThreshold, "BelowThreshold"},
    {Label::Counterexample, "Counterexample"},
}};

std::uint64_t plain_group_size(std::size_t n, std::size_t p, int q) { return gl_order(n, q) * gl_order(p, q); }

bool is_j3_case(std::size_t n, std::size_t p, std::size_t r, const Field& f) {
    return n == 3 && p == 3 && r == 2 && f.order() == 2;
}

std::size_t model_dim(std::size_t s, std::size_t t, std::size_t n, std::size_t p) {
    return n * p - (n - s) * (p - t);
}

std::optional<EquivalenceWitness> match(const MatSpace& v, const MatSpace& model, const OrbitIndex* idx,
                                        std::uint64_t budget) {
    if (v.dim() != model.dim()) return std::nullopt;
    if (idx) return idx->witness_to_representative(v);
    return are_equivalent(v, model, budget);
}

Vec vectorize(const Mat& m) { return Vec(m.data().begin(), m.data().end()); }

// Members of span(basis) on which `extract` vanishes.
template <class F>
std::vector<Mat> sub_kernel(const std::vector<Mat>& basis, F extract, const Mat& zero_shape) {
    if (basis.empty()) return {};
    const Mat probe = extract(basis[0]);
    const std::size_t m = probe.rows() * probe.cols();
    std::vector<Mat> out;
    if (m == 0) return basis;
    const Field f = basis[0].field();
    // Columns are the extracted images; kernel vectors are coefficient tuples.
    Mat t(f, m, basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Mat e = extract(basis[i]);
        for (std::size_t k = 0; k < m; ++k) t(k, i) = e.data()[k];
    }
    for (const Vec& c : kernel_basis(t)) {
        Mat acc = zero_shape;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (c[i]) acc = acc + basis[i].scaled(c[i]);
        out.push_back(std::move(acc));
    }
    return out;
}

Mat block_K(const Mat& m, std::size_t r) { return submatrix(m, 0, 0, r, r); }
Mat block_C(const Mat& m, std::size_t r) { return submatrix(m, 0, r, r, m.cols() - r); }
Mat block_L(const Mat& m, std::size_t r) { return submatrix(m, r, 0, m.rows() - r, r); }
Mat block_alpha(const Mat& m, std::size_t r) { return submatrix(m, r, r, m.rows() - r, m.cols() - r); }

std::vector<Mat> members(const MatSpace& v, std::uint64_t budget) {
    std::vector<Mat> out;
    for_each_member(v, budget, [&](const Mat& m, const Vec&) {
        out.push_back(m);
        return true;
    });
    return out;
}

void check_work(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t budget) {
    // a*b*c without overflow
    long double w = static_cast<long double>(a) * b * c;
    if (w > static_cast<long double>(budget)) throw BudgetExceeded("identity checks exceed budget");
}

// Greedily extend `vs` by unit vectors until it has `target` vectors.
std::vector<Vec> complete_with_units(const Field& f, std::size_t m, std::vector<Vec> vs, std::size_t target) {
    VecSpace cur = VecSpace::span(f, m, vs);
    for (std::size_t j = 0; j < m && vs.size() < target; ++j) {
        Vec e = unit_vector(m, j);
        if (cur.contains(e)) continue;
        vs.push_back(e);
        cur = VecSpace::span(f, m, vs);
    }
    return vs;
}

Mat from_columns(const Field& f, const std::vector<Vec>& cols) {
    const std::size_t m = cols.empty() ? 0 : cols[0].size();
    Mat out(f, m, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) out(i, j) = cols[j][i];
    return out;
}

// V is equivalent to R(s,t) exactly when dim V matches and some (p-t)-dim G
// is sent into some s-dim F by every member. Walks the choices of G only.
std::optional<EquivalenceWitness> match_model_R(const MatSpace& v, std::size_t s, std::size_t t) {
    const std::size_t n = v.rows(), p = v.cols();
    if (v.dim() != n * p - (n - s) * (p - t)) return std::nullopt;
    const Field& f = v.field();
    const auto basis = v.basis();
    for (SubspaceIter it(f, p, p - t); !it.done(); it.next()) {
        std::vector<Vec> images;
        for (const Mat& m : basis)
            for (const Vec& g : it.basis()) images.push_back(m.apply(g));
        VecSpace img = VecSpace::span(f, n, images);
        if (img.dim() > s) continue;
        std::vector<Vec> src = complete_with_units(f, p, it.basis(), p);
        std::rotate(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(p - t), src.end());
        EquivalenceWitness w{inverse(from_columns(f, complete_with_units(f, n, img.basis(), n))),
                             inverse(from_columns(f, src)), false};
        return w;
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(Label l) {
    for (auto [k, name] : kLabelNames)
        if (k == l) return name;
    return "?";
}

std::optional<Label> label_from_string(const std::string& s) {
    for (auto [k, name] : kLabelNames)
        if (s == name) return k;
    return std::nullopt;
}

bool ClassificationResult::has(Label l) const { return std::find(labels.begin(), labels.end(), l) != labels.end(); }

ModelCatalog::ModelCatalog(std::size_t n, std::size_t p, std::size_t r, Field field, std::uint64_t budget)
    : n_(n), p_(p), r_(r), field_(field) {
    if (r < 1 || r >= std::min(n, p)) throw PreconditionError("rank bound out of range");
    if (plain_group_size(n, p, field.order()) > budget) return;
    col_ = std::make_unique<OrbitIndex>(model_R(1, r - 1, n, p, field), false, budget);
    row_ = std::make_unique<OrbitIndex>(model_R(r - 1, 1, n, p, field), false, budget);
    if (is_j3_case(n, p, r, field)) j3_ = std::make_unique<OrbitIndex>(model_J3(field), false, budget);
}

bool ModelCatalog::matches(std::size_t n, std::size_t p, std::size_t r, const Field& field) const {
    return n == n_ && p == p_ && r == r_ && field == field_;
}

std::size_t critical_dimension(std::size_t n, std::size_t p, std::size_t r) {
    const std::size_t big = std::max(n, p), small = std::min(n, p);
    return big * r - r + 1 + small - big;
}

ClassificationResult classify(const MatSpace& v, std::size_t r, std::uint64_t budget, const ModelCatalog* catalog) {
    const std::size_t n = v.rows(), p = v.cols();
    if (r < 1 || r >= std::min(n, p)) throw PreconditionError("rank bound must lie in [1, min(n,p)-1]");
    if (!rank_at_most(v, r)) throw PreconditionError("space has a member of rank above the bound");
    if (catalog && !catalog->matches(n, p, r, v.field())) catalog = nullptr;

    ClassificationResult res;
    res.threshold = critical_dimension(n, p, r);
    std::vector<Label> labels;

    VecSpace img = sum_of_images(v);
    if (img.dim() <= r) {
        labels.push_back(Label::ImageConfined);
        res.image = img;
    }
    VecSpace ker = common_kernel(v);
    if (ker.dim() + r >= p) {
        labels.push_back(Label::KernelConfined);
        res.kernel = ker;
    }

    if (v.dim() < res.threshold) {
        labels.push_back(Label::BelowThreshold);
        res.labels = labels;
        std::sort(res.labels.begin(), res.labels.end());
        return res;
    }

    const Field& f = v.field();
    if (v.dim() == model_dim(1, r - 1, n, p)) {
        res.primitive_col = catalog && catalog->col() ? match(v, model_R(1, r - 1, n, p, f), catalog->col(), budget)
                                                      : match_model_R(v, 1, r - 1);
        if (res.primitive_col) labels.push_back(Label::PrimitiveCol);
    }
    if (v.dim() == model_dim(r - 1, 1, n, p)) {
        res.primitive_row = catalog && catalog->row() ? match(v, model_R(r - 1, 1, n, p, f), catalog->row(), budget)
                                                      : match_model_R(v, r - 1, 1);
        if (res.primitive_row) labels.push_back(Label::PrimitiveRow);
    }
    if (is_j3_case(n, p, r, f) && v.dim() == 5) {
        res.exceptional = match(v, model_J3(f), catalog ? catalog->j3() : nullptr, budget);
        if (res.exceptional) labels.push_back(Label::ExceptionalJ3);
    }

    // Read the theorem in the orientation with more rows than columns.
    const bool flip = n < p;
    const std::size_t big = std::max(n, p), small = std::min(n, p);
    auto has = [&](Label l) { return std::find(labels.begin(), labels.end(), l) != labels.end(); };
    const bool kern = has(flip ? Label::ImageConfined : Label::KernelConfined);
    const bool image = has(flip ? Label::KernelConfined : Label::ImageConfined);
    const bool col = has(flip ? Label::PrimitiveRow : Label::PrimitiveCol);
    const bool row = has(flip ? Label::PrimitiveCol : Label::PrimitiveRow);
    const bool j3 = has(Label::ExceptionalJ3);

    bool ok;
    if (v.dim() > res.threshold)
        ok = big == small ? (kern || image) : kern;
    else if (big == small)
        ok = kern || image || col || row || j3;
    else
        ok = kern || col || (image && (big == small + 1 || r == 1));
    if (!ok) labels.push_back(Label::Counterexample);

    res.labels = labels;
    std::sort(res.labels.begin(), res.labels.end());
    return res;
}

bool verify_result(const MatSpace& v, std::size_t r, const ClassificationResult& res) {
    const std::size_t n = v.rows(), p = v.cols();
    const auto basis = v.basis();
    if (res.has(Label::ImageConfined)) {
        if (!res.image || res.image->dim() > r) return false;
        for (const Mat& m : basis)
            for (std::size_t j = 0; j < p; ++j)
                if (!res.image->contains(m.col(j))) return false;
    }
    if (res.has(Label::KernelConfined)) {
        if (!res.kernel || res.kernel->dim() + r < p) return false;
        for (const Mat& m : basis)
            for (const Vec& g : res.kernel->basis()) {
                Vec mg = m.apply(g);
                if (std::any_of(mg.begin(), mg.end(), [](Digit d) { return d != 0; })) return false;
            }
    }
    auto check = [&](Label l, const std::optional<EquivalenceWitness>& w, const MatSpace& model) {
        if (!res.has(l)) return true;
        return w && apply_witness(v, *w) == model;
    };
    const Field& f = v.field();
    return check(Label::PrimitiveCol, res.primitive_col, model_R(1, r - 1, n, p, f)) &&
           check(Label::PrimitiveRow, res.primitive_row, model_R(r - 1, 1, n, p, f)) &&
           (!res.has(Label::ExceptionalJ3) || check(Label::ExceptionalJ3, res.exceptional, model_J3(f)));
}

std::pair<MatSpace, std::vector<Mat>> graph_decomposition(const MatSpace& v, std::size_t r) {
    const std::size_t n = v.rows(), p = v.cols();
    if (r == 0 || r >= p) throw PreconditionError("graph split needs 0 < r < p");
    const Field& f = v.field();
    std::vector<Vec> joint;
    for (const Mat& m : v.basis()) {
        Vec row = vectorize(submatrix(m, 0, 0, n, r));
        Vec tail = vectorize(submatrix(m, 0, r, n, p - r));
        row.insert(row.end(), tail.begin(), tail.end());
        joint.push_back(std::move(row));
    }
    VecSpace js = VecSpace::span(f, n * p, joint);
    for (std::size_t piv : js.pivots())
        if (piv >= n * r) throw PreconditionError("space is not a graph over its first columns");
    std::vector<Mat> w_basis, phi;
    for (const Vec& row : js.basis()) {
        w_basis.emplace_back(f, n, r, std::span<const Digit>(row).first(n * r));
        phi.emplace_back(f, n, p - r, std::span<const Digit>(row).subspan(n * r));
    }
    return {MatSpace::from_spanning(f, n, r, w_basis), phi};
}

MatSpace graph_space(const MatSpace& w, const std::vector<Mat>& phi) {
    if (phi.size() != w.dim()) throw DimensionMismatch("phi must give one image per basis matrix");
    const auto basis = w.basis();
    std::vector<Mat> rows;
    for (std::size_t i = 0; i < basis.size(); ++i) rows.push_back(hstack(basis[i], phi[i]));
    if (rows.empty()) throw PreconditionError("graph of the zero space has no shape");
    return MatSpace::from_spanning(rows);
}

bool rank_preservation_check(const MatSpace& w, const std::vector<Mat>& phi, std::uint64_t budget) {
    if (phi.size() != w.dim()) throw DimensionMismatch("phi must give one image per basis matrix");
    check_member_budget(w, budget);
    const std::size_t n = w.rows(), r = w.cols();
    if (w.dim() == 0) return true;
    const std::size_t s = phi[0].cols();
    const Field& f = w.field();
    // The concatenated basis is still reduced: its pivots sit in the W part.
    std::vector<Vec> joint;
    const auto basis = w.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (phi[i].rows() != n || phi[i].cols() != s) throw DimensionMismatch("phi images must share one shape");
        Vec row = vectorize(basis[i]);
        Vec tail = vectorize(phi[i]);
        row.insert(row.end(), tail.begin(), tail.end());
        joint.push_back(std::move(row));
    }
    VecSpace js = VecSpace::from_rref(f, n * (r + s), joint, w.vectorized().pivots());
    MemberCursor cur(js);
    Vec aug(n * (r + s));
    do {
        const Vec& m = cur.member();
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(m.begin() + i * r, r, aug.begin() + i * (r + s));
            std::copy_n(m.begin() + n * r + i * s, s, aug.begin() + i * (r + s) + r);
        }
        if (vec_rank(f, n, r, std::span<const Digit>(m).first(n * r)) != vec_rank(f, n, r + s, aug)) return false;
    } while (cur.next());
    return true;
}

Mat representation_solver(const MatSpace& w, const std::vector<Mat>& phi) {
    if (phi.size() != w.dim()) throw DimensionMismatch("phi must give one image per basis matrix");
    const std::size_t n = w.rows(), r = w.cols();
    const Field& f = w.field();
    if (w.dim() == 0) throw PreconditionError("zero space gives no information on C");
    const std::size_t s = phi[0].cols();
    const auto basis = w.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (phi[i].rows() != n || phi[i].cols() != s) throw DimensionMismatch("phi images must share one shape");
        VecSpace im = VecSpace::span(f, n, image_basis(basis[i]));
        for (std::size_t j = 0; j < s; ++j)
            if (!im.contains(phi[i].col(j))) throw PreconditionError("im phi(M) is not contained in im M");
    }
    // Unknown C(a,b) sits at index a*s+b; one equation per entry of M_i C.
    const std::size_t unknowns = r * s;
    Mat sys(f, basis.size() * n * s, unknowns + 1);
    std::size_t row = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t b = 0; b < s; ++b, ++row) {
                for (std::size_t a = 0; a < r; ++a) sys(row, a * s + b) = basis[i](u, a);
                sys(row, unknowns) = phi[i](u, b);
            }
    RrefResult red = rref(sys);
    Mat c(f, r, s);
    for (std::size_t k = 0; k < red.pivots.size(); ++k) {
        if (red.pivots[k] == unknowns) throw NoSolution("phi(M) = MC has no solution on W");
        std::size_t x = red.pivots[k];
        c(x / s, x % s) = red.reduced(k, unknowns);
    }
    return c;
}

VecSpace common_kernel_from_rep(const MatSpace& w, const std::vector<Mat>& phi) {
    Mat c = representation_solver(w, phi);
    const Field& f = w.field();
    const std::size_t r = c.rows(), s = c.cols();
    std::vector<Vec> cols;
    for (std::size_t b = 0; b < s; ++b) {
        Vec g(r + s, 0);
        for (std::size_t a = 0; a < r; ++a) g[a] = c(a, b);
        g[r + b] = f.neg(1);
        cols.push_back(std::move(g));
    }
    return VecSpace::span(f, r + s, cols);
}

std::vector<Vec> nice_basis(const VecSpace& h) {
    const std::size_t n = h.ambient();
    if (h.codim() < 2) throw CodimTooSmall("nice basis needs codim H >= 2");
    const Field& f = h.field();
    // Grow H to codimension exactly 2.
    std::vector<Vec> grown = complete_with_units(f, n, h.basis(), n - 2);
    VecSpace h0 = VecSpace::span(f, n, grown);

    // Standard model: sum of even coordinates = sum of odd coordinates = 0.
    Vec even(n, 0), odd(n, 0);
    for (std::size_t i = 0; i < n; ++i) (i % 2 ? odd : even)[i] = 1;
    VecSpace model = VecSpace::span(f, n, {even, odd}).orthogonal();

    Mat b0 = from_columns(f, complete_with_units(f, n, h0.basis(), n));
    Mat bm = from_columns(f, complete_with_units(f, n, model.basis(), n));
    Mat s = b0 * inverse(bm);
    std::vector<Vec> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(s.col(j));
    return out;
}

bool is_nice_basis(const VecSpace& h, const std::vector<Vec>& basis) {
    const std::size_t n = h.ambient();
    if (basis.size() != n || VecSpace::span(h.field(), n, basis).dim() != n) return false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        VecSpace plane = VecSpace::span(h.field(), n, {basis[i], basis[i + 1]});
        if (sum(h, plane).dim() != h.dim() + 2) return false;
    }
    return true;
}

VecSpace inverse_orbit_span(const MatSpace& v, const Vec& x, std::uint64_t budget) {
    const std::size_t n = v.rows();
    if (v.cols() != n) throw DimensionMismatch("inverse orbit needs square matrices");
    if (x.size() != n) throw DimensionMismatch("vector length does not match");
    if (std::all_of(x.begin(), x.end(), [](Digit d) { return d == 0; })) throw PreconditionError("x must be nonzero");
    VecSpace span(v.field(), n);
    for_each_member(v, budget, [&](const Mat& a, const Vec&) {
        if (mat_rank(a) < n) return true;
        Vec y = inverse(a).apply(x);
        if (!span.contains(y)) {
            std::vector<Vec> vs = span.basis();
            vs.push_back(std::move(y));
            span = VecSpace::span(v.field(), n, vs);
        }
        return span.dim() < n;
    });
    return span;
}

std::optional<StabilizedSubspace> stabilized_subspace_analysis(const MatSpace& y, std::uint64_t budget) {
    const std::size_t r = y.rows();
    if (y.cols() != r) throw DimensionMismatch("stabilizer analysis needs square matrices");
    if (y.dim() != r * r - r + 1) throw PreconditionError("dim Y must be r^2-r+1");
    if (r < 2) return std::nullopt;
    const Field& f = y.field();
    std::vector<Mat> invertible;
    for_each_member(y, budget, [&](const Mat& a, const Vec&) {
        if (mat_rank(a) == r) invertible.push_back(a);
        return true;
    });
    for (std::size_t d = 1; d < r; ++d) {
        if (d != 1 && d != r - 1) continue;  // the other dimensions cannot occur
        for (SubspaceIter it(f, r, d); !it.done(); it.next()) {
            VecSpace F = it.space();
            bool stable = std::all_of(invertible.begin(), invertible.end(), [&](const Mat& a) {
                return std::all_of(F.basis().begin(), F.basis().end(),
                                   [&](const Vec& u) { return F.contains(a.apply(u)); });
            });
            if (!stable) continue;
            StabModel model = d == 1 ? StabModel::Kr : StabModel::Hr;
            Mat b = from_columns(f, complete_with_units(f, r, F.basis(), r));
            Mat binv = inverse(b);
            EquivalenceWitness w{binv, binv, false};
            MatSpace target = model == StabModel::Kr ? model_Kr(r, f) : model_Hr(r, f);
            if (apply_witness(y, w) == target) return StabilizedSubspace{F, model, w};
        }
    }
    return std::nullopt;
}

EquivalenceWitness normalizing_witness(const Mat& m) {
    RrefResult red = rref(m);
    const std::size_t p = m.cols(), r = red.pivots.size();
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < r; ++j) cols.push_back(unit_vector(p, red.pivots[j]));
    for (Vec& k : kernel_basis(red.reduced)) cols.push_back(std::move(k));
    Mat qinv = from_columns(m.field(), cols);
    return {red.transform, inverse(qinv), false};
}

ReductionDiagnostics reduction_diagnostics(const MatSpace& v, std::size_t r, std::optional<EquivalenceWitness> normalizer,
                                           std::uint64_t budget) {
    const std::size_t n = v.rows(), p = v.cols();
    if (r < 1 || r >= std::min(n, p)) throw PreconditionError("rank must lie in [1, min(n,p)-1]");
    if (space_rank(v, budget) != r) throw PreconditionError("space rank differs from r");
    const Field& f = v.field();
    const Mat jr = Mat::j_block(f, n, p, r);

    EquivalenceWitness w = EquivalenceWitness::identity(f, n, p);
    if (normalizer) {
        validate(*normalizer, n, p);
        if (normalizer->transposed) throw PreconditionError("normalizer must not transpose");
        w = *normalizer;
    } else if (!v.contains(jr)) {
        std::optional<Mat> first;
        for_each_member(v, budget, [&](const Mat& m, const Vec&) {
            if (mat_rank(m) == r) first = m;
            return !first;
        });
        w = normalizing_witness(*first);
    }
    MatSpace vn = apply_witness(v, w);
    if (!vn.contains(jr)) throw PreconditionError("normalizer does not place J_r in the space");

    auto K = [r](const Mat& m) { return block_K(m, r); };
    auto C = [r](const Mat& m) { return block_C(m, r); };
    auto L = [r](const Mat& m) { return block_L(m, r); };
    auto A = [r](const Mat& m) { return block_alpha(m, r); };

    const Mat zero(f, n, p);
    const auto vb = vn.basis();
    auto Wb = sub_kernel(vb, K, zero);
    auto Hb = sub_kernel(Wb, L, zero);
    auto Hpb = sub_kernel(Wb, C, zero);

    std::vector<Mat> kimg, limg, cimg;
    for (const Mat& m : vb) kimg.push_back(K(m));
    for (const Mat& m : Wb) limg.push_back(L(m));
    for (const Mat& m : Hb) cimg.push_back(C(m));

    ReductionDiagnostics d{
        w,
        vn,
        MatSpace::from_spanning(f, n, p, Wb),
        MatSpace::from_spanning(f, n, p, Hb),
        MatSpace::from_spanning(f, n, p, Hpb),
        MatSpace::from_spanning(f, r, r, kimg),
        MatSpace::from_spanning(f, n - r, r, limg),
        MatSpace::from_spanning(f, r, p - r, cimg),
        VecSpace(f, r),
    };
    std::vector<Vec> gcols;
    for (const Mat& b : d.C_image.basis())
        for (std::size_t j = 0; j < b.cols(); ++j) gcols.push_back(b.col(j));
    d.G = VecSpace::span(f, r, gcols);
    d.qdim = d.G.dim();
    d.dimension_identity = vn.dim() == d.K_image.dim() + d.L_image.dim() + d.C_image.dim();

    struct Anchor {
        Mat pinv, l, c, alpha;
    };
    std::vector<Anchor> anchors;
    for (const Mat& a : members(vn, budget))
        if (mat_rank(K(a)) == r) anchors.push_back({inverse(K(a)), L(a), C(a), A(a)});
    std::vector<Mat> pinvs;
    for (const Mat& k : members(d.K_image, budget))
        if (mat_rank(k) == r) pinvs.push_back(inverse(k));
    const auto wm = members(d.W, budget);
    const auto hm = members(d.H, budget);

    check_work(anchors.size(), wm.size(), 1, budget);
    check_work(pinvs.size(), wm.size(), wm.size(), budget);

    d.eq1 = std::all_of(anchors.begin(), anchors.end(),
                        [](const Anchor& a) { return a.l * a.pinv * a.c == a.alpha; });
    d.eq2 = true;
    for (const Anchor& a : anchors)
        for (const Mat& m : wm) {
            Mat lhs = L(m) * a.pinv * C(m);
            Mat rhs = A(m) - L(m) * a.pinv * a.c - a.l * a.pinv * C(m);
            if (!(lhs == rhs)) d.eq2 = false;
        }
    d.eq3 = d.eq4 = true;
    for (const Mat& pinv : pinvs) {
        for (const Mat& m : wm)
            for (const Mat& nn : wm)
                if (!(L(m) * pinv * C(nn) + L(nn) * pinv * C(m)).is_zero()) d.eq3 = false;
        for (const Mat& m : wm)
            for (const Mat& nn : hm)
                if (!(L(m) * pinv * C(nn)).is_zero()) d.eq4 = false;
    }
    return d;
}

GateResult lastlemma_gate(const MatSpace& y, std::size_t r, std::uint64_t budget) {
    const std::size_t n = y.rows(), p = y.cols();
    const Field& f = y.field();
    if (!(n >= p && p > r && r >= 1)) throw PreconditionError("needs n >= p > r >= 1");
    if (y.dim() != n * r - r + 1 + p - n) throw PreconditionError("dim Y must be nr-r+1+p-n");
    if (!rank_at_most(y, r)) throw PreconditionError("space has a member of rank above r");
    std::vector<Mat> kimg;
    for (const Mat& m : y.basis()) kimg.push_back(block_K(m, r));
    if (!(MatSpace::from_spanning(f, r, r, kimg) == model_Kr(r, f))) throw PreconditionError("K(Y) is not K_r");
    for (std::size_t j = r; j < p; ++j)
        if (!y.contains(Mat::unit(f, n, p, 0, j))) throw PreconditionError("Y lacks a first-row corner matrix");
    for (std::size_t i = r; i < n; ++i)
        for (std::size_t j = 1; j < r; ++j)
            if (!y.contains(Mat::unit(f, n, p, i, j))) throw PreconditionError("Y lacks a lower-left corner matrix");

    GateResult out;
    if (auto w = are_equivalent(y, model_R(1, r - 1, n, p, f), budget)) {
        out.label = Label::PrimitiveCol;
        out.witness = w;
    } else if (is_j3_case(n, p, r, f)) {
        if (auto wj = are_equivalent(y, model_J3(f), budget)) {
            out.label = Label::ExceptionalJ3;
            out.witness = wj;
        }
    }
    out.counterexample = !out.label;
    return out;
}

}  // namespace boundedrank
