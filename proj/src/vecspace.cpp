#include "boundedrank/vecspace.hpp"

namespace boundedrank {

VecSpace::VecSpace(Field field, std::size_t ambient) : field_(field), ambient_(ambient) {}

VecSpace VecSpace::span(Field field, std::size_t ambient, const std::vector<Vec>& vectors) {
    VecSpace out(field, ambient);
    if (vectors.empty() || ambient == 0) return out;
    Mat stacked(field, vectors.size(), ambient);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != ambient) throw DimensionMismatch("vector length does not match ambient");
        for (std::size_t j = 0; j < ambient; ++j) {
            if (vectors[i][j] >= field.order()) throw DimensionMismatch("digit out of range for field");
            stacked(i, j) = vectors[i][j];
        }
    }
    RrefResult res = rref(stacked);
    out.pivots_ = res.pivots;
    for (std::size_t i = 0; i < res.pivots.size(); ++i) {
        auto r = res.reduced.row(i);
        out.basis_.emplace_back(r.begin(), r.end());
    }
    return out;
}

VecSpace VecSpace::from_rref(Field field, std::size_t ambient, std::vector<Vec> basis,
                            std::vector<std::size_t> pivots) {
    VecSpace out(field, ambient);
    out.basis_ = std::move(basis);
    out.pivots_ = std::move(pivots);
    return out;
}

VecSpace VecSpace::full(Field field, std::size_t ambient) {
    std::vector<Vec> units;
    for (std::size_t i = 0; i < ambient; ++i) units.push_back(unit_vector(ambient, i));
    return span(field, ambient, units);
}

Vec VecSpace::reduce(std::span<const Digit> v) const {
    if (v.size() != ambient_) throw DimensionMismatch("vector length does not match ambient");
    Vec r(v.begin(), v.end());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        Digit c = r[pivots_[i]];
        if (c == 0) continue;
        const Vec& b = basis_[i];
        for (std::size_t j = pivots_[i]; j < ambient_; ++j) r[j] = field_.sub(r[j], field_.mul(c, b[j]));
    }
    return r;
}

bool VecSpace::contains(std::span<const Digit> v) const {
    Vec r = reduce(v);
    for (Digit d : r)
        if (d) return false;
    return true;
}

Vec VecSpace::coordinates(std::span<const Digit> v) const {
    Vec c(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = v[pivots_[i]];
    return c;
}

Vec VecSpace::combine(std::span<const Digit> coeffs) const {
    if (coeffs.size() != basis_.size()) throw DimensionMismatch("coefficient count does not match dim");
    Vec v(ambient_, 0);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < ambient_; ++j) v[j] = field_.add(v[j], field_.mul(coeffs[i], basis_[i][j]));
    }
    return v;
}

VecSpace VecSpace::orthogonal() const {
    if (basis_.empty()) return full(field_, ambient_);
    Mat b(field_, basis_.size(), ambient_);
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < ambient_; ++j) b(i, j) = basis_[i][j];
    return span(field_, ambient_, kernel_basis(b));
}

std::string VecSpace::key() const {
    std::string k;
    k.reserve(basis_.size() * ambient_);
    for (const Vec& b : basis_)
        for (Digit d : b) k.push_back(static_cast<char>('0' + d));
    return k;
}

VecSpace sum(const VecSpace& a, const VecSpace& b) {
    if (!(a.field() == b.field()) || a.ambient() != b.ambient()) throw DimensionMismatch("ambient mismatch");
    std::vector<Vec> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return VecSpace::span(a.field(), a.ambient(), all);
}

VecSpace intersect(const VecSpace& a, const VecSpace& b) {
    if (!(a.field() == b.field()) || a.ambient() != b.ambient()) throw DimensionMismatch("ambient mismatch");
    return sum(a.orthogonal(), b.orthogonal()).orthogonal();
}

bool is_subspace(const VecSpace& small, const VecSpace& big) {
    for (const Vec& v : small.basis())
        if (!big.contains(v)) return false;
    return true;
}

Vec unit_vector(std::size_t m, std::size_t i) {
    Vec v(m, 0);
    v.at(i) = 1;
    return v;
}

}  // namespace boundedrank
