#include "boundedrank/mat.hpp"

#include <algorithm>
#include <string>

#include "boundedrank/gf2.hpp"

namespace boundedrank {

Mat::Mat(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Mat::Mat(Field field, std::size_t rows, std::size_t cols, std::span<const Digit> row_major)
    : field_(field), rows_(rows), cols_(cols), data_(row_major.begin(), row_major.end()) {
    if (data_.size() != rows * cols) throw DimensionMismatch("entry count does not match shape");
    for (Digit d : data_)
        if (d >= field.order()) throw DimensionMismatch("digit out of range for field");
}

Mat Mat::identity(Field field, std::size_t n) { return j_block(field, n, n, n); }

Mat Mat::j_block(Field field, std::size_t n, std::size_t p, std::size_t r) {
    if (r > std::min(n, p)) throw DimensionMismatch("J_r needs r <= min(n, p)");
    Mat m(field, n, p);
    for (std::size_t i = 0; i < r; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::unit(Field field, std::size_t n, std::size_t p, std::size_t i, std::size_t j) {
    Mat m(field, n, p);
    m(i, j) = 1;
    return m;
}

Mat Mat::from_rows(Field field, std::initializer_list<std::initializer_list<int>> rows) {
    std::size_t n = rows.size();
    std::size_t p = n ? rows.begin()->size() : 0;
    Mat m(field, n, p);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != p) throw DimensionMismatch("ragged row list");
        std::size_t j = 0;
        for (int v : r) m(i, j++) = field.reduce(v);
        ++i;
    }
    return m;
}

Mat Mat::column(Field field, std::span<const Digit> v) { return Mat(field, v.size(), 1, v); }

Vec Mat::col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

bool Mat::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Digit d) { return d == 0; });
}

Mat Mat::transpose() const {
    Mat t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::scaled(Digit s) const {
    Mat out(*this);
    for (Digit& d : out.data_) d = field_.mul(d, s);
    return out;
}

Vec Mat::apply(std::span<const Digit> x) const {
    if (x.size() != cols_) throw DimensionMismatch("vector length does not match columns");
    Vec y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = field_.reduce(acc);
    }
    return y;
}

namespace {

void check_same_shape(const Mat& a, const Mat& b) {
    if (!(a.field() == b.field()) || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("shape or field mismatch");
}

bool packable(const Mat& m) { return m.field().order() == 2 && m.cols() <= 64 && m.rows() <= 64; }

std::vector<gf2::Word> pack_rows(const Mat& m) {
    std::vector<gf2::Word> rows(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j)) rows[i] |= gf2::Word{1} << j;
    return rows;
}

Mat unpack_rows(Field f, std::span<const gf2::Word> rows, std::size_t cols) {
    Mat m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<Digit>((rows[i] >> j) & 1);
    return m;
}

}  // namespace

Mat operator+(const Mat& a, const Mat& b) {
    check_same_shape(a, b);
    Mat out(a);
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] = a.field_.add(a.data_[k], b.data_[k]);
    return out;
}

Mat operator-(const Mat& a, const Mat& b) {
    check_same_shape(a, b);
    Mat out(a);
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] = a.field_.sub(a.data_[k], b.data_[k]);
    return out;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (!(a.field_ == b.field_) || a.cols_ != b.rows_) throw DimensionMismatch("product shape mismatch");
    Mat out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) {
            int acc = 0;
            for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = a.field_.reduce(acc);
        }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Mat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << static_cast<int>(m(i, j));
        os << '\n';
    }
    return os;
}

namespace generic {

RrefResult rref(const Mat& m) {
    const Field& f = m.field();
    Mat R = m;
    Mat T = Mat::identity(f, m.rows());
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    auto swap_rows = [](Mat& x, std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(a, j), x(b, j));
    };
    // row_a -= s * row_b
    auto axpy = [&f](Mat& x, std::size_t a, std::size_t b, Digit s) {
        for (std::size_t j = 0; j < x.cols(); ++j) x(a, j) = f.sub(x(a, j), f.mul(s, x(b, j)));
    };
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t found = m.rows();
        for (std::size_t i = r; i < m.rows(); ++i)
            if (R(i, c) != 0) {
                found = i;
                break;
            }
        if (found == m.rows()) continue;
        swap_rows(R, r, found);
        swap_rows(T, r, found);
        Digit s = f.inv(R(r, c));
        if (s != 1) {
            for (std::size_t j = 0; j < R.cols(); ++j) R(r, j) = f.mul(R(r, j), s);
            for (std::size_t j = 0; j < T.cols(); ++j) T(r, j) = f.mul(T(r, j), s);
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || R(i, c) == 0) continue;
            Digit factor = R(i, c);
            axpy(R, i, r, factor);
            axpy(T, i, r, factor);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(R), std::move(T), std::move(pivots)};
}

std::size_t rank(const Mat& m) {
    const Field& f = m.field();
    Mat R = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t found = m.rows();
        for (std::size_t i = r; i < m.rows(); ++i)
            if (R(i, c) != 0) {
                found = i;
                break;
            }
        if (found == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(R(r, j), R(found, j));
        Digit s = f.inv(R(r, c));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (R(i, c) == 0) continue;
            Digit factor = f.mul(R(i, c), s);
            for (std::size_t j = c; j < m.cols(); ++j) R(i, j) = f.sub(R(i, j), f.mul(factor, R(r, j)));
        }
        ++r;
    }
    return r;
}

Mat inverse(const Mat& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    RrefResult res = generic::rref(m);
    if (res.pivots.size() < m.rows()) throw Singular();
    return res.transform;
}

}  // namespace generic

std::size_t mat_rank(const Mat& m) {
    if (packable(m)) {
        auto rows = pack_rows(m);
        return gf2::rank_inplace(rows);
    }
    return generic::rank(m);
}

RrefResult rref(const Mat& m) {
    if (packable(m)) {
        auto rows = pack_rows(m);
        std::vector<gf2::Word> t(m.rows());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = gf2::Word{1} << i;
        auto pivots = gf2::rref_inplace(rows, t, m.cols());
        return {unpack_rows(m.field(), rows, m.cols()), unpack_rows(m.field(), t, m.rows()),
                std::move(pivots)};
    }
    return generic::rref(m);
}

Mat inverse(const Mat& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    RrefResult res = rref(m);
    if (res.pivots.size() < m.rows()) throw Singular();
    return std::move(res.transform);
}

FieldElem det(const Mat& m) {
    if (!m.is_square()) throw DimensionMismatch("determinant of a non-square matrix");
    const Field& f = m.field();
    Mat R = m;
    std::size_t n = m.rows();
    Digit acc = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t found = n;
        for (std::size_t i = c; i < n; ++i)
            if (R(i, c) != 0) {
                found = i;
                break;
            }
        if (found == n) return {f, 0};
        if (found != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(R(c, j), R(found, j));
            acc = f.neg(acc);
        }
        acc = f.mul(acc, R(c, c));
        Digit s = f.inv(R(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (R(i, c) == 0) continue;
            Digit factor = f.mul(R(i, c), s);
            for (std::size_t j = c; j < n; ++j) R(i, j) = f.sub(R(i, j), f.mul(factor, R(c, j)));
        }
    }
    return {f, acc};
}

namespace {

Mat minor_of(const Mat& m, std::size_t skip_r, std::size_t skip_c) {
    std::size_t n = m.rows();
    Mat out(m.field(), n - 1, n - 1);
    for (std::size_t i = 0, oi = 0; i < n; ++i) {
        if (i == skip_r) continue;
        for (std::size_t j = 0, oj = 0; j < n; ++j) {
            if (j == skip_c) continue;
            out(oi, oj++) = m(i, j);
        }
        ++oi;
    }
    return out;
}

// Laplace expansion along the first row.
Digit laplace_det(const Mat& m) {
    const Field& f = m.field();
    std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Digit acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        Digit term = f.mul(m(0, j), laplace_det(minor_of(m, 0, j)));
        acc = (j % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
    }
    return acc;
}

}  // namespace

Mat adjugate(const Mat& m) {
    if (!m.is_square()) throw DimensionMismatch("adjugate of a non-square matrix");
    const Field& f = m.field();
    std::size_t n = m.rows();
    Mat cof(f, n, n);
    if (n == 0) return cof;
    if (n == 1) {
        cof(0, 0) = 1;
        return cof;
    }
    if (n > 4) {
        FieldElem d = det(m);
        if (d.value() != 0) return inverse(m).transpose().scaled(d.value());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Mat mi = minor_of(m, i, j);
            Digit d = n <= 4 ? laplace_det(mi) : det(mi).value();
            cof(i, j) = ((i + j) % 2 == 0) ? d : f.neg(d);
        }
    return cof;
}

std::vector<Vec> kernel_basis(const Mat& m) {
    const Field& f = m.field();
    RrefResult res = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : res.pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < res.pivots.size(); ++i) v[res.pivots[i]] = f.neg(res.reduced(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vec> image_basis(const Mat& m) {
    RrefResult res = rref(m.transpose());
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < res.pivots.size(); ++i) {
        auto r = res.reduced.row(i);
        basis.emplace_back(r.begin(), r.end());
    }
    return basis;
}

Mat submatrix(const Mat& m, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
    if (r0 + nr > m.rows() || c0 + nc > m.cols()) throw DimensionMismatch("submatrix out of range");
    Mat out(m.field(), nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) out(i, j) = m(r0 + i, c0 + j);
    return out;
}

Mat hstack(const Mat& a, const Mat& b) {
    if (!(a.field() == b.field()) || a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
    Mat out(a.field(), a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

Mat vstack(const Mat& a, const Mat& b) {
    if (!(a.field() == b.field()) || a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
    Mat out(a.field(), a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

Blocks block_extract(const Mat& m, std::size_t r) {
    if (r > std::min(m.rows(), m.cols()))
        throw DimensionMismatch("block size " + std::to_string(r) + " exceeds min(n, p)");
    std::size_t n = m.rows(), p = m.cols();
    return {submatrix(m, 0, 0, r, r), submatrix(m, 0, r, r, p - r), submatrix(m, r, 0, n - r, r),
            submatrix(m, r, r, n - r, p - r)};
}

Mat block_compose(const Blocks& b) {
    if (b.K.rows() != b.C.rows() || b.L.rows() != b.A.rows() || b.K.cols() != b.L.cols() ||
        b.C.cols() != b.A.cols() || !b.K.is_square())
        throw DimensionMismatch("inconsistent block shapes");
    return vstack(hstack(b.K, b.C), hstack(b.L, b.A));
}

}  // namespace boundedrank
