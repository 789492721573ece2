#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "boundedrank/field.hpp"

namespace boundedrank {

/// A vector of GF(p) digits. Field-agnostic; the owner carries the Field.
using Vec = std::vector<Digit>;

/// Dense matrix over GF(p), row-major digit storage.
class Mat {
public:
    Mat(Field field, std::size_t rows, std::size_t cols);
    Mat(Field field, std::size_t rows, std::size_t cols, std::span<const Digit> row_major);

    static Mat identity(Field field, std::size_t n);
    /// J_r: the n x p matrix with I_r in its upper-left corner and zeros elsewhere.
    static Mat j_block(Field field, std::size_t n, std::size_t p, std::size_t r);
    /// E_ij (0-based).
    static Mat unit(Field field, std::size_t n, std::size_t p, std::size_t i, std::size_t j);
    /// Entries are reduced mod p, so negative literals are accepted.
    static Mat from_rows(Field field, std::initializer_list<std::initializer_list<int>> rows);
    static Mat column(Field field, std::span<const Digit> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const Field& field() const noexcept { return field_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Digit operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    Digit& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const Digit> data() const noexcept { return data_; }
    std::span<const Digit> row(std::size_t i) const noexcept {
        return std::span<const Digit>(data_).subspan(i * cols_, cols_);
    }
    Vec col(std::size_t j) const;
    bool is_zero() const noexcept;

    Mat transpose() const;
    Mat scaled(Digit s) const;
    Vec apply(std::span<const Digit> x) const;

    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);
    friend Mat operator*(const Mat& a, const Mat& b);
    friend bool operator==(const Mat& a, const Mat& b) noexcept {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend std::ostream& operator<<(std::ostream& os, const Mat& m);

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    Vec data_;
};

std::size_t mat_rank(const Mat& m);

struct RrefResult {
    Mat reduced;    ///< R, in reduced row echelon form
    Mat transform;  ///< T, invertible with T * M = R
    std::vector<std::size_t> pivots;
};

/// Row reduction. Pivots are taken column by column, using the first
/// nonzero entry at or below the current pivot row.
RrefResult rref(const Mat& m);

/// Throws Singular when m is not invertible.
Mat inverse(const Mat& m);
FieldElem det(const Mat& m);

/// The cofactor matrix N~ of m, so that m * transpose(N~) = det(m) * I.
Mat adjugate(const Mat& m);

/// Null space of m as column vectors of length cols(m), one per free column.
std::vector<Vec> kernel_basis(const Mat& m);
/// Column space of m, as the reduced echelon basis of GF(p)^rows(m).
std::vector<Vec> image_basis(const Mat& m);

/// Block view [[K, C], [L, A]] with K of size r x r.
struct Blocks {
    Mat K;
    Mat C;
    Mat L;
    Mat A;
};

Blocks block_extract(const Mat& m, std::size_t r);
Mat block_compose(const Blocks& b);
/// Copy of rows [r0, r0+nr) and columns [c0, c0+nc).
Mat submatrix(const Mat& m, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc);
Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);

/// Reference elimination that never takes the GF(2) packed path.
namespace generic {
std::size_t rank(const Mat& m);
RrefResult rref(const Mat& m);
Mat inverse(const Mat& m);
}  // namespace generic

}  // namespace boundedrank
