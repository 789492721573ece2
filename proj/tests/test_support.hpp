#pragma once

// Seeded generators shared by the property suites.

#include <cstdint>
#include <random>
#include <vector>

#include "boundedrank/mat.hpp"
#include "boundedrank/matspace.hpp"

namespace boundedrank::testing {

inline constexpr std::uint64_t kSeed = 20240611;

class Gen {
public:
    explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    Field field() {
        static const int orders[] = {2, 3, 5, 7};
        return Field(orders[uniform(0, 3)]);
    }

    Mat mat(Field f, std::size_t n, std::size_t p) {
        Mat m(f, n, p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) m(i, j) = static_cast<Digit>(uniform(0, f.order() - 1));
        return m;
    }

    Vec vec(Field f, std::size_t m) {
        Vec v(m);
        for (auto& d : v) d = static_cast<Digit>(uniform(0, f.order() - 1));
        return v;
    }

    Mat invertible(Field f, std::size_t n) {
        for (;;) {
            Mat m = mat(f, n, n);
            if (mat_rank(m) == n) return m;
        }
    }

    /// Span of k random matrices (dimension at most k).
    MatSpace space(Field f, std::size_t n, std::size_t p, std::size_t k) {
        std::vector<Mat> gens;
        for (std::size_t i = 0; i < k; ++i) gens.push_back(mat(f, n, p));
        return MatSpace::from_spanning(f, n, p, gens);
    }

    /// A random subspace of v of dimension exactly k (k <= dim v).
    MatSpace subspace(const MatSpace& v, std::size_t k) {
        std::vector<Mat> gens;
        MatSpace out(v.field(), v.rows(), v.cols());
        while (out.dim() < k) {
            gens.push_back(v.to_mat(v.vectorized().combine(vec(v.field(), v.dim()))));
            out = MatSpace::from_spanning(v.field(), v.rows(), v.cols(), gens);
            if (out.dim() < gens.size()) gens.pop_back();
        }
        return out;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Determinant by cofactor expansion over the integers, reduced at the end.
inline long long cofactor_det(const std::vector<std::vector<long long>>& a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    if (n == 1) return a[0][0];
    long long acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<long long>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<long long> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(row);
        }
        long long term = a[0][j] * cofactor_det(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

inline Digit oracle_det(const Mat& m) {
    std::vector<std::vector<long long>> a(m.rows(), std::vector<long long>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    return m.field().reduce(cofactor_det(a));
}

}  // namespace boundedrank::testing
