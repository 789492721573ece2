#include <doctest.h>

#include "boundedrank/gf2.hpp"
#include "boundedrank/mat.hpp"
#include "test_support.hpp"

using namespace boundedrank;
using boundedrank::testing::Gen;

namespace {
const Field F2(2), F3(3), F5(5), F7(7);
}

TEST_CASE("field construction rejects non-prime and large orders") {
    CHECK_THROWS_AS(Field(4), UnsupportedField);
    CHECK_THROWS_AS(Field(1), UnsupportedField);
    CHECK_THROWS_AS(Field(11), UnsupportedField);
    CHECK_THROWS_WITH(Field(4), doctest::Contains("prime fields only"));
    for (int p : {2, 3, 5, 7}) {
        Field f(p);
        for (int a = 1; a < p; ++a) CHECK(f.mul(static_cast<Digit>(a), f.inv(static_cast<Digit>(a))) == 1);
    }
    FieldElem a(F5, 3), b(F5, 4);
    CHECK((a + b).value() == 2);
    CHECK((a * b).value() == 2);
    CHECK((a * a.inverse()).value() == 1);
    CHECK((-a).value() == 2);
}

TEST_CASE("mat_rank examples") {
    CHECK(mat_rank(Mat(F2, 3, 3)) == 0);
    CHECK(mat_rank(Mat::j_block(F2, 3, 3, 2)) == 2);
    Mat m = Mat::from_rows(F2, {{1, 0, 0}, {1, 1, 0}, {0, 1, 1}});
    CHECK(testing::oracle_det(m) != 0);
    CHECK(mat_rank(m) == 3);
}

TEST_CASE("rref examples") {
    auto id = rref(Mat::identity(F3, 3));
    CHECK(id.reduced == Mat::identity(F3, 3));
    CHECK(id.transform == Mat::identity(F3, 3));

    auto rep = rref(Mat::from_rows(F2, {{1, 1}, {1, 1}}));
    CHECK(rep.reduced == Mat::from_rows(F2, {{1, 1}, {0, 0}}));

    Mat swapped = Mat::from_rows(F3, {{0, 1}, {1, 0}});
    auto s = rref(swapped);
    CHECK(s.reduced == Mat::identity(F3, 2));
    CHECK(s.transform == swapped);
    CHECK(s.pivots == std::vector<std::size_t>{0, 1});
}

TEST_CASE("inverse examples") {
    CHECK(inverse(Mat::identity(F7, 3)) == Mat::identity(F7, 3));
    Mat u = Mat::from_rows(F2, {{1, 1}, {0, 1}});
    CHECK(u * u == Mat::identity(F2, 2));
    CHECK(inverse(u) == u);
    CHECK_THROWS_AS(inverse(Mat::from_rows(F2, {{1, 1}, {1, 1}})), Singular);
    CHECK_THROWS_AS(inverse(Mat(F2, 2, 3)), DimensionMismatch);
}

TEST_CASE("adjugate examples") {
    // Cofactors of (a b; c d) are (d -c; -b a).
    Mat m = Mat::from_rows(F3, {{1, 2}, {0, 1}});
    CHECK(adjugate(m) == Mat::from_rows(F3, {{1, 0}, {1, 1}}));
    CHECK(adjugate(Mat::identity(F3, 2)) == Mat::identity(F3, 2));
    // Over sl_2(F_2) the transposed cofactor matrix is the matrix itself.
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Mat n = Mat::from_rows(F2, {{a, b}, {c, a}});
                CHECK(adjugate(n).transpose() == n);
            }
}

TEST_CASE("kernel and image bases") {
    Mat z(F2, 3, 3);
    CHECK(kernel_basis(z).size() == 3);
    CHECK(image_basis(z).empty());

    Mat j2 = Mat::j_block(F2, 3, 3, 2);
    CHECK(kernel_basis(j2) == std::vector<Vec>{Vec{0, 0, 1}});
    CHECK(image_basis(j2) == std::vector<Vec>{Vec{1, 0, 0}, Vec{0, 1, 0}});

    Mat r1 = Mat::from_rows(F2, {{1, 1, 1}, {0, 0, 0}, {0, 0, 0}});
    auto ker = kernel_basis(r1);
    CHECK(ker.size() == 2);
    for (const Vec& v : ker) CHECK(r1.apply(v) == Vec{0, 0, 0});
    CHECK(image_basis(r1) == std::vector<Vec>{Vec{1, 0, 0}});
}

TEST_CASE("block extract and compose") {
    auto b = block_extract(Mat::j_block(F2, 3, 3, 2), 2);
    CHECK(b.K == Mat::identity(F2, 2));
    CHECK(b.C.is_zero());
    CHECK(b.L.is_zero());
    CHECK(b.A.is_zero());

    // J3 generator with a = b = 1: lower-right entry a + b = 0.
    Mat g = Mat::from_rows(F2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
    auto gb = block_extract(g, 2);
    CHECK(gb.K == Mat::identity(F2, 2));
    CHECK(gb.A(0, 0) == 0);

    CHECK_THROWS_AS(block_extract(Mat(F2, 2, 3), 3), DimensionMismatch);

    Gen gen;
    for (int t = 0; t < 200; ++t) {
        Field f = gen.field();
        std::size_t n = gen.uniform(1, 5), p = gen.uniform(1, 5);
        Mat m = gen.mat(f, n, p);
        std::size_t r = gen.uniform(0, std::min(n, p));
        CHECK(block_compose(block_extract(m, r)) == m);
    }
}

TEST_CASE("property: rank-nullity, rref transform, adjugate identity") {
    Gen gen;
    for (int t = 0; t < 1000; ++t) {
        Field f = gen.field();
        std::size_t n = gen.uniform(1, 6), p = gen.uniform(1, 6);
        Mat m = gen.mat(f, n, p);
        std::size_t rk = mat_rank(m);
        REQUIRE(rk + kernel_basis(m).size() == p);
        REQUIRE(image_basis(m).size() == rk);
        auto res = rref(m);
        REQUIRE(res.transform * m == res.reduced);
        REQUIRE(mat_rank(res.transform) == n);
        REQUIRE(res.pivots.size() == rk);

        std::size_t s = gen.uniform(1, 5);
        Mat sq = gen.mat(f, s, s);
        Digit d = det(sq).value();
        REQUIRE(d == testing::oracle_det(sq));
        REQUIRE(sq * adjugate(sq).transpose() == Mat::identity(f, s).scaled(d));
    }
}

TEST_CASE("adjugate on larger matrices uses both routes consistently") {
    Gen gen;
    for (int t = 0; t < 100; ++t) {
        Field f = gen.field();
        std::size_t s = gen.uniform(5, 6);
        Mat sq = t % 3 == 0 ? gen.mat(f, s, s) : gen.invertible(f, s);
        Digit d = det(sq).value();
        REQUIRE(sq * adjugate(sq).transpose() == Mat::identity(f, s).scaled(d));
    }
}

TEST_CASE("property: GF(2) packed path equals generic path") {
    Gen gen;
    for (int t = 0; t < 1000; ++t) {
        std::size_t n = gen.uniform(1, 10), p = gen.uniform(1, 10);
        Mat m = gen.mat(F2, n, p);
        REQUIRE(mat_rank(m) == generic::rank(m));
        auto packed = rref(m);
        auto ref = generic::rref(m);
        REQUIRE(packed.reduced == ref.reduced);
        REQUIRE(packed.transform == ref.transform);
        REQUIRE(packed.pivots == ref.pivots);
        if (n == p) {
            bool packed_singular = false, generic_singular = false;
            Mat a(F2, 1, 1), b(F2, 1, 1);
            try { a = inverse(m); } catch (const Singular&) { packed_singular = true; }
            try { b = generic::inverse(m); } catch (const Singular&) { generic_singular = true; }
            REQUIRE(packed_singular == generic_singular);
            if (!packed_singular) REQUIRE(a == b);
        }
    }
}
