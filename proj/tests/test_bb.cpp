#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ps12/poly2.hpp"
#include "ps12/splits.hpp"

using namespace ps12;
using R = Rational;

namespace {

Triangle<R> unit_triangle() {
    return Triangle<R>(Point2<R>(0, 0), Point2<R>(1, 0), Point2<R>(0, 1));
}

BezierPatch<R> random_patch(std::mt19937& rng, const Triangle<R>& T, int d = 5) {
    BezierPatch<R> p(d, T);
    for (int i = 0; i < p.coeffs.size(); ++i)
        p.coeffs[i] = R(int(rng() % 21) - 10) / (int(rng() % 9) + 1);
    return p;
}

BaryPoint<R> random_bary(std::mt19937& rng) {
    R b1 = R(int(rng() % 13) - 6) / 7, b2 = R(int(rng() % 13) - 6) / 5;
    return BaryPoint<R>(R(1) - b1 - b2, b1, b2);
}

}  // namespace

TEST_CASE("bb_index enumerates lexicographic multi-indices") {
    CHECK(bb_size(5) == 21);
    auto idx = multi_indices(5);
    REQUIRE(int(idx.size()) == 21);
    for (int i = 0; i < 21; ++i) CHECK(bb_index(5, idx[size_t(i)]) == i);
    CHECK(bb_index(5, {5, 0, 0}) == 0);
    CHECK(bb_index(5, {0, 0, 5}) == 20);
}

TEST_CASE("to_barycentric: corners, midpoints, and a split-interior point") {
    Triangle<R> T = unit_triangle();
    CHECK(to_barycentric(T[0], T) == BaryPoint<R>(1, 0, 0));
    CHECK(to_barycentric(T[2], T) == BaryPoint<R>(0, 0, 1));
    CHECK(to_barycentric(Point2<R>(R(1) / 2, R(1) / 2), T) ==
          BaryPoint<R>(0, R(1) / 2, R(1) / 2));

    // the split vertex between two inner midpoints, with respect to an inner
    // face: outside that face, so a coordinate goes negative
    auto s = ps12_split(T);
    Triangle<R> F(s.vertices[6], s.vertices[9], s.vertices[5]);  // v7, v10, v6
    CHECK(to_barycentric(s.vertices[8], F) == BaryPoint<R>(-1, R(3) / 2, R(1) / 2));
}

TEST_CASE("direction_coords sum to zero and match known directions") {
    Triangle<R> T = unit_triangle();
    Vector2<R> e12 = T[1] - T[0];
    CHECK(direction_coords(e12, T) == BaryVector<R>(-1, 1, 0));
    // medial direction of the edge opposite corner 0
    Vector2<R> m = (T[1] + T[2]) / 2 - T[0];
    CHECK(direction_coords(m, T) == BaryVector<R>(-1, R(1) / 2, R(1) / 2));

    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Vector2<R> u(R(int(rng() % 17) - 8) / 3, R(int(rng() % 17) - 8) / 5);
        BaryVector<R> a = direction_coords(u, T);
        CHECK(a[0] + a[1] + a[2] == 0);
    }
}

TEST_CASE("bernstein_eval: vertex values, an interior value, partition of unity") {
    BaryPoint<R> vertex(1, 0, 0);
    CHECK(bernstein_eval<R>(5, {5, 0, 0}, vertex) == 1);
    CHECK(bernstein_eval<R>(5, {4, 1, 0}, vertex) == 0);

    BaryPoint<R> center(R(1) / 3, R(1) / 3, R(1) / 3);
    CHECK(bernstein_eval<R>(2, {1, 1, 0}, center) == R(2) / 9);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        BaryPoint<R> b = random_bary(rng);
        for (int d : {2, 5}) {
            R sum = 0;
            for (const auto& m : multi_indices(d)) sum += bernstein_eval(d, m, b);
            CHECK(sum == 1);
        }
    }

    CHECK_THROWS_AS(bernstein_eval<R>(5, {4, 1, 1}, vertex), std::invalid_argument);
}

TEST_CASE("patch_eval: constants, a monomial, and the basis-sum cross-check") {
    Triangle<R> T = unit_triangle();
    BezierPatch<R> ones(5, T);
    ones.coeffs.setConstant(R(1));
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) CHECK(patch_eval(ones, random_bary(rng)) == 1);

    BezierPatch<R> x5 = patch_from_polynomial(Poly2<R>::monomial(5, 0), T);
    CHECK(patch_eval(x5, to_barycentric(Point2<R>(R(1) / 2, 0), T)) == R(1) / 32);

    for (int trial = 0; trial < 10; ++trial) {
        BezierPatch<R> p = random_patch(rng, T);
        BaryPoint<R> b = random_bary(rng);
        CHECK(patch_eval(p, b) == patch_eval_basis_sum(p, b));
    }
}

TEST_CASE("derivative_patch: degree drop, constants, and the degree factor") {
    Triangle<R> T = unit_triangle();
    std::mt19937 rng(13);
    BaryVector<R> a = direction_coords(Vector2<R>(1, 0), T);

    BezierPatch<R> ones(5, T);
    ones.coeffs.setConstant(R(7));
    BezierPatch<R> d1 = derivative_patch(ones, {a});
    CHECK(d1.d == 4);
    for (int i = 0; i < d1.coeffs.size(); ++i) CHECK(d1.coeffs[i] == 0);

    // degree-1 patch: the derivative is the constant d * (a . coeffs on the
    // first-difference stencil); with coefficients (c100, c010, c001) the
    // value is 1 * (a1 c100 + a2 c010 + a3 c001)
    BezierPatch<R> lin(1, T);
    lin.c(1, 0, 0) = 2;
    lin.c(0, 1, 0) = 5;
    lin.c(0, 0, 1) = -3;
    BezierPatch<R> dl = derivative_patch(lin, {a});
    CHECK(dl.coeffs[0] == a[0] * 2 + a[1] * 5 + a[2] * (-3));

    // chained derivatives commute
    BaryVector<R> b = direction_coords(Vector2<R>(R(1) / 3, -2), T);
    for (int trial = 0; trial < 5; ++trial) {
        BezierPatch<R> p = random_patch(rng, T);
        BezierPatch<R> ab = derivative_patch(derivative_patch(p, {a}), {b});
        BezierPatch<R> ba = derivative_patch(derivative_patch(p, {b}), {a});
        CHECK(ab.coeffs == ba.coeffs);
    }
}

TEST_CASE("eval_derivative: monomial oracle and the zero-direction case") {
    Triangle<R> T = unit_triangle();
    Poly2<R> x5 = Poly2<R>::monomial(5, 0);
    BezierPatch<R> p = patch_from_polynomial(x5, T);
    Point2<R> pt(R(1) / 2, 0);
    Vector2<R> ex(1, 0);
    CHECK(eval_derivative(p, pt, {ex}) == R(5) / 16);         // 5 x^4
    CHECK(eval_derivative(p, pt, {ex, ex}) == R(20) / 8);     // 20 x^3
    CHECK(eval_derivative(p, pt, {}) == patch_eval(p, to_barycentric(pt, T)));

    // symbolic oracle on a random quintic at random points
    std::mt19937 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        Poly2<R> q;
        for (int i = 0; i <= 5; ++i)
            for (int j = 0; i + j <= 5; ++j) q.c[size_t(i)][size_t(j)] = R(int(rng() % 15) - 7) / 4;
        BezierPatch<R> qp = patch_from_polynomial(q, T);
        Point2<R> at(R(int(rng() % 9)) / 8, R(int(rng() % 9)) / 16);
        Vector2<R> u(R(int(rng() % 7)) - 3, R(int(rng() % 7)) - 2);
        CHECK(eval_derivative(qp, at, {u, u}) == poly_derivative(q, at, {u, u}));
    }
}

TEST_CASE("eval_derivative converges to finite differences at order >= 1.9") {
    Triangle<double> T(Point2<double>(0, 0), Point2<double>(1, 0), Point2<double>(0, 1));
    // a patch with no special structure
    BezierPatch<double> p(5, T);
    std::mt19937 rng(19);
    for (int i = 0; i < p.coeffs.size(); ++i) p.coeffs[i] = double(int(rng() % 21) - 10) / 3.0;
    Point2<double> pt(0.31, 0.24);
    Vector2<double> u(0.7, -0.2);
    double exact = eval_derivative(p, pt, {u});
    auto fd = [&](double h) {
        BaryPoint<double> bp = to_barycentric(Point2<double>(pt + h * u), T);
        BaryPoint<double> bm = to_barycentric(Point2<double>(pt - h * u), T);
        return (patch_eval(p, bp) - patch_eval(p, bm)) / (2 * h);
    };
    double e1 = std::abs(fd(1e-3) - exact), e2 = std::abs(fd(5e-4) - exact);
    double order = std::log2(e1 / e2);
    CHECK(order >= 1.9);  // central differences are second order
}

TEST_CASE("derivative_functional_row reproduces eval_derivative on random patches") {
    Triangle<R> T(Point2<R>(R(1) / 3, R(-2) / 7), Point2<R>(3, R(1) / 2), Point2<R>(-1, 2));
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        BezierPatch<R> p = random_patch(rng, T);
        Point2<R> pt = (T[0] + T[1] * 2 + T[2]) / 4;
        Vector2<R> u = T[2] - T[0], v = T[1] - T[0];
        std::vector<BaryVector<R>> dirs = {direction_coords(u, T), direction_coords(v, T)};
        VectorX<R> row = derivative_functional_row<R>(5, dirs, to_barycentric(pt, T));
        CHECK(row.dot(p.coeffs) == eval_derivative(p, pt, {u, v}));
    }
}

TEST_CASE("evaluation and derivatives are linear in the coefficients") {
    Triangle<R> T = unit_triangle();
    std::mt19937 rng(29);
    BezierPatch<R> p = random_patch(rng, T), q = random_patch(rng, T);
    BezierPatch<R> sum = p;
    sum.coeffs = p.coeffs * R(3) + q.coeffs;
    BaryPoint<R> b = random_bary(rng);
    CHECK(patch_eval(sum, b) == 3 * patch_eval(p, b) + patch_eval(q, b));
    Point2<R> pt(R(1) / 5, R(2) / 5);
    Vector2<R> u(1, 2);
    CHECK(eval_derivative(sum, pt, {u}) ==
          3 * eval_derivative(p, pt, {u}) + eval_derivative(q, pt, {u}));
}
