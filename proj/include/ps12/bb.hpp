#ifndef PS12_BB_HPP
#define PS12_BB_HPP

#include <Eigen/Dense>
#include <vector>
#include <stdexcept>

#include "geometry.hpp"

namespace ps12 {

template <class S>
using BaryPoint = Vector3<S>;  // components sum to 1
template <class S>
using BaryVector = Vector3<S>;  // components sum to 0

struct MultiIndex {
    int i = 0, j = 0, k = 0;
    int degree() const { return i + j + k; }
    bool operator==(const MultiIndex&) const = default;
};

/// Number of B-coefficients of a degree-d triangular patch.
inline int bb_size(int d) { return (d + 1) * (d + 2) / 2; }

/// Lexicographic position of (i,j,k) with i+j+k=d: (d,0,0), (d-1,1,0), (d-1,0,1), ...
inline int bb_index(int d, const MultiIndex& m) {
    int skipped = 0;  // entries with first component > m.i
    for (int a = d; a > m.i; --a) skipped += d - a + 1;
    return skipped + (d - m.i - m.j);
}

inline std::vector<MultiIndex> multi_indices(int d) {
    std::vector<MultiIndex> out;
    out.reserve(size_t(bb_size(d)));
    for (int i = d; i >= 0; --i)
        for (int j = d - i; j >= 0; --j) out.push_back({i, j, d - i - j});
    return out;
}

inline long long factorial(int n) {
    long long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Barycentric coordinates of p with respect to T, by a 2x2 affine solve.
template <class S>
BaryPoint<S> to_barycentric(const Point2<S>& p, const Triangle<S>& T) {
    require_nondegenerate(T);
    Vector2<S> e1 = T[1] - T[0], e2 = T[2] - T[0], rhs = p - T[0];
    S det = cross2(e1, e2);
    S b2 = cross2(rhs, e2) / det;
    S b3 = cross2(e1, rhs) / det;
    return BaryPoint<S>(S(1) - b2 - b3, b2, b3);
}

/// Directional coordinates of u: difference of barycentric triples, sums to 0.
template <class S>
BaryVector<S> direction_coords(const Vector2<S>& u, const Triangle<S>& T) {
    require_nondegenerate(T);
    Vector2<S> e1 = T[1] - T[0], e2 = T[2] - T[0];
    S det = cross2(e1, e2);
    S a2 = cross2(u, e2) / det;
    S a3 = cross2(e1, u) / det;
    return BaryVector<S>(-a2 - a3, a2, a3);
}

template <class S>
S bernstein_eval(int d, const MultiIndex& m, const BaryPoint<S>& b) {
    if (m.degree() != d || m.i < 0 || m.j < 0 || m.k < 0)
        throw std::invalid_argument("bernstein_eval: index/degree mismatch");
    S r = frac<S>(factorial(d) / (factorial(m.i) * factorial(m.j) * factorial(m.k)));
    for (int a = 0; a < m.i; ++a) r *= b[0];
    for (int a = 0; a < m.j; ++a) r *= b[1];
    for (int a = 0; a < m.k; ++a) r *= b[2];
    return r;
}

/// Degree-d polynomial on a triangle in B-form. Coefficients are stored
/// densely in lexicographic multi-index order; the multi-index accessors are
/// a view on that layout.
template <class S>
struct BezierPatch {
    int d = 0;
    Triangle<S> triangle;
    Eigen::Matrix<S, Eigen::Dynamic, 1> coeffs;

    BezierPatch() = default;
    BezierPatch(int degree, const Triangle<S>& T) : d(degree), triangle(T) {
        coeffs = Eigen::Matrix<S, Eigen::Dynamic, 1>::Constant(bb_size(d), S(0));
    }

    const S& c(const MultiIndex& m) const { return coeffs[bb_index(d, m)]; }
    S& c(const MultiIndex& m) { return coeffs[bb_index(d, m)]; }
    const S& c(int i, int j, int k) const { return coeffs[bb_index(d, {i, j, k})]; }
    S& c(int i, int j, int k) { return coeffs[bb_index(d, {i, j, k})]; }
};

/// de Casteljau evaluation at a barycentric point.
template <class S>
S patch_eval(const BezierPatch<S>& p, const BaryPoint<S>& b) {
    std::vector<S> work(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
    for (int deg = p.d; deg > 0; --deg) {
        std::vector<S> next(size_t(bb_size(deg - 1)));
        for (const auto& m : multi_indices(deg - 1)) {
            next[size_t(bb_index(deg - 1, m))] =
                b[0] * work[size_t(bb_index(deg, {m.i + 1, m.j, m.k}))] +
                b[1] * work[size_t(bb_index(deg, {m.i, m.j + 1, m.k}))] +
                b[2] * work[size_t(bb_index(deg, {m.i, m.j, m.k + 1}))];
        }
        work = std::move(next);
    }
    return work[0];
}

/// Naive basis-sum evaluation, kept as the cross-check route for de Casteljau.
template <class S>
S patch_eval_basis_sum(const BezierPatch<S>& p, const BaryPoint<S>& b) {
    S acc = S(0);
    for (const auto& m : multi_indices(p.d)) acc += p.c(m) * bernstein_eval(p.d, m, b);
    return acc;
}

/// Coefficients of the m-th order directional derivative patch, with the
/// d!/(d-m)! factor folded into the output so it evaluates to the derivative
/// directly.
template <class S>
BezierPatch<S> derivative_patch(const BezierPatch<S>& p, const std::vector<BaryVector<S>>& dirs) {
    int m = int(dirs.size());
    if (m > p.d) throw std::invalid_argument("derivative_patch: more directions than degree");
    BezierPatch<S> out(p.d - m, p.triangle);
    std::vector<S> work(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
    int deg = p.d;
    for (const auto& a : dirs) {
        std::vector<S> next(size_t(bb_size(deg - 1)));
        for (const auto& mi : multi_indices(deg - 1)) {
            next[size_t(bb_index(deg - 1, mi))] =
                a[0] * work[size_t(bb_index(deg, {mi.i + 1, mi.j, mi.k}))] +
                a[1] * work[size_t(bb_index(deg, {mi.i, mi.j + 1, mi.k}))] +
                a[2] * work[size_t(bb_index(deg, {mi.i, mi.j, mi.k + 1}))];
        }
        work = std::move(next);
        --deg;
    }
    S scale = frac<S>(factorial(p.d) / factorial(p.d - m));
    for (int i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = scale * work[size_t(i)];
    return out;
}

/// Point evaluation of a chained directional derivative, directions given as
/// plane vectors.
template <class S>
S eval_derivative(const BezierPatch<S>& p, const Point2<S>& pt, const std::vector<Vector2<S>>& dirs) {
    std::vector<BaryVector<S>> bdirs;
    bdirs.reserve(dirs.size());
    for (const auto& u : dirs) bdirs.push_back(direction_coords(u, p.triangle));
    BezierPatch<S> dp = derivative_patch(p, bdirs);
    return patch_eval(dp, to_barycentric(pt, p.triangle));
}

/// Row of weights w such that w . coeffs equals the given chained directional
/// derivative of the patch at the given barycentric point. This is the
/// coefficient recursion applied to the identity, used to assemble linear
/// systems over B-coefficients.
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> derivative_functional_row(int d, const std::vector<BaryVector<S>>& dirs,
                                                              const BaryPoint<S>& b) {
    int m = int(dirs.size());
    if (m > d) throw std::invalid_argument("derivative_functional_row: order exceeds degree");
    int n0 = bb_size(d);
    // W maps original coefficients to the current-level derivative coefficients.
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> W =
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Identity(n0, n0);
    int deg = d;
    for (const auto& a : dirs) {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> next =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Constant(bb_size(deg - 1), n0, S(0));
        for (const auto& mi : multi_indices(deg - 1)) {
            int r = bb_index(deg - 1, mi);
            next.row(r) = a[0] * W.row(bb_index(deg, {mi.i + 1, mi.j, mi.k})) +
                          a[1] * W.row(bb_index(deg, {mi.i, mi.j + 1, mi.k})) +
                          a[2] * W.row(bb_index(deg, {mi.i, mi.j, mi.k + 1}));
        }
        W = std::move(next);
        --deg;
    }
    Eigen::Matrix<S, Eigen::Dynamic, 1> row = Eigen::Matrix<S, Eigen::Dynamic, 1>::Constant(n0, S(0));
    S scale = frac<S>(factorial(d) / factorial(d - m));
    for (const auto& mi : multi_indices(deg)) {
        S w = scale * bernstein_eval(deg, mi, b);
        row += w * W.row(bb_index(deg, mi)).transpose();
    }
    return row;
}

}  // namespace ps12

#endif
