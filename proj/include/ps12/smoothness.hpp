#ifndef PS12_SMOOTHNESS_HPP
#define PS12_SMOOTHNESS_HPP

#include <vector>
#include <utility>
#include <stdexcept>

#include "bb.hpp"

namespace ps12 {

struct CoeffSlot {
    int face_index;
    MultiIndex idx;
    bool operator==(const CoeffSlot&) const = default;
};

template <class S>
struct SmoothnessRow {
    std::vector<std::pair<CoeffSlot, S>> terms;
    int order = 0;
};

struct NotEdgeAdjacent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class S>
bool points_equal(const Point2<S>& a, const Point2<S>& b, double scale) {
    if constexpr (ScalarTraits<S>::exact)
        return a == b;
    else
        return std::abs(to_double(a.x() - b.x())) <= 1e-12 * scale &&
               std::abs(to_double(a.y() - b.y())) <= 1e-12 * scale;
}

// Vertex roles of an adjacent pair: off-vertex of each triangle plus the
// shared edge, with the shared endpoints taken in triangle A's cyclic order.
template <class S>
struct AdjacentPair {
    int offA, offB;       // local vertex index of the non-shared corner
    int sA1, sA2;         // shared endpoints, local to A, cyclic after offA
    int sB1, sB2;         // the same two points, local to B
};

template <class S>
AdjacentPair<S> match_adjacent(const Triangle<S>& A, const Triangle<S>& B) {
    double scale = std::max(bbox_scale(A), bbox_scale(B));
    int mapAB[3] = {-1, -1, -1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (points_equal(A[i], B[j], scale)) mapAB[i] = j;
    int shared = 0, offA = -1, offB = -1;
    bool usedB[3] = {false, false, false};
    for (int i = 0; i < 3; ++i)
        if (mapAB[i] >= 0) {
            ++shared;
            usedB[mapAB[i]] = true;
        } else
            offA = i;
    if (shared != 2) throw NotEdgeAdjacent("triangles do not share exactly one edge");
    for (int j = 0; j < 3; ++j)
        if (!usedB[j]) offB = j;
    AdjacentPair<S> p;
    p.offA = offA;
    p.offB = offB;
    p.sA1 = (offA + 1) % 3;
    p.sA2 = (offA + 2) % 3;
    p.sB1 = mapAB[p.sA1];
    p.sB2 = mapAB[p.sA2];
    return p;
}

// multi-index whose component at local position `slot` pattern: value per
// aligned role (off, s1, s2) scattered back into the face's own vertex order
inline MultiIndex scatter(int off, int s1, int s2, int a, int b, int c) {
    int comp[3];
    comp[off] = a;
    comp[s1] = b;
    comp[s2] = c;
    return {comp[0], comp[1], comp[2]};
}

}  // namespace detail

/// C^r smoothness conditions across the shared edge of two adjacent
/// triangles, one row per (n, j) with n = 0..r and j+k = d-n. Slots use face
/// index 0 for T and 1 for the neighbour; rows are normalized so the
/// neighbour coefficient carries weight -1.
template <class S>
std::vector<SmoothnessRow<S>> cr_rows(const Triangle<S>& T, const Triangle<S>& Tn, int r, int d) {
    auto pair = detail::match_adjacent(T, Tn);
    Triangle<S> aligned(T[pair.offA], T[pair.sA1], T[pair.sA2]);
    BaryPoint<S> b = to_barycentric(Tn[pair.offB], aligned);
    std::vector<SmoothnessRow<S>> rows;
    for (int n = 0; n <= r; ++n) {
        for (int j = 0; j <= d - n; ++j) {
            int k = d - n - j;
            SmoothnessRow<S> row;
            row.order = n;
            row.terms.push_back({{1, detail::scatter(pair.offB, pair.sB1, pair.sB2, n, j, k)}, S(-1)});
            for (int nu = 0; nu <= n; ++nu)
                for (int mu = 0; mu <= n - nu; ++mu) {
                    int ka = n - nu - mu;
                    S w = bernstein_eval(n, {nu, mu, ka}, b);
                    if (ScalarTraits<S>::is_zero(w)) continue;
                    row.terms.push_back(
                        {{0, detail::scatter(pair.offA, pair.sA1, pair.sA2, nu, j + mu, k + ka)}, w});
                }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// Univariate specialization: the off-vertices are collinear with the shared
/// line, so the condition involves a single strip of coefficients.
/// b1 = -|off_B - shared| / |off_A - shared| in the collinear direction.
template <class S>
SmoothnessRow<S> collinear_rows(const S& b1, int n, int d, int j) {
    if (n > d) throw std::invalid_argument("collinear_rows: n > d");
    int k = d - n - j;
    SmoothnessRow<S> row;
    row.order = n;
    row.terms.push_back({{1, {n, j, k}}, S(-1)});
    S one_minus = S(1) - b1;
    for (int nu = 0; nu <= n; ++nu) {
        S w = frac<S>(factorial(n) / (factorial(nu) * factorial(n - nu)));
        for (int a = 0; a < nu; ++a) w *= b1;
        for (int a = 0; a < n - nu; ++a) w *= one_minus;
        if (ScalarTraits<S>::is_zero(w)) continue;
        row.terms.push_back({{0, {nu, j, k + n - nu}}, w});
    }
    return row;
}

/// Forward-difference form of the collinear condition:
/// delta^n e0 / len1^n == delta^n e~0 / len2^n.
template <class S>
bool forward_difference_check(const std::vector<S>& e, const std::vector<S>& en, const S& len1,
                              const S& len2, int n) {
    if (int(e.size()) != n + 1 || int(en.size()) != n + 1)
        throw std::invalid_argument("forward_difference_check: need n+1 values");
    auto fwd = [n](const std::vector<S>& x) {
        S acc = S(0);
        for (int j = 0; j <= n; ++j) {
            S w = frac<S>(factorial(n) / (factorial(j) * factorial(n - j)));
            if ((n - j) % 2 == 1) w = -w;
            acc += w * x[size_t(j)];
        }
        return acc;
    };
    S lhs = fwd(e), rhs = fwd(en);
    for (int a = 0; a < n; ++a) {
        lhs /= len1;
        rhs /= len2;
    }
    if constexpr (ScalarTraits<S>::exact) return lhs == rhs;
    double l = to_double(lhs), r = to_double(rhs);
    double ref = std::max({std::abs(l), std::abs(r), 1.0});
    return std::abs(l - r) <= 1e-10 * ref;
}

/// Numerical verifier of the equivalence between the coefficient rows and
/// cross-boundary derivative agreement: true iff both the rows vanish and
/// the chained transversal derivatives up to order r agree at 7 points on
/// the shared edge.
template <class S>
bool rows_equivalent_to_derivative_match(const std::vector<SmoothnessRow<S>>& rows,
                                         const BezierPatch<S>& pA, const BezierPatch<S>& pB, int r) {
    auto near_zero = [](const S& x) {
        if constexpr (ScalarTraits<S>::exact)
            return x == 0;
        else
            return std::abs(to_double(x)) <= 1e-10;
    };
    bool rows_vanish = true;
    for (const auto& row : rows) {
        S acc = S(0);
        for (const auto& [slot, w] : row.terms)
            acc += w * (slot.face_index == 0 ? pA.c(slot.idx) : pB.c(slot.idx));
        if (!near_zero(acc)) rows_vanish = false;
    }
    auto pair = detail::match_adjacent(pA.triangle, pB.triangle);
    Point2<S> eY = pA.triangle[pair.sA1], eZ = pA.triangle[pair.sA2];
    Vector2<S> u = pA.triangle[pair.offA] - eY;  // transversal by nondegeneracy
    bool derivs_match = true;
    for (int i = 1; i <= 7 && derivs_match; ++i) {
        S s = frac<S>(i, 8);
        Point2<S> pt = eY + s * (eZ - eY);
        std::vector<Vector2<S>> dirs;
        for (int n = 0; n <= r; ++n) {
            S a = eval_derivative(pA, pt, dirs), b = eval_derivative(pB, pt, dirs);
            if constexpr (ScalarTraits<S>::exact) {
                if (a != b) derivs_match = false;
            } else {
                double da = to_double(a), db = to_double(b);
                double ref = std::max({std::abs(da), std::abs(db), 1.0});
                if (std::abs(da - db) > 1e-10 * ref) derivs_match = false;
            }
            dirs.push_back(u);
        }
    }
    if (rows_vanish != derivs_match)
        throw std::logic_error("smoothness rows and derivative sampling disagree");
    return rows_vanish;
}

}  // namespace ps12

#endif
