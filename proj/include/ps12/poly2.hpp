#ifndef PS12_POLY2_HPP
#define PS12_POLY2_HPP

#include <vector>

#include "linalg.hpp"
#include "macro_solver.hpp"

namespace ps12 {

/// Bivariate polynomial of degree <= 5, dense monomial coefficients c[i][j]
/// on x^i y^j. The test oracle for everything the spline schemes reproduce.
template <class S>
struct Poly2 {
    static constexpr int max_degree = 5;
    std::array<std::array<S, 6>, 6> c{};

    static Poly2 monomial(int i, int j, const S& w = S(1)) {
        Poly2 p;
        p.c[size_t(i)][size_t(j)] = w;
        return p;
    }
};

template <class S>
S poly_eval(const Poly2<S>& p, const Point2<S>& pt) {
    S acc = S(0);
    S xi = S(1);
    for (int i = 0; i <= Poly2<S>::max_degree; ++i) {
        S yj = S(1);
        for (int j = 0; i + j <= Poly2<S>::max_degree; ++j) {
            acc += p.c[size_t(i)][size_t(j)] * xi * yj;
            yj *= pt.y();
        }
        xi *= pt.x();
    }
    return acc;
}

template <class S>
Poly2<S> poly_dx(const Poly2<S>& p) {
    Poly2<S> out;
    for (int i = 1; i <= Poly2<S>::max_degree; ++i)
        for (int j = 0; i + j <= Poly2<S>::max_degree; ++j)
            out.c[size_t(i - 1)][size_t(j)] = frac<S>(i) * p.c[size_t(i)][size_t(j)];
    return out;
}

template <class S>
Poly2<S> poly_dy(const Poly2<S>& p) {
    Poly2<S> out;
    for (int i = 0; i <= Poly2<S>::max_degree; ++i)
        for (int j = 1; i + j <= Poly2<S>::max_degree; ++j)
            out.c[size_t(i)][size_t(j - 1)] = frac<S>(j) * p.c[size_t(i)][size_t(j)];
    return out;
}

/// Chained directional derivative by symbolic differentiation.
template <class S>
S poly_derivative(const Poly2<S>& p, const Point2<S>& pt, const std::vector<Vector2<S>>& dirs) {
    std::vector<Poly2<S>> level = {p};
    for (const auto& u : dirs) {
        std::vector<Poly2<S>> next;
        // expand the directional derivative into x/y parts applied to each term
        for (auto& q : level) {
            Poly2<S> d = poly_dx(q);
            for (auto& row : d.c)
                for (auto& v : row) v *= u.x();
            Poly2<S> e = poly_dy(q);
            for (auto& row : e.c)
                for (auto& v : row) v *= u.y();
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) d.c[size_t(i)][size_t(j)] += e.c[size_t(i)][size_t(j)];
            next.push_back(std::move(d));
        }
        level = std::move(next);
    }
    S acc = S(0);
    for (const auto& q : level) acc += poly_eval(q, pt);
    return acc;
}

/// Full Cartesian jet of the polynomial at a point.
template <class S>
CornerJet<S> poly_jet(const Poly2<S>& p, const Point2<S>& pt) {
    CornerJet<S> out;
    Vector2<S> ex(S(1), S(0)), ey(S(0), S(1));
    out[J_F] = poly_eval(p, pt);
    for (int o = 1; o <= 3; ++o)
        for (int b = 0; b <= o; ++b) {
            std::vector<Vector2<S>> dirs(size_t(o - b), ex);
            dirs.insert(dirs.end(), size_t(b), ey);
            out[jet_index(o, b)] = poly_derivative(p, pt, dirs);
        }
    return out;
}

/// Exact B-form of the polynomial on a triangle, by Bernstein collocation at
/// the domain points.
template <class S>
BezierPatch<S> patch_from_polynomial(const Poly2<S>& p, const Triangle<S>& T, int d = 5) {
    require_nondegenerate(T);
    int n = bb_size(d);
    MatrixX<S> A = MatrixX<S>::Constant(n, n, S(0));
    MatrixX<S> rhs = MatrixX<S>::Constant(n, 1, S(0));
    auto idx = multi_indices(d);
    for (int r = 0; r < n; ++r) {
        const MultiIndex& m = idx[size_t(r)];
        Point2<S> pt = (T[0] * frac<S>(m.i) + T[1] * frac<S>(m.j) + T[2] * frac<S>(m.k)) / frac<S>(d);
        BaryPoint<S> b = to_barycentric(pt, T);
        for (int col = 0; col < n; ++col) A(r, col) = bernstein_eval(d, idx[size_t(col)], b);
        rhs(r, 0) = poly_eval(p, pt);
    }
    BezierPatch<S> out(d, T);
    out.coeffs = solve_unique(std::move(A), std::move(rhs)).col(0);
    return out;
}

/// The 39 nodal data scalars of the polynomial on a macro triangle.
template <class S>
MacroElementData<S> sample_poly_data(const Poly2<S>& p, const Triangle<S>& T) {
    require_nondegenerate(T);
    MacroElementData<S> d;
    for (int x = 0; x < 3; ++x) {
        EdgeFrame<S> fr = edge_frame(T, x);
        d.corner[size_t(x)] = cartesian_to_frame(poly_jet(p, T[x]), fr.t, fr.m);
    }
    for (int e = 0; e < 3; ++e) {
        EdgeFrame<S> fr = edge_frame(T, (e + 2) % 3);
        d.mid[size_t(e)] = poly_derivative(p, fr.midpoint(), {fr.m});
        d.quarter[size_t(e)][0] = poly_derivative(p, fr.quarter_near_Y(), {fr.m, fr.m});
        d.quarter[size_t(e)][1] = poly_derivative(p, fr.quarter_near_Z(), {fr.m, fr.m});
    }
    return d;
}

}  // namespace ps12

#endif
