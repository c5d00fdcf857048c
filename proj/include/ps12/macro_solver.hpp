#ifndef PS12_MACRO_SOLVER_HPP
#define PS12_MACRO_SOLVER_HPP

#include <algorithm>
#include <vector>

#include "bb.hpp"
#include "jets.hpp"
#include "linalg.hpp"
#include "rules.hpp"
#include "smoothness.hpp"
#include "splits.hpp"

namespace ps12 {

enum class FunctionalKind {
    corner_derivative,
    midpoint_cross_deriv,
    quarterpoint_cross_deriv,
};

/// Point evaluation of a chained directional derivative, pinned to a face of
/// the split so assembly and evaluation agree on the carrier.
template <class S>
struct NodalFunctional {
    FunctionalKind kind;
    Point2<S> carrier;
    std::vector<Vector2<S>> directions;  // empty for plain evaluation
    int face;
};

/// The 39 scalars determining a spline on the 12-split. Corner jets are in
/// the frame of the macro edge opposite the corner. Edges are indexed by
/// their first endpoint: edge e runs from corner e to corner (e+1)%3, and its
/// cross derivatives use the medial direction of that edge. quarter[e][0] is
/// the quarter point nearest corner e.
template <class S>
struct MacroElementData {
    std::array<Jet3<S>, 3> corner{};
    std::array<S, 3> mid{};
    std::array<std::array<S, 2>, 3> quarter{};
};

template <class S>
VectorX<S> pack_macro_data(const MacroElementData<S>& d) {
    VectorX<S> v = VectorX<S>::Constant(39, S(0));
    for (int x = 0; x < 3; ++x)
        for (int i = 0; i < 10; ++i) v[10 * x + i] = d.corner[size_t(x)][i];
    for (int e = 0; e < 3; ++e) {
        v[30 + e] = d.mid[size_t(e)];
        v[33 + 2 * e] = d.quarter[size_t(e)][0];
        v[33 + 2 * e + 1] = d.quarter[size_t(e)][1];
    }
    return v;
}

template <class S>
struct SplineOnSplit {
    std::vector<BezierPatch<S>> patches;
};

template <class S>
using SplineOn12Split = SplineOnSplit<S>;
template <class S>
using SplineOn6Split = SplineOnSplit<S>;

namespace detail {

template <class S>
std::vector<NodalFunctional<S>> corner_jet_functionals(const Triangle<S>& parent,
                                                       const std::array<int, 3>& corner_face) {
    std::vector<NodalFunctional<S>> out;
    for (int x = 0; x < 3; ++x) {
        EdgeFrame<S> fr = edge_frame(parent, x);
        for (int o = 0; o <= 3; ++o)
            for (int b = 0; b <= o; ++b) {
                NodalFunctional<S> f;
                f.kind = FunctionalKind::corner_derivative;
                f.carrier = parent[x];
                f.face = corner_face[size_t(x)];
                f.directions.assign(size_t(o - b), fr.t);
                f.directions.insert(f.directions.end(), size_t(b), fr.m);
                out.push_back(std::move(f));
            }
    }
    return out;
}

}  // namespace detail

/// Nodal minimal determining set of the quintic space on the 12-split:
/// 30 corner-jet functionals, 3 midpoint and 6 quarterpoint cross-boundary
/// derivatives in the medial directions. Order matches pack_macro_data.
template <class S>
std::vector<NodalFunctional<S>> lambda12(const Ps12Split<S>& split) {
    auto out = detail::corner_jet_functionals(split.parent, {0, 2, 4});
    // faces carrying the midpoint and the two quarter points of macro edge e
    static constexpr int mid_face[3] = {0, 3, 1};
    static constexpr int quarter_face[3][2] = {{0, 2}, {3, 4}, {5, 1}};
    for (int pass = 0; pass < 2; ++pass)
        for (int e = 0; e < 3; ++e) {
            EdgeFrame<S> fr = edge_frame(split.parent, (e + 2) % 3);
            if (pass == 0) {
                NodalFunctional<S> f;
                f.kind = FunctionalKind::midpoint_cross_deriv;
                f.carrier = fr.midpoint();
                f.directions = {fr.m};
                f.face = mid_face[e];
                out.push_back(std::move(f));
            } else {
                for (int q = 0; q < 2; ++q) {
                    NodalFunctional<S> f;
                    f.kind = FunctionalKind::quarterpoint_cross_deriv;
                    f.carrier = q == 0 ? fr.quarter_near_Y() : fr.quarter_near_Z();
                    f.directions = {fr.m, fr.m};
                    f.face = quarter_face[e][q];
                    out.push_back(std::move(f));
                }
            }
        }
    return out;
}

/// Corner-jet-only determining set of the 6-split space.
template <class S>
std::vector<NodalFunctional<S>> lambda6(const Ps6Split<S>& split) {
    return detail::corner_jet_functionals(split.parent, {0, 1, 3});
}

template <class S>
S apply_functional(const NodalFunctional<S>& f, const SplineOnSplit<S>& s) {
    if (f.face < 0 || f.face >= int(s.patches.size()))
        throw std::out_of_range("apply_functional: carrier face outside split");
    return eval_derivative(s.patches[size_t(f.face)], f.carrier, f.directions);
}

namespace detail {

constexpr int kDegree = 5;
constexpr int kFaceCoeffs = 21;  // bb_size(5)

template <class S, class Split>
VectorX<S> functional_row(const Split& split, const NodalFunctional<S>& f) {
    const int n = int(Split::faces.size()) * kFaceCoeffs;
    Triangle<S> T = split.face_triangle(f.face);
    std::vector<BaryVector<S>> dirs;
    dirs.reserve(f.directions.size());
    for (const auto& u : f.directions) dirs.push_back(direction_coords(u, T));
    VectorX<S> local = derivative_functional_row<S>(kDegree, dirs, to_barycentric(f.carrier, T));
    VectorX<S> row = VectorX<S>::Constant(n, S(0));
    row.segment(f.face * kFaceCoeffs, kFaceCoeffs) = local;
    return row;
}

// Smoothness block: 18 rows per interior edge (orders 0..3 of a quintic),
// ordered by (edge, n, j).
template <class S, class Split>
MatrixX<S> smoothness_block(const Split& split) {
    const int n = int(Split::faces.size()) * kFaceCoeffs;
    const int n_edges = int(split.interior_edges.size());
    MatrixX<S> A = MatrixX<S>::Constant(18 * n_edges, n, S(0));
    int r = 0;
    for (const auto& e : split.interior_edges) {
        auto rows = cr_rows(split.face_triangle(e.face1), split.face_triangle(e.face2), 3, kDegree);
        for (const auto& row : rows) {
            for (const auto& [slot, w] : row.terms) {
                int face = slot.face_index == 0 ? e.face1 : e.face2;
                A(r, face * kFaceCoeffs + bb_index(kDegree, slot.idx)) += w;
            }
            ++r;
        }
    }
    return A;
}

template <class S, class Split>
MatrixX<S> full_system(const Split& split, const std::vector<NodalFunctional<S>>& lam) {
    const int n = int(Split::faces.size()) * kFaceCoeffs;
    MatrixX<S> smooth = smoothness_block<S>(split);
    MatrixX<S> A = MatrixX<S>::Constant(int(lam.size()) + int(smooth.rows()), n, S(0));
    for (size_t i = 0; i < lam.size(); ++i) A.row(int(i)) = functional_row(split, lam[i]).transpose();
    A.bottomRows(smooth.rows()) = smooth;
    return A;
}

// Solves the macro system for several data right-hand sides at once; returns
// the coefficient matrix (one column per data column).
template <class S, class Split>
MatrixX<S> solve_macro(const Split& split, const std::vector<NodalFunctional<S>>& lam,
                       const MatrixX<S>& data) {
    MatrixX<S> A = full_system<S>(split, lam);
    MatrixX<S> B = MatrixX<S>::Constant(A.rows(), data.cols(), S(0));
    B.topRows(data.rows()) = data;
    return solve_unique(std::move(A), std::move(B));
}

template <class S, class Split>
SplineOnSplit<S> coeffs_to_spline(const Split& split, const VectorX<S>& coeffs) {
    SplineOnSplit<S> s;
    for (int f = 0; f < int(Split::faces.size()); ++f) {
        BezierPatch<S> p(kDegree, split.face_triangle(f));
        p.coeffs = coeffs.segment(f * kFaceCoeffs, kFaceCoeffs);
        s.patches.push_back(std::move(p));
    }
    return s;
}

}  // namespace detail

template <class S>
SplineOn12Split<S> solve12(const Ps12Split<S>& split, const MacroElementData<S>& data) {
    MatrixX<S> rhs = pack_macro_data(data);
    VectorX<S> coeffs = detail::solve_macro(split, lambda12(split), rhs).col(0);
    return detail::coeffs_to_spline(split, coeffs);
}

template <class S>
SplineOn6Split<S> solve6(const Ps6Split<S>& split, const std::array<Jet3<S>, 3>& corner_jets) {
    MatrixX<S> rhs = MatrixX<S>::Constant(30, 1, S(0));
    for (int x = 0; x < 3; ++x)
        for (int i = 0; i < 10; ++i) rhs(10 * x + i, 0) = corner_jets[size_t(x)][i];
    VectorX<S> coeffs = detail::solve_macro(split, lambda6(split), rhs).col(0);
    return detail::coeffs_to_spline(split, coeffs);
}

template <class S>
int smoothness_nullity(const Ps12Split<S>& split) {
    return nullity(detail::smoothness_block<S>(split));
}

template <class S>
int smoothness_nullity(const Ps6Split<S>& split) {
    return nullity(detail::smoothness_block<S>(split));
}

namespace detail {

// 10x10 matrix of cartesian_to_frame for the given frame.
template <class S>
MatrixX<S> cart_to_frame_matrix(const Vector2<S>& t, const Vector2<S>& m) {
    MatrixX<S> J = MatrixX<S>::Constant(10, 10, S(0));
    for (int c = 0; c < 10; ++c) {
        CornerJet<S> unit;
        unit[c] = S(1);
        Jet3<S> col = cartesian_to_frame(unit, t, m);
        for (int r = 0; r < 10; ++r) J(r, c) = col[r];
    }
    return J;
}

template <class S>
MatrixX<S> frame_to_cart_matrix(const Vector2<S>& t, const Vector2<S>& m) {
    MatrixX<S> G = MatrixX<S>::Constant(10, 10, S(0));
    for (int c = 0; c < 10; ++c) {
        Jet3<S> unit;
        unit[c] = S(1);
        CornerJet<S> col = frame_to_cartesian(unit, t, m);
        for (int r = 0; r < 10; ++r) G(r, c) = col[r];
    }
    return G;
}

inline std::pair<long long, long long> rational_parts(const Rational& x) {
    return {boost::multiprecision::numerator(x).template convert_to<long long>(),
            boost::multiprecision::denominator(x).template convert_to<long long>()};
}

// Shared tail of the two rule derivations: weights over the data vector for
// the 10 midpoint output functionals of macro edge 0 (corners A=0, B=1,
// C=2), with corner blocks rebased from their storage frame to the (t, m)
// frame of that edge.
template <class S, class Split>
RuleTable derive_rules(const Split& split, const std::vector<NodalFunctional<S>>& lam,
                       RuleTable skeleton) {
    static_assert(ScalarTraits<S>::exact, "rule derivation runs in exact arithmetic");
    const int n_data = int(lam.size());
    MatrixX<S> eye = MatrixX<S>::Identity(n_data, n_data);
    MatrixX<S> M = solve_macro(split, lam, eye);
    EdgeFrame<S> out_frame = edge_frame(split.parent, 2);
    Point2<S> vAB = out_frame.midpoint();
    MatrixX<S> G_out = frame_to_cart_matrix(out_frame.t, out_frame.m);
    // corner block x rebasing: data_x = J_x * cart, wanted basis J_out * cart
    std::array<MatrixX<S>, 3> P;
    for (int x = 0; x < 3; ++x) {
        EdgeFrame<S> fx = edge_frame(split.parent, x);
        P[size_t(x)] = cart_to_frame_matrix(fx.t, fx.m) * G_out;
    }
    const int out_face = 0;  // face (v1, v4, ...) contains the midpoint of edge 0
    Triangle<S> Tf = split.face_triangle(out_face);
    for (int o = 0; o < 10; ++o) {
        int ord = o == 0 ? 0 : (o < 3 ? 1 : (o < 6 ? 2 : 3));
        int b = o - jet_offset[ord];
        NodalFunctional<S> f;
        f.kind = FunctionalKind::corner_derivative;
        f.carrier = vAB;
        f.face = out_face;
        f.directions.assign(size_t(ord - b), out_frame.t);
        f.directions.insert(f.directions.end(), size_t(b), out_frame.m);
        VectorX<S> u = functional_row(split, f);
        VectorX<S> r = M.transpose() * u;
        VectorX<S> w = r;
        for (int x = 0; x < 3; ++x)
            w.segment(10 * x, 10) = P[size_t(x)].transpose() * r.segment(10 * x, 10);
        Rule rule;
        for (int i = 0; i < n_data; ++i) {
            if (w[i] == 0) continue;
            auto [num, den] = rational_parts(w[i]);
            rule.push_back({i, num, den});
        }
        skeleton.rules[size_t(o)] = std::move(rule);
    }
    return skeleton;
}

}  // namespace detail

/// Re-derives the 39-input initialization rules from the solved 12-split
/// system; geometry cancels, so the result is the same for any parent.
template <class S>
RuleTable derive_init_rules(const Ps12Split<S>& split) {
    RuleTable skeleton = init_rule_table();
    return detail::derive_rules(split, lambda12(split), std::move(skeleton));
}

/// Re-derives the 30-input subdivision rules from the 6-split system.
template <class S>
RuleTable derive_subdiv_rules(const Ps6Split<S>& split) {
    RuleTable skeleton = subdiv_rule_table();
    return detail::derive_rules(split, lambda6(split), std::move(skeleton));
}

/// Structural check of the three coupled cross-derivative unknowns left when
/// the top-order conditions across the medial interior edges (midpoint to
/// barycenter) are relaxed. Verifies, in exact arithmetic:
///  - relaxing the two higher top-order rows per medial edge leaves a
///    3-dimensional kernel, coordinatized by unknowns c1, c2, c3;
///  - the barycenter coefficient equals 5/9 (c1 + c2 + c3);
///  - the first-ring coefficients between midpoints are the 2:2:1 averages;
///  - re-imposing the relaxed rows forces c1 = c2 = c3 and then pins the
///    remaining unknown with pivot weight 18/16.
template <class S>
bool coefficient_chase_check(const Ps12Split<S>& split) {
    static_assert(ScalarTraits<S>::exact, "chase check runs in exact arithmetic");
    auto lam = lambda12(split);
    MatrixX<S> full = detail::full_system<S>(split, lam);
    const int n_nodal = int(lam.size());

    // positions of the medial interior edges (endpoints {3,9}, {4,9}, {5,9})
    // in the frozen interior-edge ordering, and their relaxed rows: per edge
    // 18 smoothness rows (orders 0..3), the order-3 rows at offset 15..17.
    std::vector<int> medial;
    for (size_t e = 0; e < split.interior_edges.size(); ++e) {
        int a = std::min(split.interior_edges[e].a, split.interior_edges[e].b);
        int b = std::max(split.interior_edges[e].a, split.interior_edges[e].b);
        if (b == 9 && a >= 3 && a <= 5) medial.push_back(int(e));
    }
    if (medial.size() != 3) return false;
    std::vector<int> dropped;
    for (int e : medial) {
        dropped.push_back(n_nodal + 18 * e + 16);
        dropped.push_back(n_nodal + 18 * e + 17);
    }
    MatrixX<S> relaxed(full.rows() - 6, full.cols());
    int at = 0;
    for (int r = 0; r < full.rows(); ++r) {
        if (std::find(dropped.begin(), dropped.end(), r) != dropped.end()) continue;
        relaxed.row(at++) = full.row(r);
    }
    MatrixX<S> ker = nullspace(relaxed);
    if (ker.cols() != 3) return false;

    auto slot = [&](int face, MultiIndex mi) {
        return face * detail::kFaceCoeffs + bb_index(detail::kDegree, mi);
    };
    // inner faces at the barycenter, listed with local vertex 0 at the edge
    // midpoints v4, v5, v6 and local vertex 2 at the barycenter:
    // faces (v4,v8,v10), (v5,v9,v10), (v6,v7,v10)
    const int inner[3] = {6, 8, 10};
    // first-ring coefficients toward the midpoints carry weights
    // (1, 1/3, 1/3) on (c_own, c_other, c_other); solving pins c1, c2, c3
    MatrixX<S> ringM(3, 3), rings(3, 3);
    ringM << S(1), frac<S>(1, 3), frac<S>(1, 3), frac<S>(1, 3), S(1), frac<S>(1, 3),
        frac<S>(1, 3), frac<S>(1, 3), S(1);
    for (int e = 0; e < 3; ++e) rings.row(e) = ker.row(slot(inner[e], {1, 0, 4}));
    MatrixX<S> cmat = solve_unique(MatrixX<S>(ringM), MatrixX<S>(rings));

    // barycenter coefficient = 5/9 (c1 + c2 + c3)
    VectorX<S> csum = (cmat.row(0) + cmat.row(1) + cmat.row(2)).transpose();
    if (VectorX<S>(frac<S>(5, 9) * csum) != ker.row(slot(inner[0], {0, 0, 5})).transpose())
        return false;
    // ring coefficients toward v8, v9, v7 are the 2:2:1 averages
    for (int e = 0; e < 3; ++e) {
        VectorX<S> avg =
            ((2 * cmat.row(e) + 2 * cmat.row((e + 1) % 3) + cmat.row((e + 2) % 3)) / 3)
                .transpose();
        if (ker.row(slot(inner[e], {0, 1, 4})).transpose() != avg) return false;
    }

    // re-imposed rows, expressed as functionals of (c1, c2, c3)
    MatrixX<S> cinv = solve_unique(MatrixX<S>(cmat), MatrixX<S>(MatrixX<S>::Identity(3, 3)));
    MatrixX<S> forms(6, 3);
    for (int i = 0; i < 6; ++i) forms.row(i) = full.row(dropped[size_t(i)]) * ker * cinv;
    // together they must pin all three unknowns
    if (rank(MatrixX<S>(forms)) != 3) return false;
    // two of them are pure differences, forcing c1 = c2 = c3
    int diffs = 0;
    for (int i = 0; i < 6; ++i) {
        int zeros = 0, pos = 0, neg = 0;
        for (int j = 0; j < 3; ++j) {
            if (forms(i, j) == 0) ++zeros;
            (forms(i, j) > 0 ? pos : neg) += forms(i, j) != 0;
        }
        diffs += zeros == 1 && pos == 1 && neg == 1 && forms.row(i).sum() == 0;
    }
    if (diffs < 2) return false;
    // on the symmetric element c1 = c2 = c3 = 1, the surviving condition has
    // pivot weight 18/16 (at stencil scale -1/4 per row)
    for (int e = 0; e < 3; ++e) {
        S sym = forms.row(2 * e).sum() + forms.row(2 * e + 1).sum();
        if (S(-4) * sym != frac<S>(18, 16)) return false;
    }
    return true;
}

}  // namespace ps12

#endif
