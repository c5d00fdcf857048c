#ifndef PS12_JETS_HPP
#define PS12_JETS_HPP

#include <array>
#include <vector>

#include "geometry.hpp"
#include "splits.hpp"

namespace ps12 {

// Jet entry order, shared by the frame and Cartesian layouts:
//   order 0: f
//   order 1: t, m          (or x, y)
//   order 2: tt, tm, mm    (or xx, xy, yy)
//   order 3: ttt, ttm, tmm, mmm
enum JetEntry : int {
    J_F = 0,
    J_T = 1,
    J_M = 2,
    J_TT = 3,
    J_TM = 4,
    J_MM = 5,
    J_TTT = 6,
    J_TTM = 7,
    J_TMM = 8,
    J_MMM = 9,
};

inline constexpr int jet_offset[4] = {0, 1, 3, 6};

/// Index of the order-o entry with b second-direction factors.
inline int jet_index(int o, int b) { return jet_offset[o] + b; }

/// Value and directional derivatives up to order 3 in an edge frame (t, m).
template <class S>
struct Jet3 {
    std::array<S, 10> v{};
    const S& operator[](int i) const { return v[size_t(i)]; }
    S& operator[](int i) { return v[size_t(i)]; }
};

/// Value and Cartesian partials up to order 3 (f, fx, fy, fxx, ...).
template <class S>
struct CornerJet {
    std::array<S, 10> v{};
    const S& operator[](int i) const { return v[size_t(i)]; }
    S& operator[](int i) { return v[size_t(i)]; }
};

namespace detail {

// Contraction of the symmetric order-k slice of a jet with k direction
// vectors given in the jet's own basis. jet[jet_index(k, b)] is the entry
// with b second-component factors.
template <class S>
S contract(const std::array<S, 10>& jet, const std::vector<Vector2<S>>& dirs) {
    // mixed-sign contraction; in floating point, accumulate in extended
    // precision so the cancellation error stays near one ulp
    using Acc = std::conditional_t<std::is_same_v<S, double>, long double, S>;
    int k = int(dirs.size());
    Acc acc = Acc(0);
    for (int mask = 0; mask < (1 << k); ++mask) {
        Acc w = Acc(1);
        int b = 0;
        for (int l = 0; l < k; ++l) {
            if (mask & (1 << l)) {
                w *= Acc(dirs[size_t(l)].y());
                ++b;
            } else {
                w *= Acc(dirs[size_t(l)].x());
            }
        }
        acc += w * Acc(jet[size_t(jet_index(k, b))]);
    }
    return S(acc);
}

}  // namespace detail

/// Directional derivative of any order <= 3 from a Cartesian jet.
template <class S>
S directional_derivative(const CornerJet<S>& j, const std::vector<Vector2<S>>& dirs) {
    return detail::contract(j.v, dirs);
}

/// Cartesian partials -> frame derivatives: entry f^{t^a m^b} is the order
/// (a+b) derivative tensor contracted a times with t and b times with m.
template <class S>
Jet3<S> cartesian_to_frame(const CornerJet<S>& j, const Vector2<S>& t, const Vector2<S>& m) {
    Jet3<S> out;
    out[J_F] = j[J_F];
    for (int o = 1; o <= 3; ++o)
        for (int b = 0; b <= o; ++b) {
            std::vector<Vector2<S>> dirs(size_t(o - b), t);
            dirs.insert(dirs.end(), size_t(b), m);
            out[jet_index(o, b)] = detail::contract(j.v, dirs);
        }
    return out;
}

/// Inverse of cartesian_to_frame; t and m must be linearly independent.
template <class S>
CornerJet<S> frame_to_cartesian(const Jet3<S>& j, const Vector2<S>& t, const Vector2<S>& m) {
    S det = cross2(t, m);
    // e_x = px*t + qx*m, e_y = py*t + qy*m
    Vector2<S> ex(cross2(Vector2<S>(S(1), S(0)), m) / det, cross2(t, Vector2<S>(S(1), S(0))) / det);
    Vector2<S> ey(cross2(Vector2<S>(S(0), S(1)), m) / det, cross2(t, Vector2<S>(S(0), S(1))) / det);
    CornerJet<S> out;
    out[J_F] = j[J_F];
    for (int o = 1; o <= 3; ++o)
        for (int b = 0; b <= o; ++b) {
            std::vector<Vector2<S>> dirs(size_t(o - b), ex);
            dirs.insert(dirs.end(), size_t(b), ey);
            out[jet_index(o, b)] = detail::contract(j.v, dirs);
        }
    return out;
}

/// Frame rescaling: entry f^{t^a m^b} picks up s_t^a * s_m^b. Used when a
/// child triangle's frame vectors are the parent's scaled by +-1/2.
template <class S>
Jet3<S> rescale_jet(const Jet3<S>& j, const S& s_t, const S& s_m) {
    Jet3<S> out;
    for (int o = 0; o <= 3; ++o)
        for (int b = 0; b <= o; ++b) {
            S w = S(1);
            for (int a = 0; a < o - b; ++a) w *= s_t;
            for (int a = 0; a < b; ++a) w *= s_m;
            out[jet_index(o, b)] = w * j[jet_index(o, b)];
        }
    return out;
}

/// Normal of the graph surface (x, y, f). Unit length in float mode, the
/// unnormalized (-fx, -fy, 1) in exact mode.
template <class S>
Vector3<S> surface_normal(const CornerJet<S>& j) {
    Vector3<S> n(-j[J_T], -j[J_M], S(1));  // entries 1,2 are fx, fy
    if constexpr (!ScalarTraits<S>::exact) n /= std::sqrt(to_double(n.dot(n)));
    return n;
}

/// Frame-jet variant: recovers the Cartesian gradient through the frame.
template <class S>
Vector3<S> surface_normal(const Jet3<S>& j, const Vector2<S>& t, const Vector2<S>& m) {
    S det = cross2(t, m);
    if (ScalarTraits<S>::is_zero(det)) throw std::invalid_argument("surface_normal: singular frame");
    // solve [t; m] * grad = (f^t, f^m)
    S fx = (m.y() * j[J_T] - t.y() * j[J_M]) / det;
    S fy = (t.x() * j[J_M] - m.x() * j[J_T]) / det;
    Vector3<S> n(-fx, -fy, S(1));
    if constexpr (!ScalarTraits<S>::exact) n /= std::sqrt(to_double(n.dot(n)));
    return n;
}

}  // namespace ps12

#endif
