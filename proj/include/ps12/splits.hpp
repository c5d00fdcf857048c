#ifndef PS12_SPLITS_HPP
#define PS12_SPLITS_HPP

#include <array>
#include <optional>

#include "bb.hpp"

namespace ps12 {

// Vertex labeling of the Powell-Sabin splits (0-based indices, CCW parent
// corners v1, v2, v3):
//
// 12-split:
//   v1, v2, v3   corners
//   v4 = (v1+v2)/2,  v5 = (v2+v3)/2,  v6 = (v3+v1)/2   edge midpoints
//   v7 = (v4+v6)/2,  v8 = (v4+v5)/2,  v9 = (v5+v6)/2   interior (midline) midpoints
//   v10 = (v1+v2+v3)/3                                 barycenter
// v7 lies on the median from v1, v8 on the median from v2, v9 on the median
// from v3.
//
// 6-split:
//   v1..v6 as above, v7 = barycenter.

struct SplitEdge {
    int a, b;           // vertex indices, a < b not required; as constructed
    int face1, face2;   // adjacent faces; face2 = -1 on the boundary
};

template <class S>
struct Ps12Split {
    Triangle<S> parent;
    std::array<Point2<S>, 10> vertices;
    static constexpr std::array<std::array<int, 3>, 12> faces = {{
        {0, 3, 6}, {0, 6, 5},   // corner v1
        {1, 7, 3}, {1, 4, 7},   // corner v2
        {2, 8, 4}, {2, 5, 8},   // corner v3
        {3, 7, 9}, {7, 4, 9}, {4, 8, 9}, {8, 5, 9}, {5, 6, 9}, {6, 3, 9},  // inner hexagon
    }};
    std::array<SplitEdge, 15> interior_edges;
    std::array<SplitEdge, 6> boundary_edges;

    Triangle<S> face_triangle(int f) const {
        const auto& F = faces[size_t(f)];
        return Triangle<S>(vertices[size_t(F[0])], vertices[size_t(F[1])], vertices[size_t(F[2])]);
    }
};

template <class S>
struct Ps6Split {
    Triangle<S> parent;
    std::array<Point2<S>, 7> vertices;
    static constexpr std::array<std::array<int, 3>, 6> faces = {{
        {0, 3, 6}, {3, 1, 6}, {1, 4, 6}, {4, 2, 6}, {2, 5, 6}, {5, 0, 6},
    }};
    std::array<SplitEdge, 6> interior_edges;
    std::array<SplitEdge, 6> boundary_edges;

    Triangle<S> face_triangle(int f) const {
        const auto& F = faces[size_t(f)];
        return Triangle<S>(vertices[size_t(F[0])], vertices[size_t(F[1])], vertices[size_t(F[2])]);
    }
};

template <class S>
Ps12Split<S> ps12_split(const Triangle<S>& T) {
    require_nondegenerate(T);
    Ps12Split<S> s;
    s.parent = T;
    auto& v = s.vertices;
    v[0] = T[0];
    v[1] = T[1];
    v[2] = T[2];
    v[3] = (T[0] + T[1]) / 2;
    v[4] = (T[1] + T[2]) / 2;
    v[5] = (T[2] + T[0]) / 2;
    v[6] = (v[3] + v[5]) / 2;
    v[7] = (v[3] + v[4]) / 2;
    v[8] = (v[4] + v[5]) / 2;
    v[9] = (T[0] + T[1] + T[2]) / 3;
    s.interior_edges = {{
        {0, 6, 0, 1},   // v1-v7 (median from v1)
        {1, 7, 2, 3},   // v2-v8
        {2, 8, 4, 5},   // v3-v9
        {3, 6, 0, 11},  // v4-v7 (midline halves)
        {3, 7, 2, 6},   // v4-v8
        {4, 7, 3, 7},   // v5-v8
        {4, 8, 4, 8},   // v5-v9
        {5, 8, 5, 9},   // v6-v9
        {5, 6, 1, 10},  // v6-v7
        {6, 9, 10, 11}, // v7-v10 (inner median pieces)
        {7, 9, 6, 7},   // v8-v10
        {8, 9, 8, 9},   // v9-v10
        {3, 9, 6, 11},  // v4-v10
        {4, 9, 7, 8},   // v5-v10
        {5, 9, 9, 10},  // v6-v10
    }};
    s.boundary_edges = {{
        {0, 3, 0, -1}, {3, 1, 2, -1}, {1, 4, 3, -1}, {4, 2, 4, -1}, {2, 5, 5, -1}, {5, 0, 1, -1},
    }};
    return s;
}

template <class S>
Ps6Split<S> ps6_split(const Triangle<S>& T) {
    require_nondegenerate(T);
    Ps6Split<S> s;
    s.parent = T;
    auto& v = s.vertices;
    v[0] = T[0];
    v[1] = T[1];
    v[2] = T[2];
    v[3] = (T[0] + T[1]) / 2;
    v[4] = (T[1] + T[2]) / 2;
    v[5] = (T[2] + T[0]) / 2;
    v[6] = (T[0] + T[1] + T[2]) / 3;
    s.interior_edges = {{
        {0, 6, 5, 0}, {3, 6, 0, 1}, {1, 6, 1, 2}, {4, 6, 2, 3}, {2, 6, 3, 4}, {5, 6, 4, 5},
    }};
    s.boundary_edges = {{
        {0, 3, 0, -1}, {3, 1, 1, -1}, {1, 4, 2, -1}, {4, 2, 3, -1}, {2, 5, 4, -1}, {5, 0, 5, -1},
    }};
    return s;
}

/// Edge frame of the edge opposite corner X. With the other corners in the
/// parent's counterclockwise order (Y, Z): t = vZ - vY, m = (vY+vZ)/2 - vX,
/// n the inward edge normal (unnormalized in exact mode), and m = a*n + b*t.
template <class S>
struct EdgeFrame {
    Point2<S> vY, vZ, vX;
    Vector2<S> t, m, n;
    S alpha, beta;

    Point2<S> midpoint() const { return (vY + vZ) / 2; }
    Point2<S> quarter_near_Y() const { return (vY * 3 + vZ) / 4; }
    Point2<S> quarter_near_Z() const { return (vY + vZ * 3) / 4; }
};

template <class S>
EdgeFrame<S> edge_frame(const Triangle<S>& T, int opposite_corner) {
    require_nondegenerate(T);
    EdgeFrame<S> f;
    int X = opposite_corner, Y = (X + 1) % 3, Z = (X + 2) % 3;
    f.vX = T[X];
    f.vY = T[Y];
    f.vZ = T[Z];
    f.t = f.vZ - f.vY;
    f.m = (f.vY + f.vZ) / 2 - f.vX;
    Vector2<S> n(-f.t.y(), f.t.x());
    if (n.dot(f.vX - f.vY) < 0) n = -n;
    if constexpr (!ScalarTraits<S>::exact) n /= std::sqrt(to_double(n.dot(n)));
    f.n = n;
    f.alpha = f.m.dot(f.n) / f.n.dot(f.n);
    f.beta = f.m.dot(f.t) / f.t.dot(f.t);
    return f;
}

/// One child of the midpoint 4-to-1 subdivision, with the per-edge frame
/// scale relative to the parent (t_child = sign * t_parent, same for m).
template <class S>
struct SubdivChild {
    Triangle<S> triangle;
    // sign[i] scales the parent frame of the edge corresponding to the
    // child's edge opposite corner i.
    std::array<S, 3> frame_sign;
    // parent edge role (opposite-corner index in the parent) matching each
    // child edge
    std::array<int, 3> parent_edge;
};

/// Midpoint subdivision into the four subtriangles (v1,v4,v6), (v2,v5,v4),
/// (v3,v6,v5), (v4,v5,v6) of the 12-split labeling. Corner children keep the
/// parent frame directions scaled by +1/2; the inner child reverses them
/// (-1/2).
template <class S>
std::array<SubdivChild<S>, 4> subdivide_four(const Triangle<S>& T) {
    require_nondegenerate(T);
    Point2<S> m12 = (T[0] + T[1]) / 2;  // v4
    Point2<S> m23 = (T[1] + T[2]) / 2;  // v5
    Point2<S> m31 = (T[2] + T[0]) / 2;  // v6
    S half = frac<S>(1, 2), mhalf = frac<S>(-1, 2);
    std::array<SubdivChild<S>, 4> out;
    out[0] = {Triangle<S>(T[0], m12, m31), {half, half, half}, {0, 1, 2}};
    out[1] = {Triangle<S>(T[1], m23, m12), {half, half, half}, {1, 2, 0}};
    out[2] = {Triangle<S>(T[2], m31, m23), {half, half, half}, {2, 0, 1}};
    // inner child (v4, v5, v6): the edge opposite each corner vK is parallel
    // to the parent edge whose midpoint is vK, direction reversed
    out[3] = {Triangle<S>(m12, m23, m31), {mhalf, mhalf, mhalf}, {2, 0, 1}};
    return out;
}

}  // namespace ps12

#endif
