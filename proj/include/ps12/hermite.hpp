#ifndef PS12_HERMITE_HPP
#define PS12_HERMITE_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "macro_solver.hpp"
#include "rules.hpp"

namespace ps12 {

/// Refined state of one macro triangle: a 4^k triangulation with a full
/// Cartesian jet at every vertex. Vertices on the macro boundary belong to
/// this macro only; the neighbouring macro keeps its own copy, which keeps
/// the two one-sided f^mmm values distinct.
template <class S>
struct MacroPatch {
    Triangle<S> macro;
    std::vector<Point2<S>> points;
    std::vector<CornerJet<S>> jets;
    std::vector<std::array<int, 3>> tris;
};

template <class S>
struct RefinementLevel {
    int level = 0;
    std::vector<MacroPatch<S>> macros;
    // first-stage cross-boundary data, consumed by the level-0 step only
    std::vector<MacroElementData<S>> macro_data;
};

/// Initialization step for one edge: corner jets in the edge frame plus the
/// 9 first-stage inputs (this edge's m and mm data, then the other two
/// edges' midpoint and quarterpoint data in rule order).
template <class S>
Jet3<S> init_midpoint(const Jet3<S>& jetA, const Jet3<S>& jetB, const Jet3<S>& jetC,
                      const std::array<S, 9>& edge_inputs) {
    VectorX<S> in(39);
    in.head(30) = pack_corner_jets(jetA, jetB, jetC);
    for (int i = 0; i < 9; ++i) in[30 + i] = edge_inputs[size_t(i)];
    return apply_rules<S>(init_rule_table(), in);
}

/// Subdivision step for one edge: midpoint jet from the three corner jets of
/// the triangle, all in the frame of the edge.
template <class S>
Jet3<S> subdivide_midpoint(const Jet3<S>& jetA, const Jet3<S>& jetB, const Jet3<S>& jetC) {
    return apply_rules<S>(subdiv_rule_table(), pack_corner_jets(jetA, jetB, jetC));
}

inline int refine_thread_count() {
    if (const char* env = std::getenv("PS12_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

namespace detail {

template <class S>
CornerJet<S> jet3_to_corner(const Jet3<S>& j, const EdgeFrame<S>& fr) {
    return frame_to_cartesian(j, fr.t, fr.m);
}

// Midpoint jet of the edge opposite local corner X of a refined triangle,
// from Cartesian corner jets, via the subdivision rules in that edge's frame.
template <class S>
CornerJet<S> subdiv_edge_jet(const Triangle<S>& T, int X, const CornerJet<S>& cA,
                             const CornerJet<S>& cB, const CornerJet<S>& cC) {
    EdgeFrame<S> fr = edge_frame(T, X);
    Jet3<S> out = subdivide_midpoint(cartesian_to_frame(cA, fr.t, fr.m),
                                     cartesian_to_frame(cB, fr.t, fr.m),
                                     cartesian_to_frame(cC, fr.t, fr.m));
    return frame_to_cartesian(out, fr.t, fr.m);
}

// Level-0 step on one macro: the three macro-edge midpoints from the full
// 39-scalar data set, with the input slots rotated into each edge's role
// order.
template <class S>
MacroPatch<S> init_macro(const Triangle<S>& T, const MacroElementData<S>& data) {
    MacroPatch<S> out;
    out.macro = T;
    std::array<CornerJet<S>, 3> corner_cart;
    for (int x = 0; x < 3; ++x) {
        EdgeFrame<S> fx = edge_frame(T, x);
        corner_cart[size_t(x)] = frame_to_cartesian(data.corner[size_t(x)], fx.t, fx.m);
    }
    out.points = {T[0], T[1], T[2]};
    out.jets = {corner_cart[0], corner_cart[1], corner_cart[2]};
    for (int e = 0; e < 3; ++e) {
        int A = e, B = (e + 1) % 3, C = (e + 2) % 3;
        EdgeFrame<S> fr = edge_frame(T, C);
        std::array<S, 9> edge_in = {
            data.mid[size_t(A)],           data.mid[size_t(B)],
            data.mid[size_t(C)],           data.quarter[size_t(A)][0],
            data.quarter[size_t(A)][1],    data.quarter[size_t(B)][0],
            data.quarter[size_t(B)][1],    data.quarter[size_t(C)][0],
            data.quarter[size_t(C)][1]};
        Jet3<S> j = init_midpoint(cartesian_to_frame(corner_cart[size_t(A)], fr.t, fr.m),
                                  cartesian_to_frame(corner_cart[size_t(B)], fr.t, fr.m),
                                  cartesian_to_frame(corner_cart[size_t(C)], fr.t, fr.m), edge_in);
        out.points.push_back(fr.midpoint());
        out.jets.push_back(frame_to_cartesian(j, fr.t, fr.m));
    }
    // midpoints got indices 3, 4, 5 for edges (0,1), (1,2), (2,0)
    out.tris = {{0, 3, 5}, {1, 4, 3}, {2, 5, 4}, {3, 4, 5}};
    return out;
}

// Level-k -> k+1 step on one macro. Edge midpoints are computed once per
// undirected edge, from its lowest-index adjacent triangle, which makes the
// result independent of scheduling.
inline std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

template <class S>
MacroPatch<S> refine_macro(const MacroPatch<S>& in) {
    MacroPatch<S> out;
    out.macro = in.macro;
    out.points = in.points;
    out.jets = in.jets;
    std::map<std::pair<int, int>, int> midpoint_of;
    for (const auto& tri : in.tris) {
        Triangle<S> T(in.points[size_t(tri[0])], in.points[size_t(tri[1])],
                      in.points[size_t(tri[2])]);
        for (int X = 0; X < 3; ++X) {
            int a = tri[(X + 1) % 3], b = tri[(X + 2) % 3];
            auto key = edge_key(a, b);
            if (midpoint_of.count(key)) continue;
            CornerJet<S> j = subdiv_edge_jet(T, X, in.jets[size_t(tri[(X + 1) % 3])],
                                             in.jets[size_t(tri[(X + 2) % 3])],
                                             in.jets[size_t(tri[size_t(X)])]);
            midpoint_of[key] = int(out.points.size());
            out.points.push_back((in.points[size_t(a)] + in.points[size_t(b)]) / 2);
            out.jets.push_back(j);
        }
    }
    for (const auto& tri : in.tris) {
        int m01 = midpoint_of[edge_key(tri[0], tri[1])];
        int m12 = midpoint_of[edge_key(tri[1], tri[2])];
        int m20 = midpoint_of[edge_key(tri[2], tri[0])];
        out.tris.push_back({tri[0], m01, m20});
        out.tris.push_back({tri[1], m12, m01});
        out.tris.push_back({tri[2], m20, m12});
        out.tris.push_back({m01, m12, m20});
    }
    return out;
}

template <class F>
void parallel_for(int n, F&& body) {
    int threads = std::min(refine_thread_count(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// One refinement step. Level 0 consumes the first-stage edge data; later
/// levels run the subdivision rules per edge. Existing jets pass through
/// unchanged.
template <class S>
RefinementLevel<S> refine(const RefinementLevel<S>& in) {
    RefinementLevel<S> out;
    out.level = in.level + 1;
    out.macros.resize(in.macros.size());
    if (in.level == 0) {
        if (in.macro_data.size() != in.macros.size())
            throw std::invalid_argument("refine: level-0 input lacks macro edge data");
        detail::parallel_for(int(in.macros.size()), [&](int i) {
            out.macros[size_t(i)] =
                detail::init_macro(in.macros[size_t(i)].macro, in.macro_data[size_t(i)]);
        });
    } else {
        detail::parallel_for(int(in.macros.size()), [&](int i) {
            out.macros[size_t(i)] = detail::refine_macro(in.macros[size_t(i)]);
        });
    }
    return out;
}

/// Level-0 state from per-macro triangles and data.
template <class S>
RefinementLevel<S> initial_level(const std::vector<Triangle<S>>& tris,
                                 const std::vector<MacroElementData<S>>& data) {
    if (tris.size() != data.size())
        throw std::invalid_argument("initial_level: one data set per triangle required");
    RefinementLevel<S> lv;
    lv.level = 0;
    lv.macro_data = data;
    for (size_t i = 0; i < tris.size(); ++i) {
        require_nondegenerate(tris[i]);
        MacroPatch<S> p;
        p.macro = tris[i];
        p.points = {tris[i][0], tris[i][1], tris[i][2]};
        std::array<CornerJet<S>, 3> cj;
        for (int x = 0; x < 3; ++x) {
            EdgeFrame<S> fx = edge_frame(tris[i], x);
            cj[size_t(x)] = frame_to_cartesian(data[i].corner[size_t(x)], fx.t, fx.m);
        }
        p.jets = {cj[0], cj[1], cj[2]};
        p.tris = {{0, 1, 2}};
        lv.macros.push_back(std::move(p));
    }
    return lv;
}

template <class S>
RefinementLevel<S> refine_to_level(const std::vector<Triangle<S>>& tris,
                                   const std::vector<MacroElementData<S>>& data, int levels) {
    RefinementLevel<S> lv = initial_level(tris, data);
    for (int k = 0; k < levels; ++k) lv = refine(lv);
    return lv;
}

}  // namespace ps12

#endif
