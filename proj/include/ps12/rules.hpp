#ifndef PS12_RULES_HPP
#define PS12_RULES_HPP

#include <array>
#include <string>
#include <vector>

#include "jets.hpp"
#include "linalg.hpp"

namespace ps12 {

// Stencils producing the 10 jet entries at a new edge midpoint AB, in the
// frame (t, m) of that edge (t along the edge from A to B, m medial from the
// opposite corner C). Inputs are jets at the triangle corners, all expressed
// in the same (t, m) frame, plus first-stage cross-boundary edge data.
//
// Initialization input layout (39 entries):
//   0..9    jet at A (f, t, m, tt, tm, mm, ttt, ttm, tmm, mmm)
//   10..19  jet at B
//   20..29  jet at C
//   30      cross derivative m at the midpoint of AB
//   31, 32  cross derivatives at the midpoints of BC (dir m_A) and CA (m_B)
//   33, 34  second cross derivatives at the quarter points of AB
//           (near A, near B), direction m
//   35, 36  same for BC (near B, near C), direction m_A
//   37, 38  same for CA (near C, near A), direction m_B
//
// Subdivision input layout (30 entries): the three corner jets only.

struct RuleTerm {
    int input;
    long long num;
    long long den;
};

using Rule = std::vector<RuleTerm>;

struct RuleTable {
    int n_inputs = 0;
    std::vector<std::string> input_names;
    std::array<std::string, 10> output_names;
    std::array<Rule, 10> rules;
};

namespace detail {

inline std::vector<std::string> jet_names(const std::string& at) {
    return {at + ".f",   at + ".t",   at + ".m",   at + ".tt",  at + ".tm",
            at + ".mm",  at + ".ttt", at + ".ttm", at + ".tmm", at + ".mmm"};
}

inline std::array<std::string, 10> midpoint_output_names() {
    auto n = jet_names("AB");
    std::array<std::string, 10> out;
    for (size_t i = 0; i < 10; ++i) out[i] = n[i];
    return out;
}

}  // namespace detail

inline const RuleTable& init_rule_table() {
    static const RuleTable table = [] {
        RuleTable t;
        t.n_inputs = 39;
        for (const char* at : {"A", "B", "C"})
            for (auto& n : detail::jet_names(at)) t.input_names.push_back(n);
        for (const char* n : {"AB.m", "BC.mA", "CA.mB", "AAB.mm", "ABB.mm", "BBC.mAmA",
                              "BCC.mAmA", "CCA.mBmB", "CAA.mBmB"})
            t.input_names.push_back(n);
        t.output_names = detail::midpoint_output_names();
        t.rules[J_F] = {{0, 1, 2},  {10, 1, 2},  {1, 7, 40},  {11, -7, 40},
                        {3, 1, 40}, {13, 1, 40}, {6, 1, 640}, {16, -1, 640}};
        t.rules[J_T] = {{0, -5, 2},  {10, 5, 2},  {1, -3, 4},   {11, -3, 4},
                        {3, -3, 32}, {13, 3, 32}, {6, -1, 192}, {16, -1, 192}};
        t.rules[J_M] = {{30, 1, 1}};
        t.rules[J_TT] = {{1, -2, 1},  {11, 2, 1},  {3, -1, 2},  {13, -1, 2},
                         {6, -1, 24}, {16, 1, 24}};
        t.rules[J_TM] = {{2, -2, 1},  {12, 2, 1},  {4, -1, 2},  {14, -1, 2},
                         {7, -1, 24}, {17, 1, 24}};
        t.rules[J_MM] = {{33, 1, 1},  {34, 1, 1},  {5, -1, 2},  {15, -1, 2},
                         {8, -1, 16}, {18, 1, 16}};
        t.rules[J_TTT] = {{0, 120, 1}, {10, -120, 1}, {1, 60, 1}, {11, 60, 1},
                          {3, 21, 2},  {13, -21, 2},  {6, 3, 4},  {16, 3, 4}};
        t.rules[J_TTM] = {{30, -48, 1}, {2, 24, 1}, {12, 24, 1}, {4, 6, 1},
                          {14, -6, 1},  {7, 1, 2},  {17, 1, 2}};
        t.rules[J_TMM] = {{33, -8, 1}, {34, 8, 1}, {5, 4, 1}, {15, -4, 1},
                          {8, 1, 2},   {18, 1, 2}};
        t.rules[J_MMM] = {
            {0, 45, 1},     {10, 45, 1},    {2, 45, 1},      {12, 45, 1},
            {1, 36, 1},     {11, -36, 1},   {5, -217, 16},   {15, -217, 16},
            {4, 153, 16},   {14, -153, 16}, {3, 567, 64},    {13, 567, 64},
            {9, 25, 64},    {19, 25, 64},   {8, -251, 128},  {18, 251, 128},
            {7, 43, 256},   {17, 43, 256},  {6, 303, 512},   {16, -303, 512},
            {20, -90, 1},   {22, -24, 1},   {25, -23, 8},    {23, -135, 32},
            {29, -5, 32},   {27, -79, 128}, {30, -108, 1},   {31, 48, 1},
            {32, 48, 1},    {33, 15, 1},    {34, 15, 1},     {35, -7, 1},
            {36, 1, 1},     {38, -7, 1},    {37, 1, 1}};
        return t;
    }();
    return table;
}

inline const RuleTable& subdiv_rule_table() {
    static const RuleTable table = [] {
        RuleTable t;
        t.n_inputs = 30;
        for (const char* at : {"A", "B", "C"})
            for (auto& n : detail::jet_names(at)) t.input_names.push_back(n);
        t.output_names = detail::midpoint_output_names();
        const auto& init = init_rule_table();
        t.rules[J_F] = init.rules[J_F];
        t.rules[J_T] = init.rules[J_T];
        t.rules[J_M] = {{2, 1, 2},  {12, 1, 2},  {4, 5, 32}, {14, -5, 32},
                        {7, 1, 64}, {17, 1, 64}};
        t.rules[J_TT] = init.rules[J_TT];
        t.rules[J_TM] = init.rules[J_TM];
        t.rules[J_MM] = {{5, 1, 2}, {15, 1, 2}, {8, 1, 8}, {18, -1, 8}};
        t.rules[J_TTT] = init.rules[J_TTT];
        t.rules[J_TTM] = {{7, -1, 4}, {17, -1, 4}, {4, -3, 2}, {14, 3, 2}};
        t.rules[J_TMM] = {{8, -1, 4}, {18, -1, 4}, {5, -3, 2}, {15, 3, 2}};
        t.rules[J_MMM] = {{0, 45, 1},   {10, 45, 1},  {1, 18, 1},   {11, -18, 1},
                          {2, -21, 1},  {12, -21, 1}, {3, 45, 16},  {13, 45, 16},
                          {4, -63, 8},  {14, 63, 8},  {5, 15, 4},   {15, 15, 4},
                          {6, 3, 16},   {16, -3, 16}, {7, -7, 8},   {17, -7, 8},
                          {8, 5, 4},    {18, -5, 4},  {9, 1, 4},    {19, 1, 4},
                          {20, -90, 1}, {22, -48, 1}, {23, 9, 8},   {25, -21, 2},
                          {27, 1, 4},   {29, -1, 1}};
        return t;
    }();
    return table;
}

/// Applies a rule table to an input vector, producing the midpoint jet in the
/// edge frame.
template <class S>
Jet3<S> apply_rules(const RuleTable& table, const VectorX<S>& inputs) {
    if (int(inputs.size()) != table.n_inputs)
        throw std::invalid_argument("apply_rules: input size mismatch");
    // the weights are large and of mixed sign; in floating point, accumulate
    // in extended precision to keep the cancellation error near one ulp
    using Acc = std::conditional_t<std::is_same_v<S, double>, long double, S>;
    Jet3<S> out;
    for (int o = 0; o < 10; ++o) {
        Acc acc = Acc(0);
        for (const auto& term : table.rules[size_t(o)])
            acc += Acc(frac<S>(term.num, term.den)) * Acc(inputs[term.input]);
        out[o] = S(acc);
    }
    return out;
}

/// Corner-jet packing shared by both tables: jets at A, B, C in the edge
/// frame of AB, concatenated.
template <class S>
VectorX<S> pack_corner_jets(const Jet3<S>& a, const Jet3<S>& b, const Jet3<S>& c) {
    VectorX<S> v(30);
    for (int i = 0; i < 10; ++i) {
        v[i] = a[i];
        v[10 + i] = b[i];
        v[20 + i] = c[i];
    }
    return v;
}

}  // namespace ps12

#endif
