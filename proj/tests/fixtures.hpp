#pragma once

// Shared fixtures: the Tanner-code (5,3) trapping-set structure under its two
// published labelings, the printed model matrices used as regression anchors,
// and a few toy codes.

#include <cstdlib>
#include <string>

#include "tsfloor/code.hpp"
#include "tsfloor/density.hpp"
#include "tsfloor/lets.hpp"
#include "tsfloor/matrix.hpp"
#include "tsfloor/state_space.hpp"

namespace fixtures {

using tsfloor::IMat;
using tsfloor::LetsSubgraph;
using tsfloor::StateVar;

inline std::string data_path(const std::string& name) {
    const char* env = std::getenv("TSFLOOR_DATA");
    return (env ? std::string(env) : std::string("data")) + "/" + name;
}

// ---------------------------------------------------------------------------
// (5,3) LETS of the Tanner (155,64) code: two hub VNs (0,1) joined to three
// spoke VNs (2,3,4) through six missatisfied CNs; one unsatisfied CN per
// spoke. CN ids 0..5 missatisfied, 6..8 unsatisfied.
// ---------------------------------------------------------------------------

inline LetsSubgraph tanner53_lets() {
    LetsSubgraph s;
    s.vns = {0, 1, 2, 3, 4};
    s.missat = {
        {0, 0, 2},  // m0: v1-v3
        {1, 0, 3},  // m1: v1-v4
        {2, 0, 4},  // m2: v1-v5
        {3, 1, 2},  // m3: v2-v3
        {4, 1, 3},  // m4: v2-v4
        {5, 1, 4},  // m5: v2-v5
    };
    s.unsat = {{6, 2}, {7, 3}, {8, 4}};
    return s;
}

/// Edge labeling of the first published figure (x1..x12).
inline std::vector<StateVar> fig1_order() {
    return {{0, 0}, {0, 1}, {0, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 0}, {2, 3}, {3, 1}, {3, 4}, {4, 2}, {4, 5}};
}

/// Systematic labeling of the layered figure: layers L1 = {m1, m5},
/// L2 = {m3, m2}, L3 = {m0, m4}.
inline std::vector<StateVar> fig2_order() {
    return {{0, 1}, {3, 1}, {4, 5}, {1, 5}, {2, 3}, {1, 3}, {0, 2}, {4, 2}, {0, 0}, {2, 0}, {3, 4}, {1, 4}};
}

inline std::vector<int> fig2_missat_layer() { return {2, 0, 1, 1, 2, 0}; }
inline std::vector<int> fig2_layer_positions() { return {0, 1, 2}; }
inline std::vector<int> fig2_unsat_positions() { return {0, 1, 2}; }

// ---------------------------------------------------------------------------
// Printed matrices (regression anchors).
// ---------------------------------------------------------------------------

inline IMat rows12(std::initializer_list<std::initializer_list<long long>> rows) { return IMat::from_rows(rows); }

inline IMat ex1_A() {
    return rows12({{0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1},
                   {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1},
                   {0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0},
                   {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                   {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                   {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                   {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                   {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}});
}

inline IMat ex1_B() {
    return rows12({{1, 0, 0, 0, 0},
                   {1, 0, 0, 0, 0},
                   {1, 0, 0, 0, 0},
                   {0, 1, 0, 0, 0},
                   {0, 1, 0, 0, 0},
                   {0, 1, 0, 0, 0},
                   {0, 0, 1, 0, 0},
                   {0, 0, 1, 0, 0},
                   {0, 0, 0, 1, 0},
                   {0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 1},
                   {0, 0, 0, 0, 1}});
}

inline IMat ex1_Bex() {
    return rows12({{0, 0, 0},
                   {0, 0, 0},
                   {0, 0, 0},
                   {0, 0, 0},
                   {0, 0, 0},
                   {0, 0, 0},
                   {1, 0, 0},
                   {1, 0, 0},
                   {0, 1, 0},
                   {0, 1, 0},
                   {0, 0, 1},
                   {0, 0, 1}});
}

inline IMat ex1_C() {
    return IMat::from_rows({{0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0},
                            {0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1},
                            {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                            {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                            {0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0}});
}

inline IMat ex1_Dex() {
    return IMat::from_rows({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

inline IMat ex2_A() {
    return rows12({{0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                   {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                   {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0},
                   {0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
                   {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                   {0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
                   {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                   {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                   {0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0}});
}

inline IMat ex2_B() {
    return rows12({{1, 0, 0, 0, 0},
                   {0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 1},
                   {0, 1, 0, 0, 0},
                   {0, 0, 1, 0, 0},
                   {0, 1, 0, 0, 0},
                   {1, 0, 0, 0, 0},
                   {0, 0, 0, 0, 1},
                   {1, 0, 0, 0, 0},
                   {0, 0, 1, 0, 0},
                   {0, 0, 0, 1, 0},
                   {0, 1, 0, 0, 0}});
}

inline IMat ex2_Bex() {
    return rows12({{0, 0, 0},
                   {0, 1, 0},
                   {0, 0, 1},
                   {0, 0, 0},
                   {1, 0, 0},
                   {0, 0, 0},
                   {0, 0, 0},
                   {0, 0, 1},
                   {0, 0, 0},
                   {1, 0, 0},
                   {0, 1, 0},
                   {0, 0, 0}});
}

inline IMat ex3_A2() {
    IMat m = IMat::identity(12);
    const IMat a = ex2_A();
    for (int i = 4; i < 8; ++i) {
        for (int j = 0; j < 12; ++j) m(i, j) = a(i, j);
    }
    return m;
}

inline IMat ex3_B2() {
    IMat m(12, 5);
    const IMat b = ex2_B();
    for (int i = 4; i < 8; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = b(i, j);
    return m;
}

inline IMat ex3_Bex2_stale() {
    IMat m(12, 3);
    m(7, 2) = 1;  // c3's input to x8, updated in the previous iteration
    return m;
}

inline IMat ex3_Bex2_fresh() {
    IMat m(12, 3);
    m(4, 0) = 1;  // c1's input to x5, already updated in this iteration
    return m;
}

inline IMat eq46_composite() {
    return rows12({{0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                   {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                   {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1},
                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1},
                   {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0},
                   {0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0}});
}

inline IMat ex6_A_irreducible() {
    return IMat::from_rows({{0, 0, 0, 1, 0, 0, 0},
                            {0, 0, 0, 0, 1, 0, 1},
                            {1, 0, 0, 0, 0, 1, 0},
                            {1, 0, 0, 0, 0, 1, 1},
                            {0, 1, 0, 0, 0, 1, 0},
                            {0, 0, 1, 0, 1, 0, 0},
                            {0, 1, 0, 1, 0, 0, 0}});
}

inline IMat ex6_A_prime() {
    return IMat::from_rows({{0, 0, 1, 0, 1, 0, 0},
                            {0, 0, 0, 0, 0, 0, 1},
                            {0, 1, 0, 0, 0, 0, 0},
                            {1, 0, 0, 0, 0, 1, 0},
                            {0, 1, 0, 0, 0, 1, 0}});
}

inline double ex6_r_tilde() { return 2.0136; }

/// Printed eigenvectors in FNF coordinates: zero-column states (1,2,3,4,6)
/// first, then the irreducible states (5,7,8,9,10,11,12). w is unit 2-norm;
/// u is scaled so that w^T u = 1.
inline std::vector<double> ex6_w_fnf() {
    return {0, 0, 0, 0, 0, 0.2838, 0.4027, 0.2525, 0.3189, 0.4525, 0.5085, 0.3584};
}
inline std::vector<double> ex6_u_fnf() {
    return {0.3342, 0.2355, 0.2096, 0.2974, 0.3756, 0.2647, 0.4220, 0.2974, 0.5329, 0.3756, 0.3342, 0.4743};
}

inline std::vector<int> ex6_zero_columns() { return {0, 1, 2, 3, 5}; }       // 0-based
inline std::vector<int> ex6_irreducible() { return {4, 6, 7, 8, 9, 10, 11}; }  // 0-based

// ---------------------------------------------------------------------------
// Toy codes.
// ---------------------------------------------------------------------------

/// Single CN, three VNs (cycle-free): H = [1 1 1].
inline tsfloor::ExponentMatrix toy_single_cn() { return tsfloor::parse_exponent_matrix("1 1 3\n0 0 0\n"); }

/// Six-VN, six-CN QC code with three row layers (hand-trace target).
inline tsfloor::ExponentMatrix toy_3layer() {
    return tsfloor::parse_exponent_matrix("2 3 3\n0 1 -1\n0 -1 0\n-1 0 1\n");
}

/// Small QC code for brute-force cross-checks of the enumerator (girth 6).
inline tsfloor::ExponentMatrix toy_qc_small() {
    return tsfloor::parse_exponent_matrix("5 3 4\n0 1 2 3\n0 2 4 1\n0 3 1 4\n");
}

/// Base graph of the worked DE example: H_b = [[1,1,1,0],[1,0,1,1],[0,1,0,1]].
inline tsfloor::BaseGraph de_example_base() {
    return tsfloor::BaseGraph::from_matrix(IMat::from_rows({{1, 1, 1, 0}, {1, 0, 1, 1}, {0, 1, 0, 1}}));
}

/// A simple-cycle LETS fixture: six degree-2 VNs in a ring through six
/// missatisfied CNs spread over three layers.
inline LetsSubgraph ring6_lets() {
    LetsSubgraph s;
    s.vns = {0, 1, 2, 3, 4, 5};
    s.missat = {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 4}, {4, 4, 5}, {5, 0, 5}};
    s.unsat = {};
    return s;
}

}  // namespace fixtures
