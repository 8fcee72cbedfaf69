#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tsfloor/channel.hpp"
#include "tsfloor/code.hpp"

using namespace tsfloor;

TEST_CASE("exponent matrix parsing") {
    SUBCASE("c1 header and entries") {
        auto e = load_exponent_matrix(fixtures::data_path("c1.qc"));
        CHECK(e.m_b == 7);
        CHECK(e.n_b == 10);
        CHECK(e.p == 64);
        CHECK(e.at(0, 0) == 8);
        CHECK(e.at(0, 1) == -1);
        CHECK(e.at(6, 9) == 18);
    }
    SUBCASE("trivial identity code") {
        auto e = parse_exponent_matrix("1 1 1\n0\n");
        CHECK(e.m_b == 1);
        CHECK(e.n_b == 1);
        CHECK(e.p == 1);
        CHECK(e.at(0, 0) == 0);
    }
    SUBCASE("c2 header and entries") {
        auto e = load_exponent_matrix(fixtures::data_path("c2.qc"));
        CHECK(e.m_b == 6);
        CHECK(e.n_b == 24);
        CHECK(e.p == 24);
        CHECK(e.at(0, 1) == 20);
        CHECK(e.at(0, 0) == -1);
    }
    SUBCASE("rejects entry >= p") { CHECK_THROWS(parse_exponent_matrix("4 1 2\n0 4\n")); }
    SUBCASE("rejects ragged rows") { CHECK_THROWS(parse_exponent_matrix("4 2 2\n0 1\n2\n")); }
    SUBCASE("rejects malformed tokens") { CHECK_THROWS(parse_exponent_matrix("4 1 2\n0 x1\n")); }
    SUBCASE("comma separation accepted") {
        auto e = parse_exponent_matrix("4 1 2\n0, 3\n");
        CHECK(e.at(0, 1) == 3);
    }
}

TEST_CASE("lifting circulant blocks") {
    SUBCASE("shift zero is the identity block") {
        auto h = lift(parse_exponent_matrix("3 1 1\n0\n"));
        REQUIRE(h.m == 3);
        CHECK(h.row_cols[0] == std::vector<int>{0});
        CHECK(h.row_cols[1] == std::vector<int>{1});
        CHECK(h.row_cols[2] == std::vector<int>{2});
    }
    SUBCASE("shift one moves row r to column r+1 mod p") {
        auto h = lift(parse_exponent_matrix("3 1 1\n1\n"));
        CHECK(h.row_cols[0] == std::vector<int>{1});
        CHECK(h.row_cols[1] == std::vector<int>{2});
        CHECK(h.row_cols[2] == std::vector<int>{0});
    }
    SUBCASE("c1 lifted dimensions and nonzero count") {
        auto e = load_exponent_matrix(fixtures::data_path("c1.qc"));
        auto h = lift(e);
        CHECK(h.m == 448);
        CHECK(h.n == 640);
        // oracle: count the non-(-1) exponents and multiply by p
        int nz_blocks = 0;
        for (int i = 0; i < e.m_b; ++i)
            for (int j = 0; j < e.n_b; ++j) nz_blocks += e.at(i, j) >= 0 ? 1 : 0;
        CHECK(nz_blocks == 50);
        CHECK(h.nonzeros() == static_cast<std::size_t>(nz_blocks) * 64);
    }
    SUBCASE("every nonzero block is a permutation matrix") {
        auto e = fixtures::toy_qc_small();
        auto h = lift(e);
        for (int bi = 0; bi < e.m_b; ++bi)
            for (int bj = 0; bj < e.n_b; ++bj) {
                std::vector<int> row_count(e.p, 0), col_count(e.p, 0);
                for (int r = 0; r < e.p; ++r)
                    for (int c : h.row_cols[bi * e.p + r])
                        if (c >= bj * e.p && c < (bj + 1) * e.p) {
                            ++row_count[r];
                            ++col_count[c - bj * e.p];
                        }
                for (int r = 0; r < e.p; ++r) {
                    const int expect = e.at(bi, bj) >= 0 ? 1 : 0;
                    CHECK(row_count[r] == expect);
                    CHECK(col_count[r] == expect);
                }
            }
    }
}

TEST_CASE("tanner graph construction") {
    SUBCASE("c1 is variable-regular with d_v = 5") {
        auto g = build_tanner_graph(lift(load_exponent_matrix(fixtures::data_path("c1.qc"))));
        REQUIRE(g.vn_count == 640);
        for (int v = 0; v < g.vn_count; ++v) CHECK(g.vn_degree(v) == 5);
    }
    SUBCASE("identity code has one VN, one CN, one edge") {
        auto g = build_tanner_graph(lift(parse_exponent_matrix("1 1 1\n0\n")));
        CHECK(g.vn_count == 1);
        CHECK(g.cn_count == 1);
        CHECK(g.vn_degree(0) == 1);
    }
    SUBCASE("c2 dimensions and per-column degrees") {
        auto e = load_exponent_matrix(fixtures::data_path("c2.qc"));
        auto g = build_tanner_graph(lift(e));
        CHECK(g.vn_count == 576);
        CHECK(g.cn_count == 144);
        for (int j = 0; j < e.n_b; ++j) {
            int colw = 0;
            for (int i = 0; i < e.m_b; ++i) colw += e.at(i, j) >= 0 ? 1 : 0;
            for (int v = j * e.p; v < (j + 1) * e.p; ++v) CHECK(g.vn_degree(v) == colw);
        }
    }
    SUBCASE("cn_layer follows the permutation and is constant per row block") {
        auto e = fixtures::toy_qc_small();
        auto g = build_tanner_graph(lift(e), {2, 0, 1});
        for (int c = 0; c < g.cn_count; ++c) {
            const int row = c / e.p;
            const int expected = row == 2 ? 0 : (row == 0 ? 1 : 2);
            CHECK(g.cn_layer(c) == expected);
        }
        for (int row = 0; row < e.m_b; ++row) {
            const int l0 = g.cn_layer(row * e.p);
            for (int c = row * e.p; c < (row + 1) * e.p; ++c) CHECK(g.cn_layer(c) == l0);
        }
    }
    SUBCASE("wrong permutation length rejected") {
        auto h = lift(fixtures::toy_qc_small());
        CHECK_THROWS(build_tanner_graph(h, {0, 1}));
    }
    SUBCASE("cn degree equals base-row weight") {
        auto e = load_exponent_matrix(fixtures::data_path("c2.qc"));
        auto g = build_tanner_graph(lift(e));
        for (int i = 0; i < e.m_b; ++i) {
            int roww = 0;
            for (int j = 0; j < e.n_b; ++j) roww += e.at(i, j) >= 0 ? 1 : 0;
            for (int c = i * e.p; c < (i + 1) * e.p; ++c) CHECK(g.cn_degree(c) == roww);
        }
    }
}

namespace {

// brute-force GF(2) null-space basis of the lifted matrix (dense elimination)
std::vector<std::vector<uint8_t>> null_space_basis(const ParityCheckMatrix& h) {
    std::vector<std::vector<uint8_t>> rows(h.m, std::vector<uint8_t>(h.n, 0));
    for (int j = 0; j < h.m; ++j)
        for (int c : h.row_cols[j]) rows[j][c] = 1;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < h.n && r < h.m; ++c) {
        int piv = -1;
        for (int i = r; i < h.m; ++i)
            if (rows[i][c]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[piv], rows[r]);
        for (int i = 0; i < h.m; ++i)
            if (i != r && rows[i][c])
                for (int k = 0; k < h.n; ++k) rows[i][k] ^= rows[r][k];
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<char> is_pivot(h.n, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<uint8_t>> basis;
    for (int c = 0; c < h.n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<uint8_t> v(h.n, 0);
        v[c] = 1;
        for (int i = 0; i < r; ++i)
            if (rows[i][c]) v[pivot_col[i]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

TEST_CASE("lifted rows annihilate brute-force codewords over GF(2)") {
    auto h = lift(fixtures::toy_qc_small());
    auto basis = null_space_basis(h);
    REQUIRE(!basis.empty());
    CounterRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<uint8_t> cw(h.n, 0);
        for (auto& b : basis)
            if (rng.next_u64() & 1)
                for (int i = 0; i < h.n; ++i) cw[i] ^= b[i];
        CHECK(is_codeword(h, cw));
    }
}

TEST_CASE("alist round trip") {
    auto check_roundtrip = [](const ParityCheckMatrix& h) {
        std::stringstream ss;
        write_alist(h, ss);
        auto h2 = read_alist(ss);
        REQUIRE(h2.m == h.m);
        REQUIRE(h2.n == h.n);
        CHECK(h2.row_cols == h.row_cols);
        std::stringstream ss2;
        write_alist(h2, ss2);
        CHECK(ss2.str() == ss.str());  // bit-exact re-serialization
    };
    check_roundtrip(lift(fixtures::toy_qc_small()));
    check_roundtrip(lift(fixtures::toy_3layer()));
    // randomized sparse exponent matrices
    CounterRng rng(42);
    for (int t = 0; t < 10; ++t) {
        ExponentMatrix e;
        e.p = 2 + static_cast<int>(rng.next_u64() % 5);
        e.m_b = 2 + static_cast<int>(rng.next_u64() % 3);
        e.n_b = 2 + static_cast<int>(rng.next_u64() % 4);
        for (int i = 0; i < e.m_b * e.n_b; ++i)
            e.entries.push_back(rng.next_u64() % 3 == 0 ? -1 : static_cast<int>(rng.next_u64() % e.p));
        bool any = false;
        for (int v : e.entries) any |= v >= 0;
        if (!any) e.entries[0] = 0;
        check_roundtrip(lift(e));
    }
}

TEST_CASE("alist of the tanner code matches the lifted structure") {
    auto h = lift(load_exponent_matrix(fixtures::data_path("tanner.qc")));
    CHECK(h.m == 93);
    CHECK(h.n == 155);
    CHECK(h.nonzeros() == 155u * 3);
    std::stringstream ss;
    write_alist(h, ss);
    auto h2 = read_alist(ss);
    CHECK(h2.row_cols == h.row_cols);
}
