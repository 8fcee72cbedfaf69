#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tsfloor/util.hpp"

namespace tsfloor {

/// QC-LDPC exponent matrix. Entry -1 is an all-zero block; entry k in
/// [0, p-1] is the identity circularly right-shifted by k: row r of the block
/// has its one in column (r + k) mod p.
struct ExponentMatrix {
    int m_b = 0;
    int n_b = 0;
    int p = 0;
    std::vector<int> entries;  // row-major, m_b * n_b

    int at(int i, int j) const { return entries[std::size_t(i) * n_b + j]; }
    int& at(int i, int j) { return entries[std::size_t(i) * n_b + j]; }

    int nonzero_blocks() const {
        int c = 0;
        for (int e : entries) c += (e >= 0);
        return c;
    }

    void validate() const {
        require(m_b >= 1 && n_b >= 1 && p >= 1, "exponent matrix: dimensions must be positive");
        require(static_cast<int>(entries.size()) == m_b * n_b, "exponent matrix: entry count mismatch");
        for (int e : entries) require(e >= -1 && e < p, "exponent matrix: entry out of [-1, p-1]");
    }
};

/// Text format: optional '#' comment lines, then a header line "p m_b n_b",
/// then the integer grid (whitespace or comma separated).
inline ExponentMatrix parse_exponent_matrix(std::istream& in) {
    std::vector<std::vector<int>> rows;
    int p = -1, m_b = -1, n_b = -1;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',') c = ' ';
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        std::vector<int> vals;
        for (auto& t : toks) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(t, &pos);
                require(pos == t.size(), "exponent matrix: malformed token '" + t + "'");
                vals.push_back(v);
            } catch (const std::exception&) {
                throw error("exponent matrix: malformed token '" + t + "'");
            }
        }
        if (p < 0) {
            require(vals.size() == 3, "exponent matrix: header must be 'p m_b n_b'");
            p = vals[0];
            m_b = vals[1];
            n_b = vals[2];
            require(p >= 1 && m_b >= 1 && n_b >= 1, "exponent matrix: bad header values");
        } else {
            rows.push_back(std::move(vals));
        }
    }
    require(p > 0, "exponent matrix: missing header");
    require(static_cast<int>(rows.size()) == m_b, "exponent matrix: row count mismatch");
    ExponentMatrix e;
    e.p = p;
    e.m_b = m_b;
    e.n_b = n_b;
    for (auto& r : rows) {
        require(static_cast<int>(r.size()) == n_b, "exponent matrix: ragged row");
        for (int v : r) {
            require(v >= -1, "exponent matrix: entry below -1");
            require(v < p, "exponent matrix: entry >= p");
            e.entries.push_back(v);
        }
    }
    e.validate();
    return e;
}

inline ExponentMatrix parse_exponent_matrix(const std::string& text) {
    std::istringstream ss(text);
    return parse_exponent_matrix(ss);
}

inline ExponentMatrix load_exponent_matrix(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "cannot open exponent matrix file: " + path);
    return parse_exponent_matrix(f);
}

/// Sparse binary parity-check matrix given as row-sorted (row, col) positions.
struct ParityCheckMatrix {
    int m = 0;
    int n = 0;
    std::vector<std::vector<int>> row_cols;  // per row, ascending column ids
    int p = 1;                               // lifting degree (1 when unknown/unlifted)
    int m_b = 0, n_b = 0;                    // base dimensions (row_count/p etc.)

    std::size_t nonzeros() const {
        std::size_t c = 0;
        for (auto& r : row_cols) c += r.size();
        return c;
    }
};

inline ParityCheckMatrix lift(const ExponentMatrix& e) {
    e.validate();
    ParityCheckMatrix h;
    h.p = e.p;
    h.m_b = e.m_b;
    h.n_b = e.n_b;
    h.m = e.m_b * e.p;
    h.n = e.n_b * e.p;
    h.row_cols.assign(h.m, {});
    for (int bi = 0; bi < e.m_b; ++bi)
        for (int bj = 0; bj < e.n_b; ++bj) {
            const int k = e.at(bi, bj);
            if (k < 0) continue;
            for (int r = 0; r < e.p; ++r) h.row_cols[bi * e.p + r].push_back(bj * e.p + (r + k) % e.p);
        }
    for (auto& r : h.row_cols) std::sort(r.begin(), r.end());
    return h;
}

// ---------------------------------------------------------------------------
// alist (MacKay) reader/writer. Layout: "n m", "max_dv max_dc", the n VN
// degrees, the m CN degrees, one line of 1-based neighbors per VN padded with
// zeros to max_dv, then one line per CN padded to max_dc.
// ---------------------------------------------------------------------------

inline ParityCheckMatrix read_alist(std::istream& in) {
    std::vector<int> nums;
    {
        int v;
        while (in >> v) nums.push_back(v);
    }
    std::size_t pos = 0;
    auto next = [&]() {
        require(pos < nums.size(), "alist: truncated file");
        return nums[pos++];
    };
    const int n = next();
    const int m = next();
    const int max_dv = next();
    const int max_dc = next();
    std::vector<int> dv(n), dc(m);
    for (int i = 0; i < n; ++i) dv[i] = next();
    for (int j = 0; j < m; ++j) dc[j] = next();
    ParityCheckMatrix h;
    h.n = n;
    h.m = m;
    h.m_b = m;
    h.n_b = n;
    h.row_cols.assign(m, {});
    for (int i = 0; i < n; ++i) {
        int seen = 0;
        for (int k = 0; k < max_dv; ++k) {
            // tolerate unpadded variants: only dv[i] entries present
            if (seen == dv[i] && (pos >= nums.size() || nums[pos] != 0)) break;
            int v = next();
            if (v == 0) continue;
            require(v >= 1 && v <= m, "alist: CN index out of range");
            h.row_cols[v - 1].push_back(i);
            ++seen;
        }
        require(seen == dv[i], "alist: VN degree mismatch");
    }
    // CN neighbor lists are redundant; consume if present and cross-check counts
    for (int j = 0; j < m && pos < nums.size(); ++j) {
        int seen = 0;
        for (int k = 0; k < max_dc && pos < nums.size(); ++k) {
            if (seen == dc[j] && nums[pos] != 0) break;
            int v = next();
            if (v != 0) ++seen;
        }
    }
    for (auto& r : h.row_cols) std::sort(r.begin(), r.end());
    for (int j = 0; j < m; ++j) require(static_cast<int>(h.row_cols[j].size()) == dc[j], "alist: CN degree mismatch");
    return h;
}

inline void write_alist(const ParityCheckMatrix& h, std::ostream& out) {
    std::vector<std::vector<int>> vn_rows(h.n);
    for (int j = 0; j < h.m; ++j)
        for (int col : h.row_cols[j]) vn_rows[col].push_back(j);
    int max_dv = 0, max_dc = 0;
    for (auto& v : vn_rows) max_dv = std::max(max_dv, static_cast<int>(v.size()));
    for (auto& r : h.row_cols) max_dc = std::max(max_dc, static_cast<int>(r.size()));
    out << h.n << ' ' << h.m << '\n';
    out << max_dv << ' ' << max_dc << '\n';
    for (int i = 0; i < h.n; ++i) out << vn_rows[i].size() << (i + 1 < h.n ? " " : "\n");
    for (int j = 0; j < h.m; ++j) out << h.row_cols[j].size() << (j + 1 < h.m ? " " : "\n");
    for (int i = 0; i < h.n; ++i) {
        for (int k = 0; k < max_dv; ++k) {
            if (k) out << ' ';
            out << (k < static_cast<int>(vn_rows[i].size()) ? vn_rows[i][k] + 1 : 0);
        }
        out << '\n';
    }
    for (int j = 0; j < h.m; ++j) {
        for (int k = 0; k < max_dc; ++k) {
            if (k) out << ' ';
            out << (k < static_cast<int>(h.row_cols[j].size()) ? h.row_cols[j][k] + 1 : 0);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Tanner graph with base types and row layers.
// ---------------------------------------------------------------------------

using LayerPermutation = Permutation;  // order[k] = base row updated k-th (0-based)

struct TannerGraph {
    int vn_count = 0;
    int cn_count = 0;
    int p = 1;
    int m_b = 0, n_b = 0;
    std::vector<std::vector<int>> vn_cns;  // per VN, ascending CN ids
    std::vector<std::vector<int>> cn_vns;  // per CN, ascending VN ids
    LayerPermutation perm;                 // base-row update order
    std::vector<int> row_position;         // row_position[base_row] = update slot (0-based)

    int vn_type(int v) const { return v / p; }  // 0-based base column
    int cn_type(int c) const { return c / p; }  // 0-based base row
    int cn_layer(int c) const { return row_position[cn_type(c)]; }

    int vn_degree(int v) const { return static_cast<int>(vn_cns[v].size()); }
    int cn_degree(int c) const { return static_cast<int>(cn_vns[c].size()); }
};

inline TannerGraph build_tanner_graph(const ParityCheckMatrix& h, const LayerPermutation& perm) {
    require(static_cast<int>(perm.size()) == h.m_b, "layer permutation length != m_b");
    require(is_permutation_of_iota(perm), "invalid layer permutation");
    TannerGraph g;
    g.vn_count = h.n;
    g.cn_count = h.m;
    g.p = h.p;
    g.m_b = h.m_b;
    g.n_b = h.n_b;
    g.cn_vns = h.row_cols;
    g.vn_cns.assign(h.n, {});
    for (int j = 0; j < h.m; ++j)
        for (int col : h.row_cols[j]) g.vn_cns[col].push_back(j);
    g.perm = perm;
    g.row_position.assign(h.m_b, 0);
    for (int slot = 0; slot < h.m_b; ++slot) g.row_position[perm[slot]] = slot;
    return g;
}

inline TannerGraph build_tanner_graph(const ParityCheckMatrix& h) {
    return build_tanner_graph(h, identity_permutation(h.m_b));
}

/// Syndrome check: H d = 0 over GF(2).
inline bool is_codeword(const ParityCheckMatrix& h, const std::vector<uint8_t>& d) {
    for (int j = 0; j < h.m; ++j) {
        int parity = 0;
        for (int col : h.row_cols[j]) parity ^= d[col];
        if (parity) return false;
    }
    return true;
}

}  // namespace tsfloor
