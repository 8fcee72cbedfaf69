#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsfloor {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw error(what);
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

using Permutation = std::vector<int>;  // 0-based image list

inline Permutation identity_permutation(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

inline bool is_permutation_of_iota(const Permutation& p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

/// "2,3,1,7,4,5,6" (1-based in text) -> {1,2,0,6,3,4,5}
inline Permutation parse_permutation(const std::string& text) {
    Permutation p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        p.push_back(std::stoi(tok) - 1);
    }
    require(is_permutation_of_iota(p), "not a permutation of 1..n: " + text);
    return p;
}

inline std::string permutation_to_string(const Permutation& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p[i] + 1);
    }
    return s;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace tsfloor
