#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tsfloor/channel.hpp"
#include "tsfloor/density.hpp"

using namespace tsfloor;

namespace {
const QuantSpec kCoarse{0.25, 15.75};
const QuantSpec kFine{0.05, 31.75};

LlrDistribution sample_histogram(const LlrDistribution& a, const LlrDistribution& b, int n, CounterRng& rng) {
    // scalar box-plus Monte Carlo oracle for the density convolution
    std::vector<double> cdf_a(a.size()), cdf_b(b.size());
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < a.size(); ++i) cdf_a[i] = (sa += a.mass(i));
    for (int i = 0; i < b.size(); ++i) cdf_b[i] = (sb += b.mass(i));
    auto draw = [&](const std::vector<double>& cdf, const LlrDistribution& d) {
        const double u = rng.next_unit() * cdf.back();
        const int idx = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        return d.value(std::min(idx, d.size() - 1));
    };
    LlrDistribution h(QuantSpec{a.dx(), a.dx() * a.half()});
    for (int k = 0; k < n; ++k) {
        const double v = box_plus(draw(cdf_a, a), draw(cdf_b, b));
        h.mass(h.bin_of(v)) += 1.0 / n;
    }
    return h;
}
}  // namespace

TEST_CASE("quantized distribution basics") {
    SUBCASE("gaussian moments") {
        auto d = LlrDistribution::gaussian(kFine, 9.56, 19.12);
        CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.mean() == doctest::Approx(9.56).epsilon(1e-3));
        CHECK(d.variance() == doctest::Approx(19.12).epsilon(1e-2));
    }
    SUBCASE("saturation mass collects at the boundary") {
        auto d = LlrDistribution::gaussian(kCoarse, 15.0, 36.0);
        CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.mass(d.size() - 1) > 0.3);  // the upper tail folds onto +s_max
    }
    SUBCASE("grid must cover the saturation level") {
        CHECK_THROWS((void)QuantSpec{0.3, 15.75}.half_bins());
    }
    SUBCASE("point mass and moments") {
        auto d = LlrDistribution::point_mass(kCoarse, 15.75);
        CHECK(moments_of(d).mean == doctest::Approx(15.75));
        CHECK(moments_of(d).variance == doctest::Approx(0.0));
    }
    SUBCASE("two-point distribution moments") {
        LlrDistribution d(kCoarse);
        d.mass(d.bin_of(1.0)) = 0.5;
        d.mass(d.bin_of(-1.0)) = 0.5;
        CHECK(moments_of(d).mean == doctest::Approx(0.0));
        CHECK(moments_of(d).variance == doctest::Approx(1.0));
    }
}

TEST_CASE("additive convolution") {
    auto a = LlrDistribution::gaussian(kCoarse, 2.0, 1.0);
    auto b = LlrDistribution::gaussian(kCoarse, -1.0, 2.0);
    auto c = conv_add(a, b);
    CHECK(c.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mean() == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(c.variance() == doctest::Approx(3.0).epsilon(2e-2));
    SUBCASE("folding keeps mass on the grid") {
        auto big = LlrDistribution::point_mass(kCoarse, 12.0);
        auto c2 = conv_add(big, big);  // 24 folds to +15.75
        CHECK(c2.mass(c2.size() - 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("box-plus density convolution against a sampling oracle") {
    auto table = BoxPlusTable::shared(kCoarse);
    auto a = LlrDistribution::gaussian(kCoarse, 3.0, 6.0);
    auto b = LlrDistribution::gaussian(kCoarse, 1.5, 4.0);
    auto exact = conv_box_plus(a, b, *table);
    CHECK(exact.total() == doctest::Approx(1.0).epsilon(1e-12));
    CounterRng rng(123);
    auto mc = sample_histogram(a, b, 1000000, rng);
    CHECK(exact.total_variation(mc) < 0.01);
}

TEST_CASE("gain and inversion") {
    SUBCASE("saturated point mass: unit gain, zero inversion") {
        auto g = gain_and_inversion(LlrDistribution::point_mass(kFine, 31.75));
        CHECK(g.g_bar == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(g.p_inv == doctest::Approx(0.0));
        CHECK(g.g_prime == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("symmetric distribution: zero gain, half inversion") {
        LlrDistribution d(kCoarse);
        d.mass(d.bin_of(3.0)) = 0.4;
        d.mass(d.bin_of(-3.0)) = 0.4;
        d.mass(d.bin_of(0.0)) = 0.2;
        auto g = gain_and_inversion(d);
        CHECK(g.g_bar == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g.p_inv == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("point mass at 2: tanh(1)") {
        auto g = gain_and_inversion(LlrDistribution::point_mass(kCoarse, 2.0));
        CHECK(g.g_bar == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
        CHECK(g.p_inv == doctest::Approx(0.0));
    }
}

TEST_CASE("virtual VN distribution") {
    auto a = LlrDistribution::gaussian(kCoarse, 2.0, 1.0);
    SUBCASE("no externals: box-plus identity (gain one)") {
        auto d = virtual_vn_distribution({}, kCoarse);
        CHECK(gain_and_inversion(d).g_prime == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("one external: unchanged") {
        auto d = virtual_vn_distribution({&a}, kCoarse);
        CHECK(d.total_variation(a) == doctest::Approx(0.0));
    }
    SUBCASE("two externals: pairwise convolution") {
        auto table = BoxPlusTable::shared(kCoarse);
        auto d = virtual_vn_distribution({&a, &a}, kCoarse);
        CHECK(d.total_variation(conv_box_plus(a, a, *table)) == doctest::Approx(0.0));
    }
}

TEST_CASE("layered DE on the worked base graph") {
    auto base = fixtures::de_example_base();
    ChannelSpec ch;
    ch.ebn0_db = 3.0;
    ch.rate = 0.25;
    auto perm = identity_permutation(3);
    auto lay = de_iterate(base, perm, ch, 3, kCoarse);
    DeOptions fl;
    fl.flooding = true;
    auto flood = de_iterate(base, perm, ch, 3, kCoarse, fl);

    SUBCASE("first-layer first-iteration messages match flooding (no fresh input yet)") {
        for (int c : base.row_cols[0]) {
            CHECK(lay.v2c_at(1, 0, c).total_variation(flood.v2c_at(1, 0, c)) <= 1e-12);
            CHECK(lay.c2v_at(1, 0, c).total_variation(flood.c2v_at(1, 0, c)) <= 1e-12);
        }
    }
    SUBCASE("later layers see already-updated branches in iteration 1") {
        // the VN of base column 1 connects rows 0 and 2: its message into row 2
        // already carries row 0's fresh iteration-1 output
        auto expected = conv_add(LlrDistribution::gaussian(kCoarse, ch.llr_mean(), ch.llr_variance()),
                                 lay.c2v_at(1, 0, 1));
        CHECK(lay.v2c_at(1, 2, 1).total_variation(expected) <= 1e-12);
        CHECK(lay.v2c_at(1, 2, 1).total_variation(flood.v2c_at(1, 2, 1)) > 0.05);
    }
    SUBCASE("densities stay normalized") {
        for (int l = 1; l <= 3; ++l)
            for (auto& e : lay.edges) {
                CHECK(lay.v2c_at(l, e.first, e.second).total() == doctest::Approx(1.0).epsilon(1e-9));
                CHECK(lay.c2v_at(l, e.first, e.second).total() == doctest::Approx(1.0).epsilon(1e-9));
            }
    }
    SUBCASE("layer averages") {
        // slot 2 processes base row 2 with edges to columns 1 and 3
        auto& avg = lay.avg_c2v[0][2];
        LlrDistribution manual(kCoarse);
        for (int i = 0; i < manual.size(); ++i)
            manual.mass(i) = 0.5 * (lay.c2v_at(1, 2, 1).mass(i) + lay.c2v_at(1, 2, 3).mass(i));
        CHECK(avg.total_variation(manual) <= 1e-12);
        CHECK(avg.total() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("single-layer layered DE equals flooding DE") {
    // one-row base graph: the schedules coincide
    auto base = BaseGraph::from_matrix(IMat::from_rows({{1, 1, 1}}));
    ChannelSpec ch;
    ch.ebn0_db = 2.0;
    ch.rate = 0.5;
    auto lay = de_iterate(base, {0}, ch, 4, kCoarse);
    DeOptions fl;
    fl.flooding = true;
    auto flood = de_iterate(base, {0}, ch, 4, kCoarse, fl);
    for (int l = 1; l <= 4; ++l)
        for (auto& e : lay.edges) {
            CHECK(lay.v2c_at(l, e.first, e.second).total_variation(flood.v2c_at(l, e.first, e.second)) <= 1e-9);
            CHECK(lay.c2v_at(l, e.first, e.second).total_variation(flood.c2v_at(l, e.first, e.second)) <= 1e-9);
        }
}

TEST_CASE("vanishing noise collapses densities onto +s_max") {
    auto base = fixtures::de_example_base();
    ChannelSpec ch;
    ch.ebn0_db = 25.0;  // sigma -> 0
    ch.rate = 0.25;
    auto st = de_iterate(base, identity_permutation(3), ch, 1, kCoarse);
    for (auto& e : st.edges) {
        CHECK(st.v2c_at(1, e.first, e.second).mass(st.v2c_at(1, e.first, e.second).size() - 1) >
              1.0 - 1e-9);
    }
}

TEST_CASE("VN-to-CN mean grows with iterations above threshold") {
    auto base = fixtures::de_example_base();
    ChannelSpec ch;
    ch.ebn0_db = 4.0;
    ch.rate = 0.25;
    auto st = de_iterate(base, identity_permutation(3), ch, 10, kCoarse);
    for (auto& e : st.edges) {
        double prev = -1e9;
        int drops = 0;
        for (int l = 1; l <= 10; ++l) {
            const double m = st.v2c_at(l, e.first, e.second).mean();
            if (m < prev - 1e-9) ++drops;
            prev = m;
        }
        CHECK(drops == 0);
    }
}

TEST_CASE("flooding gain consistency (product of expectations)") {
    // tanh(boxplus(a,b)/2) = tanh(a/2) tanh(b/2): the gain of the convolved
    // density equals the product of the individual gains up to quantization
    auto a = LlrDistribution::gaussian(kFine, 4.0, 8.0);
    auto table = BoxPlusTable::shared(kFine);
    auto conv2 = conv_box_plus(a, a, *table);
    auto conv3 = conv_box_plus(conv2, a, *table);
    const double g1 = a.tanh_half_mean();
    CHECK(conv3.tanh_half_mean() == doctest::Approx(g1 * g1 * g1).epsilon(1e-3));
}

TEST_CASE("channel density moments match the LLR statistics") {
    ChannelSpec ch;
    ch.ebn0_db = 6.0;
    ch.rate = 0.3;
    auto d = LlrDistribution::gaussian(kFine, ch.llr_mean(), ch.llr_variance());
    CHECK(d.mean() == doctest::Approx(ch.llr_mean()).epsilon(1e-3));
    CHECK(d.variance() == doctest::Approx(ch.llr_variance()).epsilon(1e-2));
}
