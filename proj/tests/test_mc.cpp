#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "tsfloor/mc.hpp"

using namespace tsfloor;

TEST_CASE("noise stream moments") {
    ChannelSpec ch;
    ch.ebn0_db = 3.0;
    ch.rate = 0.5;
    CounterRng rng(77);
    const int n = 1000000;
    std::vector<double> llr(n);
    draw_channel_llrs(ch, rng, llr);
    double mean = 0.0;
    for (double x : llr) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : llr) var += (x - mean) * (x - mean);
    var /= n - 1;
    const double se_mean = std::sqrt(ch.llr_variance() / n);
    const double se_var = ch.llr_variance() * std::sqrt(2.0 / n);
    CHECK(std::fabs(mean - ch.llr_mean()) <= 3.0 * se_mean);
    CHECK(std::fabs(var - ch.llr_variance()) <= 3.0 * se_var);
}

TEST_CASE("determinism: identical seed gives identical results") {
    auto h = lift(fixtures::toy_qc_small());
    ChannelSpec ch;
    ch.ebn0_db = 2.0;
    ch.rate = 0.25;
    DecoderConfig cfg;
    cfg.max_iterations = 10;
    cfg.saturation_level = 15.75;
    SimOptions opt;
    opt.seed = 42;
    opt.stop.max_frames = 6000;
    opt.stop.min_errors = 10;
    opt.threads = 2;
    auto r1 = simulate_fer(h, cfg, ch, opt);
    auto r2 = simulate_fer(h, cfg, ch, opt);
    CHECK(r1.frames_run == r2.frames_run);
    CHECK(r1.frame_errors == r2.frame_errors);
    REQUIRE(r1.events.size() == r2.events.size());
    for (std::size_t i = 0; i < r1.events.size(); ++i) {
        CHECK(r1.events[i].frame == r2.events[i].frame);
        CHECK(r1.events[i].failed_vns == r2.events[i].failed_vns);
    }
    SUBCASE("worker count does not change the outcome") {
        SimOptions opt1 = opt;
        opt1.threads = 1;
        auto r3 = simulate_fer(h, cfg, ch, opt1);
        CHECK(r3.frames_run == r1.frames_run);
        CHECK(r3.frame_errors == r1.frame_errors);
    }
}

TEST_CASE("vanishing noise gives zero FER") {
    auto h = lift(fixtures::toy_qc_small());
    ChannelSpec ch;
    ch.ebn0_db = 30.0;
    ch.rate = 0.25;
    DecoderConfig cfg;
    SimOptions opt;
    opt.stop.max_frames = 2000;
    opt.stop.min_errors = 1;
    opt.threads = 2;
    auto r = simulate_fer(h, cfg, ch, opt);
    CHECK(r.frame_errors == 0);
    CHECK(r.fer == 0.0);
    CHECK(r.frames_run == 2000);
}

TEST_CASE("FER trend over a three-point sweep") {
    auto h = lift(fixtures::toy_qc_small());
    DecoderConfig cfg;
    cfg.max_iterations = 10;
    std::vector<double> fer;
    for (double snr : {0.0, 2.0, 4.0}) {
        ChannelSpec ch;
        ch.ebn0_db = snr;
        ch.rate = 0.25;
        SimOptions opt;
        opt.stop.max_frames = 4000;
        opt.stop.min_errors = 4000;  // fixed frame count
        opt.threads = 2;
        fer.push_back(simulate_fer(h, cfg, ch, opt).fer);
    }
    CHECK(fer[0] > 0.0);
    CHECK(fer[0] >= fer[2]);  // generous: endpoints of the sweep
}

TEST_CASE("trapped failure: stable support classified against the catalog") {
    auto g = build_tanner_graph(lift(load_exponent_matrix(fixtures::data_path("tanner.qc"))));
    auto lets = enumerate_lets(g, 5, 3);
    std::vector<LetsSubgraph> cls;
    for (auto& s : lets)
        if (s.a() == 5) cls.push_back(s);
    REQUIRE(!cls.empty());
    FailureClassifier classifier(cls);

    // force the decoder into a trapping set: strong wrong LLRs inside, strong
    // correct LLRs outside
    auto h = lift(load_exponent_matrix(fixtures::data_path("tanner.qc")));
    DecoderConfig cfg;
    cfg.max_iterations = 30;
    cfg.saturation_level = 15.75;
    Decoder dec(h, cfg);
    std::vector<double> llr(h.n, 12.0);
    for (int v : cls.front().vns) llr[v] = -12.0;
    auto r = dec.decode(llr);
    CHECK(!r.success);
    CHECK(r.stable_support);
    CHECK(r.failed_vns == cls.front().vns);
    CHECK(classifier.classify(r.failed_vns) == "(5,3)");

    SUBCASE("classifier fallbacks") {
        CHECK(classifier.classify({}) == "unclassified");
        CHECK(classifier.classify({1, 2, 3}) == "unclassified");
    }
}

TEST_CASE("wilson interval sanity") {
    auto w = wilson_interval(5, 1000);
    CHECK(w.low > 0.0);
    CHECK(w.low < 0.005);
    CHECK(w.high > 0.005);
    CHECK(w.high < 0.02);
    auto z = wilson_interval(0, 0);
    CHECK(z.low == 0.0);
    CHECK(z.high == 1.0);
}
