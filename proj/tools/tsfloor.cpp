// tsfloor command-line front end: Monte Carlo simulation, error-floor
// estimation, layered-schedule search, and the built-in verification suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "tsfloor/code.hpp"
#include "tsfloor/eigen.hpp"
#include "tsfloor/estimator.hpp"
#include "tsfloor/lets.hpp"
#include "tsfloor/mc.hpp"
#include "tsfloor/scheduler.hpp"
#include "tsfloor/state_space.hpp"

using nlohmann::json;
using namespace tsfloor;

namespace {

constexpr const char* kVersion = "tsfloor 1.0.0";

struct CodeBundle {
    ExponentMatrix exponent;  // valid unless alist input
    ParityCheckMatrix h;
    TannerGraph graph;
    BaseGraph base;
    bool from_alist = false;
};

CodeBundle load_code(const std::string& path, bool alist) {
    CodeBundle c;
    if (alist) {
        std::ifstream f(path);
        require(f.good(), "cannot open alist file: " + path);
        c.h = read_alist(f);
        c.from_alist = true;
        IMat hb(c.h.m, c.h.n);
        for (int j = 0; j < c.h.m; ++j)
            for (int col : c.h.row_cols[j]) hb(j, col) = 1;
        c.base = BaseGraph::from_matrix(hb);
    } else {
        c.exponent = load_exponent_matrix(path);
        c.h = lift(c.exponent);
        c.base = BaseGraph::from_exponent(c.exponent);
    }
    c.graph = build_tanner_graph(c.h);
    return c;
}

std::vector<double> parse_snr_grid(const std::string& text) {
    // "a:step:b" or comma list
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double a, step, b;
        char c1, c2;
        std::istringstream ss(text);
        require(static_cast<bool>(ss >> a >> c1 >> step >> c2 >> b) && c1 == ':' && c2 == ':',
                "bad SNR grid (want a:step:b): " + text);
        require(step > 0 && b >= a, "bad SNR grid bounds");
        for (double x = a; x <= b + 1e-9; x += step) grid.push_back(x);
    } else {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    require(!grid.empty(), "empty SNR grid");
    return grid;
}

double code_rate(const ParityCheckMatrix& h) { return static_cast<double>(h.n - h.m) / h.n; }

json manifest_base(const std::string& command, const json& config) {
    json m;
    m["tool"] = kVersion;
    m["command"] = command;
    m["config"] = config;
    return m;
}

void write_manifest_file(const json& manifest, const std::string& path) {
    json full = manifest;
    const auto now = std::chrono::system_clock::now();
    full["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream f(path);
    f << full.dump(2) << "\n";
}

std::vector<LetsSubgraph> load_catalog(const CodeBundle& code, const std::string& ts_list, const std::string& enum_spec,
                                       std::uint64_t budget, int threads) {
    if (!ts_list.empty()) {
        std::ifstream f(ts_list);
        require(f.good(), "cannot open TS list: " + ts_list);
        return read_ts_list(code.graph, f);
    }
    require(!enum_spec.empty(), "either --ts-list or --enumerate is required");
    auto parts = split_ws([&] {
        std::string s = enum_spec;
        for (char& ch : s)
            if (ch == ',') ch = ' ';
        return s;
    }());
    require(parts.size() == 2, "--enumerate wants 'a_max,b_max'");
    EnumerateOptions opt;
    opt.budget = budget;
    opt.threads = threads;
    return enumerate_lets(code.graph, std::stoi(parts[0]), std::stoi(parts[1]), opt);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& code_path, bool alist, const std::string& schedule_text, double sat, int iters,
                 const std::string& ebn0, std::uint64_t seed, std::uint64_t min_errors, std::uint64_t max_frames,
                 int threads, const std::string& out_path, const std::string& events_path) {
    auto code = load_code(code_path, alist);
    DecoderConfig cfg;
    cfg.saturation_level = sat;
    cfg.max_iterations = iters;
    if (schedule_text == "flooding") {
        cfg.schedule = ScheduleKind::flooding;
    } else {
        cfg.schedule = ScheduleKind::layered;
        cfg.layer_order = parse_permutation(schedule_text);
    }
    auto grid = parse_snr_grid(ebn0);

    json config{{"code", code_path},
                {"schedule", schedule_text},
                {"saturation", sat},
                {"max_iterations", iters},
                {"ebn0", ebn0},
                {"seed", seed},
                {"min_errors", min_errors},
                {"max_frames", max_frames},
                {"stopping_rule", "min_errors or max_frames, round-deterministic"}};
    json manifest = manifest_base("simulate", config);

    std::ostringstream csv;
    csv << "# manifest: " << manifest.dump() << "\n";
    csv << "ebn0_db,frames,errors,fer,ci_low,ci_high\n";
    json events = json::array();
    for (double snr : grid) {
        ChannelSpec ch;
        ch.ebn0_db = snr;
        ch.rate = code_rate(code.h);
        SimOptions opt;
        opt.seed = seed;
        opt.threads = threads;
        opt.stop = {max_frames, min_errors};
        auto r = simulate_fer(code.h, cfg, ch, opt);
        csv << std::setprecision(10) << snr << "," << r.frames_run << "," << r.frame_errors << ","
            << std::scientific << r.fer << "," << r.confidence.low << "," << r.confidence.high << "\n";
        csv.unsetf(std::ios::floatfield);
        for (auto& e : r.events) {
            json je{{"ebn0_db", snr}, {"frame", e.frame}, {"stable", e.stable}, {"iterations", e.iterations}};
            json vns = json::array();
            for (int v : e.failed_vns) vns.push_back(v + 1);
            je["failed_vns"] = vns;
            events.push_back(std::move(je));
        }
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path);
        f << csv.str();
        write_manifest_file(manifest, out_path + ".manifest.json");
    }
    if (!events_path.empty()) {
        std::ofstream f(events_path);
        f << events.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_estimate(const std::string& code_path, bool alist, const std::string& ts_list, const std::string& enum_spec,
                 const std::string& schedule_text, double sat, const std::string& ebn0, double quant_dx, int de_iters,
                 std::uint64_t budget, int threads, const std::string& out_path, const std::string& breakdown_path) {
    auto code = load_code(code_path, alist);
    require(schedule_text != "flooding", "estimate is for layered schedules; use the library API for flooding");
    LayerPermutation perm =
        schedule_text.empty() ? identity_permutation(code.h.m_b) : parse_permutation(schedule_text);
    require(static_cast<int>(perm.size()) == code.h.m_b, "schedule length != m_b");

    auto catalog = load_catalog(code, ts_list, enum_spec, budget, threads);
    require(!catalog.empty(), "catalog is empty");
    auto groups = group_by_tslp(catalog, code.graph, perm);
    auto grid = parse_snr_grid(ebn0);

    json config{{"code", code_path},   {"schedule", schedule_text.empty() ? "identity" : schedule_text},
                {"saturation", sat},   {"ebn0", ebn0},
                {"quant_dx", quant_dx}, {"de_iterations", de_iters},
                {"groups", groups.size()}};
    json manifest = manifest_base("estimate", config);

    std::ostringstream csv, bre;
    csv << "# manifest: " << manifest.dump() << "\n";
    csv << "ebn0_db,estimate_fer\n";
    bre << "# manifest: " << manifest.dump() << "\n";
    bre << "ebn0_db,class,group_index,r_tilde,multiplicity,p_e,contribution\n";

    // distinct layer orderings shrink the spectral work: cache per TSLP digest
    for (double snr : grid) {
        ChannelSpec ch;
        ch.ebn0_db = snr;
        ch.rate = code_rate(code.h);
        QuantSpec q{quant_dx, sat};
        auto de = de_iterate(code.base, perm, ch, de_iters, q);
        std::vector<double> pe(groups.size());
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            Tslp t = compute_tslp(groups[gi].representative, code.graph, perm);
            auto lm = build_layered_model(groups[gi].representative, t);
            auto sp = dominant_eigen(composite_transition_unit(lm).cast<double>());
            auto tab = exact_tables(de, t);
            auto fe = layered_failure_probability(lm, sp.w1, tab, channel_moments(ch));
            pe[gi] = fe.p_e;
            bre << std::setprecision(10) << snr << "," << groups[gi].label << "," << groups[gi].group_index << ","
                << sp.r << "," << groups[gi].multiplicity << "," << std::scientific << fe.p_e << ","
                << groups[gi].multiplicity * fe.p_e << "\n";
            bre.unsetf(std::ios::floatfield);
        }
        auto ef = error_floor(groups, pe);
        csv << std::setprecision(10) << snr << "," << std::scientific << ef.p_f << "\n";
        csv.unsetf(std::ios::floatfield);
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path);
        f << csv.str();
        write_manifest_file(manifest, out_path + ".manifest.json");
    }
    if (!breakdown_path.empty()) {
        std::ofstream f(breakdown_path);
        f << bre.str();
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_search(const std::string& code_path, bool alist, const std::string& ts_list, const std::string& enum_spec,
               double sat, double ebn0, int shortlist, int sample, double dx_coarse, double dx_exact, int de_iters,
               std::uint64_t budget, int threads, const std::string& out_path) {
    auto code = load_code(code_path, alist);
    json config{{"code", code_path}, {"saturation", sat},   {"ebn0", ebn0},         {"shortlist", shortlist},
                {"sample", sample},  {"dx_coarse", dx_coarse}, {"dx_exact", dx_exact}, {"de_iterations", de_iters}};
    json manifest = manifest_base("search-schedules", config);

    if (code.h.m_b == 1) {
        // one row block: a single schedule exists, nothing to search
        std::ostringstream csv;
        csv << "# manifest: " << manifest.dump() << "\n";
        csv << "schedule,r_tilde,step1_estimate,step2_estimate\n";
        csv << "1,,,\n";
        if (out_path.empty())
            std::cout << csv.str();
        else {
            std::ofstream f(out_path);
            f << csv.str();
            write_manifest_file(manifest, out_path + ".manifest.json");
        }
        std::cout << "single row block; the only schedule is (1)\n";
        return 0;
    }

    auto catalog = load_catalog(code, ts_list, enum_spec, budget, threads);
    require(!catalog.empty(), "catalog is empty");
    auto groups = group_by_tslp(catalog, code.graph, identity_permutation(code.h.m_b));

    ChannelSpec ch;
    ch.ebn0_db = ebn0;
    ch.rate = code_rate(code.h);
    ScheduleSearchOptions opt;
    opt.shortlist_size = shortlist;
    opt.sample = sample;
    opt.coarse = {dx_coarse, sat};
    opt.exact = {dx_exact, sat};
    opt.de_iterations = de_iters;
    opt.threads = threads;
    auto rep = schedule_search(code.graph, code.base, groups, ch, opt);

    std::ostringstream csv;
    csv << "# manifest: " << manifest.dump() << "\n";
    csv << "schedule,r_tilde,step1_estimate,step2_estimate\n";
    for (auto& e : rep.entries) {
        csv << '"' << permutation_to_string(e.perm) << '"' << "," << std::setprecision(10) << e.r_tilde << ","
            << std::scientific << e.step1_estimate << ",";
        if (e.step2_estimate >= 0.0) csv << e.step2_estimate;
        csv << "\n";
        csv.unsetf(std::ios::floatfield);
    }
    if (out_path.empty())
        std::cout << csv.str();
    else {
        std::ofstream f(out_path);
        f << csv.str();
        write_manifest_file(manifest, out_path + ".manifest.json");
    }
    require(rep.winner >= 0, "search produced no winner");
    std::cout << "winner: (" << permutation_to_string(rep.entries[rep.winner].perm)
              << ")  step2_estimate=" << std::scientific << rep.entries[rep.winner].step2_estimate << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify: built-in regression fixtures plus optional catalog-wide theorem
// checks on a supplied code.
// ---------------------------------------------------------------------------

struct VerifyContext {
    int passed = 0;
    int failed = 0;
    void check(const std::string& name, bool ok) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
        ++(ok ? passed : failed);
    }
};

// The (5,3) structure of the Tanner code under its published labelings.
LetsSubgraph verify_lets53() {
    LetsSubgraph s;
    s.vns = {0, 1, 2, 3, 4};
    s.missat = {{0, 0, 2}, {1, 0, 3}, {2, 0, 4}, {3, 1, 2}, {4, 1, 3}, {5, 1, 4}};
    s.unsat = {{6, 2}, {7, 3}, {8, 4}};
    return s;
}

int cmd_verify(const std::string& code_path, bool alist, const std::string& ts_list, const std::string& enum_spec,
               std::uint64_t budget, int threads, bool with_negative_control) {
    VerifyContext v;

    // printed-matrix regressions on the (5,3) structure
    auto s53 = verify_lets53();
    std::vector<StateVar> fig1 = {{0, 0}, {0, 1}, {0, 2}, {1, 3}, {1, 4}, {1, 5},
                                  {2, 0}, {2, 3}, {3, 1}, {3, 4}, {4, 2}, {4, 5}};
    std::vector<StateVar> fig2 = {{0, 1}, {3, 1}, {4, 5}, {1, 5}, {2, 3}, {1, 3},
                                  {0, 2}, {4, 2}, {0, 0}, {2, 0}, {3, 4}, {1, 4}};
    std::vector<int> fig2_layers = {2, 0, 1, 1, 2, 0};

    auto fm1 = build_flooding_model(s53, {}, &fig1);
    v.check("flooding A row 1 depends on states 9 and 11", fm1.A(0, 8) == 1 && fm1.A(0, 10) == 1);

    auto fm2 = build_flooding_model(s53, fig2_layers, &fig2);
    auto lm = build_layer_matrices(fm2, {0, 1, 2}, {0, 1, 2});
    auto comp = composite_transition_unit(lm);
    {
        auto [al, au] = triangular_split(fm2.A);
        IMat expect = fm2.A + lower_power_sum(al, lm.J) * (fm2.A - IMat::identity(12));
        v.check("composite equals A + A'(A - I)", comp == expect);
    }
    {
        IMat p = pairing_permutation_matrix(12);
        v.check("A^T = P A P under consecutive pairing", fm2.A.transpose() == p * fm2.A * p);
    }
    auto sp = dominant_eigen(comp.cast<double>());
    v.check("dominant eigenvalue 2.0136 of the layered composite", std::fabs(sp.r - 2.0136) <= 1e-3);
    {
        auto f = fnf_structure(comp);
        int irr = 0;
        std::size_t size = 0;
        for (std::size_t i = 0; i < f.blocks.size(); ++i)
            if (f.irreducible[i]) {
                ++irr;
                size = f.blocks[i].size();
            }
        v.check("one irreducible block of size 7, n_z = 5", irr == 1 && size == 7 && f.n_z == 5);
    }
    {
        // digraph rewiring equals the composite transpose
        TsDigraph dl = layered_digraph(digraph_of_transition(fm2.A), fm2.lab.layer_of_state, lm.J);
        v.check("layered digraph adjacency is the composite transpose", dl.adjacency() == comp.transpose());
    }
    {
        // rho(composite) >= rho(A); cyclic shift and reversal invariance
        auto spA = dominant_eigen(fm2.A.cast<double>());
        v.check("rho(layered) >= rho(flooding)", sp.r >= spA.r - 1e-9);
        auto eig0 = eigenvalues(comp.cast<double>());
        auto make = [&](std::vector<int> layer_positions_order) {
            std::vector<int> ml(6);
            for (int k = 0; k < 6; ++k) {
                int lay = fig2_layers[k];
                ml[k] = static_cast<int>(std::find(layer_positions_order.begin(), layer_positions_order.end(), lay) -
                                         layer_positions_order.begin());
            }
            auto fmx = build_flooding_model(s53, ml, nullptr);
            auto lmx = build_layer_matrices(fmx, {0, 1, 2}, {0, 1, 2});
            return eigenvalues(composite_transition_unit(lmx).cast<double>());
        };
        v.check("eigenvalues invariant under cyclic shift", eigenvalue_multisets_match(eig0, make({1, 2, 0}), 1e-9));
        v.check("eigenvalues invariant under reversal", eigenvalue_multisets_match(eig0, make({2, 1, 0}), 1e-9));
    }
    {
        // simple-cycle theorem on a three-layer six-ring
        LetsSubgraph ring;
        ring.vns = {0, 1, 2, 3, 4, 5};
        ring.missat = {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 4}, {4, 4, 5}, {5, 0, 5}};
        auto fmr = build_flooding_model(ring, {0, 1, 2, 0, 1, 2}, nullptr);
        auto lmr = build_layer_matrices(fmr, {0, 1, 2}, {});
        auto compr = composite_transition_unit(lmr);
        int irr = 0;
        auto fr = fnf_structure(compr);
        for (std::size_t i = 0; i < fr.blocks.size(); ++i) irr += fr.irreducible[i] ? 1 : 0;
        int mult = 0;
        for (auto z : eigenvalues(compr.cast<double>()))
            if (std::abs(z - std::complex<double>(1.0, 0.0)) < 1e-6) ++mult;
        v.check("simple cycle: two irreducible blocks, eigenvalue 1 with multiplicity 2", irr == 2 && mult == 2);
    }
    if (with_negative_control) {
        IMat corrupted = comp;
        corrupted(0, 0) = 1;  // deliberately broken fixture must be flagged
        auto [al, au] = triangular_split(fm2.A);
        IMat expect = fm2.A + lower_power_sum(al, lm.J) * (fm2.A - IMat::identity(12));
        v.check("negative control: corrupted matrix is rejected", corrupted != expect);
    }

    if (!code_path.empty()) {
        auto code = load_code(code_path, alist);
        auto catalog = load_catalog(code, ts_list, enum_spec, budget, threads);
        if (catalog.empty()) {
            std::cout << "no LETSs in catalog; code-level checks skipped\n";
        } else {
            auto groups = group_by_tslp(catalog, code.graph, identity_permutation(code.h.m_b));
            bool rho_ok = true, lemma5_ok = true;
            for (auto& ggroup : groups) {
                Tslp t = compute_tslp(ggroup.representative, code.graph, identity_permutation(code.h.m_b));
                auto lmx = build_layered_model(ggroup.representative, t);
                auto compx = composite_transition_unit(lmx);
                auto spL = dominant_eigen(compx.cast<double>());
                auto spF = dominant_eigen(lmx.fm.A.cast<double>());
                if (fnf_structure(lmx.fm.A).blocks.size() == 1 && spL.r < spF.r - 1e-9) rho_ok = false;
                auto [al, au] = triangular_split(lmx.fm.A);
                if (compx != lmx.fm.A + lower_power_sum(al, lmx.J) * (lmx.fm.A - IMat::identity(lmx.m_s())))
                    lemma5_ok = false;
            }
            v.check("catalog: rho(layered) >= rho(flooding) for irreducible A", rho_ok);
            v.check("catalog: composite identity A + A'(A - I)", lemma5_ok);
            std::cout << "catalog groups: " << groups.size() << "\n";
        }
    }

    std::cout << v.passed << " passed, " << v.failed << " failed\n";
    return v.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapping-set error-floor analysis toolkit for row layered QC-LDPC decoding"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string code_path, schedule = "flooding", ebn0 = "5.0", out_path, events_path, ts_list, enum_spec,
                breakdown_path;
    bool alist = false;
    double sat = 31.75, quant_dx = 0.05, dx_coarse = 0.25, dx_exact = 0.05, ebn0_single = 6.0;
    int iters = 30, de_iters = 20, threads = 0, shortlist = 10, sample = 0;
    std::uint64_t seed = 1, min_errors = 100, max_frames = 100000000, budget = 100000000;

    auto add_code = [&](CLI::App* sub) {
        sub->add_option("--code", code_path, "exponent-matrix file ('p m_b n_b' header + grid)")->required();
        sub->add_flag("--alist", alist, "input file is in alist format");
        sub->add_option("--threads", threads, "worker threads (0 = hardware)")->envname("TSFLOOR_THREADS");
    };
    auto add_catalog = [&](CLI::App* sub) {
        sub->add_option("--ts-list", ts_list, "trapping sets, one line of 1-based VN ids each");
        sub->add_option("--enumerate", enum_spec, "enumerate LETSs up to 'a_max,b_max'");
        sub->add_option("--budget", budget, "enumeration node budget");
    };

    auto* sim = app.add_subcommand("simulate", "Monte Carlo frame-error-rate simulation");
    add_code(sim);
    sim->add_option("--schedule", schedule, "comma-separated base-row order (1-based) or 'flooding'");
    sim->add_option("--sat", sat, "saturation level");
    sim->add_option("--iters", iters, "maximum iterations");
    sim->add_option("--ebn0", ebn0, "SNR grid 'a:step:b' or comma list")->required();
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--min-errors", min_errors, "stop after this many frame errors");
    sim->add_option("--max-frames", max_frames, "frame cap");
    sim->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    sim->add_option("--events", events_path, "JSON log of failure events");

    auto* est = app.add_subcommand("estimate", "state-space error-floor estimate");
    add_code(est);
    add_catalog(est);
    est->add_option("--schedule", schedule, "layered schedule (defaults to identity)")->default_val("");
    est->add_option("--sat", sat, "saturation level");
    est->add_option("--ebn0", ebn0, "SNR grid")->required();
    est->add_option("--quant", quant_dx, "DE grid step");
    est->add_option("--iters-de", de_iters, "DE iterations");
    est->add_option("--out", out_path, "CSV output path");
    est->add_option("--breakdown", breakdown_path, "per-group CSV output path");

    auto* sch = app.add_subcommand("search-schedules", "two-step layered-schedule search");
    add_code(sch);
    add_catalog(sch);
    sch->add_option("--ebn0", ebn0_single, "operating SNR (dB)");
    sch->add_option("--sat", sat, "saturation level");
    sch->add_option("--shortlist", shortlist, "step-2 candidate count");
    sch->add_option("--sample", sample, "sampled search size (required when m_b! is large)");
    sch->add_option("--quant-coarse", dx_coarse, "step-1 DE grid step");
    sch->add_option("--quant-exact", dx_exact, "step-2 DE grid step");
    sch->add_option("--iters-de", de_iters, "DE iterations");
    sch->add_option("--out", out_path, "CSV output path");

    auto* ver = app.add_subcommand("verify", "model and spectral regression checks");
    ver->add_option("--code", code_path, "optional code for catalog-wide checks");
    ver->add_flag("--alist", alist, "code file is alist");
    ver->add_option("--ts-list", ts_list, "trapping-set list for the code checks");
    ver->add_option("--enumerate", enum_spec, "enumerate LETSs up to 'a_max,b_max'");
    ver->add_option("--budget", budget, "enumeration node budget");
    ver->add_option("--threads", threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(code_path, alist, schedule, sat, iters, ebn0, seed, min_errors, max_frames, threads,
                                out_path, events_path);
        if (est->parsed())
            return cmd_estimate(code_path, alist, ts_list, enum_spec, schedule, sat, ebn0, quant_dx, de_iters, budget,
                                threads, out_path, breakdown_path);
        if (sch->parsed())
            return cmd_search(code_path, alist, ts_list, enum_spec, sat, ebn0_single, shortlist, sample, dx_coarse,
                              dx_exact, de_iters, budget, threads, out_path);
        if (ver->parsed()) return cmd_verify(code_path, alist, ts_list, enum_spec, budget, threads, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
