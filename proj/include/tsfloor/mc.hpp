#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "tsfloor/channel.hpp"
#include "tsfloor/decoder.hpp"
#include "tsfloor/lets.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

struct StopRule {
    std::uint64_t max_frames = 100000000;
    std::uint64_t min_errors = 100;
};

struct FailureEvent {
    std::uint64_t frame = 0;
    std::vector<int> failed_vns;  // sorted
    bool stable = false;
    int iterations = 0;
};

struct FerResult {
    std::uint64_t frames_run = 0;
    std::uint64_t frame_errors = 0;
    double fer = 0.0;
    WilsonInterval confidence;
    std::vector<FailureEvent> events;
    double avg_iterations = 0.0;
};

struct SimOptions {
    StopRule stop;
    std::uint64_t seed = 1;
    int threads = 0;                 // 0 = hardware_concurrency
    std::size_t max_logged_events = 100000;
};

/// Monte Carlo frame-error-rate simulation, all-zero codeword over AWGN/BPSK.
/// Every frame derives its noise from (seed, frame index) alone, and the
/// stopping rule is evaluated at deterministic round boundaries, so the
/// result is byte-identical for a given (seed, config) regardless of the
/// worker count or scheduling.
inline FerResult simulate_fer(const ParityCheckMatrix& h, const DecoderConfig& cfg, const ChannelSpec& ch,
                              const SimOptions& opt = {}) {
    ch.validate();
    const int nthreads = opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<FailureEvent> events;
    std::uint64_t frames_run = 0;
    std::uint64_t errors = 0;
    std::uint64_t total_iterations = 0;
    std::mutex merge_mu;

    std::uint64_t round_size = 4096;
    while (frames_run < opt.stop.max_frames && errors < opt.stop.min_errors) {
        const std::uint64_t begin = frames_run;
        const std::uint64_t end = std::min(opt.stop.max_frames, begin + round_size);
        std::atomic<std::uint64_t> cursor{begin};
        constexpr std::uint64_t kChunk = 64;

        auto worker = [&]() {
            Decoder dec(h, cfg);
            std::vector<double> llr(h.n);
            std::vector<FailureEvent> local_events;
            std::uint64_t local_iters = 0;
            while (true) {
                const std::uint64_t start = cursor.fetch_add(kChunk);
                if (start >= end) break;
                const std::uint64_t stop = std::min(end, start + kChunk);
                for (std::uint64_t f = start; f < stop; ++f) {
                    CounterRng rng(opt.seed, f);
                    draw_channel_llrs(ch, rng, llr);
                    DecodeResult r = dec.decode(llr);
                    local_iters += r.iterations_used;
                    if (!r.success || !r.failed_vns.empty()) {
                        FailureEvent ev;
                        ev.frame = f;
                        ev.failed_vns = r.failed_vns;
                        ev.stable = r.stable_support;
                        ev.iterations = r.iterations_used;
                        local_events.push_back(std::move(ev));
                    }
                }
            }
            std::lock_guard<std::mutex> lock(merge_mu);
            total_iterations += local_iters;
            for (auto& e : local_events) events.push_back(std::move(e));
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        frames_run = end;
        errors = events.size();
        round_size = std::min<std::uint64_t>(round_size * 2, 1u << 21);
    }

    std::sort(events.begin(), events.end(),
              [](const FailureEvent& a, const FailureEvent& b) { return a.frame < b.frame; });
    if (events.size() > opt.max_logged_events) events.resize(opt.max_logged_events);

    FerResult res;
    res.frames_run = frames_run;
    res.frame_errors = errors;
    res.events = std::move(events);
    res.fer = res.frames_run ? static_cast<double>(res.frame_errors) / res.frames_run : 0.0;
    res.confidence = wilson_interval(res.frame_errors, res.frames_run);
    res.avg_iterations = res.frames_run ? static_cast<double>(total_iterations) / res.frames_run : 0.0;
    return res;
}

/// Match a stable failure support against a catalog by set equality.
class FailureClassifier {
  public:
    FailureClassifier(const std::vector<LetsSubgraph>& catalog) {
        for (auto& s : catalog) index_[s.vns] = s.class_label();
    }

    std::string classify(const std::vector<int>& failed_vns) const {
        if (failed_vns.empty()) return "unclassified";
        std::vector<int> key = failed_vns;
        std::sort(key.begin(), key.end());
        auto it = index_.find(key);
        return it == index_.end() ? "unclassified" : it->second;
    }

    std::map<std::string, int> tally(const std::vector<FailureEvent>& events, bool stable_only = true) const {
        std::map<std::string, int> out;
        for (auto& e : events) {
            if (stable_only && !e.stable) {
                ++out["unclassified"];
                continue;
            }
            ++out[classify(e.failed_vns)];
        }
        return out;
    }

  private:
    std::map<std::vector<int>, std::string> index_;
};

}  // namespace tsfloor
