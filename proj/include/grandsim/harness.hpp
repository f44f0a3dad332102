#pragma once

// Monte-Carlo link harness: a transmit/fade/equalize/decode frame pipeline,
// seeded so every frame is a pure function of (master_seed, snr index,
// frame index); a batch-scheduled sweep runner whose output is invariant to
// the worker count; and a rank-ordered reliability profiler.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "alist.hpp"
#include "bch.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "equalize.hpp"
#include "grand.hpp"
#include "linear_code.hpp"
#include "modem.hpp"
#include "polar.hpp"
#include "rng.hpp"

namespace grandsim {

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// shortest round-trip formatting, stable across runs
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline LinearCode build_code(const CodeSpec& spec) {
    if (spec.kind == "bch-cyclic") return build_bch(spec.m, spec.t).code;
    if (spec.kind == "ca-polar") {
        if (spec.crc_width != 11)
            throw std::invalid_argument("ca-polar: only the width-11 crc is wired up");
        std::vector<std::size_t> order =
            spec.order_file.empty()
                ? pw_reliability_order(spec.n)
                : parse_reliability_order(detail::read_text_file(spec.order_file), spec.n);
        return build_ca_polar(spec.n, spec.k, CrcSpec::crc11(), order).code;
    }
    if (spec.kind == "random-linear") return random_linear_code(spec.n, spec.k, spec.seed);
    if (spec.kind == "rate1") return LinearCode::rate1(spec.n);
    if (spec.kind == "from-file") return load_alist(detail::read_text_file(spec.path)).code;
    throw std::invalid_argument("unknown code kind: " + spec.kind);
}

struct SimContext {
    SimConfig cfg;
    LinearCode code;
    const Constellation* cons = nullptr;
    QuerySchedule schedule;
    bool needs_rel = false;
    std::size_t symbols = 0;
    std::size_t padded_bits = 0;

    static SimContext build(SimConfig cfg) {
        cfg.validate();
        SimContext ctx;
        ctx.cfg = std::move(cfg);
        ctx.code = build_code(ctx.cfg.code);
        ctx.cons = &Constellation::by_name(ctx.cfg.modulation);
        const int q = ctx.cons->q();
        ctx.symbols = (ctx.code.n() + std::size_t(q) - 1) / std::size_t(q);
        ctx.padded_bits = ctx.symbols * std::size_t(q);
        ctx.needs_rel = ctx.cfg.decoder != DecoderKind::grand_hard;
        switch (ctx.cfg.decoder) {
            case DecoderKind::grand_hard: ctx.schedule.kind = ScheduleKind::hamming; break;
            case DecoderKind::orbgrand: ctx.schedule.kind = ScheduleKind::logistic; break;
            case DecoderKind::orbgrand_ham_tie:
                if (ctx.code.n() % std::size_t(q) != 0)
                    throw std::invalid_argument(
                        "orbgrand-ham-tie needs the block length divisible by bits per symbol");
                ctx.schedule.kind = ScheduleKind::logistic_hamming_tie;
                ctx.schedule.bits_per_symbol = uint32_t(q);
                break;
            case DecoderKind::sgrand: ctx.schedule.kind = ScheduleKind::exact_eta; break;
        }
        ctx.schedule.max_queries = ctx.cfg.max_queries;
        return ctx;
    }
};

struct FrameResult {
    bool error = false;
    bool abandoned = false;
    uint64_t queries = 0;
    long deep_fades = 0;
};

// One frame, fully determined by (master_seed, snr_index, frame_index):
// payload -> encode -> modulate (zero-padded to a symbol boundary) -> fade ->
// detect -> per-bit reliabilities -> guess-and-check decode
inline FrameResult run_frame(const SimContext& ctx, std::size_t snr_index, const SnrPoint& snr,
                             uint64_t frame_index) {
    Xoshiro256 rng = Xoshiro256::for_frame(ctx.cfg.master_seed, snr_index, frame_index);
    const std::size_t n = ctx.code.n();

    BitWord payload(ctx.code.k());
    for (std::size_t i = 0; i < payload.size(); ++i) payload.set(i, rng.bernoulli(0.5));
    const BitWord cw = ctx.code.encode(payload);
    BitWord tx(ctx.padded_bits);
    for (std::size_t i = 0; i < n; ++i) tx.set(i, cw.get(i));

    const auto x = map_bits(tx, *ctx.cons);
    const auto ch = draw_channel(ctx.cfg.channel, x.size(), snr, rng);
    const auto y = apply_channel(x, ch, rng);
    const auto det = detect_hard(y, ch, ctx.cfg.detector, *ctx.cons);

    BitWord hard(n);
    for (std::size_t i = 0; i < n; ++i) hard.set(i, det.word.get(i));

    std::vector<double> rel;
    const std::vector<double>* relp = nullptr;
    if (ctx.needs_rel) {
        if (ctx.cfg.softness == Softness::psoft) {
            rel = pseudo_soft(det.eq, ctx.cons->q());
        } else {
            rel = soft_llrs(det.eq, *ctx.cons);
            for (auto& v : rel) v = std::abs(v);
        }
        rel.resize(n);  // drop pad-bit reliabilities
        relp = &rel;
    }

    const DecodeResult dec = grand_decode(hard, relp, ctx.schedule, ctx.code);
    FrameResult fr;
    fr.abandoned = dec.abandoned;
    fr.queries = dec.queries;
    fr.error = dec.abandoned || !(dec.word == cw);
    fr.deep_fades = det.eq.deep_fades;
    return fr;
}

struct CurvePoint {
    double snr_db = 0.0;
    uint64_t frames = 0;
    uint64_t block_errors = 0;
    double bler = 0.0;
    double avg_queries = 0.0;
    uint64_t p99_queries = 0;
    double abandon_rate = 0.0;
    uint64_t deep_fade_count = 0;
    double wallclock_seconds = 0.0;
};

// Frames are simulated in fixed batches and merged in batch order, so the
// stop decision never depends on how batches were distributed over workers.
constexpr uint64_t kBatchFrames = 1024;

namespace detail {

struct BatchStats {
    uint64_t frames = 0;
    uint64_t block_errors = 0;
    uint64_t abandoned = 0;
    uint64_t deep_fades = 0;
    uint64_t query_sum = 0;
    std::vector<uint64_t> queries;
};

inline BatchStats simulate_batch(const SimContext& ctx, std::size_t snr_index, const SnrPoint& snr,
                                 uint64_t batch_index, uint64_t max_frames) {
    BatchStats b;
    const uint64_t first = batch_index * kBatchFrames;
    const uint64_t last = std::min(first + kBatchFrames, max_frames);
    b.queries.reserve(last - first);
    for (uint64_t f = first; f < last; ++f) {
        const FrameResult fr = run_frame(ctx, snr_index, snr, f);
        ++b.frames;
        b.block_errors += fr.error ? 1 : 0;
        b.abandoned += fr.abandoned ? 1 : 0;
        b.deep_fades += uint64_t(fr.deep_fades);
        b.query_sum += fr.queries;
        b.queries.push_back(fr.queries);
    }
    return b;
}

} // namespace detail

inline int resolve_workers(const SimConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("GRANDSIM_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096) return int(v);
    }
    return 1;
}

inline CurvePoint run_point(const SimContext& ctx, std::size_t snr_index, double snr_db,
                            int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    const SnrPoint snr = SnrPoint::from_db(snr_db);
    const uint64_t max_frames = ctx.cfg.stop.max_frames;
    const uint64_t min_errors = ctx.cfg.stop.min_block_errors;
    const uint64_t total_batches = (max_frames + kBatchFrames - 1) / kBatchFrames;

    uint64_t frames = 0, errors = 0, abandoned = 0, fades = 0, query_sum = 0;
    std::vector<uint64_t> all_queries;
    uint64_t next_batch = 0;
    bool done = false;
    while (!done && next_batch < total_batches) {
        const uint64_t round = std::min<uint64_t>(uint64_t(workers), total_batches - next_batch);
        std::vector<detail::BatchStats> stats(round);
        if (round == 1) {
            stats[0] = detail::simulate_batch(ctx, snr_index, snr, next_batch, max_frames);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(round);
            for (uint64_t i = 0; i < round; ++i)
                pool.emplace_back([&stats, &ctx, snr_index, &snr, next_batch, max_frames, i] {
                    stats[i] =
                        detail::simulate_batch(ctx, snr_index, snr, next_batch + i, max_frames);
                });
            for (auto& th : pool) th.join();
        }
        // merge strictly in batch order; whatever follows the stopping batch
        // is discarded so any worker count lands on the same totals
        for (const auto& b : stats) {
            frames += b.frames;
            errors += b.block_errors;
            abandoned += b.abandoned;
            fades += b.deep_fades;
            query_sum += b.query_sum;
            all_queries.insert(all_queries.end(), b.queries.begin(), b.queries.end());
            if (errors >= min_errors || frames >= max_frames) {
                done = true;
                break;
            }
        }
        next_batch += round;
    }

    CurvePoint p;
    p.snr_db = snr_db;
    p.frames = frames;
    p.block_errors = errors;
    p.bler = frames ? double(errors) / double(frames) : 0.0;
    p.avg_queries = frames ? double(query_sum) / double(frames) : 0.0;
    if (!all_queries.empty()) {
        // nearest-rank 99th percentile
        uint64_t idx = (99 * all_queries.size() + 99) / 100;
        if (idx < 1) idx = 1;
        std::nth_element(all_queries.begin(), all_queries.begin() + (idx - 1), all_queries.end());
        p.p99_queries = all_queries[idx - 1];
    }
    p.abandon_rate = frames ? double(abandoned) / double(frames) : 0.0;
    p.deep_fade_count = fades;
    p.wallclock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return p;
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& pts) {
    out << "snr_db,frames,block_errors,bler,avg_queries,p99_queries,abandon_rate,"
           "deep_fade_count,wallclock_seconds\n";
    for (const auto& p : pts) {
        out << detail::fmt_double(p.snr_db) << ',' << p.frames << ',' << p.block_errors << ','
            << detail::fmt_double(p.bler) << ',' << detail::fmt_double(p.avg_queries) << ','
            << p.p99_queries << ',' << detail::fmt_double(p.abandon_rate) << ','
            << p.deep_fade_count << ',' << detail::fmt_double(p.wallclock_seconds) << '\n';
    }
}

inline Json curve_to_json(const SimConfig& cfg, const std::vector<CurvePoint>& pts) {
    Json rows = Json::array();
    for (const auto& p : pts) {
        rows.push_back({{"snr_db", p.snr_db},
                        {"frames", p.frames},
                        {"block_errors", p.block_errors},
                        {"bler", p.bler},
                        {"avg_queries", p.avg_queries},
                        {"p99_queries", p.p99_queries},
                        {"abandon_rate", p.abandon_rate},
                        {"deep_fade_count", p.deep_fade_count},
                        {"wallclock_seconds", p.wallclock_seconds}});
    }
    return Json{{"config", config_to_json(cfg)}, {"results", rows}};
}

// Runs the full sweep and writes <output>.csv and <output>.json.  Output
// files are opened before any simulation so bad paths fail fast.
inline std::vector<CurvePoint> run_curve(const SimConfig& cfg, std::ostream* log = nullptr) {
    const SimContext ctx = SimContext::build(cfg);
    const int workers = resolve_workers(cfg);

    const std::filesystem::path base(cfg.output);
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
    std::ofstream csv(cfg.output + ".csv");
    if (!csv) throw std::runtime_error("cannot write output: " + cfg.output + ".csv");
    std::ofstream js(cfg.output + ".json");
    if (!js) throw std::runtime_error("cannot write output: " + cfg.output + ".json");

    std::vector<CurvePoint> pts;
    pts.reserve(cfg.snr_db.size());
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        pts.push_back(run_point(ctx, i, cfg.snr_db[i], workers));
        if (log) {
            const auto& p = pts.back();
            *log << "snr " << p.snr_db << " dB: bler " << p.bler << " (" << p.block_errors << "/"
                 << p.frames << " frames), avg queries " << p.avg_queries << ", "
                 << p.wallclock_seconds << " s\n";
        }
    }
    write_curve_csv(csv, pts);
    js << curve_to_json(cfg, pts).dump(2) << '\n';
    return pts;
}

// Column order of the per-rank series in ReliabilityProfile and its CSV
inline constexpr std::array<const char*, 6> kProfileSeries = {
    "soft_ml", "soft_zf", "soft_mmse", "psoft_zf", "psoft_mmse", "psoft_ml"};

struct ReliabilityProfile {
    double snr_db = 0.0;
    uint64_t frames = 0;
    std::vector<std::array<double, 6>> mean;  // [rank][series], rank ascending in reliability
};

// Per-frame rank-ordered reliability vectors, averaged rank-by-rank: the
// magnitude-sorted soft values for each detector and the matching
// pseudo-soft values, six series side by side.
inline ReliabilityProfile profile_reliability(const SimConfig& cfg, double snr_db,
                                              uint64_t frames) {
    if (frames < 1) throw std::invalid_argument("profile_reliability: need at least one frame");
    const SimContext ctx = SimContext::build(cfg);
    const SnrPoint snr = SnrPoint::from_db(snr_db);
    const std::size_t n = ctx.code.n();
    const int q = ctx.cons->q();

    ReliabilityProfile prof;
    prof.snr_db = snr_db;
    prof.frames = frames;
    prof.mean.assign(n, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0});

    std::vector<double> series[6];
    for (uint64_t f = 0; f < frames; ++f) {
        Xoshiro256 rng = Xoshiro256::for_frame(ctx.cfg.master_seed, 0, f);
        BitWord payload(ctx.code.k());
        for (std::size_t i = 0; i < payload.size(); ++i) payload.set(i, rng.bernoulli(0.5));
        const BitWord cw = ctx.code.encode(payload);
        BitWord tx(ctx.padded_bits);
        for (std::size_t i = 0; i < n; ++i) tx.set(i, cw.get(i));
        const auto x = map_bits(tx, *ctx.cons);
        const auto ch = draw_channel(ctx.cfg.channel, x.size(), snr, rng);
        const auto y = apply_channel(x, ch, rng);

        const EqualizedFrame zf = zf_equalize(y, ch);
        const EqualizedFrame mm = mmse_equalize(y, ch);
        const EqualizedFrame ml = ml_passthrough(y, ch);

        series[0].assign(ctx.padded_bits, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i)
            llr_maxlog_symbol(y[i], ch.h[i], ch.sigma2[i], *ctx.cons,
                              series[0].data() + i * std::size_t(q));
        series[1] = soft_llrs(zf, *ctx.cons);
        series[2] = soft_llrs(mm, *ctx.cons);
        series[3] = pseudo_soft(zf, q);
        series[4] = pseudo_soft(mm, q);
        series[5] = pseudo_soft(ml, q);

        for (int s = 0; s < 6; ++s) {
            auto& v = series[s];
            if (s < 3)
                for (auto& e : v) e = std::abs(e);
            v.resize(n);
            std::sort(v.begin(), v.end());
            for (std::size_t r = 0; r < n; ++r) prof.mean[r][std::size_t(s)] += v[r];
        }
    }
    for (auto& row : prof.mean)
        for (double& v : row) v /= double(frames);
    return prof;
}

inline void write_profile_csv(std::ostream& out, const ReliabilityProfile& prof) {
    out << "rank";
    for (const char* s : kProfileSeries) out << ',' << s;
    out << '\n';
    for (std::size_t r = 0; r < prof.mean.size(); ++r) {
        out << (r + 1);
        for (double v : prof.mean[r]) out << ',' << detail::fmt_double(v);
        out << '\n';
    }
}

} // namespace grandsim
