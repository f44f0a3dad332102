// grandsim command-line front end.
//
//   grandsim simulate --config sweep.toml [--set key=value ...] [--workers N]
//   grandsim profile-reliability --config sweep.toml --snr 10 --frames 2000
//   grandsim verify {patterns|mldecode|uncoded|llr} [...]
//   grandsim pw-order --n 128
//
// Configs are TOML (subset) or JSON by file extension; outputs are
// <output>.csv plus a JSON mirror with the config embedded.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grandsim/grand.hpp"
#include "grandsim/harness.hpp"
#include "grandsim/oracle.hpp"

namespace {

using namespace grandsim;

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 int workers) {
    Json doc = load_config_file(config_path);
    for (const std::string& kv : overrides) apply_override(doc, kv);
    SimConfig cfg = parse_config(doc);
    if (workers > 0) cfg.workers = workers;
    run_curve(cfg, &std::cout);
    std::cout << "wrote " << cfg.output << ".csv and " << cfg.output << ".json\n";
    return 0;
}

int cmd_profile(const std::string& config_path, const std::vector<std::string>& overrides,
                double snr_db, uint64_t frames, std::string out_path) {
    Json doc = load_config_file(config_path);
    for (const std::string& kv : overrides) apply_override(doc, kv);
    SimConfig cfg = parse_config(doc);
    if (out_path.empty()) out_path = cfg.output + "_profile.csv";
    ReliabilityProfile prof = profile_reliability(cfg, snr_db, frames);
    std::filesystem::path parent = std::filesystem::path(out_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    write_profile_csv(out, prof);
    std::cout << "wrote " << out_path << " (" << prof.mean.size() << " ranks, " << frames
              << " frames at " << snr_db << " dB)\n";
    return 0;
}

bool streams_match(PatternStream& stream, const std::vector<NoisePattern>& want,
                   bool check_weights, std::string& why) {
    NoisePattern got;
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (!stream.next(got)) {
            why = "stream ended after " + std::to_string(i) + " of " + std::to_string(want.size());
            return false;
        }
        if (got.flips != want[i].flips) {
            why = "pattern " + std::to_string(i) + " flips differ";
            return false;
        }
        if (check_weights && got.weight != want[i].weight) {
            why = "pattern " + std::to_string(i) + " weight differs";
            return false;
        }
    }
    if (stream.next(got)) {
        why = "stream keeps emitting past " + std::to_string(want.size()) + " patterns";
        return false;
    }
    return true;
}

int cmd_verify_patterns(uint32_t n, int rel_draws, uint32_t q, uint64_t seed) {
    std::string why;
    bool ok = true;

    auto brute = brute_sort_patterns(n, PatternMetric::hamming);
    auto ham = make_hamming_patterns(n);
    if (!streams_match(*ham, brute, false, why)) {
        std::cout << "patterns FAIL: hamming n=" << n << ": " << why << "\n";
        ok = false;
    }

    brute = brute_sort_patterns(n, PatternMetric::logistic);
    auto log_stream = make_logistic_patterns(n);
    if (!streams_match(*log_stream, brute, true, why)) {
        std::cout << "patterns FAIL: logistic n=" << n << ": " << why << "\n";
        ok = false;
    }

    if (n % q == 0) {
        brute = brute_sort_patterns(n, PatternMetric::logistic_hamming_tie, nullptr, q);
        auto tie = make_logistic_hamming_tie_patterns(n, q);
        if (!streams_match(*tie, brute, true, why)) {
            std::cout << "patterns FAIL: logistic-ham-tie n=" << n << " q=" << q << ": " << why
                      << "\n";
            ok = false;
        }
    } else {
        std::cout << "patterns: skipping logistic-ham-tie (q=" << q << " does not divide n=" << n
                  << ")\n";
    }

    Xoshiro256 rng(seed);
    for (int d = 0; d < rel_draws; ++d) {
        std::vector<double> rel(n);
        for (double& v : rel) v = rng.uniform_pos() * 8.0;
        std::sort(rel.begin(), rel.end());
        brute = brute_sort_patterns(n, PatternMetric::exact_eta, &rel);
        auto eta = make_exact_eta_patterns(rel);
        if (!streams_match(*eta, brute, true, why)) {
            std::cout << "patterns FAIL: exact-eta n=" << n << " draw " << d << ": " << why << "\n";
            ok = false;
            break;
        }
    }

    if (ok)
        std::cout << "patterns: ok (n=" << n << ", " << rel_draws << " reliability draws)\n";
    return ok ? 0 : 1;
}

int cmd_verify_mldecode(int trials, uint64_t seed) {
    Xoshiro256 rng(seed);
    for (int t = 0; t < trials; ++t) {
        LinearCode code = random_linear_code(16, 8, seed + uint64_t(t % 5));
        BitWord hard(code.n());
        std::vector<double> rel(code.n());
        for (std::size_t i = 0; i < code.n(); ++i) {
            hard.set(i, rng.bernoulli(0.5));
            rel[i] = rng.uniform_pos() * 4.0;
        }

        MlResult want = exhaustive_ml_decode(code, hard, &rel);
        QuerySchedule sched;
        sched.kind = ScheduleKind::exact_eta;
        sched.max_queries = 0;  // unlimited
        DecodeResult got = grand_decode(hard, &rel, sched, code);

        if (got.abandoned || got.found_weight != want.score ||
            (want.num_ties == 1 && got.word != want.word)) {
            std::cout << "mldecode FAIL at trial " << t << ": decoder weight " << got.found_weight
                      << " vs exhaustive " << want.score << "\n";
            return 1;
        }
    }
    std::cout << "mldecode: ok (" << trials << " trials on [16,8] codes)\n";
    return 0;
}

int cmd_verify_uncoded(std::size_t n, uint64_t frames, uint64_t seed) {
    SimConfig cfg;
    cfg.code.kind = "rate1";
    cfg.code.n = n;
    cfg.modulation = "bpsk";
    cfg.channel.kind = FadingKind::rayleigh;
    cfg.detector = Detector::zf;
    cfg.softness = Softness::hard;
    cfg.decoder = DecoderKind::grand_hard;
    cfg.stop.min_block_errors = ~uint64_t(0) >> 1;
    cfg.stop.max_frames = frames;
    cfg.master_seed = seed;
    SimContext ctx = SimContext::build(cfg);

    bool ok = true;
    std::cout << "snr_db,measured,analytic,sigma\n";
    for (int snr_db = 0; snr_db <= 30; snr_db += 5) {
        CurvePoint p = run_point(ctx, std::size_t(snr_db), double(snr_db), 1);
        double gamma = std::pow(10.0, snr_db / 10.0);
        double want = analytic_uncoded_bler(gamma, n);
        double sigma = std::sqrt(want * (1.0 - want) / double(p.frames));
        std::cout << snr_db << ',' << p.bler << ',' << want << ',' << sigma << '\n';
        if (std::abs(p.bler - want) > 3.0 * sigma) {
            std::cout << "uncoded FAIL at " << snr_db << " dB: |" << p.bler << " - " << want
                      << "| > 3 sigma\n";
            ok = false;
        }
    }
    if (ok) std::cout << "uncoded: ok (n=" << n << ", " << frames << " frames per point)\n";
    return ok ? 0 : 1;
}

int cmd_verify_llr(int samples, uint64_t seed) {
    const Constellation* sets[] = {&Constellation::bpsk(), &Constellation::qpsk(),
                                   &Constellation::qam16(), &Constellation::qam64()};
    Xoshiro256 rng(seed);
    double worst_zf_ml = 0.0, worst_mmse_zf = 0.0, worst_scale = 0.0, worst_var = 0.0;
    for (const Constellation* cons : sets) {
        int q = cons->q();
        std::vector<double> lml(q), lzf(q), lmm(q);
        for (int s = 0; s < samples; ++s) {
            auto [hr, hi] = rng.gaussian_pair();
            Cplx h(hr * 0.7071067811865476, hi * 0.7071067811865476);
            if (std::norm(h) < 1e-12) continue;  // dodge degenerate fades
            double sigma2 = std::pow(10.0, -3.0 + 4.0 * rng.uniform());
            std::size_t label = std::size_t(rng() % cons->size());
            auto [nr, ni] = rng.gaussian_pair();
            Cplx y = h * cons->point(label) +
                     std::sqrt(sigma2 / 2.0) * Cplx(nr, ni);

            ChannelRealization ch;
            ch.h = {h};
            ch.sigma2 = {sigma2};
            EqualizedFrame zf = zf_equalize({y}, ch);
            EqualizedFrame mm = mmse_equalize({y}, ch);

            llr_maxlog_symbol(y, h, sigma2, *cons, lml.data());
            llr_maxlog_symbol(zf.y_eq[0], Cplx(1.0, 0.0), zf.post_var[0], *cons, lzf.data());
            llr_maxlog_symbol(mm.y_eq[0], Cplx(1.0, 0.0), mm.post_var[0], *cons, lmm.data());

            // normalize by the symbol's LLR scale: a bit near its decision
            // boundary has |llr| ~ 0 and a bitwise ratio would be meaningless
            double scale = 1e-300;
            for (int j = 0; j < q; ++j) scale = std::max(scale, std::abs(lml[j]));
            for (int j = 0; j < q; ++j) {
                worst_zf_ml = std::max(worst_zf_ml, std::abs(lzf[j] - lml[j]) / scale);
                if (q <= 2)
                    worst_mmse_zf = std::max(worst_mmse_zf, std::abs(lmm[j] - lzf[j]) / scale);
            }

            double rho = std::norm(h) / (std::norm(h) + sigma2);
            worst_scale = std::max(worst_scale, std::abs(mm.y_eq[0] - rho * zf.y_eq[0]) /
                                                    std::max(std::abs(mm.y_eq[0]), 1e-300));
            worst_var = std::max(
                worst_var, std::abs(zf.post_var[0] - sigma2 / std::norm(h)) / zf.post_var[0]);
            worst_var = std::max(worst_var, std::abs(mm.post_var[0] -
                                                     sigma2 / (std::norm(h) + sigma2)) /
                                                mm.post_var[0]);
        }
    }
    std::cout << "max relative deviation: zf-vs-ml " << worst_zf_ml << ", mmse-vs-zf (q<=2) "
              << worst_mmse_zf << ", mmse=rho*zf " << worst_scale << ", post-variance "
              << worst_var << "\n";
    const double tol = 1e-9;
    bool ok = worst_zf_ml <= tol && worst_mmse_zf <= tol && worst_scale <= tol && worst_var <= tol;
    std::cout << (ok ? "llr: ok" : "llr FAIL: deviation above 1e-9") << " (" << samples
              << " samples per constellation)\n";
    return ok ? 0 : 1;
}

int cmd_pw_order(std::size_t n) {
    // 0-based indices, most reliable last: the same layout an order file uses
    for (std::size_t idx : pw_reliability_order(n)) std::cout << idx << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GRAND-family link-level simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int workers = 0;
    double snr_db = 10.0;
    uint64_t frames = 2000;
    std::string out_path;

    CLI::App* sim = app.add_subcommand("simulate", "run a BLER sweep from a config file");
    sim->add_option("--config", config_path, "TOML or JSON config file")->required();
    sim->add_option("--set", overrides, "override a config key, e.g. --set decoder=sgrand");
    sim->add_option("--workers", workers, "worker threads (overrides config and environment)");

    CLI::App* prof =
        app.add_subcommand("profile-reliability", "average sorted reliability curves at one SNR");
    prof->add_option("--config", config_path, "TOML or JSON config file")->required();
    prof->add_option("--set", overrides, "override a config key");
    prof->add_option("--snr", snr_db, "SNR in dB (default 10)");
    prof->add_option("--frames", frames, "frames to average (default 2000)");
    prof->add_option("--output", out_path, "output CSV (default <config output>_profile.csv)");

    CLI::App* verify = app.add_subcommand("verify", "ad-hoc cross-checks against brute force");
    verify->require_subcommand(1);

    uint32_t pat_n = 10;
    int pat_rels = 50;
    uint32_t pat_q = 2;
    uint64_t seed = 1;
    CLI::App* vpat = verify->add_subcommand("patterns", "streams vs exhaustive sorted patterns");
    vpat->add_option("--n", pat_n, "pattern length (default 10, max 20)");
    vpat->add_option("--rels", pat_rels, "random reliability draws (default 50)");
    vpat->add_option("--q", pat_q, "bits per symbol for the tie-break order (default 2)");
    vpat->add_option("--seed", seed, "rng seed");

    int trials = 200;
    CLI::App* vml = verify->add_subcommand("mldecode", "unlimited-budget decoder vs exhaustive ML");
    vml->add_option("--trials", trials, "decode trials (default 200)");
    vml->add_option("--seed", seed, "rng seed");

    std::size_t unc_n = 64;
    uint64_t unc_frames = 20000;
    CLI::App* vunc = verify->add_subcommand("uncoded", "rate-1 sweep vs the closed-form curve");
    vunc->add_option("--n", unc_n, "block length (default 64)");
    vunc->add_option("--frames", unc_frames, "frames per SNR point (default 20000)");
    vunc->add_option("--seed", seed, "master seed");

    int llr_samples = 100000;
    CLI::App* vllr = verify->add_subcommand("llr", "equalizer and soft-output identities");
    vllr->add_option("--samples", llr_samples, "samples per constellation (default 100000)");
    vllr->add_option("--seed", seed, "rng seed");

    std::size_t pw_n = 128;
    CLI::App* pw = app.add_subcommand("pw-order", "print a reliability order, most reliable last");
    pw->add_option("--n", pw_n, "block length, power of two (default 128)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, overrides, workers);
        if (prof->parsed()) return cmd_profile(config_path, overrides, snr_db, frames, out_path);
        if (verify->parsed()) {
            if (vpat->parsed()) return cmd_verify_patterns(pat_n, pat_rels, pat_q, seed);
            if (vml->parsed()) return cmd_verify_mldecode(trials, seed);
            if (vunc->parsed()) return cmd_verify_uncoded(unc_n, unc_frames, seed);
            if (vllr->parsed()) return cmd_verify_llr(llr_samples, seed);
        }
        if (pw->parsed()) return cmd_pw_order(pw_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
