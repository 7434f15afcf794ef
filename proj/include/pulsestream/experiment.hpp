#pragma once

#include "core.hpp"
#include "io.hpp"
#include "recovery.hpp"
#include "sampling.hpp"
#include "signal_model.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pulsestream {

enum class Algorithm { Alg1, Alg2, Cosamp, Block, Oracle };

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Alg1: return "alg1";
        case Algorithm::Alg2: return "alg2";
        case Algorithm::Cosamp: return "cosamp";
        case Algorithm::Block: return "block";
        case Algorithm::Oracle: return "oracle";
    }
    return "unknown";
}

inline Algorithm parse_algorithm(std::string_view s) {
    if (s == "alg1") return Algorithm::Alg1;
    if (s == "alg2") return Algorithm::Alg2;
    if (s == "cosamp") return Algorithm::Cosamp;
    if (s == "block" || s == "block_cosamp") return Algorithm::Block;
    if (s == "oracle") return Algorithm::Oracle;
    throw InvalidArgument("unknown algorithm '" + std::string(s) + "'");
}

/// Recovery settings used by the harness: 64 restarts for iterative support estimation.
inline RecoveryConfig harness_config() {
    RecoveryConfig cfg;
    cfg.restarts = 64;
    return cfg;
}

/// Trial i of a run seeded with `base` uses seed base ^ i.
inline std::vector<std::uint64_t> trial_seeds(std::uint64_t base, Index count) {
    require(count >= 1, "need at least one trial");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = base ^ static_cast<std::uint64_t>(i);
    return out;
}

struct ExperimentManifest {
    std::string label = "custom";
    PulseModel model;
    Index m = 1;
    double snr_db = kNoiseless;
    Algorithm algorithm = Algorithm::Alg2;
    std::vector<std::uint64_t> seeds;
    RecoveryConfig cfg = harness_config();
    // When set, cfg.residual_tol is replaced per trial by trial_epsilon(y, snr_db).
    bool auto_epsilon = true;

    void validate() const {
        model.validate();
        cfg.validate();
        require(m >= 1, "M must be >= 1");
        require(!seeds.empty(), "manifest needs at least one seed");
        require(!(std::isnan(snr_db) || snr_db == -kNoiseless), "SNR must be a number or +inf");
    }
};

/**
 * Stopping threshold on ||y - Phi z||: 1e-8 ||y|| when noiseless, otherwise
 * the noise norm implied by the SNR, ||y|| / sqrt(1 + 10^(snr/10)).
 */
inline double trial_epsilon(const Vector& y, double snr) {
    if (std::isinf(snr)) return 1e-8 * y.norm();
    return y.norm() / std::sqrt(1.0 + std::pow(10.0, snr / 10.0));
}

inline nlohmann::json to_json(const PulseModel& m) {
    return {{"shape", m.domain.shape()}, {"S", m.spikes}, {"F", m.pulse_length}, {"delta", m.separation}};
}

inline nlohmann::json to_json(const RecoveryConfig& c) {
    const char* halting = c.halting == Halting::ResidualBelowEps ? "residual_below_eps"
                          : c.halting == Halting::RelativeChange ? "relative_change"
                                                                 : "max_iters";
    return {{"max_outer_iters", c.max_outer_iters},
            {"max_inner_iters", c.max_inner_iters},
            {"residual_tol", c.residual_tol},
            {"halting", halting},
            {"rel_change_tol", c.rel_change_tol},
            {"rank_tol", c.rank_tol},
            {"restarts", c.restarts},
            {"restart_seed", c.restart_seed}};
}

inline nlohmann::json to_json(const ExperimentManifest& m) {
    nlohmann::json j{{"label", m.label},
                     {"model", to_json(m.model)},
                     {"M", m.m},
                     {"algorithm", algorithm_name(m.algorithm)},
                     {"seeds", m.seeds},
                     {"cfg", to_json(m.cfg)},
                     {"auto_epsilon", m.auto_epsilon}};
    if (std::isinf(m.snr_db))
        j["snr_db"] = "inf";
    else
        j["snr_db"] = m.snr_db;
    return j;
}

/**
 * Named configurations. Delta defaults to floor(N / (2S)) in 1D and
 * floor(sqrt(N / (2S))) in 2D.
 */
inline ExperimentManifest preset(std::string_view name) {
    ExperimentManifest m;
    m.label = std::string(name);
    m.seeds = trial_seeds(0, 50);
    if (name == "fig1_caption") {
        m.model = PulseModel(Domain(1024), 6, 11, 85);
        m.m = 100;
    } else if (name == "fig1_text") {
        m.model = PulseModel(Domain(1024), 8, 11, 64);
        m.m = 90;
    } else if (name == "fig3") {
        m.model = PulseModel(Domain(1024), 8, 11, 64);
        m.m = 88;
    } else if (name == "fig4") {
        m.model = PulseModel(Domain(1024), 9, 11, 56);
        m.m = 150;
        m.snr_db = 13.25;
    } else if (name == "fig5") {
        m.model = PulseModel(Domain(64, 64), 7, 25, 17);
        m.m = 290;
        m.seeds = trial_seeds(0, 20);
    } else if (name == "neuronal") {
        m.model = PulseModel(Domain(1024), 9, 11, 56);
        m.m = 150;
    } else if (name == "astronomy") {
        m.model = PulseModel(Domain(64, 64), 3, 121, 20);
        m.m = 330;
    } else {
        throw InvalidArgument("unknown preset '" + std::string(name) + "'");
    }
    return m;
}

struct TrialRecord {
    std::uint64_t seed = 0;
    double normalized_mse = 0.0;
    double residual_final = 0.0;
    Index iterations = 0;
    double wall_time = 0.0;
};

/// Ground truth, measurements and everything a recovery produced for one trial.
struct TrialArtifacts {
    PulseInstance truth;
    Vector y;
    Vector z_hat;
    std::optional<RecoveryResult> result;  // empty for the CoSaMP baselines
};

/// Instance from mix_seed(seed, 1), matrix from mix_seed(seed, 2), noise from mix_seed(seed, 3).
struct TrialInput {
    PulseInstance truth;
    SamplingMatrix phi;
    Vector y;
};

inline TrialInput prepare_trial(const PulseModel& model, Index m, double snr, std::uint64_t seed) {
    TrialInput t{random_instance(model, mix_seed(seed, 1)), gaussian_matrix(m, model.domain.size(), mix_seed(seed, 2)),
                 Vector()};
    const Vector z = std::isinf(snr) ? t.truth.z : add_noise(t.truth.z, snr, mix_seed(seed, 3));
    t.y = t.phi.apply(z);
    return t;
}

/// Runs one algorithm on prepared measurements.
inline TrialArtifacts recover(Algorithm algo, const TrialInput& in, const PulseModel& model, const RecoveryConfig& cfg) {
    TrialArtifacts a{in.truth, in.y, Vector(), std::nullopt};
    switch (algo) {
        case Algorithm::Alg1: a.result = am_exhaustive(in.y, in.phi, model, cfg); break;
        case Algorithm::Alg2: a.result = iterative_support_estimation(in.y, in.phi, model, cfg); break;
        case Algorithm::Oracle: a.result = oracle_decoder(in.y, in.phi, in.truth.h, model, cfg); break;
        case Algorithm::Cosamp: a.z_hat = cosamp(in.y, in.phi, model.sparsity(), cfg); break;
        case Algorithm::Block:
            a.z_hat = block_cosamp(in.y, in.phi, model.domain, model.spikes, model.pulse_length, cfg);
            break;
    }
    if (a.result) a.z_hat = a.result->z_hat;
    return a;
}

inline TrialRecord run_trial(const ExperimentManifest& man, Algorithm algo, std::uint64_t seed,
                             TrialArtifacts* artifacts = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    const TrialInput in = prepare_trial(man.model, man.m, man.snr_db, seed);
    RecoveryConfig cfg = man.cfg;
    if (man.auto_epsilon) cfg.residual_tol = trial_epsilon(in.y, man.snr_db);
    TrialArtifacts a = recover(algo, in, man.model, cfg);

    TrialRecord rec;
    rec.seed = seed;
    rec.normalized_mse = normalized_mse(in.truth.z, a.z_hat);
    rec.residual_final = (in.y - in.phi.apply(a.z_hat)).norm();
    rec.iterations = a.result ? a.result->iterations : 0;
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (artifacts) *artifacts = std::move(a);
    return rec;
}

inline void write_manifest(const std::filesystem::path& path, const ExperimentManifest& man) {
    auto out = detail::open_out(path);
    out << to_json(man).dump(2) << '\n';
    detail::finish(out, path);
}

/**
 * One trial of the manifest's algorithm. Writes into `dir`: manifest.json,
 * truth_x.csv, truth_h.csv, truth_z.csv, y.csv, z_hat.csv and record.json;
 * plus x_hat.csv, h_hat.csv and residual_history.csv for algorithms that
 * estimate a pulse.
 */
inline TrialRecord run_single(const ExperimentManifest& man, std::uint64_t seed, const std::filesystem::path& dir) {
    man.validate();
    TrialArtifacts a;
    const TrialRecord rec = run_trial(man, man.algorithm, seed, &a);
    const Domain& d = man.model.domain;
    const Domain pd = d.dims() == 1 ? Domain(man.model.pulse_length)
                                    : Domain(man.model.pulse_side(), man.model.pulse_side());

    write_manifest(dir / "manifest.json", man);
    write_sparse(dir / "truth_x.csv", a.truth.x);
    write_dense(dir / "truth_h.csv", a.truth.h.coefficients(), pd);
    write_dense(dir / "truth_z.csv", a.truth.z, d);
    write_dense(dir / "y.csv", a.y);
    write_dense(dir / "z_hat.csv", a.z_hat, d);
    if (a.result) {
        write_sparse(dir / "x_hat.csv", a.result->x_hat);
        write_dense(dir / "h_hat.csv", a.result->h_hat.coefficients(), pd);
        write_dense(dir / "residual_history.csv", a.result->residual_history);
    }
    nlohmann::json j{{"seed", rec.seed},
                     {"normalized_mse", rec.normalized_mse},
                     {"residual_final", rec.residual_final},
                     {"iterations", rec.iterations}};
    auto out = detail::open_out(dir / "record.json");
    out << j.dump(2) << '\n';
    detail::finish(out, dir / "record.json");
    return rec;
}

struct MonteCarloRow {
    double ratio = 0.0;
    Index m = 0;
    Algorithm algorithm = Algorithm::Alg2;
    Index trials = 0;
    double mean_nmse = 0.0;
    double stderr_nmse = 0.0;
    bool skipped = false;
    std::vector<TrialRecord> records;  // sorted by seed
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Sample standard deviation over sqrt(n); 0 for fewer than two values.
inline double standard_error(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

/**
 * For each ratio sets M = round(ratio * S * F) and runs every algorithm on
 * the manifest's seeds. Ratios with M > N yield one skipped row per algorithm.
 */
inline std::vector<MonteCarloRow> run_montecarlo(const ExperimentManifest& man, const std::vector<double>& ratios,
                                                 const std::vector<Algorithm>& algorithms) {
    man.validate();
    require(!ratios.empty() && !algorithms.empty(), "need at least one ratio and one algorithm");
    std::vector<MonteCarloRow> rows;
    for (double ratio : ratios) {
        require(ratio > 0.0 && std::isfinite(ratio), "M/K ratios must be positive");
        const auto m = static_cast<Index>(std::llround(ratio * static_cast<double>(man.model.sparsity())));
        for (Algorithm algo : algorithms) {
            MonteCarloRow row;
            row.ratio = ratio;
            row.m = m;
            row.algorithm = algo;
            if (m < 1 || m > man.model.domain.size()) {
                row.skipped = true;
                rows.push_back(std::move(row));
                continue;
            }
            ExperimentManifest trial = man;
            trial.m = m;
            auto seeds = man.seeds;
            std::sort(seeds.begin(), seeds.end());
            std::vector<double> errs;
            for (std::uint64_t s : seeds) {
                row.records.push_back(run_trial(trial, algo, s));
                errs.push_back(row.records.back().normalized_mse);
            }
            row.trials = static_cast<Index>(errs.size());
            row.mean_nmse = mean_of(errs);
            row.stderr_nmse = standard_error(errs);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// Columns: mk_ratio,m,algorithm,trials,mean_nmse,stderr_nmse,status.
inline void write_montecarlo_csv(const std::filesystem::path& path, const std::vector<MonteCarloRow>& rows) {
    auto out = detail::open_out(path);
    out << "mk_ratio,m,algorithm,trials,mean_nmse,stderr_nmse,status\n";
    for (const auto& r : rows) {
        out << format_double(r.ratio) << ',' << r.m << ',' << algorithm_name(r.algorithm) << ',';
        if (r.skipped)
            out << "0,,,skipped_m_exceeds_n\n";
        else
            out << r.trials << ',' << format_double(r.mean_nmse) << ',' << format_double(r.stderr_nmse) << ",ok\n";
    }
    detail::finish(out, path);
}

/// Columns: mk_ratio,m,algorithm,seed,normalized_mse,residual_final,iterations.
inline void write_trials_csv(const std::filesystem::path& path, const std::vector<MonteCarloRow>& rows) {
    auto out = detail::open_out(path);
    out << "mk_ratio,m,algorithm,seed,normalized_mse,residual_final,iterations\n";
    for (const auto& r : rows)
        for (const auto& t : r.records)
            out << format_double(r.ratio) << ',' << r.m << ',' << algorithm_name(r.algorithm) << ',' << t.seed << ','
                << format_double(t.normalized_mse) << ',' << format_double(t.residual_final) << ',' << t.iterations
                << '\n';
    detail::finish(out, path);
}

// ---------------------------------------------------------------------------
// Synthetic stand-ins for recorded data

struct StandIn {
    Vector z;
    PulseModel model;
    std::vector<Vector> pulses;  // per-spike shapes, unit norm
    SpikeStream x;
};

namespace detail {

inline StandIn varying_stand_in(const PulseModel& model, const Vector& templ, double jitter, std::uint64_t seed) {
    const auto base = random_instance(model, mix_seed(seed, 1));
    Rng rng(mix_seed(seed, 4));
    StandIn s;
    s.model = model;
    Vector alphas(model.spikes);
    for (Index i = 0; i < model.spikes; ++i) {
        Vector p = templ;
        for (Index l = 0; l < p.size(); ++l) p[l] += jitter * rng.normal();
        s.pulses.push_back(p / p.norm());
        alphas[i] = 1.0 + 0.25 * rng.normal();
    }
    s.x = SpikeStream(base.x.support(), alphas);
    s.z = varying_pulse_signal(s.pulses, alphas, base.x.support());
    return s;
}

}  // namespace detail

/// Spike-like recording: N = 1024, S = 9 biphasic pulses of length 11 with per-pulse jitter.
inline StandIn neuronal_like(std::uint64_t seed) {
    const PulseModel model = preset("neuronal").model;
    Vector templ(model.pulse_length);
    for (Index t = 0; t < templ.size(); ++t) {
        const double u = static_cast<double>(t);
        templ[t] = std::exp(-std::pow((u - 3.0) / 1.5, 2)) - 0.6 * std::exp(-std::pow((u - 6.5) / 2.0, 2));
    }
    return detail::varying_stand_in(model, templ, 0.03, seed);
}

/// Star field: 64 x 64, S = 3 Gaussian blobs on an 11 x 11 patch with per-star jitter.
inline StandIn astronomy_like(std::uint64_t seed) {
    const PulseModel model = preset("astronomy").model;
    const Index side = model.pulse_side();
    Vector templ(model.pulse_length);
    const double c = static_cast<double>(side - 1) / 2.0;
    for (Index r = 0; r < side; ++r)
        for (Index q = 0; q < side; ++q) {
            const double dr = static_cast<double>(r) - c;
            const double dq = static_cast<double>(q) - c;
            templ[r * side + q] = std::exp(-(dr * dr + dq * dq) / (2.0 * 2.5 * 2.5));
        }
    return detail::varying_stand_in(model, templ, 0.02, seed);
}

/// Measures a loaded signal with a seeded Gaussian matrix and runs iterative support estimation.
inline RecoveryResult ingest_and_recover(const Vector& z, const PulseModel& model, Index m, std::uint64_t seed,
                                         RecoveryConfig cfg, double snr = kNoiseless) {
    model.validate();
    require(z.size() == model.domain.size(), "signal length does not match the model domain");
    const auto phi = gaussian_matrix(m, model.domain.size(), mix_seed(seed, 2));
    const Vector y = phi.apply(z);
    cfg.residual_tol = trial_epsilon(y, snr);
    return iterative_support_estimation(y, phi, model, cfg);
}

}  // namespace pulsestream
