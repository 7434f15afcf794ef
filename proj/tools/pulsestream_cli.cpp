// Command-line front end: generate, measure, recover, trial, montecarlo, ingest.

#include <pulsestream/pulsestream.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace ps = pulsestream;

namespace {

struct ModelFlags {
    long long n = 1024;
    long long s = 8;
    long long f = 11;
    long long delta = 0;  // 0: derive from N and S
    int dims = 1;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
    cmd->add_option("--n", mf.n, "Signal size N (total count; a perfect square when --dims 2)")->check(CLI::PositiveNumber);
    cmd->add_option("--s", mf.s, "Number of spikes S")->check(CLI::PositiveNumber);
    cmd->add_option("--f", mf.f, "Pulse size F (total count; a perfect square when --dims 2)")->check(CLI::PositiveNumber);
    cmd->add_option("--delta", mf.delta, "Minimum spike separation (default floor(N/2S), per axis in 2D)");
    cmd->add_option("--dims", mf.dims, "Domain dimension")->check(CLI::IsMember({1, 2}));
}

ps::Index exact_sqrt(long long v, const char* what) {
    const auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
    ps::require(r * r == v, std::string(what) + " must be a perfect square in 2D");
    return r;
}

ps::PulseModel build_model(const ModelFlags& mf) {
    if (mf.dims == 1) {
        const auto delta = mf.delta > 0 ? mf.delta : mf.n / (2 * mf.s);
        return ps::PulseModel(ps::Domain(mf.n), mf.s, mf.f, delta);
    }
    const ps::Index side = exact_sqrt(mf.n, "--n");
    exact_sqrt(mf.f, "--f");
    const auto delta = mf.delta > 0
                           ? mf.delta
                           : static_cast<long long>(std::floor(std::sqrt(static_cast<double>(mf.n) / (2.0 * mf.s))));
    return ps::PulseModel(ps::Domain(side, side), mf.s, mf.f, delta);
}

double parse_snr(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "none") return ps::kNoiseless;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    ps::require(pos == s.size() && std::isfinite(v), "--snr-db must be a number or 'inf'");
    return v;
}

ps::Domain pulse_domain(const ps::PulseModel& m) {
    return m.domain.dims() == 1 ? ps::Domain(m.pulse_length) : ps::Domain(m.pulse_side(), m.pulse_side());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = ps::detail::open_out(path);
    out << j.dump(2) << '\n';
    ps::detail::finish(out, path);
}

void write_result(const std::filesystem::path& dir, const ps::PulseModel& model, const ps::RecoveryResult& r) {
    ps::write_dense(dir / "z_hat.csv", r.z_hat, model.domain);
    ps::write_sparse(dir / "x_hat.csv", r.x_hat);
    ps::write_dense(dir / "h_hat.csv", r.h_hat.coefficients(), pulse_domain(model));
    ps::write_dense(dir / "residual_history.csv", r.residual_history);
}

std::vector<ps::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<ps::Algorithm> out;
    for (const auto& n : names) out.push_back(ps::parse_algorithm(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive sampling and recovery of pulse streams"};
    app.require_subcommand(1);

    ModelFlags mf;
    std::uint64_t seed = 0;
    long long m = 100;
    std::string snr = "inf";
    std::string out_dir = "out";
    std::string algo = "alg2";
    std::string preset_name;
    std::string in_path;
    std::string h_path;
    std::string format = "dense";
    std::string stand_in;
    long long trials = 50;
    bool full = false;
    long long restarts = ps::harness_config().restarts;
    std::vector<double> ratios{0.5, 1.0, 1.5, 2.0, 3.0};
    std::vector<std::string> algos{"oracle", "alg2", "block", "cosamp"};

    auto* gen = app.add_subcommand("generate", "Draw a random pulse stream and write its parts");
    add_model_flags(gen, mf);
    gen->add_option("--seed", seed, "Instance seed");
    gen->add_option("--stand-in", stand_in, "Write a synthetic stand-in recording instead")
        ->check(CLI::IsMember({"neuronal", "astronomy"}));
    gen->add_option("--out", out_dir, "Output directory");

    auto* meas = app.add_subcommand("measure", "Measure a dense signal with a seeded Gaussian matrix");
    meas->add_option("--in", in_path, "Dense signal CSV")->required();
    meas->add_option("--m", m, "Number of measurements M")->check(CLI::PositiveNumber);
    meas->add_option("--seed", seed, "Seed (matrix uses mix_seed(seed, 2), noise mix_seed(seed, 3))");
    meas->add_option("--snr-db", snr, "Signal noise in dB, or 'inf'");
    meas->add_option("--out", out_dir, "Output directory");

    auto* rec = app.add_subcommand("recover", "Recover a pulse stream from measurements");
    add_model_flags(rec, mf);
    rec->add_option("--in", in_path, "Measurement CSV y")->required();
    rec->add_option("--seed", seed, "Seed that produced the sampling matrix");
    rec->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"alg1", "alg2", "cosamp", "block", "oracle"}));
    rec->add_option("--pulse", h_path, "True pulse CSV (oracle only)");
    rec->add_option("--snr-db", snr, "Noise level used to set the stopping threshold");
    rec->add_option("--restarts", restarts, "Restarts for alg2")->check(CLI::PositiveNumber);
    rec->add_option("--out", out_dir, "Output directory");

    auto* trial = app.add_subcommand("trial", "Run one seeded end-to-end trial and write all artifacts");
    add_model_flags(trial, mf);
    trial->add_option("--preset", preset_name, "Named configuration (fig1_caption, fig1_text, fig3, fig4, fig5, ...)");
    trial->add_option("--m", m, "Number of measurements M")->check(CLI::PositiveNumber);
    trial->add_option("--seed", seed, "Trial seed");
    trial->add_option("--snr-db", snr, "Signal noise in dB, or 'inf'");
    trial->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"alg1", "alg2", "cosamp", "block", "oracle"}));
    trial->add_option("--restarts", restarts, "Restarts for alg2")->check(CLI::PositiveNumber);
    trial->add_option("--out", out_dir, "Output directory");

    auto* mc = app.add_subcommand("montecarlo", "Normalized MSE versus M/K for several algorithms");
    add_model_flags(mc, mf);
    mc->add_option("--preset", preset_name, "Named configuration");
    mc->add_option("--seed", seed, "Base seed (trial i uses seed ^ i)");
    mc->add_option("--trials", trials, "Trials per ratio")->check(CLI::PositiveNumber);
    mc->add_flag("--full", full, "Use 200 trials per ratio");
    mc->add_option("--ratios", ratios, "M/K ratios")->delimiter(',');
    mc->add_option("--algo", algos, "Algorithms")->delimiter(',');
    mc->add_option("--snr-db", snr, "Signal noise in dB, or 'inf'");
    mc->add_option("--restarts", restarts, "Restarts for alg2")->check(CLI::PositiveNumber);
    mc->add_option("--out", out_dir, "Output directory");

    auto* ing = app.add_subcommand("ingest", "Measure and recover a recorded signal; writes the anchor pulse");
    add_model_flags(ing, mf);
    ing->add_option("--in", in_path, "Signal file")->required();
    ing->add_option("--format", format, "File format")->check(CLI::IsMember({"dense", "sparse"}));
    ing->add_option("--m", m, "Number of measurements M")->check(CLI::PositiveNumber);
    ing->add_option("--seed", seed, "Matrix seed");
    ing->add_option("--restarts", restarts, "Restarts for alg2")->check(CLI::PositiveNumber);
    ing->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::filesystem::path out(out_dir);
        ps::RecoveryConfig cfg = ps::harness_config();
        cfg.restarts = restarts;

        if (gen->parsed()) {
            if (!stand_in.empty()) {
                const auto s = stand_in == "neuronal" ? ps::neuronal_like(seed) : ps::astronomy_like(seed);
                ps::write_dense(out / "signal.csv", s.z, s.model.domain);
                ps::write_sparse(out / "truth_x.csv", s.x);
                write_json(out / "model.json", {{"model", ps::to_json(s.model)}, {"seed", seed}, {"stand_in", stand_in}});
                std::cout << nlohmann::json{{"model", ps::to_json(s.model)}, {"seed", seed}}.dump() << '\n';
                return 0;
            }
            const auto model = build_model(mf);
            const auto inst = ps::random_instance(model, ps::mix_seed(seed, 1));
            ps::write_sparse(out / "truth_x.csv", inst.x);
            ps::write_dense(out / "truth_h.csv", inst.h.coefficients(), pulse_domain(model));
            ps::write_dense(out / "z.csv", inst.z, model.domain);
            const nlohmann::json j{{"model", ps::to_json(model)}, {"seed", seed}};
            write_json(out / "model.json", j);
            std::cout << j.dump() << '\n';
            return 0;
        }

        if (meas->parsed()) {
            const auto sig = ps::read_dense(in_path);
            const double snr_db = parse_snr(snr);
            const auto phi = ps::gaussian_matrix(m, sig.domain.size(), ps::mix_seed(seed, 2));
            const ps::Vector z = std::isinf(snr_db) ? sig.values : ps::add_noise(sig.values, snr_db, ps::mix_seed(seed, 3));
            ps::write_dense(out / "y.csv", phi.apply(z));
            nlohmann::json j{{"M", m}, {"shape", sig.domain.shape()}, {"seed", seed}};
            j["snr_db"] = std::isinf(snr_db) ? nlohmann::json("inf") : nlohmann::json(snr_db);
            write_json(out / "measure.json", j);
            std::cout << j.dump() << '\n';
            return 0;
        }

        if (rec->parsed()) {
            const auto model = build_model(mf);
            const ps::Vector y = ps::read_dense(in_path).values;
            const auto phi = ps::gaussian_matrix(y.size(), model.domain.size(), ps::mix_seed(seed, 2));
            cfg.residual_tol = ps::trial_epsilon(y, parse_snr(snr));
            const auto a = ps::parse_algorithm(algo);
            ps::Vector z_hat;
            std::optional<ps::RecoveryResult> r;
            if (a == ps::Algorithm::Alg1) r = ps::am_exhaustive(y, phi, model, cfg);
            if (a == ps::Algorithm::Alg2) r = ps::iterative_support_estimation(y, phi, model, cfg);
            if (a == ps::Algorithm::Oracle) {
                ps::require(!h_path.empty(), "--algo oracle needs --pulse");
                const ps::ImpulseResponse h(ps::read_dense(h_path).values, model.domain);
                r = ps::oracle_decoder(y, phi, h, model, cfg);
            }
            if (a == ps::Algorithm::Cosamp) z_hat = ps::cosamp(y, phi, model.sparsity(), cfg);
            if (a == ps::Algorithm::Block)
                z_hat = ps::block_cosamp(y, phi, model.domain, model.spikes, model.pulse_length, cfg);
            if (r) {
                write_result(out, model, *r);
                z_hat = r->z_hat;
            } else {
                ps::write_dense(out / "z_hat.csv", z_hat, model.domain);
            }
            const nlohmann::json j{{"algorithm", algo}, {"residual", (y - phi.apply(z_hat)).norm()}};
            std::cout << j.dump() << '\n';
            return 0;
        }

        if (trial->parsed() || mc->parsed()) {
            ps::ExperimentManifest man;
            if (!preset_name.empty()) {
                man = ps::preset(preset_name);
            } else {
                man.model = build_model(mf);
                man.m = m;
            }
            if (trial->parsed() && trial->count("--m")) man.m = m;
            if ((trial->parsed() ? trial : mc)->count("--snr-db")) man.snr_db = parse_snr(snr);
            man.cfg.restarts = restarts;
            man.algorithm = ps::parse_algorithm(algo);

            if (trial->parsed()) {
                man.seeds = {seed};
                const auto r = ps::run_single(man, seed, out);
                std::cout << ps::to_json(man).dump() << '\n'
                          << nlohmann::json{{"seed", r.seed},
                                            {"normalized_mse", r.normalized_mse},
                                            {"residual_final", r.residual_final},
                                            {"iterations", r.iterations}}
                                 .dump()
                          << '\n';
                return 0;
            }

            man.seeds = ps::trial_seeds(seed, full ? 200 : trials);
            const auto rows = ps::run_montecarlo(man, ratios, parse_algorithms(algos));
            ps::write_manifest(out / "manifest.json", man);
            ps::write_montecarlo_csv(out / "montecarlo.csv", rows);
            ps::write_trials_csv(out / "trials.csv", rows);
            std::cout << ps::to_json(man).dump() << '\n';
            for (const auto& r : rows) {
                if (r.skipped)
                    std::cout << r.ratio << ' ' << ps::algorithm_name(r.algorithm) << " skipped (M > N)\n";
                else
                    std::cout << r.ratio << ' ' << ps::algorithm_name(r.algorithm) << ' ' << r.mean_nmse << " +- "
                              << r.stderr_nmse << '\n';
            }
            return 0;
        }

        if (ing->parsed()) {
            const auto sig = ps::ingest_signal(in_path, format == "dense" ? ps::SignalFormat::CsvDense
                                                                          : ps::SignalFormat::CsvSparse);
            ModelFlags flags = mf;
            if (sig.domain.dims() == 2) {
                flags.dims = 2;
                ps::require(sig.domain.shape()[0] == sig.domain.shape()[1], "2D input must be square");
            }
            flags.n = sig.domain.size();
            const auto model = build_model(flags);
            const auto r = ps::ingest_and_recover(sig.values, model, m, seed, cfg);
            write_result(out, model, r);
            ps::write_dense(out / "anchor_pulse.csv", r.h_hat.coefficients(), pulse_domain(model));
            const nlohmann::json j{{"model", ps::to_json(model)},
                                   {"M", m},
                                   {"seed", seed},
                                   {"normalized_mse", ps::normalized_mse(sig.values, r.z_hat)},
                                   {"pulse_norm", r.h_hat.norm()}};
            write_json(out / "record.json", j);
            std::cout << j.dump() << '\n';
            return 0;
        }
    } catch (const ps::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ps::InvalidArgument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
