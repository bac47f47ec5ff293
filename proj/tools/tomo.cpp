#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "tomo/bases.hpp"
#include "tomo/certify.hpp"
#include "tomo/errors.hpp"
#include "tomo/experiment.hpp"
#include "tomo/io.hpp"
#include "tomo/measurement.hpp"
#include "tomo/recovery.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCertFailure = 4;

tomo::PolynomialFamily parse_family(const std::string& spec) {
    if (spec == "chebyshev-u") return tomo::PolynomialFamily::chebyshev_u();
    if (spec == "hermite") return tomo::PolynomialFamily::hermite();
    if (spec.rfind("custom:", 0) == 0) return tomo::io::load_custom_family(spec.substr(7));
    throw tomo::PreconditionError("unknown family '" + spec +
                                  "' (expected chebyshev-u, hermite, or custom:<file>)");
}

double parse_alpha(const std::string& spec, std::size_t dim) {
    if (spec == "auto") return tomo::default_alpha(dim);
    try {
        std::size_t pos = 0;
        const double v = std::stod(spec, &pos);
        if (pos != spec.size()) throw std::invalid_argument(spec);
        return v;
    } catch (const std::exception&) {
        throw tomo::PreconditionError("--alpha expects a number in radians or 'auto'");
    }
}

int cmd_bases(std::size_t dim, const std::string& family_spec, const std::string& alpha_spec,
              const std::string& out) {
    const tomo::PolynomialFamily family = parse_family(family_spec);
    const double alpha = parse_alpha(alpha_spec, dim);
    const tomo::FiveBasisScheme scheme = tomo::build_scheme(family, dim, alpha);
    const tomo::ValidationReport report = tomo::validate_scheme(scheme);
    if (!report.pass(1e-8)) {
        std::fprintf(stderr, "scheme validation failed (worst unitarity %.3g, norm identity %.3g)\n",
                     std::max({report.unitarity_residual[0], report.unitarity_residual[1],
                               report.unitarity_residual[2], report.unitarity_residual[3],
                               report.unitarity_residual[4]}),
                     std::max(report.cd_rel_error_b1, report.cd_rel_error_b3));
        return kExitPrecondition;
    }
    tomo::io::save_scheme(scheme, out);
    for (const auto& [a, b] : report.coincident_bases)
        std::printf("note: bases %d and %d coincide (harmless degeneracy)\n", a, b);
    std::printf("wrote %s (dim %zu, alpha %.17g)\n", out.c_str(), scheme.dim, scheme.alpha);
    return kExitOk;
}

int cmd_simulate(const std::string& scheme_path, const std::string& state_path, double eps,
                 std::uint64_t seed, const std::string& out) {
    const tomo::FiveBasisScheme bs = tomo::io::load_scheme(scheme_path);
    const tomo::MeasurementScheme scheme = tomo::MeasurementScheme::from_bases(bs);
    const tomo::DensityMatrix state = tomo::io::load_state(state_path);
    if (state.dim() != scheme.dim())
        throw tomo::PreconditionError("state dimension does not match the scheme");
    tomo::OutcomeTable t = scheme.forward_map(state.matrix());
    if (eps > 0.0) {
        tomo::Rng rng(seed);
        t += tomo::sample_noise(scheme.n_povms(), scheme.n_outcomes(), eps, rng);
    }
    tomo::io::save_table_csv(t, out);
    std::printf("wrote %s (%zux%zu table)\n", out.c_str(), t.rows, t.cols);
    return kExitOk;
}

int cmd_recover(const std::string& scheme_path, const std::string& probs_path,
                const std::string& program, double eps, const std::string& out) {
    const tomo::FiveBasisScheme bs = tomo::io::load_scheme(scheme_path);
    const tomo::MeasurementScheme scheme = tomo::MeasurementScheme::from_bases(bs);
    const tomo::OutcomeTable b = tomo::io::load_table_csv(probs_path);

    tomo::SolverOptions opts;
    tomo::RecoveryResult result = program == "trace-min"
                                      ? tomo::solve_trace_min(scheme, b, eps, opts)
                                      : tomo::solve_least_squares(scheme, b, opts);
    tomo::io::save_result(result, opts, out);
    std::printf("%s: residual %.6g, purity gap %.6g, %zu iterations, %s\n",
                result.solver.c_str(), result.residual, result.purity_gap, result.iterations,
                result.converged ? "converged" : "NOT converged");
    return result.converged ? kExitOk : kExitNoConvergence;
}

int cmd_certify(const std::string& scheme_path, std::size_t samples, std::uint64_t seed,
                const std::string& out) {
    const tomo::FiveBasisScheme bs = tomo::io::load_scheme(scheme_path);
    const tomo::MeasurementScheme scheme = tomo::MeasurementScheme::from_bases(bs);
    const tomo::Certificate cert = tomo::check_determination(scheme, samples, seed);
    tomo::io::save_certificate(cert, out);
    std::printf("kernel dim %zu, kernel positivity %s, c estimate %.6g (%zu samples)\n",
                cert.kernel_dim, cert.kernel_positivity_ok ? "ok" : "VIOLATED", cert.c_estimate,
                cert.samples_used);
    return cert.failed() ? kExitCertFailure : kExitOk;
}

int cmd_experiment(const tomo::ExperimentConfig& config, const std::string& out,
                   const std::string& hist) {
    const tomo::ExperimentStats stats = tomo::run_experiment(config);
    tomo::io::save_stats_csv(stats, out);
    tomo::io::save_hist_csv(stats.histogram, hist);
    std::printf("trials %zu (excluded %zu): mean %.4g, q96 %.4g, q99 %.4g, q99.75 %.4g\n",
                stats.trials.size(), stats.excluded, stats.mean, stats.q96, stats.q99,
                stats.q9975);
    return stats.errors_sorted.empty() ? kExitNoConvergence : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"five-orthonormal-bases pure-state tomography toolkit"};
    app.require_subcommand(1);

    std::size_t dim = 2;
    std::string family = "chebyshev-u";
    std::string alpha = "auto";
    std::string out;
    auto* bases = app.add_subcommand("bases", "build a five-basis scheme and write it as JSON");
    bases->add_option("--dim", dim, "Hilbert space dimension")->required();
    bases->add_option("--family", family, "chebyshev-u | hermite | custom:<file>");
    bases->add_option("--alpha", alpha, "phase twist in radians, or 'auto' for pi/dim");
    bases->add_option("--out", out, "output scheme JSON path")->required();

    std::string scheme_path, state_path, probs_out;
    double sim_eps = 0.0;
    std::uint64_t sim_seed = 1;
    auto* simulate = app.add_subcommand("simulate", "forward-map a state, optionally add noise");
    simulate->add_option("--scheme", scheme_path, "scheme JSON")->required();
    simulate->add_option("--state", state_path, "state JSON (matrix or vector)")->required();
    simulate->add_option("--eps", sim_eps, "noise level (HS norm of the error table)");
    simulate->add_option("--seed", sim_seed, "noise seed");
    simulate->add_option("--out", probs_out, "output CSV path")->required();

    std::string rec_scheme, rec_probs, rec_program = "trace-min", rec_out;
    double rec_eps = 1e-4;
    auto* recover = app.add_subcommand("recover", "run a recovery program on a data table");
    recover->add_option("--scheme", rec_scheme, "scheme JSON")->required();
    recover->add_option("--probs", rec_probs, "data table CSV")->required();
    recover->add_option("--program", rec_program, "trace-min | lsq")
        ->check(CLI::IsMember({"trace-min", "lsq"}));
    recover->add_option("--eps", rec_eps, "error-ball radius (trace-min only)");
    recover->add_option("--out", rec_out, "output result JSON path")->required();

    std::string cert_scheme, cert_out;
    std::size_t cert_samples = 10000;
    std::uint64_t cert_seed = 1;
    auto* certify = app.add_subcommand("certify", "sampled determination certificate");
    certify->add_option("--scheme", cert_scheme, "scheme JSON")->required();
    certify->add_option("--samples", cert_samples, "number of K samples");
    certify->add_option("--seed", cert_seed, "sampling seed");
    certify->add_option("--out", cert_out, "output certificate JSON path")->required();

    tomo::ExperimentConfig config;
    std::string exp_program = "trace-min", exp_out, exp_hist;
    auto* experiment = app.add_subcommand("experiment", "noisy-recovery error statistics");
    experiment->add_option("--dim", config.dim, "Hilbert space dimension")->required();
    experiment->add_option("--trials", config.trials, "number of trials")->required();
    experiment->add_option("--eps", config.epsilon, "noise level")->required();
    experiment->add_option("--program", exp_program, "trace-min | lsq")
        ->check(CLI::IsMember({"trace-min", "lsq"}));
    experiment->add_option("--seed", config.seed, "master seed")->required();
    experiment->add_option("--out", exp_out, "per-trial stats CSV path")->required();
    experiment->add_option("--hist", exp_hist, "error-density histogram CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitPrecondition;
    }

    try {
        if (bases->parsed()) return cmd_bases(dim, family, alpha, out);
        if (simulate->parsed()) return cmd_simulate(scheme_path, state_path, sim_eps, sim_seed, probs_out);
        if (recover->parsed()) return cmd_recover(rec_scheme, rec_probs, rec_program, rec_eps, rec_out);
        if (certify->parsed()) return cmd_certify(cert_scheme, cert_samples, cert_seed, cert_out);
        if (experiment->parsed()) {
            config.program = exp_program == "lsq" ? tomo::Program::LeastSquares
                                                  : tomo::Program::TraceMin;
            return cmd_experiment(config, exp_out, exp_hist);
        }
    } catch (const tomo::PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPrecondition;
    } catch (const tomo::SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s (residual %.3g)\n", e.what(), e.residual());
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPrecondition;
    }
    return kExitPrecondition;
}
