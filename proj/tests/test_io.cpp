#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tomo/errors.hpp"
#include "tomo/io.hpp"

using namespace tomo;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("tomo_io_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("printed doubles parse back to the same bits") {
    for (double v : {0.1 + 0.2, 1.0 / 3.0, 1e-300, -0.0, 12345.678901234567, 0x1p-1074,
                     6.02e23, -7.123456789e-12}) {
        const std::string s = io::format_double(v);
        CHECK(bit_equal(std::strtod(s.c_str(), nullptr), v));
    }
}

TEST_CASE("scheme json round trip is bit exact") {
    for (auto [family, d] : {std::pair<PolynomialFamily, std::size_t>{
                                 PolynomialFamily::chebyshev_u(), 4},
                             {PolynomialFamily::hermite(), 3}}) {
        const FiveBasisScheme s = build_scheme(family, d, default_alpha(d));
        const std::string path = tmp_path("scheme.json");
        io::save_scheme(s, path);
        const FiveBasisScheme r = io::load_scheme(path);

        CHECK(r.dim == s.dim);
        CHECK(bit_equal(r.alpha, s.alpha));
        CHECK(r.family.name() == s.family.name());
        REQUIRE(r.roots_x.size() == s.roots_x.size());
        for (std::size_t i = 0; i < s.roots_x.size(); ++i)
            CHECK(bit_equal(r.roots_x[i], s.roots_x[i]));
        for (std::size_t i = 0; i < s.roots_y.size(); ++i)
            CHECK(bit_equal(r.roots_y[i], s.roots_y[i]));
        for (std::size_t b = 0; b < 5; ++b) {
            const CMatrix& ma = s.bases[b].matrix();
            const CMatrix& mb = r.bases[b].matrix();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    CHECK(bit_equal(ma(i, j).real(), mb(i, j).real()));
                    CHECK(bit_equal(ma(i, j).imag(), mb(i, j).imag()));
                }
        }
    }
}

TEST_CASE("custom families travel inside scheme files") {
    const PolynomialFamily f =
        PolynomialFamily::custom("mine", {2.0, 2.0, 2.0, 2.0}, {0.0, 0.0, 0.0, 0.0},
                                 {1.0, 1.0, 1.0, 1.0}, 1.0);
    const FiveBasisScheme s = build_scheme(f, 3, default_alpha(3));
    const std::string path = tmp_path("custom_scheme.json");
    io::save_scheme(s, path);
    const FiveBasisScheme r = io::load_scheme(path);
    CHECK(r.family.name() == "mine");
    CHECK(r.family.is_custom());
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(bit_equal(r.family.a(n), f.a(n)));
        CHECK(bit_equal(r.family.c(n), f.c(n)));
    }
    // the reloaded family still drives validation
    CHECK(validate_scheme(r).pass(1e-8));
}

TEST_CASE("scheme loading rejects corrupt input") {
    CHECK_THROWS_AS(io::load_scheme(tmp_path("missing.json")), PreconditionError);

    const std::string garbled = tmp_path("garbled.json");
    write_file(garbled, "this is not json");
    CHECK_THROWS_AS(io::load_scheme(garbled), PreconditionError);

    // tampering with a basis entry breaks unitarity and must be caught
    const FiveBasisScheme s = build_scheme(PolynomialFamily::chebyshev_u(), 3, default_alpha(3));
    const std::string path = tmp_path("tampered.json");
    io::save_scheme(s, path);
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    j["bases"][1][0][0] = {0.9, 0.0};
    write_file(path, j.dump());
    CHECK_THROWS_AS(io::load_scheme(path), PreconditionError);

    j["bases"] = nlohmann::json::array({j["bases"][0]});
    write_file(path, j.dump());
    CHECK_THROWS_AS(io::load_scheme(path), PreconditionError);
}

TEST_CASE("outcome table csv round trip is bit exact") {
    OutcomeTable t(2, 3);
    t(0, 0) = 0.1 + 0.2;
    t(0, 1) = 1.0 / 3.0;
    t(0, 2) = 1e-300;
    t(1, 0) = -1.5e-7;
    t(1, 1) = 0.0;
    t(1, 2) = 98765432109876543.0;
    const std::string path = tmp_path("table.csv");
    io::save_table_csv(t, path);

    const std::string text = read_file(path);
    CHECK(text.substr(0, text.find('\n')) == "basis,outcome_0,outcome_1,outcome_2");

    const OutcomeTable r = io::load_table_csv(path);
    REQUIRE(r.rows == 2);
    REQUIRE(r.cols == 3);
    for (std::size_t i = 0; i < t.data.size(); ++i) CHECK(bit_equal(r.data[i], t.data[i]));
}

TEST_CASE("table csv loading rejects corrupt input") {
    CHECK_THROWS_AS(io::load_table_csv(tmp_path("missing.csv")), PreconditionError);

    const std::string path = tmp_path("bad.csv");
    write_file(path, "");
    CHECK_THROWS_AS(io::load_table_csv(path), PreconditionError);

    write_file(path, "basis,outcome_0\n0,1.2x\n");
    CHECK_THROWS_AS(io::load_table_csv(path), PreconditionError);

    write_file(path, "basis,outcome_0,outcome_1\n0,0.5,0.5\n1,1.0\n");
    CHECK_THROWS_AS(io::load_table_csv(path), PreconditionError);

    write_file(path, "basis,outcome_0\n");
    CHECK_THROWS_AS(io::load_table_csv(path), PreconditionError);
}

TEST_CASE("states load from vector or matrix form") {
    const std::string path = tmp_path("state.json");
    write_file(path, R"({"dim": 2, "vector": [[1, 0], [1, 0]]})");
    const DensityMatrix plus = io::load_state(path);
    CHECK(plus.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(plus.matrix()(0, 1).real() == doctest::Approx(0.5).epsilon(1e-15));

    io::save_state(plus, path);
    const DensityMatrix back = io::load_state(path);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(back.matrix()(i, j) - plus.matrix()(i, j)) <= 1e-15);

    write_file(path, R"({"dim": 3, "vector": [[1, 0], [0, 0]]})");
    CHECK_THROWS_AS(io::load_state(path), PreconditionError);
    write_file(path, R"({"dim": 2, "vector": [[0, 0], [0, 0]]})");
    CHECK_THROWS_AS(io::load_state(path), PreconditionError);
    write_file(path, R"({"dim": 2, "matrix": [[[0.9, 0], [0, 0]], [[0, 0], [0.4, 0]]]})");
    CHECK_THROWS_AS(io::load_state(path), PreconditionError); // trace != 1
}

TEST_CASE("recovery results serialize with status strings and an options echo") {
    const MeasurementScheme scheme = MeasurementScheme::from_bases(
        build_scheme(PolynomialFamily::chebyshev_u(), 2, default_alpha(2)));
    const HermitianMatrix target = HermitianMatrix::diagonal({1.0, 0.0});
    SolverOptions opts;
    opts.rel_tol = 1e-8;
    const RecoveryResult res = solve_least_squares(scheme, scheme.forward_map(target), opts);

    const std::string path = tmp_path("result.json");
    io::save_result(res, opts, path);
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    CHECK(j.at("solver") == "lsq");
    CHECK(j.at("status") == "converged");
    CHECK(j.at("converged") == true);
    CHECK(j.at("iterations").get<std::size_t>() == res.iterations);
    CHECK(j.at("purity_gap").get<double>() == res.purity_gap);
    CHECK(j.at("estimate").size() == 2);
    CHECK(j.at("pure_vector").size() == 2);
    CHECK(j.at("options").at("rel_tol").get<double>() == 1e-8);
    CHECK(j.at("options").at("constraint_norm") == "hilbert-schmidt");
}

TEST_CASE("certificates serialize with the failure flag") {
    const MeasurementScheme scheme = MeasurementScheme::from_bases(
        build_scheme(PolynomialFamily::chebyshev_u(), 2, default_alpha(2)));
    const Certificate cert = check_determination(scheme, 50, 13);
    const std::string path = tmp_path("cert.json");
    io::save_certificate(cert, path);
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    CHECK(j.at("kernel_dim").get<std::size_t>() == cert.kernel_dim);
    CHECK(j.at("c_estimate").get<double>() == cert.c_estimate);
    CHECK(j.at("failed").get<bool>() == cert.failed());
    CHECK(j.at("seed").get<std::uint64_t>() == 13);
    CHECK(j.at("worst_witness").size() == 2);
}

TEST_CASE("stats and histogram csv layout") {
    ExperimentConfig cfg;
    cfg.dim = 2;
    cfg.trials = 3;
    cfg.epsilon = 1e-3;
    cfg.seed = 3;
    cfg.solver.rel_tol = 1e-6;
    const ExperimentStats stats = run_experiment(cfg);

    const std::string spath = tmp_path("stats.csv");
    io::save_stats_csv(stats, spath);
    const std::string stext = read_file(spath);
    CHECK(stext.rfind("# mean=", 0) == 0);
    CHECK(stext.find("trial,rel_error,iterations,converged\n") != std::string::npos);
    CHECK(stext.find("\n0,") != std::string::npos);

    const std::string hpath = tmp_path("hist.csv");
    io::save_hist_csv(stats.histogram, hpath);
    const std::string htext = read_file(hpath);
    CHECK(htext.rfind("bin_lo,bin_hi,density\n", 0) == 0);
    // header plus one line per bin
    CHECK(std::count(htext.begin(), htext.end(), '\n') ==
          1 + static_cast<long>(stats.histogram.density.size()));
}

TEST_CASE("custom family files load and validate") {
    const std::string path = tmp_path("family.json");
    write_file(path, R"({"name": "u-clone", "A": [2, 2, 2, 2, 2], "B": [0, 0, 0, 0, 0],
                         "C": [1, 1, 1, 1, 1], "k0": 1.0})");
    const PolynomialFamily f = io::load_custom_family(path);
    CHECK(f.name() == "u-clone");
    const std::vector<double> r = f.roots(3);
    const std::vector<double> want = PolynomialFamily::chebyshev_u().roots(3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r[i] - want[i]) <= 1e-12);

    write_file(path, R"({"name": "broken", "A": [2], "B": [0], "k0": 1.0})");
    CHECK_THROWS_AS(io::load_custom_family(path), PreconditionError);
}

} // TEST_SUITE
