#include "tomo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tomo/errors.hpp"

namespace tomo::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw PreconditionError("matrix json: expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw PreconditionError("matrix json: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (!e.is_array() || e.size() != 2)
                throw PreconditionError("matrix json: entries must be [re, im] pairs");
            m(i, c) = cplx{e[0].get<double>(), e[1].get<double>()};
        }
    }
    return m;
}

json hermitian_to_json(const HermitianMatrix& h) { return matrix_to_json(h.matrix()); }

HermitianMatrix hermitian_from_json(const json& j) {
    return HermitianMatrix::from_matrix(matrix_from_json(j), 1e-9);
}

json family_to_json(const PolynomialFamily& f) {
    json out;
    out["name"] = f.name();
    if (f.is_custom()) {
        // custom families carry their recurrence inline; builtins are
        // reconstructed by name
        out["A"] = f.table_a();
        out["B"] = f.table_b();
        out["C"] = f.table_c();
        out["k0"] = f.k0();
    }
    return out;
}

PolynomialFamily family_from_json(const json& j) {
    const std::string name = j.at("name").get<std::string>();
    if (j.contains("A"))
        return PolynomialFamily::custom(name, j.at("A").get<std::vector<double>>(),
                                        j.at("B").get<std::vector<double>>(),
                                        j.at("C").get<std::vector<double>>(),
                                        j.at("k0").get<double>());
    if (name == "chebyshev-u") return PolynomialFamily::chebyshev_u();
    if (name == "hermite") return PolynomialFamily::hermite();
    throw PreconditionError("family json: unknown builtin '" + name +
                            "' and no recurrence coefficients given");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw PreconditionError("malformed json in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary); // no platform newline surprises
    if (!out) throw PreconditionError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw PreconditionError("short write to " + path);
}

} // namespace

void save_scheme(const FiveBasisScheme& scheme, const std::string& path) {
    json j;
    j["dim"] = scheme.dim;
    j["alpha"] = scheme.alpha;
    j["family"] = family_to_json(scheme.family);
    json bases = json::array();
    for (const auto& b : scheme.bases) bases.push_back(matrix_to_json(b.matrix()));
    j["bases"] = std::move(bases);
    j["roots_x"] = scheme.roots_x;
    j["roots_y"] = scheme.roots_y;
    write_text_file(path, j.dump(2) + "\n");
}

FiveBasisScheme load_scheme(const std::string& path) {
    const json j = load_json_file(path);
    try {
        const std::size_t d = j.at("dim").get<std::size_t>();
        const json& jb = j.at("bases");
        if (!jb.is_array() || jb.size() != 5)
            throw PreconditionError("scheme json: expected exactly 5 bases");
        auto basis = [&](std::size_t i) {
            CMatrix m = matrix_from_json(jb[i]);
            if (m.rows() != d || m.cols() != d)
                throw PreconditionError("scheme json: basis dimension mismatch");
            return OrthonormalBasis(std::move(m));
        };
        return FiveBasisScheme{d,
                               j.at("alpha").get<double>(),
                               family_from_json(j.at("family")),
                               {basis(0), basis(1), basis(2), basis(3), basis(4)},
                               j.at("roots_x").get<std::vector<double>>(),
                               j.at("roots_y").get<std::vector<double>>()};
    } catch (const json::exception& e) {
        throw PreconditionError("scheme json " + path + ": " + e.what());
    }
}

PolynomialFamily load_custom_family(const std::string& path) {
    const json j = load_json_file(path);
    try {
        return PolynomialFamily::custom(j.at("name").get<std::string>(),
                                        j.at("A").get<std::vector<double>>(),
                                        j.at("B").get<std::vector<double>>(),
                                        j.at("C").get<std::vector<double>>(),
                                        j.at("k0").get<double>());
    } catch (const json::exception& e) {
        throw PreconditionError("family json " + path + ": " + e.what());
    }
}

DensityMatrix load_state(const std::string& path) {
    const json j = load_json_file(path);
    try {
        const std::size_t d = j.at("dim").get<std::size_t>();
        if (j.contains("vector")) {
            const json& jv = j.at("vector");
            if (!jv.is_array() || jv.size() != d)
                throw PreconditionError("state json: vector length mismatch");
            std::vector<cplx> v(d);
            double n2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                v[i] = cplx{jv[i][0].get<double>(), jv[i][1].get<double>()};
                n2 += std::norm(v[i]);
            }
            if (n2 <= 0.0) throw PreconditionError("state json: zero vector");
            const double inv = 1.0 / std::sqrt(n2);
            for (cplx& z : v) z *= inv;
            return DensityMatrix(HermitianMatrix::outer(v));
        }
        HermitianMatrix h = hermitian_from_json(j.at("matrix"));
        if (h.dim() != d) throw PreconditionError("state json: matrix dimension mismatch");
        return DensityMatrix(std::move(h));
    } catch (const json::exception& e) {
        throw PreconditionError("state json " + path + ": " + e.what());
    }
}

void save_state(const DensityMatrix& state, const std::string& path) {
    json j;
    j["dim"] = state.dim();
    j["matrix"] = hermitian_to_json(state.matrix());
    write_text_file(path, j.dump(2) + "\n");
}

void save_table_csv(const OutcomeTable& table, const std::string& path) {
    std::ostringstream out;
    out << "basis";
    for (std::size_t j = 0; j < table.cols; ++j) out << ",outcome_" << j;
    out << "\n";
    for (std::size_t i = 0; i < table.rows; ++i) {
        out << i;
        for (std::size_t j = 0; j < table.cols; ++j) out << "," << format_double(table(i, j));
        out << "\n";
    }
    write_text_file(path, out.str());
}

OutcomeTable load_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw PreconditionError("table csv: empty file " + path);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) { // row label
                first = false;
                continue;
            }
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw PreconditionError("table csv: bad number '" + cell + "' in " + path);
            }
            if (pos != cell.size())
                throw PreconditionError("table csv: bad number '" + cell + "' in " + path);
            row.push_back(v);
        }
        if (row.empty()) throw PreconditionError("table csv: empty row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw PreconditionError("table csv: no data rows in " + path);
    OutcomeTable t(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < t.rows; ++i) {
        if (rows[i].size() != t.cols) throw PreconditionError("table csv: ragged rows in " + path);
        for (std::size_t j = 0; j < t.cols; ++j) t(i, j) = rows[i][j];
    }
    return t;
}

void save_result(const RecoveryResult& result, const SolverOptions& opts,
                 const std::string& path) {
    json j;
    j["solver"] = result.solver;
    j["estimate"] = hermitian_to_json(result.estimate);
    json pv = json::array();
    for (const cplx& z : result.pure_vector) pv.push_back(json::array({z.real(), z.imag()}));
    j["pure_vector"] = std::move(pv);
    j["purity_gap"] = result.purity_gap;
    j["residual"] = result.residual;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["status"] = result.status == SolveStatus::Converged      ? "converged"
                  : result.status == SolveStatus::IterationLimit ? "iteration-limit"
                                                                 : "infeasible";
    j["options"] = {{"max_iters", opts.max_iters},
                    {"rel_tol", opts.rel_tol},
                    {"penalty", opts.penalty},
                    {"constraint_norm", opts.constraint_norm == ConstraintNorm::HilbertSchmidt
                                            ? "hilbert-schmidt"
                                            : "sup-row-l1"}};
    write_text_file(path, j.dump(2) + "\n");
}

void save_certificate(const Certificate& cert, const std::string& path) {
    json j;
    j["kernel_dim"] = cert.kernel_dim;
    j["kernel_positivity_ok"] = cert.kernel_positivity_ok;
    j["c_estimate"] = cert.c_estimate;
    j["worst_witness"] = hermitian_to_json(cert.worst_witness);
    j["samples_used"] = cert.samples_used;
    j["seed"] = cert.seed;
    j["failed"] = cert.failed();
    write_text_file(path, j.dump(2) + "\n");
}

void save_stats_csv(const ExperimentStats& stats, const std::string& path) {
    std::ostringstream out;
    out << "# mean=" << format_double(stats.mean) << " q96=" << format_double(stats.q96)
        << " q99=" << format_double(stats.q99) << " q9975=" << format_double(stats.q9975)
        << " excluded=" << stats.excluded << " trials=" << stats.trials.size() << "\n";
    out << "trial,rel_error,iterations,converged\n";
    for (std::size_t t = 0; t < stats.trials.size(); ++t) {
        const TrialRecord& r = stats.trials[t];
        out << t << "," << format_double(r.rel_error) << "," << r.iterations << ","
            << (r.converged ? 1 : 0) << "\n";
    }
    write_text_file(path, out.str());
}

void save_hist_csv(const Histogram& hist, const std::string& path) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,density\n";
    const std::size_t bins = hist.density.size();
    const double width = (hist.hi - hist.lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out << format_double(hist.lo + width * static_cast<double>(b)) << ","
            << format_double(hist.lo + width * static_cast<double>(b + 1)) << ","
            << format_double(hist.density[b]) << "\n";
    }
    write_text_file(path, out.str());
}

} // namespace tomo::io
