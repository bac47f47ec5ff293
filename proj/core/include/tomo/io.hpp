#pragma once

#include <string>

#include "tomo/bases.hpp"
#include "tomo/certify.hpp"
#include "tomo/experiment.hpp"
#include "tomo/measurement.hpp"
#include "tomo/recovery.hpp"

// File formats:
//  - JSON matrices: array of rows, each entry a [re, im] pair (row-major);
//    doubles round-trip bit-exactly.
//  - CSV: one header line, then rows of %.17g values.
// Loaders throw PreconditionError on malformed input.
namespace tomo::io {

std::string format_double(double v); // %.17g

void save_scheme(const FiveBasisScheme& scheme, const std::string& path);
FiveBasisScheme load_scheme(const std::string& path);

// custom polynomial family file: {name, A:[...], B:[...], C:[...], k0}
PolynomialFamily load_custom_family(const std::string& path);

// state file: {dim, matrix:[...]} (density matrix) or {dim, vector:[[re,im]...]}
DensityMatrix load_state(const std::string& path);
void save_state(const DensityMatrix& state, const std::string& path);

// header "basis,outcome_0,...,outcome_{m-1}", then one line per POVM
void save_table_csv(const OutcomeTable& table, const std::string& path);
OutcomeTable load_table_csv(const std::string& path);

void save_result(const RecoveryResult& result, const SolverOptions& opts,
                 const std::string& path);

void save_certificate(const Certificate& cert, const std::string& path);

// header "trial,rel_error,iterations,converged" plus "# summary ..." comment
void save_stats_csv(const ExperimentStats& stats, const std::string& path);
// header "bin_lo,bin_hi,density", 100 rows
void save_hist_csv(const Histogram& hist, const std::string& path);

} // namespace tomo::io
