#pragma once

#include <string>

#include "oscchain/config.hpp"

namespace oscchain {

struct ExperimentResult {
  std::string csv;
  bool pass = true;  // only oracle-check can fail
};

// Fixed 17-significant-digit, locale-independent float formatting used in
// every CSV cell; identical configs give byte-identical output.
std::string format_csv_double(double v);

// Lowest-k spectrum of H and of -ln(step kernel eigenvalues)/eps.
ExperimentResult run_spectrum(RunConfig config, int threads = 1);

// (eps, <dfwd^2>, <dsym^2>, gap, gap * 2 eps Z) for a decreasing eps list.
ExperimentResult run_ambiguity(RunConfig config, int threads = 1);

// Two-point tables for classical / quantum / quantum-antiordered products.
ExperimentResult run_correlate(RunConfig config, int threads = 1);

// Brute-force vs operator-formalism discrepancy table plus the
// exterior-irrelevance fixtures. pass = false when any row fails.
ExperimentResult run_oracle_check(RunConfig config, int threads = 1);

}  // namespace oscchain
