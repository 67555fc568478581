#pragma once

#include <string>

#include "levmem/config.hpp"

namespace levmem {

// Subcommand pipelines. Each writes its CSVs, a plain-text report where
// applicable, and a run manifest (config echo, tool version, wall time,
// output list) into out_dir. Config problems throw ConfigError; solver
// failures throw std::runtime_error; a reported non-convergence returns a
// nonzero code with the outputs still written.
int run_solve_elliptic(const ExperimentConfig& cfg, const std::string& out_dir,
                       bool dump_operator = false);
int run_solve_parabolic(const ExperimentConfig& cfg, const std::string& out_dir);
int run_solve_memory(const ExperimentConfig& cfg, const std::string& out_dir);
int run_study_fracpoisson(const ExperimentConfig& cfg, const std::string& out_dir);
int run_study_kernel_limit(const ExperimentConfig& cfg, const std::string& out_dir);
int run_study_threshold(const ExperimentConfig& cfg, const std::string& out_dir);

// Closed-form benchmark solution of the constant-source problem for the
// fractional kernel on (-1, 1): v(x) = (1 - x^2)^s / beta_s with
// beta_s = 2^{2s} Gamma(s + 1) Gamma((1 + 2s)/2) / Gamma(1/2).
double fracpoisson_oracle(double s, double x);

} // namespace levmem
