#ifndef CONORMAL_EXPERIMENT_HPP
#define CONORMAL_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "conormal/descriptors.hpp"

namespace conormal {

/// Config-driven experiment runner.  Every run is deterministic given
/// (config, seed): fixed Monte Carlo seeds and in-order reduction of the
/// parallel cells, so re-running byte-reproduces the CSV outputs.
struct ExperimentConfig {
  Json geometry;
  Json family;
  int h_count = 40;
  std::vector<Real> delta_grid{0.4, 0.2, 0.1, 0.05};
  std::vector<Real> alpha_grid{0.2, 0.1, 0.05};
  std::vector<Real> t0_grid{0.25, 0.125};
  std::vector<std::pair<Real, Real>> arcs;
  Real strip_width = 0.5;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  long long mc_samples = 1'000'000;
  int jobs = 1;
  Json tolerances = Json::object();
  Json symbols = Json::array();

  static ExperimentConfig parse(const Json& j);

  Hypersurface hypersurface() const { return hypersurface_from_json(geometry); }
  EigenFamily family_object() const { return family_from_json(family); }
  std::vector<Real> ladder() const;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 tolerance failure
  Json summary;
};

RunResult run_decay_sweep(const ExperimentConfig& cfg);
RunResult run_diagnostic(const ExperimentConfig& cfg);
RunResult run_rellich_check(const ExperimentConfig& cfg);
RunResult run_matrix_element(const ExperimentConfig& cfg);
RunResult run_restriction_norms(const ExperimentConfig& cfg);

/// Full-precision CSV cell ('.' decimal separator, LF line endings).
std::string csv_number(Real v);

}  // namespace conormal

#endif  // CONORMAL_EXPERIMENT_HPP
