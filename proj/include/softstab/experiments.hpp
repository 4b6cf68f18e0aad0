#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softstab/dynamics.hpp"
#include "softstab/instances.hpp"

namespace softstab {

/// steps + 1 evenly spaced values from beta_min to beta_max, rounded to 12
/// decimals so that grid points such as 2.0 are exact.
std::vector<double> pitchfork_grid(double beta_min, double beta_max, Index steps);

/// Columns beta, m, stability. Two marker rows (beta = 1, stability
/// "marker_old"; beta = 2, "marker_new") come first with m left empty.
std::string pitchfork_csv(const PitchforkDiagram& diagram);

struct SeparationRow {
  Index m = 0;
  double q_l2 = 0.0;
  double rho_c = 0.0;
};

/// Hadamard instances for m = 1, 2, 4, ... up to max_blocks.
std::vector<SeparationRow> separation_rows(Index max_blocks, double alpha);
std::string separation_csv(const std::vector<SeparationRow>& rows);

/// Seed of draw `draw` under base seed `seed`; shared by all kinds so that
/// shifted and unshifted draws have the same tangent part.
std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t draw);

struct GainRow {
  RandomKind kind = RandomKind::Gaussian;
  std::uint64_t seed = 0;
  double norm_ambient = 0.0;
  double norm_tangent = 0.0;
  double gain = 0.0;
};

/// `draws` instances of each kind, ordered by kind then draw.
std::vector<GainRow> gain_rows(Index n, Index draws, const std::vector<RandomKind>& kinds,
                               std::uint64_t seed, const RandomOptions& options = {});
std::string gain_csv(const std::vector<GainRow>& rows);

struct NewlyCertifiedOptions {
  Index instances = 12;
  Index n = 20;
  Index starts = 10;
  double beta_frac = 0.72;
  std::uint64_t seed = 0;
  Index iterations = 200;
  double scale = 1.0;
  /// Streams tried per instance before giving up on beta_old < beta.
  Index max_retries = 64;
  RandomOptions random;
};

struct NewlyCertifiedInstance {
  SeedSpec seed;
  double beta_old = 0.0;
  double beta = 0.0;
  double beta_new = 0.0;
  double q_new = 0.0;
  /// beta_old < beta < beta_new held for the accepted stream.
  bool in_gap = false;
  std::vector<double> diameters;
};

/// Shifted non-symmetric instances at beta = beta_frac * beta_new, each run
/// from `starts` Dirichlet points for a fixed number of lockstep Picard steps.
std::vector<NewlyCertifiedInstance> newly_certified(const NewlyCertifiedOptions& options);

/// Columns instance, step, diameter.
std::string newly_certified_diameters_csv(const std::vector<NewlyCertifiedInstance>& rows);
/// Columns instance, seed, stream, beta_old, beta, beta_new, q_new.
std::string newly_certified_thresholds_csv(const std::vector<NewlyCertifiedInstance>& rows);

}  // namespace softstab
