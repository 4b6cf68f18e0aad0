#include "softstab/experiments.hpp"

#include <cmath>
#include <sstream>

#include "softstab/certificates.hpp"
#include "softstab/io.hpp"
#include "softstab/parallel.hpp"

namespace softstab {

std::vector<double> pitchfork_grid(double beta_min, double beta_max, Index steps) {
  if (!(beta_min > 0.0) || !(beta_max >= beta_min))
    throw PreconditionError("pitchfork_grid: need 0 < beta_min <= beta_max");
  if (steps < 0) throw PreconditionError("pitchfork_grid: steps must be nonnegative");
  if (steps == 0) return {beta_min};
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps + 1));
  for (Index i = 0; i <= steps; ++i) {
    const double t = (beta_min * static_cast<double>(steps - i) + beta_max * static_cast<double>(i)) /
                     static_cast<double>(steps);
    grid.push_back(std::round(t * 1e12) / 1e12);
  }
  return grid;
}

std::string pitchfork_csv(const PitchforkDiagram& diagram) {
  std::ostringstream out;
  CsvWriter csv(out, {"beta", "m", "stability"});
  csv.row({format_double(1.0), "", "marker_old"});
  csv.row({format_double(2.0), "", "marker_new"});
  for (std::size_t i = 0; i < diagram.beta_grid.size(); ++i)
    for (const auto& r : diagram.roots[i])
      csv.row({format_double(diagram.beta_grid[i]), format_double(r.m),
               r.stable ? "stable" : "unstable"});
  return out.str();
}

std::vector<SeparationRow> separation_rows(Index max_blocks, double alpha) {
  if (max_blocks < 1) throw PreconditionError("separation_rows: max_blocks must be >= 1");
  std::vector<SeparationRow> rows;
  for (Index m = 1; m <= max_blocks; m *= 2) {
    const AffineLogitSystem system = hadamard_separation(m, alpha);
    rows.push_back({m, certify_contraction(system).q_new, certify_dobrushin(system).rho});
  }
  return rows;
}

std::string separation_csv(const std::vector<SeparationRow>& rows) {
  std::ostringstream out;
  CsvWriter csv(out, {"m", "q_l2", "rho_C"});
  for (const auto& r : rows) csv.row({std::to_string(r.m), format_double(r.q_l2), format_double(r.rho_c)});
  return out.str();
}

std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t draw) {
  return splitmix64(seed ^ splitmix64(draw));
}

std::vector<GainRow> gain_rows(Index n, Index draws, const std::vector<RandomKind>& kinds,
                               std::uint64_t seed, const RandomOptions& options) {
  if (draws < 0) throw PreconditionError("gain_rows: draws must be nonnegative");
  const auto per_kind = static_cast<std::size_t>(draws);
  std::vector<GainRow> rows(kinds.size() * per_kind);
  parallel_for(rows.size(), [&](std::size_t i) {
    const RandomKind kind = kinds[i / per_kind];
    const std::uint64_t s = draw_seed(seed, i % per_kind);
    const BetaRange range = certified_beta_range(random_instance(kind, n, 1.0, {s, 0}, options));
    rows[i] = {kind, s, range.norm_ambient, range.norm_tangent, range.gain};
  });
  return rows;
}

std::string gain_csv(const std::vector<GainRow>& rows) {
  std::ostringstream out;
  CsvWriter csv(out, {"kind", "seed", "norm_ambient", "norm_tangent", "gain"});
  for (const auto& r : rows)
    csv.row({std::string(to_string(r.kind)), std::to_string(r.seed), format_double(r.norm_ambient),
             format_double(r.norm_tangent), format_double(r.gain)});
  return out.str();
}

std::vector<NewlyCertifiedInstance> newly_certified(const NewlyCertifiedOptions& options) {
  if (options.instances < 0 || options.starts < 1 || options.iterations < 0)
    throw PreconditionError("newly_certified: invalid counts");
  if (!(options.beta_frac > 0.0))
    throw PreconditionError("newly_certified: beta_frac must be positive");
  std::vector<NewlyCertifiedInstance> rows(static_cast<std::size_t>(options.instances));
  const std::uint64_t start_seed = splitmix64(options.seed ^ 0xD1CE5EEDULL);

  parallel_for(rows.size(), [&](std::size_t i) {
    NewlyCertifiedInstance& row = rows[i];
    const std::uint64_t s = draw_seed(options.seed, i);
    std::optional<AffineLogitSystem> system;
    for (Index stream = 0; stream < options.max_retries; ++stream) {
      AffineLogitSystem candidate = random_instance(RandomKind::Shifted, options.n, options.scale,
                                                    {s, static_cast<std::uint64_t>(stream)},
                                                    options.random);
      const BetaRange range = certified_beta_range(candidate);
      row.seed = {s, static_cast<std::uint64_t>(stream)};
      row.beta_old = range.beta_old;
      row.beta_new = range.beta_new;
      row.beta = options.beta_frac * range.beta_new;
      row.in_gap = row.beta_old < row.beta && row.beta < row.beta_new;
      system = candidate.with_uniform_beta(row.beta);
      if (row.in_gap) break;
    }
    row.q_new = contraction_factor(*system);

    if (options.starts == 1) {
      row.diameters.assign(static_cast<std::size_t>(options.iterations + 1), 0.0);
      return;
    }
    std::vector<ProductPointd> starts;
    for (Index j = 0; j < options.starts; ++j)
      starts.push_back(dirichlet_start(
          system->layout(), {start_seed, static_cast<std::uint64_t>(i) * 1000003ULL +
                                             static_cast<std::uint64_t>(j)}));
    row.diameters = multi_start_collapse(*system, starts, options.iterations, 0.0).diameters;
  });
  return rows;
}

std::string newly_certified_diameters_csv(const std::vector<NewlyCertifiedInstance>& rows) {
  std::ostringstream out;
  CsvWriter csv(out, {"instance", "step", "diameter"});
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].diameters.size(); ++k)
      csv.row({std::to_string(i), std::to_string(k), format_double(rows[i].diameters[k])});
  return out.str();
}

std::string newly_certified_thresholds_csv(const std::vector<NewlyCertifiedInstance>& rows) {
  std::ostringstream out;
  CsvWriter csv(out, {"instance", "seed", "stream", "beta_old", "beta", "beta_new", "q_new"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv.row({std::to_string(i), std::to_string(r.seed.seed), std::to_string(r.seed.stream),
             format_double(r.beta_old), format_double(r.beta), format_double(r.beta_new),
             format_double(r.q_new)});
  }
  return out.str();
}

}  // namespace softstab
