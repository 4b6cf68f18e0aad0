#include "softstab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "softstab/spectral.hpp"

namespace softstab {

namespace {

double diameter(const std::vector<Eigen::VectorXd>& states) {
  double d = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      d = std::max(d, (states[i] - states[j]).norm());
  return d;
}

// Largest violation of nonnegativity or unit block sums.
double simplex_drift(const BlockLayout& layout, const Eigen::VectorXd& x) {
  double drift = std::max(0.0, -x.minCoeff());
  for (Index a = 0; a < layout.num_blocks(); ++a)
    drift = std::max(drift, std::abs(x.segment(layout.offset(a), layout.dim(a)).sum() - 1.0));
  return drift;
}

}  // namespace

double contraction_factor(const AffineLogitSystem& system) {
  return 0.5 * block_tangent_norm(system, /*scaled=*/true);
}

TrajectoryRecord picard(const AffineLogitSystem& system, const ProductPointd& x0,
                        const PicardOptions& options) {
  if (!(options.tol > 0.0)) throw PreconditionError("picard: tol must be positive");
  if (!(x0.layout() == system.layout()))
    throw DimensionError("picard: start point does not match system");

  TrajectoryRecord rec;
  rec.kind = TrajectoryRecord::Kind::Picard;
  rec.layout = system.layout();
  rec.q_new = contraction_factor(system);
  rec.guaranteed = rec.q_new < 1.0;
  const double threshold = rec.guaranteed ? options.tol * (1.0 - rec.q_new) : options.tol;

  Eigen::VectorXd x = x0.values();
  rec.samples.push_back(x);
  rec.times.push_back(0.0);
  Index steps = 0;
  for (Index k = 0; k < options.max_iter; ++k) {
    Eigen::VectorXd next = response_values(system, x);
    const double r = (next - x).norm();
    rec.residuals.push_back(r);
    x = std::move(next);
    steps = k + 1;
    if (options.record_samples) {
      rec.samples.push_back(x);
      rec.times.push_back(static_cast<double>(steps));
    }
    if (r <= threshold) {
      rec.converged = true;
      break;
    }
  }
  if (!options.record_samples && steps > 0) {
    rec.samples.push_back(x);
    rec.times.push_back(static_cast<double>(steps));
  }
  if (rec.converged) rec.fixed_point = x;

  if (rec.guaranteed && !rec.residuals.empty()) {
    const double r0 = rec.residuals.front();
    for (double t : rec.times)
      rec.envelope.push_back(std::pow(rec.q_new, t) * r0 / (1.0 - rec.q_new));
  }
  return rec;
}

TrajectoryRecord logit_ode(const AffineLogitSystem& system, const ProductPointd& x0,
                           const OdeOptions& options) {
  if (!(options.dt > 0.0) || !(options.dt < 1.0))
    throw PreconditionError("logit_ode: dt must lie in (0, 1)");
  if (!(options.t_end >= 0.0)) throw PreconditionError("logit_ode: t_end must be nonnegative");
  if (options.sample_every < 1) throw PreconditionError("logit_ode: sample_every must be >= 1");
  if (!(x0.layout() == system.layout()))
    throw DimensionError("logit_ode: start point does not match system");

  const BlockLayout& layout = system.layout();
  TrajectoryRecord rec;
  rec.kind = TrajectoryRecord::Kind::Ode;
  rec.layout = layout;
  rec.q_new = contraction_factor(system);
  rec.guaranteed = rec.q_new < 1.0;

  std::optional<Eigen::VectorXd> star;
  if (rec.guaranteed) {
    PicardOptions po;
    po.tol = 1e-13;
    po.max_iter = 100000;
    po.record_samples = false;
    const TrajectoryRecord fp = picard(system, x0, po);
    if (fp.converged) star = fp.fixed_point;
  }

  auto field = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return response_values(system, x) - x;
  };
  auto record = [&](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& fx) {
    rec.times.push_back(t);
    rec.samples.push_back(x);
    rec.residuals.push_back(fx.norm());
    if (star) rec.envelope.push_back(std::exp(-(1.0 - rec.q_new) * t) * (x0.values() - *star).norm());
  };

  Eigen::VectorXd x = x0.values();
  Eigen::VectorXd k1 = field(x);
  record(0.0, x, k1);

  const auto steps = static_cast<Index>(std::ceil(options.t_end / options.dt - 1e-9));
  double t = 0.0;
  for (Index step = 1; step <= steps; ++step) {
    const double h = std::min(options.dt, options.t_end - t);
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (step == steps) ? options.t_end : static_cast<double>(step) * options.dt;

    const double drift = simplex_drift(layout, x);
    rec.max_drift = std::max(rec.max_drift, drift);
    if (drift > kFeasibilityTol) {
      x = ProductPointd::normalize(layout, x).values();
      ++rec.renormalizations;
    }
    k1 = field(x);
    if (step % options.sample_every == 0 || step == steps) record(t, x, k1);
  }

  rec.converged = rec.residuals.back() <= options.tol;
  if (rec.converged) rec.fixed_point = x;
  return rec;
}

CollapseRecord multi_start_collapse(const AffineLogitSystem& system,
                                    const std::vector<ProductPointd>& starts, Index max_iter,
                                    double tol) {
  if (starts.size() < 2) throw PreconditionError("multi_start_collapse: need at least two starts");
  if (!(tol >= 0.0)) throw PreconditionError("multi_start_collapse: tol must be nonnegative");
  std::vector<Eigen::VectorXd> states;
  states.reserve(starts.size());
  for (const auto& s : starts) {
    if (!(s.layout() == system.layout()))
      throw DimensionError("multi_start_collapse: start point does not match system");
    states.push_back(s.values());
  }

  CollapseRecord rec;
  rec.diameters.push_back(diameter(states));
  const bool stop_early = tol > 0.0;
  for (Index k = 0; k < max_iter; ++k) {
    if (stop_early && rec.diameters.back() <= tol) break;
    for (auto& s : states) s = response_values(system, s);
    rec.diameters.push_back(diameter(states));
  }
  rec.converged = rec.diameters.back() <= tol;
  return rec;
}

}  // namespace softstab
