#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "softstab/certificates.hpp"
#include "softstab/dynamics.hpp"
#include "softstab/experiments.hpp"
#include "softstab/instances.hpp"
#include "softstab/io.hpp"

namespace {

using namespace softstab;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;

// Prints to stdout when path is empty, otherwise writes the file.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_text_file(path, content);
}

std::string default_thresholds_path(const std::string& csv_out) {
  if (csv_out.empty() || csv_out == "-") return "";
  const auto dot = csv_out.rfind('.');
  const auto slash = csv_out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return csv_out + "_thresholds";
  return csv_out.substr(0, dot) + "_thresholds" + csv_out.substr(dot);
}

ProductPointd resolve_start(const std::string& spec, const BlockLayout& layout) {
  if (spec.empty() || spec == "uniform") return ProductPointd::uniform(layout);
  if (spec.rfind("dirichlet:", 0) == 0) {
    const std::string seed = spec.substr(10);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument(seed);
    } catch (const std::exception&) {
      throw ParseError("--start: bad dirichlet seed '" + seed + "'");
    }
    return dirichlet_start(layout, {value, 0});
  }
  if (spec.front() == '[') return parse_point_json(spec, layout);
  std::ifstream in(spec);
  if (!in) throw ParseError("--start: cannot open '" + spec + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_point_json(ss.str(), layout);
}

struct CertifyArgs {
  std::string system;
  std::string json_out;
};

int run_certify(const CertifyArgs& args) {
  const AffineLogitSystem system = read_system_file(args.system);
  const std::string json = report_to_json(certify(system));
  if (args.json_out.empty()) {
    std::cout << json;
  } else {
    write_text_file(args.json_out, json);
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string system;
  std::string mode = "picard";
  std::string start;
  double tol = 1e-10;
  Index max_iter = 10000;
  double t_end = 50.0;
  double dt = 0.01;
  Index sample_every = 1;
  std::string csv_out;
};

int run_simulate(const SimulateArgs& args) {
  const AffineLogitSystem system = read_system_file(args.system);
  const ProductPointd x0 = resolve_start(args.start, system.layout());
  TrajectoryRecord rec;
  if (args.mode == "picard") {
    PicardOptions o;
    o.tol = args.tol;
    o.max_iter = args.max_iter;
    rec = picard(system, x0, o);
  } else {
    OdeOptions o;
    o.t_end = args.t_end;
    o.dt = args.dt;
    o.tol = args.tol;
    o.sample_every = args.sample_every;
    rec = logit_ode(system, x0, o);
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, rec);
  emit(args.csv_out, csv.str());
  if (!args.csv_out.empty()) {
    std::cerr << (rec.converged ? "converged" : "not converged") << " after "
              << (rec.kind == TrajectoryRecord::Kind::Picard ? rec.residuals.size()
                                                              : rec.samples.size() - 1)
              << (rec.kind == TrajectoryRecord::Kind::Picard ? " steps" : " samples")
              << ", q_new = " << format_double(rec.q_new)
              << (rec.guaranteed ? "" : " (no contraction guarantee)") << "\n";
  }
  return rec.converged ? kExitOk : kExitNotConverged;
}

struct PitchforkArgs {
  double beta_min = 0.1;
  double beta_max = 4.0;
  Index steps = 39;
  double tol = 1e-14;
  std::string csv_out;
};

int run_pitchfork(const PitchforkArgs& args) {
  const auto grid = pitchfork_grid(args.beta_min, args.beta_max, args.steps);
  emit(args.csv_out, pitchfork_csv(pitchfork_diagram(grid, args.tol)));
  return kExitOk;
}

struct SeparationArgs {
  Index max_blocks = 32;
  double alpha = 1.0;
  std::string csv_out;
};

int run_separation(const SeparationArgs& args) {
  emit(args.csv_out, separation_csv(separation_rows(args.max_blocks, args.alpha)));
  return kExitOk;
}

struct GainArgs {
  Index n = 32;
  Index draws = 200;
  std::vector<std::string> kinds{"gaussian", "gaussian_symmetric", "shifted", "shifted_symmetric"};
  std::uint64_t seed = 1;
  double shift_scale = 3.0;
  std::string csv_out;
};

int run_gain(const GainArgs& args) {
  std::vector<RandomKind> kinds;
  for (const auto& k : args.kinds) kinds.push_back(parse_random_kind(k));
  RandomOptions options;
  options.shift_scale = args.shift_scale;
  emit(args.csv_out, gain_csv(gain_rows(args.n, args.draws, kinds, args.seed, options)));
  return kExitOk;
}

struct NewlyCertifiedArgs {
  NewlyCertifiedOptions options;
  double target = 1e-10;
  std::string csv_out;
  std::string thresholds_out;
};

int run_newly_certified(const NewlyCertifiedArgs& args) {
  const auto rows = newly_certified(args.options);
  emit(args.csv_out, newly_certified_diameters_csv(rows));
  const std::string thresholds = args.thresholds_out.empty()
                                     ? default_thresholds_path(args.csv_out)
                                     : args.thresholds_out;
  if (!thresholds.empty()) write_text_file(thresholds, newly_certified_thresholds_csv(rows));

  int code = kExitOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].in_gap) {
      std::cerr << "instance " << i << ": beta is not strictly between beta_old and beta_new\n";
      code = kExitNotConverged;
    }
    if (!rows[i].diameters.empty() && !(rows[i].diameters.back() < args.target)) {
      std::cerr << "instance " << i << ": final diameter " << format_double(rows[i].diameters.back())
                << " is not below " << format_double(args.target) << "\n";
      code = kExitNotConverged;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability certificates and dynamics for affine softmax systems"};
  app.require_subcommand(1);
  int code = kExitOk;

  CertifyArgs certify_args;
  auto* certify_cmd = app.add_subcommand("certify", "Certificate report for a system JSON file");
  certify_cmd->add_option("--system", certify_args.system, "System JSON")->required();
  certify_cmd->add_option("--json-out", certify_args.json_out, "Write the report here");
  certify_cmd->callback([&] { code = run_certify(certify_args); });

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Picard iteration or logit ODE trajectory");
  sim_cmd->add_option("--system", sim_args.system, "System JSON")->required();
  sim_cmd->add_option("--mode", sim_args.mode)->check(CLI::IsMember({"picard", "ode"}));
  sim_cmd->add_option("--start", sim_args.start,
                      "uniform, dirichlet:<seed>, an inline JSON array, or a JSON file");
  sim_cmd->add_option("--tol", sim_args.tol)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--max-iter", sim_args.max_iter)->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--t-end", sim_args.t_end)->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--dt", sim_args.dt);
  sim_cmd->add_option("--sample-every", sim_args.sample_every)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--csv-out", sim_args.csv_out);
  sim_cmd->callback([&] { code = run_simulate(sim_args); });

  PitchforkArgs pf_args;
  auto* pf_cmd = app.add_subcommand("pitchfork", "Two-action fixed points over a beta grid");
  pf_cmd->add_option("--beta-min", pf_args.beta_min)->check(CLI::PositiveNumber);
  pf_cmd->add_option("--beta-max", pf_args.beta_max)->check(CLI::PositiveNumber);
  pf_cmd->add_option("--steps", pf_args.steps, "Number of grid intervals")
      ->check(CLI::NonNegativeNumber);
  pf_cmd->add_option("--tol", pf_args.tol)->check(CLI::PositiveNumber);
  pf_cmd->add_option("--csv-out", pf_args.csv_out);
  pf_cmd->callback([&] { code = run_pitchfork(pf_args); });

  SeparationArgs sep_args;
  auto* sep_cmd = app.add_subcommand("separation", "Hadamard block systems, l2 vs Dobrushin");
  sep_cmd->add_option("--max-blocks", sep_args.max_blocks)->check(CLI::PositiveNumber);
  sep_cmd->add_option("--alpha", sep_args.alpha)->check(CLI::PositiveNumber);
  sep_cmd->add_option("--csv-out", sep_args.csv_out);
  sep_cmd->callback([&] { code = run_separation(sep_args); });

  GainArgs gain_args;
  auto* gain_cmd = app.add_subcommand("gain", "Certified beta range gain on random systems");
  gain_cmd->add_option("--n", gain_args.n)->check(CLI::Range(2, 512));
  gain_cmd->add_option("--draws", gain_args.draws)->check(CLI::NonNegativeNumber);
  gain_cmd->add_option("--kinds", gain_args.kinds)->delimiter(',');
  gain_cmd->add_option("--seed", gain_args.seed);
  gain_cmd->add_option("--shift-scale", gain_args.shift_scale)->check(CLI::NonNegativeNumber);
  gain_cmd->add_option("--csv-out", gain_args.csv_out);
  gain_cmd->callback([&] { code = run_gain(gain_args); });

  NewlyCertifiedArgs nc_args;
  auto& nc = nc_args.options;
  auto* nc_cmd = app.add_subcommand("newly-certified",
                                    "Multi-start collapse between the old and new thresholds");
  nc_cmd->add_option("--instances", nc.instances)->check(CLI::NonNegativeNumber);
  nc_cmd->add_option("--n", nc.n)->check(CLI::Range(2, 512));
  nc_cmd->add_option("--starts", nc.starts)->check(CLI::PositiveNumber);
  nc_cmd->add_option("--beta-frac", nc.beta_frac)->check(CLI::PositiveNumber);
  nc_cmd->add_option("--iterations", nc.iterations)->check(CLI::NonNegativeNumber);
  nc_cmd->add_option("--seed", nc.seed);
  nc_cmd->add_option("--shift-scale", nc.random.shift_scale)->check(CLI::NonNegativeNumber);
  nc_cmd->add_option("--bias-scale", nc.random.bias_scale)->check(CLI::NonNegativeNumber);
  nc_cmd->add_option("--target", nc_args.target, "Required final diameter")
      ->check(CLI::PositiveNumber);
  nc_cmd->add_option("--csv-out", nc_args.csv_out);
  nc_cmd->add_option("--thresholds-out", nc_args.thresholds_out);
  nc_cmd->callback([&] { code = run_newly_certified(nc_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  } catch (const softstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return code;
}
