#include "icorr/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icorr/montecarlo.hpp"

namespace icorr::cli {
namespace {

const char* axis_name(SweepAxis axis) {
  return axis == SweepAxis::UserDensity ? "lambda" : "mu";
}

const char* method_name(RhoMethod method) {
  switch (method) {
    case RhoMethod::Exact:
      return "exact";
    case RhoMethod::NoBlockageClosedForm:
      return "no-blockage-closed-form";
    case RhoMethod::HighMuExpansion:
      return "high-mu-expansion";
  }
  return "unknown";
}

std::string point_name(const ObservationPoint& pt) {
  switch (pt.kind) {
    case PointKind::Center:
      return "center";
    case PointKind::Boundary:
      return "boundary";
    case PointKind::General:
      return format_double(pt.y_p);
  }
  return "unknown";
}

bool has_mode(const std::vector<MobilityMode>& modes, MobilityMode m) {
  for (MobilityMode x : modes) {
    if (x == m) return true;
  }
  return false;
}

void write_params_metadata(std::ostream& os, const NetworkParams& p) {
  os << "# lambda=" << format_double(p.lambda) << "\n"
     << "# mu=" << format_double(p.mu) << "\n"
     << "# gamma=" << format_double(p.gamma) << "\n"
     << "# xi=" << format_double(p.xi) << "\n"
     << "# alpha=" << format_double(p.alpha) << "\n"
     << "# halflen=" << format_double(p.half_len) << "\n"
     << "# p_t=" << format_double(p.p_t) << "\n";
}

void kv_row(std::ostream& os, const char* name, double v) {
  os << name << ',' << format_double(v) << "\n";
}

// Runs `fn(stream)` against stdout or the given file.  A file that fails
// mid-write is removed; no partial output is left behind.
template <typename Fn>
int with_output(const std::string& path, Fn fn) {
  if (path.empty()) {
    const int rc = fn(std::cout);
    std::cout.flush();
    return rc;
  }
  std::ofstream ofs(path);
  if (!ofs) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return 2;
  }
  int rc = 2;
  try {
    rc = fn(ofs);
    ofs.flush();
  } catch (...) {
    ofs.close();
    std::remove(path.c_str());
    throw;
  }
  if (!ofs) {
    ofs.close();
    std::remove(path.c_str());
    std::cerr << "error: failed while writing " << path << "\n";
    return 2;
  }
  return rc;
}

ObservationPoint parse_point(const std::string& s, double half_len) {
  if (s == "center") return ObservationPoint::center();
  if (s == "boundary") return ObservationPoint::boundary(half_len);
  std::size_t used = 0;
  double y = 0.0;
  try {
    y = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument(
        "--point must be center, boundary, or a coordinate, got: " + s);
  }
  return ObservationPoint::at(y, half_len);
}

MobilityMode parse_mode(const std::string& s) {
  if (s == "static") return MobilityMode::Static;
  if (s == "iid") return MobilityMode::IidMobility;
  throw std::invalid_argument("--mode must be static or iid, got: " + s);
}

int cmd_eval(const NetworkParams& p, const ObservationPoint& pt, bool high_mu,
             bool laplace, const std::string& out) {
  if (!(p.lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  const AnalyticOptions opts{laplace};
  const bool center = pt.kind == PointKind::Center;
  const MomentSet ms = center ? moments(p, opts) : moments_at_point(p, pt, opts);
  const CorrelationResult cr = center ? rho(p, opts) : rho_at_point(p, pt, opts);
  CorrelationResult hm, hs;
  if (high_mu) {
    hm = rho_high_mu(p);
    hs = rho_high_mu_series(p);
  }
  return with_output(out, [&](std::ostream& os) {
    os << "# icorr eval\n";
    write_params_metadata(os, p);
    os << "# point=" << point_name(pt) << "\n";
    os << "# laplace_i0=" << (laplace ? 1 : 0) << "\n";
    os << "quantity,value\n";
    kv_row(os, "mean", ms.mean);
    kv_row(os, "second_moment", ms.second_moment);
    kv_row(os, "i_integral", ms.i_integral);
    kv_row(os, "sigma", ms.sigma);
    kv_row(os, "sigma1", ms.sigma1);
    kv_row(os, "sigma2", ms.sigma2);
    kv_row(os, "variance", ms.variance);
    kv_row(os, "rho0", cr.rho0);
    kv_row(os, "rho_inf", cr.rho_inf);
    if (high_mu) {
      kv_row(os, "rho0_high_mu", hm.rho0);
      kv_row(os, "rho_inf_high_mu", hm.rho_inf);
      kv_row(os, "rho0_high_mu_series", hs.rho0);
      kv_row(os, "rho_inf_high_mu_series", hs.rho_inf);
    }
    return 0;
  });
}

int cmd_sweep(const std::string& preset, std::string out,
              const NetworkParams& flags) {
  if (preset.empty()) {
    throw std::invalid_argument("sweep requires --preset fig1, fig2 or fig3");
  }
  const std::vector<SweepSpec> specs = preset_sweeps(preset);
  if (out.empty()) out = preset + ".csv";
  return with_output(out, [&](std::ostream& os) {
    os << "# icorr sweep\n";
    os << "# preset=" << preset << "\n";
    write_params_metadata(os, flags);
    os << kSweepHeader << "\n";
    for (const SweepSpec& spec : specs) write_sweep_rows(spec, os);
    return 0;
  });
}

int cmd_validate(const NetworkParams& p, const ObservationPoint& pt,
                 MobilityMode mode, std::uint64_t trials, std::uint64_t seed,
                 bool laplace, const std::string& out) {
  if (trials < 1000) {
    throw std::invalid_argument("trials must be at least 1000");
  }
  const AnalyticOptions opts{laplace};
  const bool center = pt.kind == PointKind::Center;
  const MomentSet ms = center ? moments(p, opts) : moments_at_point(p, pt, opts);
  const double cross = center ? cross_moment(p, mode, opts)
                              : cross_moment_at_point(p, pt, mode, opts);
  const double rho_an = correlation(
      center ? rho(p, opts) : rho_at_point(p, pt, opts), mode);
  const McEstimate mc = estimate(p, pt, mode, trials, seed);

  struct Line {
    const char* name;
    double analytic;
    EstimateWithSe est;
  };
  const Line lines[] = {{"mean", ms.mean, mc.mean_hat},
                        {"second_moment", ms.second_moment, mc.second_moment_hat},
                        {"cross_moment", cross, mc.cross_hat},
                        {"rho", rho_an, mc.rho_hat}};

  bool disagree = false;
  const int rc = with_output(out, [&](std::ostream& os) {
    os << "# icorr validate\n";
    write_params_metadata(os, p);
    os << "# point=" << point_name(pt) << "\n";
    os << "# mode=" << (mode == MobilityMode::Static ? "static" : "iid")
       << "\n";
    os << "# trials=" << mc.trials << "\n";
    os << "# seed=" << mc.seed << "\n";
    os << "# estimator=pooled-pearson\n";
    os << "quantity,analytic,estimate,se,z\n";
    for (const Line& l : lines) {
      const double z = (l.est.value - l.analytic) /
                       (l.est.se > 0.0 ? l.est.se : 1.0);
      if (std::abs(z) > 4.0) disagree = true;
      os << l.name << ',' << format_double(l.analytic) << ','
         << format_double(l.est.value) << ',' << format_double(l.est.se)
         << ',' << format_double(z) << "\n";
    }
    return 0;
  });
  if (rc != 0) return rc;
  if (disagree) {
    std::cerr << "validate: analytic and Monte Carlo disagree (|z| > 4)\n";
    return 1;
  }
  return 0;
}

int cmd_critical(const NetworkParams& p, const std::string& out) {
  if (!(p.mu > 0.0)) {
    throw std::invalid_argument("critical density requires mu > 0");
  }
  const double numeric = critical_density(p);
  const bool closed_applies =
      p.alpha == 2.0 && p.gamma == 1.0 && p.xi == 1.0;
  const double closed =
      closed_applies ? critical_density_closed_form(p) : 0.0;
  return with_output(out, [&](std::ostream& os) {
    os << "# icorr critical\n";
    write_params_metadata(os, p);
    os << "quantity,value\n";
    kv_row(os, "lambda_star", numeric);
    if (closed_applies) {
      kv_row(os, "closed_form", closed);
      kv_row(os, "relative_gap", std::abs(numeric - closed) / closed);
    }
    return 0;
  });
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log grid needs 0 < lo < hi and count >= 2");
  }
  std::vector<double> grid(count);
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) {
    grid[i] = std::exp(std::log(lo) + step * i);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

const char* const kSweepHeader =
    "axis,axis_value,lambda,mu,gamma,xi,alpha,halflen,point,rho0,rho_inf,"
    "method";

std::vector<SweepSpec> preset_sweeps(const std::string& name) {
  NetworkParams base;  // lambda=1, gamma=1, xi=1, alpha=2
  std::vector<SweepSpec> specs;
  if (name == "fig1") {
    base.half_len = 25.0;
    for (double mu : {0.0, 1.0, 10.0}) {
      SweepSpec s;
      s.axis = SweepAxis::UserDensity;
      s.grid = log_grid(0.01, 10.0, 61);
      s.fixed = base;
      s.fixed.mu = mu;
      s.points = {ObservationPoint::center()};
      s.modes = {MobilityMode::Static, MobilityMode::IidMobility};
      specs.push_back(std::move(s));
    }
  } else if (name == "fig2") {
    for (double V : {10.0, 25.0}) {
      SweepSpec s;
      s.axis = SweepAxis::BlockageDensity;
      s.grid = log_grid(0.01, 20.0, 49);
      s.fixed = base;
      s.fixed.half_len = V;
      s.points = {ObservationPoint::center()};
      s.modes = {MobilityMode::Static, MobilityMode::IidMobility};
      specs.push_back(std::move(s));
    }
  } else if (name == "fig3") {
    SweepSpec s;
    s.axis = SweepAxis::BlockageDensity;
    s.grid = log_grid(0.01, 20.0, 49);
    s.fixed = base;
    s.fixed.half_len = 10.0;
    s.points = {ObservationPoint::center(),
                ObservationPoint::boundary(10.0)};
    s.modes = {MobilityMode::IidMobility};
    specs.push_back(std::move(s));
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return specs;
}

void write_sweep_rows(const SweepSpec& spec, std::ostream& os) {
  if (spec.grid.empty()) {
    throw std::invalid_argument("sweep grid must be nonempty");
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > 0.0)) {
      throw std::invalid_argument("sweep grid values must be positive");
    }
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
      throw std::invalid_argument("sweep grid must be strictly increasing");
    }
  }
  if (spec.points.empty() || spec.modes.empty()) {
    throw std::invalid_argument("sweep needs at least one point and mode");
  }
  const bool want_static = has_mode(spec.modes, MobilityMode::Static);
  const bool want_iid = has_mode(spec.modes, MobilityMode::IidMobility);

  for (double value : spec.grid) {
    NetworkParams p = spec.fixed;
    if (spec.axis == SweepAxis::UserDensity) {
      p.lambda = value;
    } else {
      p.mu = value;
    }
    for (const ObservationPoint& pt : spec.points) {
      // Center rows without obstacles come from the closed form, so the
      // method column names the formula that actually made the number.
      const CorrelationResult cr =
          pt.kind == PointKind::Center
              ? (p.mu > 0.0 ? rho(p) : rho_no_blockage(p))
              : rho_at_point(p, pt);
      os << axis_name(spec.axis) << ',' << format_double(value) << ','
         << format_double(p.lambda) << ',' << format_double(p.mu) << ','
         << format_double(p.gamma) << ',' << format_double(p.xi) << ','
         << format_double(p.alpha) << ',' << format_double(p.half_len) << ','
         << point_name(pt) << ','
         << (want_static ? format_double(cr.rho0) : std::string()) << ','
         << (want_iid ? format_double(cr.rho_inf) : std::string()) << ','
         << method_name(cr.method) << "\n";
    }
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Temporal correlation of interference on a blocked segment"};
  app.require_subcommand(1);

  NetworkParams flags;
  std::string point_str = "center";
  std::string mode_str = "static";
  std::string preset;
  std::string out_path;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 12345;
  bool high_mu = false;
  bool laplace = false;

  app.add_option("--lambda", flags.lambda, "User density per unit length")
      ->capture_default_str();
  app.add_option("--mu", flags.mu, "Obstacle density per unit length")
      ->capture_default_str();
  app.add_option("--gamma", flags.gamma, "Maximum per-obstacle loss factor")
      ->capture_default_str();
  app.add_option("--xi", flags.xi, "Per-slot transmit probability")
      ->capture_default_str();
  app.add_option("--alpha", flags.alpha, "Pathloss exponent")
      ->capture_default_str();
  app.add_option("--halflen", flags.half_len, "Segment half length V")
      ->capture_default_str();
  app.add_option("--point", point_str,
                 "Observation point: center, boundary, or a coordinate")
      ->capture_default_str();
  app.add_option("--mode", mode_str, "Mobility mode: static or iid")
      ->capture_default_str();
  app.add_option("--trials", trials, "Monte Carlo trial count")
      ->capture_default_str();
  app.add_option("--seed", seed, "Monte Carlo master seed")
      ->capture_default_str();
  app.add_option("--preset", preset, "Sweep preset: fig1, fig2 or fig3");
  app.add_option("--out", out_path, "Write output to this CSV file");
  app.set_config("--config", "", "Flat key=value parameter file");
  app.add_flag("--high-mu", high_mu,
               "Also print the dense-blockage expansion");
  app.add_flag("--laplace-i0", laplace,
               "Endpoint approximation for the correlated-obstacle integral");

  CLI::App* eval = app.add_subcommand(
      "eval", "Analytic moments and correlation for one parameter set");
  CLI::App* sweep =
      app.add_subcommand("sweep", "Write a preset parameter sweep as CSV");
  CLI::App* validate = app.add_subcommand(
      "validate", "Compare analytic values against Monte Carlo");
  CLI::App* critical = app.add_subcommand(
      "critical", "Critical user density for the given blockage density");
  for (CLI::App* sub : {eval, sweep, validate, critical}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    flags.validate();
    if (sweep->parsed()) {
      return cmd_sweep(preset, out_path, flags);
    }
    const ObservationPoint pt = parse_point(point_str, flags.half_len);
    if (eval->parsed()) {
      return cmd_eval(flags, pt, high_mu, laplace, out_path);
    }
    if (validate->parsed()) {
      return cmd_validate(flags, pt, parse_mode(mode_str), trials, seed,
                          laplace, out_path);
    }
    return cmd_critical(flags, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace icorr::cli
