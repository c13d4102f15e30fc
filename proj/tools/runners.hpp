#pragma once

// Subcommand bodies: evolve, sweep, wigner, validate. Output is plain CSV with
// 15 significant digits and '\n' line endings, so identical configs give
// byte-identical files.

#include "config.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <thread>

namespace susyjc::cli {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Observables at one instant.
struct Sample {
  double t = 0.0;
  double sigma_z = 0.0;
  Complex sigma_plus;
  double mean_n = 0.0;
  std::vector<double> n_k;
  double fano = kNaN;
  std::vector<Complex> a_k;
  double norm_residual = 0.0;
};

namespace detail {

inline int max_amplitude_k(const RunConfig& c) {
  int k = 1;
  for (int a : c.amplitude_k) k = std::max(k, a);
  return k;
}

inline double fano_or_nan(double mean, double second) {
  return mean > 1e-12 ? (second - mean * mean) / mean : kNaN;
}

// Ground qubit, Fock field, resonance: the closed form resolves the 0/0 at
// t = 0 for m = 1.
inline bool fock_closed_form(const RunConfig& c, const InitialSpec& init) {
  return c.model == Model::ajc && c.field_kind == FieldKind::fock && c.field_m >= 1 &&
         std::abs(init.beta_e()) < 1e-14 && std::abs(init.params().delta()) < 1e-14;
}

inline Sample state_sample(const RunConfig& c, const JointState& s, double t) {
  Sample out;
  out.t = t;
  out.sigma_z = state_sigma_z(s);
  out.sigma_plus = state_sigma_plus(s);
  out.mean_n = state_nk(s, 1);
  for (int k : c.moments_k) out.n_k.push_back(state_nk(s, k));
  out.fano = fano_or_nan(out.mean_n, state_nk(s, 2));
  for (int k : c.amplitude_k) out.a_k.push_back(state_ak(s, k));
  out.norm_residual = std::abs(s.norm() - 1.0);
  if (c.frame == Frame::rotating) {
    out.sigma_plus *= rotating_factor_sigma_plus(c.model, t, c.omega_c);
    for (std::size_t i = 0; i < out.a_k.size(); ++i) {
      out.a_k[i] *= rotating_factor_a_k(c.amplitude_k[i], t, c.omega_c);
    }
  }
  return out;
}

inline Sample series_sample(const RunConfig& c, const InitialSpec& init, const RabiTable& tab) {
  Sample out;
  out.t = tab.t();
  out.sigma_z = ajc_sigma_z(init, tab);
  out.sigma_plus = ajc_sigma_plus(init, tab, c.frame);
  out.mean_n = ajc_nk(init, tab, 1);
  for (int k : c.moments_k) out.n_k.push_back(ajc_nk(init, tab, k));
  out.fano = fock_closed_form(c, init) ? fock_fano_factor(c.field_m, tab.t(), c.lambda)
                                       : fano_or_nan(out.mean_n, ajc_nk(init, tab, 2));
  for (int k : c.amplitude_k) out.a_k.push_back(ajc_ak(init, tab, k, c.frame));
  out.norm_residual = std::abs(ajc_nk(init, tab, 0) - 1.0);
  return out;
}

inline RabiTable series_table(const RunConfig& c, double t) {
  return RabiTable(c.params(), t, series_table_size(c.n_trunc, max_amplitude_k(c)));
}

}  // namespace detail

/// Dense propagation of the configured model; the eigendecomposition is
/// shared by every call.
class DenseEvolver {
 public:
  explicit DenseEvolver(const RunConfig& c)
      : config_(c),
        propagator_(c.model == Model::ajc ? build_ajc_hamiltonian(c.params().ajc_partner(), c.n_trunc)
                                          : build_jc_hamiltonian(c.params(), c.n_trunc)) {}

  /// AJC: maps the JC initial state, then propagates (blue path).
  JointState state(const InitialSpec& init, double t) const {
    if (config_.model == Model::ajc) {
      return propagator_.propagate(susy_map_state(init.joint_state()).mapped_state, t);
    }
    return propagator_.propagate(init.joint_state(), t);
  }

  Sample sample(const InitialSpec& init, double t) const {
    return detail::state_sample(config_, state(init, t), t);
  }

 private:
  RunConfig config_;
  DensePropagator propagator_;
};

/// AJC: closed-form series. JC: closed-form propagator.
inline Sample analytic_sample(const RunConfig& c, const InitialSpec& init, double t) {
  if (c.model == Model::ajc) return detail::series_sample(c, init, detail::series_table(c, t));
  return detail::state_sample(c, analytic_jc_propagate(init.joint_state(), t, init.params()), t);
}

/// State at time t along the configured analytic route (AJC: red path).
inline JointState analytic_state(const RunConfig& c, const InitialSpec& init, double t) {
  if (c.model == Model::ajc) return ajc_state_via_jc(init, t);
  return analytic_jc_propagate(init.joint_state(), t, init.params());
}

/// Largest absolute difference over the compared observables; n^k relative to
/// max(1, |n^k|). NaN pairs are skipped.
inline double sample_deviation(const Sample& a, const Sample& b) {
  double d = std::max(std::abs(a.sigma_z - b.sigma_z), std::abs(a.sigma_plus - b.sigma_plus));
  d = std::max(d, std::abs(a.mean_n - b.mean_n) / std::max(1.0, std::abs(b.mean_n)));
  for (std::size_t i = 0; i < a.n_k.size(); ++i) {
    d = std::max(d, std::abs(a.n_k[i] - b.n_k[i]) / std::max(1.0, std::abs(b.n_k[i])));
  }
  if (!std::isnan(a.fano) && !std::isnan(b.fano)) d = std::max(d, std::abs(a.fano - b.fano));
  for (std::size_t i = 0; i < a.a_k.size(); ++i) d = std::max(d, std::abs(a.a_k[i] - b.a_k[i]));
  return d;
}

namespace detail {

inline std::vector<std::string> sample_columns(const RunConfig& c, const std::string& suffix) {
  std::vector<std::string> cols{"sigma_z", "re_sigma_plus", "im_sigma_plus", "mean_n"};
  for (int k : c.moments_k) cols.push_back("n" + std::to_string(k));
  cols.push_back("fano");
  for (int k : c.amplitude_k) {
    cols.push_back("re_a" + std::to_string(k));
    cols.push_back("im_a" + std::to_string(k));
  }
  cols.push_back("norm_residual");
  for (auto& col : cols) col += suffix;
  return cols;
}

inline void write_sample_values(std::ostream& out, const Sample& s) {
  out << ',' << fmt(s.sigma_z) << ',' << fmt(s.sigma_plus.real()) << ',' << fmt(s.sigma_plus.imag()) << ','
      << fmt(s.mean_n);
  for (double v : s.n_k) out << ',' << fmt(v);
  out << ',' << fmt(s.fano);
  for (const Complex& v : s.a_k) out << ',' << fmt(v.real()) << ',' << fmt(v.imag());
  out << ',' << fmt(s.norm_residual);
}

}  // namespace detail

/// One CSV row per time step; path=both appends *_dense columns and a final
/// `# max_deviation=` comment line.
inline void run_evolve(const RunConfig& c, std::ostream& out) {
  const InitialSpec init = c.initial();
  std::unique_ptr<DenseEvolver> dense;
  if (c.path != PathKind::analytic) dense = std::make_unique<DenseEvolver>(c);

  out << 't';
  for (const auto& col : detail::sample_columns(c, "")) out << ',' << col;
  if (c.path == PathKind::both) {
    for (const auto& col : detail::sample_columns(c, "_dense")) out << ',' << col;
  }
  out << '\n';

  double max_dev = 0.0;
  for (double t : c.times()) {
    out << fmt(t);
    if (c.path == PathKind::dense) {
      detail::write_sample_values(out, dense->sample(init, t));
    } else {
      const Sample a = analytic_sample(c, init, t);
      detail::write_sample_values(out, a);
      if (c.path == PathKind::both) {
        const Sample d = dense->sample(init, t);
        detail::write_sample_values(out, d);
        max_dev = std::max(max_dev, sample_deviation(a, d));
      }
    }
    out << '\n';
  }
  if (c.path == PathKind::both) out << "# max_deviation=" << fmt(max_dev) << '\n';
}

/// Long-format landscape: theta,t,observable,value in (theta, t) order.
/// Scaled rows (n{k}_per_alpha{2k}, abs_a{k}_per_alpha{k}) are added for
/// coherent and cat fields next to the raw values.
inline void run_sweep(const RunConfig& c, std::ostream& out) {
  if (c.sweep_theta_count < 1) throw ConfigError("sweep requires sweep.theta_count >= 1");
  if (c.path == PathKind::both) throw ConfigError("sweep supports path = analytic or dense");
  const auto thetas = c.sweep_thetas();
  const auto times = c.times();
  const double r = std::abs(c.alpha);
  const bool scaled = c.field_kind != FieldKind::fock && r > 0.0;

  std::vector<RabiTable> tables;
  if (c.path == PathKind::analytic && c.model == Model::ajc) {
    tables.reserve(times.size());
    for (double t : times) tables.push_back(detail::series_table(c, t));
  }
  std::unique_ptr<DenseEvolver> dense;
  if (c.path == PathKind::dense) dense = std::make_unique<DenseEvolver>(c);

  // One text block per theta, filled by workers and written in order.
  std::vector<std::string> blocks(thetas.size());
  std::vector<std::exception_ptr> errors(thetas.size());
  auto work = [&](std::size_t i) {
    try {
      const InitialSpec init = c.initial(thetas[i]);
      std::string block;
      const std::string th = fmt(thetas[i]);
      auto row = [&](const std::string& t, const std::string& name, double v) {
        block += th + ',' + t + ',' + name + ',' + fmt(v) + '\n';
      };
      for (std::size_t j = 0; j < times.size(); ++j) {
        const Sample s = dense ? dense->sample(init, times[j])
                         : tables.empty() ? analytic_sample(c, init, times[j])
                                          : detail::series_sample(c, init, tables[j]);
        const std::string t = fmt(times[j]);
        row(t, "sigma_z", s.sigma_z);
        for (std::size_t q = 0; q < c.moments_k.size(); ++q) {
          const int k = c.moments_k[q];
          row(t, "n" + std::to_string(k), s.n_k[q]);
          if (scaled) {
            row(t, "n" + std::to_string(k) + "_per_alpha" + std::to_string(2 * k), s.n_k[q] / std::pow(r, 2 * k));
          }
        }
        row(t, "fano", s.fano);
        for (std::size_t q = 0; q < c.amplitude_k.size(); ++q) {
          const std::string k = std::to_string(c.amplitude_k[q]);
          row(t, "re_a" + k, s.a_k[q].real());
          row(t, "im_a" + k, s.a_k[q].imag());
          row(t, "abs_a" + k, std::abs(s.a_k[q]));
          if (scaled) row(t, "abs_a" + k + "_per_alpha" + k, std::abs(s.a_k[q]) / std::pow(r, c.amplitude_k[q]));
        }
      }
      blocks[i] = std::move(block);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const int workers = std::min<int>(c.threads, static_cast<int>(thetas.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < thetas.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < thetas.size(); i += workers) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  out << "theta,t,observable,value\n";
  for (const auto& b : blocks) out << b;
}

struct WignerSnapshot {
  double t = 0.0;
  std::string file;
  std::string status;  // ok | truncation_error
  std::string message;
  std::optional<WignerGrid> grid;
  double purity = kNaN;
};

inline std::string convention_name(WignerConvention c) {
  return c == WignerConvention::paper ? "paper" : "standard";
}

/// Snapshot grids of the reduced field state. Support-guard failures are
/// recorded per snapshot rather than aborting the run.
inline std::vector<WignerSnapshot> compute_wigner(const RunConfig& c) {
  const InitialSpec init = c.initial();
  std::unique_ptr<DenseEvolver> dense;
  if (c.path == PathKind::dense) dense = std::make_unique<DenseEvolver>(c);
  std::vector<WignerSnapshot> snaps;
  for (std::size_t i = 0; i < c.wigner_times.size(); ++i) {
    WignerSnapshot s;
    s.t = c.wigner_times[i];
    const JointState state = dense ? dense->state(init, s.t) : analytic_state(c, init, s.t);
    const DensityMatrix rho = reduced_field_density(state);
    s.purity = rho.purity();
    try {
      s.grid = WignerFunction(rho, c.convention).on_grid(c.wigner_grid, c.threads);
      s.status = "ok";
      s.file = "wigner_t" + std::to_string(i) + ".csv";
    } catch (const TruncationError& e) {
      s.status = "truncation_error";
      s.message = e.what();
    }
    snaps.push_back(std::move(s));
  }
  return snaps;
}

inline void write_wigner_csv(const WignerGrid& g, std::ostream& out) {
  out << "re_alpha,im_alpha,w\n";
  const int p = g.grid.points_per_axis;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) out << fmt(g.grid.re(i)) << ',' << fmt(g.grid.im(j)) << ',' << fmt(g.at(i, j)) << '\n';
  }
}

inline void write_wigner_manifest(const RunConfig& c, const std::vector<WignerSnapshot>& snaps,
                                  std::ostream& out) {
  out << "convention=" << convention_name(c.convention) << '\n';
  out << "model=" << (c.model == Model::ajc ? "ajc" : "jc") << '\n';
  out << "n_trunc=" << c.n_trunc << '\n';
  out << "points_per_axis=" << c.wigner_grid.points_per_axis << '\n';
  out << "snapshot_count=" << snaps.size() << '\n';
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto& s = snaps[i];
    const std::string key = "snapshot." + std::to_string(i) + ".";
    out << key << "t=" << fmt(s.t) << '\n';
    out << key << "status=" << s.status << '\n';
    out << key << "purity=" << fmt(s.purity) << '\n';
    if (s.grid) {
      const auto& g = *s.grid;
      const Complex peak = g.argmax();
      out << key << "file=" << s.file << '\n';
      out << key << "integral=" << fmt(g.integral) << '\n';
      out << key << "expected_integral=" << fmt(c.convention == WignerConvention::paper ? 0.5 : 1.0) << '\n';
      out << key << "cell_area=" << fmt(g.cell_area) << '\n';
      out << key << "min=" << fmt(g.min()) << '\n';
      out << key << "max=" << fmt(g.max()) << '\n';
      out << key << "argmax_re=" << fmt(peak.real()) << '\n';
      out << key << "argmax_im=" << fmt(peak.imag()) << '\n';
    } else {
      out << key << "message=" << s.message << '\n';
    }
  }
}

/// Writes wigner_t{i}.csv per successful snapshot and wigner_manifest.txt.
/// Returns false when any snapshot failed the support guard.
inline bool run_wigner(const RunConfig& c, const std::filesystem::path& dir) {
  const auto snaps = compute_wigner(c);
  bool ok = true;
  for (const auto& s : snaps) {
    if (!s.grid) {
      ok = false;
      continue;
    }
    std::ofstream f(dir / s.file, std::ios::binary);
    write_wigner_csv(*s.grid, f);
  }
  std::ofstream manifest(dir / "wigner_manifest.txt", std::ios::binary);
  write_wigner_manifest(c, snaps, manifest);
  return ok;
}

struct CheckRow {
  std::string key;
  double value;
  double threshold;
  bool pass() const { return value <= threshold; }
};

struct ValidationReport {
  std::vector<CheckRow> rows;
  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass(); });
  }
  void write(std::ostream& out) const {
    out << "key,value,threshold,pass\n";
    for (const auto& r : rows) {
      out << r.key << ',' << fmt(r.value) << ',' << fmt(r.threshold) << ',' << (r.pass() ? "true" : "false") << '\n';
    }
  }
};

/// Intertwining residual, commutative diagram, block unitarity, symmetry
/// spectrum and series-vs-dense samples for the configured system.
/// `validate.skip_partner_shift` pairs H_JC(w_a) with H_AJC(w_a) instead of
/// the shifted partner (negative control).
inline ValidationReport run_validate(const RunConfig& c) {
  ValidationReport report;
  const ModelParams jc = c.params();
  const ModelParams ajc = c.skip_partner_shift ? jc : jc.ajc_partner();
  const int n_trunc = c.n_trunc;

  report.rows.push_back({"intertwining_residual", intertwining_residual(jc, ajc, n_trunc), 1e-12});
  report.rows.push_back({"reverse_intertwining_residual", reverse_intertwining_residual(jc, ajc, n_trunc), 1e-12});

  std::vector<double> times;
  for (int i = 0; i < c.validate_samples; ++i) {
    times.push_back(c.validate_samples == 1 ? c.t_max : c.t_max * i / (c.validate_samples - 1));
  }
  const InitialSpec init = c.initial();
  const AjcDensePath blue(build_ajc_hamiltonian(ajc, n_trunc));
  double diagram = 0.0;
  for (double t : times) {
    diagram = std::max(diagram, (ajc_state_via_jc(init, t).vector() - blue.evolve(init, t).vector()).norm());
  }
  report.rows.push_back({"commutative_diagram_deviation", diagram, 1e-8});

  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> ut(0.0, std::max(c.t_max, 1.0)), ud(-3.0, 3.0), ul(0.0, 1.0);
  double unitarity = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double t = ut(rng), delta = ud(rng), lam = ul(rng);
    const RabiTable tab(ModelParams(c.omega_c + delta, lam, c.omega_c), t, n_trunc);
    for (int m = 0; m <= n_trunc; ++m) {
      unitarity = std::max(unitarity, std::abs(std::norm(tab.f(m)) + m * std::norm(tab.g(m)) - 1.0));
    }
  }
  report.rows.push_back({"block_unitarity_deviation", unitarity, 1e-12});

  for (auto side : {SymmetrySide::jc, SymmetrySide::ajc}) {
    const std::string name = side == SymmetrySide::jc ? "jc" : "ajc";
    const auto levels = symmetry_spectrum(n_trunc, side);
    double integrality = 0.0;
    double multiplicity_errors = levels.size() == static_cast<std::size_t>(n_trunc - 1) ? 0.0 : 1.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      integrality = std::max(integrality, std::abs(levels[k].value - static_cast<double>(k)));
      if (levels[k].multiplicity != (k == 0 ? 1 : 2)) multiplicity_errors += 1.0;
    }
    const Eigen::Index singlet = side == SymmetrySide::jc ? n_trunc + 1 : 0;
    const double overlap = levels.empty() || levels[0].multiplicity != 1 ? 0.0 : std::abs(levels[0].eigenvectors(singlet, 0));
    report.rows.push_back({"symmetry_" + name + "_integrality", integrality, 1e-10});
    report.rows.push_back({"symmetry_" + name + "_multiplicity_errors", multiplicity_errors, 0.0});
    report.rows.push_back({"symmetry_" + name + "_singlet_defect", 1.0 - overlap, 1e-10});
  }

  RunConfig oracle_cfg = c;
  oracle_cfg.frame = Frame::lab;
  const DenseEvolver dense(oracle_cfg);
  double oracle = 0.0;
  for (double t : times) {
    oracle = std::max(oracle, sample_deviation(analytic_sample(oracle_cfg, init, t), dense.sample(init, t)));
  }
  report.rows.push_back({"oracle_equivalence_deviation", oracle, 1e-7});
  return report;
}

}  // namespace susyjc::cli
