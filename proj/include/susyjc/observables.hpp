#pragma once

// Closed-form AJC expectation series obtained by mapping the evolved JC state
// through the intertwiner, plus the state-based expectations they are checked
// against.
//
// The series are sums over the Fock index of the initial field, built from
// the JC doublet coefficients F_m, G_m at the JC-side parameters. Photon
// "cumulants" <n^k>, <a^k> here are raw moments.
//
// Frames: sigma_z, n^k and the Fano factor are frame independent. sigma_+ and
// a^k rotate freely; Frame::lab returns the Schroedinger-picture value (what a
// dense propagation of the AJC state gives), Frame::rotating drops the free
// rotation e^{-i w_c t} (sigma_+) and e^{-i k w_c t} (a^k).

#include "susyjc/susy_map.hpp"

#include <optional>
#include <vector>

namespace susyjc {

enum class Frame { lab, rotating };
enum class Model { jc, ajc };

/// Factor taking a lab-frame <sigma_+> to the frame co-rotating with the
/// model's free evolution.
inline Complex rotating_factor_sigma_plus(Model model, double t, double omega_c) {
  return std::polar(1.0, (model == Model::ajc ? 1.0 : -1.0) * omega_c * t);
}

/// Factor taking a lab-frame <a^k> to the rotating frame (both models).
inline Complex rotating_factor_a_k(int k, double t, double omega_c) {
  return std::polar(1.0, k * omega_c * t);
}

/// JC initial condition (beta_e|e> + beta_g|g>) (x) field with normalized qubit
/// amplitudes, together with the JC-side model parameters.
class InitialSpec {
 public:
  InitialSpec(Complex beta_e, Complex beta_g, FieldState field, ModelParams params)
      : beta_e_(beta_e), beta_g_(beta_g), field_(std::move(field)), params_(params) {
    if (std::abs(std::norm(beta_e) + std::norm(beta_g) - 1.0) > 1e-12) {
      throw std::invalid_argument("InitialSpec: |beta_e|^2 + |beta_g|^2 must be 1");
    }
    mean_n0_ = mean_photon_number(field_);
  }

  /// cos(theta)|g> + e^{i phi} sin(theta)|e>
  static InitialSpec bloch(double theta, double phi, FieldState field, ModelParams params) {
    return {std::polar(std::sin(theta), phi), Complex(std::cos(theta), 0.0), std::move(field),
            params};
  }

  Complex beta_e() const { return beta_e_; }
  Complex beta_g() const { return beta_g_; }
  const FieldState& field() const { return field_; }
  const ModelParams& params() const { return params_; }
  int n_trunc() const { return field_.n_trunc(); }
  double mean_n0() const { return mean_n0_; }

  /// |N|^2 = <n0>|beta_g|^2 + (1 + <n0>)|beta_e|^2, the squared norm of A psi(0).
  double image_norm_sq() const {
    return mean_n0_ * std::norm(beta_g_) + (1.0 + mean_n0_) * std::norm(beta_e_);
  }

  JointState joint_state() const { return make_initial_state(beta_e_, beta_g_, field_); }

 private:
  Complex beta_e_;
  Complex beta_g_;
  FieldState field_;
  ModelParams params_;
  double mean_n0_ = 0.0;
};

struct TransitionPair {
  Complex pair;   // m [F_mt F_m^* + mt G_mt G_m^*]
  Complex tilde;  // mt F_m G_mt - m F_mt G_m
  Complex bar;    // F_m^* G_mt - F_mt^* G_m
};

namespace detail {

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// sqrt((n+k)!/n!)
inline double falling_root(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= static_cast<double>(n + j);
  return std::sqrt(r);
}

inline double transition_t(const RabiTable& tab, int n) {
  return n * (std::norm(tab.f(n)) - n * std::norm(tab.g(n)));
}

inline TransitionPair transition_pair(const RabiTable& tab, int m, int mt) {
  const Complex fm = tab.f(m), fmt = tab.f(mt), gm = tab.g(m), gmt = tab.g(mt);
  return {static_cast<double>(m) * (fmt * std::conj(fm) + static_cast<double>(mt) * gmt * std::conj(gm)),
          static_cast<double>(mt) * fm * gmt - static_cast<double>(m) * fmt * gm,
          std::conj(fm) * gmt - std::conj(fmt) * gm};
}

inline double checked_image_norm(const InitialSpec& init) {
  const double norm = init.image_norm_sq();
  if (norm < kSingletThreshold) {
    throw DegenerateError("initial state is the SUSY singlet: its AJC image vanishes");
  }
  return norm;
}

inline void require_table(const RabiTable& tab, int needed) {
  if (tab.max_m() < needed) {
    throw std::invalid_argument("RabiTable too short: need m up to " + std::to_string(needed));
  }
}

}  // namespace detail

/// T_n = n [|F_n|^2 - n |G_n|^2]
inline double transition_T(int n, double t, const ModelParams& p) {
  if (n < 0) throw std::invalid_argument("transition_T: n must be >= 0");
  return detail::transition_t(RabiTable(p, t, n), n);
}

inline TransitionPair transition_pair(int m, int m_tilde, double t, const ModelParams& p) {
  if (m < 0 || m_tilde < 0) throw std::invalid_argument("transition_pair: indices must be >= 0");
  return detail::transition_pair(RabiTable(p, t, std::max(m, m_tilde)), m, m_tilde);
}

/// Table size needed by the series for a field truncated at N with powers up
/// to k.
inline int series_table_size(int n_trunc, int k = 2) { return n_trunc + std::max(k, 1) + 2; }

inline double ajc_sigma_z(const InitialSpec& init, const RabiTable& tab) {
  const double norm = detail::checked_image_norm(init);
  const int n_trunc = init.n_trunc();
  detail::require_table(tab, n_trunc + 1);
  const auto& c = init.field();
  const double be2 = std::norm(init.beta_e()), bg2 = std::norm(init.beta_g());
  const Complex cross = init.beta_g() * std::conj(init.beta_e());
  NeumaierSum sum;
  for (int n = 0; n <= n_trunc; ++n) {
    sum += std::norm(c[n]) *
           (be2 * detail::transition_t(tab, n + 1) - bg2 * detail::transition_t(tab, n));
    const double w = 4.0 * std::pow(n + 1.0, 1.5);
    sum += w * std::real(cross * c[n + 1] * std::conj(c[n]) * tab.g(n + 1) * tab.f(n + 1));
  }
  return sum.value() / norm;
}

inline double ajc_sigma_z(const InitialSpec& init, double t) {
  return ajc_sigma_z(init, RabiTable(init.params(), t, series_table_size(init.n_trunc())));
}

inline Complex ajc_sigma_plus(const InitialSpec& init, const RabiTable& tab,
                              Frame frame = Frame::lab) {
  const double norm = detail::checked_image_norm(init);
  const int n_trunc = init.n_trunc();
  detail::require_table(tab, n_trunc + 2);
  const auto& c = init.field();
  const double be2 = std::norm(init.beta_e()), bg2 = std::norm(init.beta_g());
  const Complex bg_be = init.beta_g() * std::conj(init.beta_e());
  const Complex be_bg = std::conj(bg_be);
  ComplexNeumaierSum sum;
  for (int n = 0; n <= n_trunc; ++n) {
    const double nd = n;
    sum += std::sqrt(nd + 1.0) * std::conj(c[n]) * c[n + 1] * tab.f(n + 1) *
           ((nd + 2.0) * tab.g(n + 2) * be2 - nd * tab.g(n) * bg2);
    sum += std::sqrt((nd + 1.0) * (nd + 2.0)) * std::conj(c[n]) * c[n + 2] * tab.f(n + 1) *
           tab.f(n + 2) * bg_be;
    sum += -nd * (nd + 1.0) * std::norm(c[n]) * tab.g(n) * tab.g(n + 1) * be_bg;
  }
  Complex value = sum.value() / norm;
  if (frame == Frame::lab) value *= std::polar(1.0, -init.params().omega_c() * tab.t());
  return value;
}

inline Complex ajc_sigma_plus(const InitialSpec& init, double t, Frame frame = Frame::lab) {
  return ajc_sigma_plus(init, RabiTable(init.params(), t, series_table_size(init.n_trunc())),
                        frame);
}

inline Complex ajc_sigma_minus(const InitialSpec& init, double t, Frame frame = Frame::lab) {
  return std::conj(ajc_sigma_plus(init, t, frame));
}

/// Largest photon-number power accepted by ajc_nk.
inline constexpr int kMaxMomentOrder = 8;

/// <n^k> in the AJC state. k = 0 evaluates the normalization (exactly 1 up to
/// roundoff).
inline double ajc_nk(const InitialSpec& init, const RabiTable& tab, int k) {
  if (k < 0 || k > kMaxMomentOrder) {
    throw std::invalid_argument("ajc_nk: k must be in 0.." + std::to_string(kMaxMomentOrder));
  }
  const double norm = detail::checked_image_norm(init);
  const int n_trunc = init.n_trunc();
  detail::require_table(tab, n_trunc + 1);
  const auto& c = init.field();
  const double be2 = std::norm(init.beta_e()), bg2 = std::norm(init.beta_g());
  const Complex cross = init.beta_g() * std::conj(init.beta_e());
  NeumaierSum sum;
  for (int n = 0; n <= n_trunc; ++n) {
    const double nd = n;
    const double c2 = std::norm(c[n]);
    const double nk = detail::ipow(nd, k);
    const double n1k = detail::ipow(nd + 1.0, k);
    sum += c2 * be2 *
           (n1k * (nd + 1.0) * std::norm(tab.f(n + 1)) +
            (nd + 1.0) * (nd + 1.0) * nk * std::norm(tab.g(n + 1)));
    sum += c2 * bg2 *
           (nd * detail::ipow(nd - 1.0, k) * std::norm(tab.f(n)) +
            nk * nd * nd * std::norm(tab.g(n)));
    sum += 2.0 * std::pow(nd + 1.0, 1.5) * (n1k - nk) *
           std::real(cross * c[n + 1] * std::conj(c[n]) * tab.g(n + 1) * tab.f(n + 1));
  }
  return sum.value() / norm;
}

inline double ajc_nk(const InitialSpec& init, double t, int k) {
  return ajc_nk(init, RabiTable(init.params(), t, series_table_size(init.n_trunc())), k);
}

/// <a^k> in the AJC state.
inline Complex ajc_ak(const InitialSpec& init, const RabiTable& tab, int k,
                      Frame frame = Frame::lab) {
  const int n_trunc = init.n_trunc();
  if (k < 0 || k > n_trunc) throw std::invalid_argument("ajc_ak: k must be in 0..N");
  const double norm = detail::checked_image_norm(init);
  detail::require_table(tab, n_trunc + k + 1);
  const auto& c = init.field();
  const double be2 = std::norm(init.beta_e()), bg2 = std::norm(init.beta_g());
  const Complex bg_be = init.beta_g() * std::conj(init.beta_e());
  const Complex be_bg = std::conj(bg_be);
  ComplexNeumaierSum sum;
  for (int n = 0; n <= n_trunc; ++n) {
    const double nd = n;
    Complex term = c[n + k] * (be2 * detail::transition_pair(tab, n + k + 1, n + 1).pair +
                               bg2 * detail::transition_pair(tab, n, n + k).pair);
    term += bg_be * std::sqrt(nd + k + 1.0) * c[n + k + 1] *
            detail::transition_pair(tab, n + 1, n + k + 1).tilde;
    if (n + k >= 1) {
      term += be_bg * nd * std::sqrt(nd + k) * c[n + k - 1] *
              detail::transition_pair(tab, n, n + k).bar;
    }
    sum += detail::falling_root(n, k) * std::conj(c[n]) * term;
  }
  Complex value = sum.value() / norm;
  if (frame == Frame::lab) value *= std::polar(1.0, -k * init.params().omega_c() * tab.t());
  return value;
}

inline Complex ajc_ak(const InitialSpec& init, double t, int k, Frame frame = Frame::lab) {
  return ajc_ak(init, RabiTable(init.params(), t, series_table_size(init.n_trunc(), k)), k, frame);
}

/// <(a^dag)^k> = conj <a^k>
inline Complex ajc_adag_k(const InitialSpec& init, double t, int k, Frame frame = Frame::lab) {
  return std::conj(ajc_ak(init, t, k, frame));
}

/// FF = Var(n)/<n> from the k = 1, 2 moments. Throws DegenerateError when
/// <n> <= 1e-12.
inline double fano_from_moments(double mean, double second) {
  if (!(mean > 1e-12)) throw DegenerateError("Fano factor undefined: mean photon number is zero");
  return (second - mean * mean) / mean;
}

inline double fano_factor(const InitialSpec& init, const RabiTable& tab) {
  return fano_from_moments(ajc_nk(init, tab, 1), ajc_nk(init, tab, 2));
}

inline double fano_factor(const InitialSpec& init, double t) {
  return fano_factor(init, RabiTable(init.params(), t, series_table_size(init.n_trunc())));
}

/// Closed-form Fano factor of the AJC image of |g>(x)|m> at resonance:
/// sin^2(2 lambda sqrt(m) t) / (2 (2m - cos(2 lambda sqrt(m) t) - 1)).
inline double fock_fano_factor(int m, double t, double lambda) {
  if (m < 1) throw std::invalid_argument("fock_fano_factor: m must be >= 1");
  const double x = lambda * std::sqrt(static_cast<double>(m)) * t;
  if (m == 1) return std::cos(x) * std::cos(x);  // removable 0/0 of the general form
  const double s = std::sin(2.0 * x);
  return s * s / (2.0 * (2.0 * m - std::cos(2.0 * x) - 1.0));
}

struct ResonantExpectations {
  Complex sigma_plus;
  double sigma_z;
  double n_k;
  Complex a_k;
};

/// Reduced series for a ground-state qubit at resonance (beta_e = 0,
/// Delta = 0), normalized by <n0>. Throws std::invalid_argument otherwise.
inline ResonantExpectations resonant_expectations(const InitialSpec& init, double t, int k,
                                                  Frame frame = Frame::lab) {
  if (std::abs(init.beta_e()) > 1e-14) {
    throw std::invalid_argument("resonant_expectations requires beta_e = 0");
  }
  if (std::abs(init.params().delta()) > 1e-14) {
    throw std::invalid_argument("resonant_expectations requires Delta = 0");
  }
  if (k < 0 || k > init.n_trunc()) throw std::invalid_argument("resonant_expectations: bad k");
  const double n0 = init.mean_n0();
  if (n0 < kSingletThreshold) {
    throw DegenerateError("initial state is the SUSY singlet: its AJC image vanishes");
  }
  const double lam = init.params().lambda();
  const auto& c = init.field();
  const int n_trunc = init.n_trunc();
  auto root = [](double x) { return std::sqrt(x); };

  ComplexNeumaierSum sp, ak;
  NeumaierSum sz, nk;
  for (int n = 0; n <= n_trunc; ++n) {
    const double nd = n;
    const double c2 = std::norm(c[n]);
    const double cos_n = std::cos(lam * root(nd) * t), sin_n = std::sin(lam * root(nd) * t);
    sp += root(nd * (nd + 1.0)) * std::cos(lam * root(nd + 1.0) * t) * sin_n *
          std::conj(c[n]) * c[n + 1];
    sz += nd * std::cos(2.0 * lam * root(nd) * t) * c2;
    nk += c2 * (nd * detail::ipow(nd - 1.0, k) * cos_n * cos_n +
                detail::ipow(nd, k + 1) * sin_n * sin_n);
    const double cos_k = std::cos(lam * root(nd + k) * t), sin_k = std::sin(lam * root(nd + k) * t);
    ak += detail::falling_root(n, k) * std::conj(c[n]) * c[n + k] *
          (nd * cos_k * cos_n + root(nd * (nd + k)) * sin_k * sin_n);
  }
  ResonantExpectations r{Complex(0.0, 1.0) * sp.value() / n0, -sz.value() / n0, nk.value() / n0,
                         ak.value() / n0};
  if (frame == Frame::lab) {
    const double wt = init.params().omega_c() * t;
    r.sigma_plus *= std::polar(1.0, -wt);
    r.a_k *= std::polar(1.0, -k * wt);
  }
  return r;
}

/// <psi|O|psi> for a normalized state.
inline Complex expectation_via_state(const JointState& state, const JointOperator& op) {
  return state.vector().dot(op.matrix * state.vector());
}

// Direct O(N) expectations on a joint state, normalized by |psi|^2.

inline double state_sigma_z(const JointState& s) {
  return (s.excited_block().squaredNorm() - s.ground_block().squaredNorm()) /
         s.vector().squaredNorm();
}

inline Complex state_sigma_plus(const JointState& s) {
  // <psi| |e><g| |psi> = sum_n conj(e_n) g_n
  return s.excited_block().dot(s.ground_block()) / s.vector().squaredNorm();
}

inline double state_nk(const JointState& s, int k) {
  NeumaierSum sum;
  for (int n = 0; n <= s.n_trunc(); ++n) {
    sum += detail::ipow(n, k) * (std::norm(s.excited(n)) + std::norm(s.ground(n)));
  }
  return sum.value() / s.vector().squaredNorm();
}

inline Complex state_ak(const JointState& s, int k) {
  ComplexNeumaierSum sum;
  for (int n = 0; n + k <= s.n_trunc(); ++n) {
    const double w = detail::falling_root(n, k);
    sum += w * (std::conj(s.excited(n)) * s.excited(n + k) + std::conj(s.ground(n)) * s.ground(n + k));
  }
  return sum.value() / s.vector().squaredNorm();
}

inline double state_fano(const JointState& s) { return fano_from_moments(state_nk(s, 1), state_nk(s, 2)); }

/// AJC state at time t from the red path: evolve the JC state in closed form,
/// then map.
inline JointState ajc_state_via_jc(const InitialSpec& init, double t) {
  return susy_map_state(analytic_jc_propagate(init.joint_state(), t, init.params())).mapped_state;
}

/// AJC state at time t from the blue path: map the initial JC state, then
/// propagate densely with the partner Hamiltonian H_AJC(w_a - 2 w_c). The
/// eigendecomposition is computed once per instance.
class AjcDensePath {
 public:
  AjcDensePath(const ModelParams& jc, int n_trunc)
      : AjcDensePath(build_ajc_hamiltonian(jc.ajc_partner(), n_trunc)) {}

  /// Any AJC Hamiltonian; negative controls pass a mismatched partner.
  explicit AjcDensePath(const JointOperator& h_ajc) : propagator_(h_ajc) {}

  JointState evolve(const InitialSpec& init, double t) const {
    return propagator_.propagate(susy_map_state(init.joint_state()).mapped_state, t);
  }
  JointState evolve_mapped(const JointState& mapped, double t) const {
    return propagator_.propagate(mapped, t);
  }

 private:
  DensePropagator propagator_;
};

}  // namespace susyjc
