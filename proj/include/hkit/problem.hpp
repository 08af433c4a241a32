#pragma once

// The full problem description and a lazily evaluated analysis of it, shared
// by criteria, solver and the command line.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/greens.hpp"
#include "hkit/kernel.hpp"
#include "hkit/kernel_s.hpp"
#include "hkit/measures.hpp"
#include "hkit/spectral.hpp"

namespace hkit {

// Declared limit quantities of f. Missing entries are estimated by sampling.
struct Asymptotics {
  std::optional<double> f_sup_zero;   // f^0
  std::optional<double> f_inf_zero;   // f_0
  std::optional<double> f_sup_inf;    // f^infinity
  std::optional<double> f_inf_inf;    // f_infinity
  std::optional<double> f_tilde_zero; // f~_0
};

struct Nonlinearity {
  std::function<double(double, double)> eval = [](double, double) { return 0.0; };  // (t, u)
  bool depends_on_t = true;
  // Optional closed forms: rho -> f^{-rho,rho} and (rho, c) -> f_{rho,rho/c}.
  std::function<double(double)> envelope_sup;
  std::function<double(double, double)> envelope_inf;
  Asymptotics asymptotics;
  std::string description = "0";

  double operator()(double t, double u) const { return eval(t, u); }

  static Nonlinearity zero() {
    Nonlinearity f;
    f.depends_on_t = false;
    f.envelope_sup = [](double) { return 0.0; };
    f.envelope_inf = [](double, double) { return 0.0; };
    f.asymptotics = {0.0, 0.0, 0.0, 0.0, 0.0};
    return f;
  }
};

struct SolverSettings {
  std::size_t nodes = 200;
  double tol = 1e-10;
  double damping = 0.5;
  int max_iter = 20000;
  int starts = 1;
  std::function<double(double)> initial = [](double) { return 0.0; };
  std::string initial_description = "0";
  bool anderson = false;
  int anderson_depth = 5;
};

struct CheckSettings {
  std::vector<double> rhos;
  std::string menu = "all";
  std::string mode = "full";
};

struct ProblemSpec {
  std::string name = "problem";
  Shift epsilon = Shift::minus;
  double omega = 1.0;
  double a = 0.0, b = 1.0;
  Weight g = Weight::one();
  Nonlinearity f = Nonlinearity::zero();
  BoundaryData boundary;
  SolverSettings solver;
  CheckSettings check;
  std::map<std::string, double> parameters;
};

// Lazily computed constants of a problem. Every accessor is thread-safe; the
// first call computes and later calls return the cached value.
class Analysis {
 public:
  explicit Analysis(ProblemSpec spec, QuadratureOptions qopt = {}) : spec_(std::move(spec)), qopt_(qopt) {
    if (!(spec_.a >= 0.0 && spec_.b <= 1.0 && spec_.a < spec_.b))
      throw DomainError("interval [a,b] must satisfy 0 <= a < b <= 1");
  }
  Analysis(const Analysis&) = delete;
  Analysis& operator=(const Analysis&) = delete;

  const ProblemSpec& spec() const { return spec_; }
  const QuadratureOptions& quadrature() const { return qopt_; }
  std::size_t nodes() const { return spec_.solver.nodes; }

  const ShiftedKernel& base() const {
    return cached(base_, [&] { return ShiftedKernel(spec_.epsilon, spec_.omega); });
  }

  const ConstantsBundle& greens() const {
    return cached(greens_, [&] {
      return greens_constants(spec_.epsilon, spec_.omega, spec_.a, spec_.b, spec_.g, qopt_);
    });
  }

  const AssembledKernel& kernel_s() const {
    return cached(ak_, [&] {
      return assemble(base().kernel(), spec_.boundary, spec_.a, spec_.b, greens().c_ab, qopt_);
    });
  }

  const BoundaryScalars& scalars() const { return kernel_s().scalars; }
  double cone_c() const { return kernel_s().cone_c; }

  const FunctionalIntegrals& functional_ints() const {
    return cached(fi_, [&] { return functional_integrals(kernel_s(), spec_.g, qopt_); });
  }

  const SConstants& s_constants() const {
    return cached(sc_, [&] { return mS_MS(kernel_s(), spec_.g, spec_.a, spec_.b, qopt_); });
  }
  double m_S() const { return s_constants().m_S; }
  double M_S() const { return s_constants().M_S; }

  double c_tilde() const {
    return cached(ct_, [&] { return hkit::c_tilde(kernel_s(), spec_.g, spec_.a, spec_.b, qopt_); });
  }

  // Principal characteristic values; the measures must be positive.
  const SpectralEstimate& mu(OperatorKind kind) const {
    auto& slot = kind == OperatorKind::L ? mu_L_ : kind == OperatorKind::Ltilde ? mu_Lt_ : mu_Lp_;
    return cached(slot, [&] {
      require_positive_measures();
      return principal_value(discretize(kind, kernel_s(), spec_.g, spec_.a, spec_.b, nodes()));
    });
  }

  void require_positive_measures() const {
    if (!spec_.boundary.alpha.is_positive() || !spec_.boundary.beta.is_positive())
      throw PositivityRequired("eigenvalue criteria need alpha and beta given by positive measures");
  }

  // Factor F with (I^1_rho) <=> f^{-rho,rho} F < 1.
  double index_one_factor(bool simplified) const {
    auto& slot = simplified ? i1_simple_ : i1_full_;
    return cached(slot, [&] {
      const auto& s = scalars();
      const auto& fi = functional_ints();
      if (simplified) {
        return (s.gamma_norm * (1 - s.beta_delta) + s.delta_norm * s.beta_gamma) / s.D * fi.KA_full +
               (s.gamma_norm * s.alpha_delta + s.delta_norm * (1 - s.alpha_gamma)) / s.D * fi.KB_full +
               1.0 / greens().m;
      }
      const Kernel k = base().kernel();
      const auto& bd = spec_.boundary;
      auto row = [&](double t) {
        const double ag = std::abs(bd.gamma(t)), ad = std::abs(bd.delta(t));
        const PartIntegrals p =
            integrate_pm([&](double x) { return k(t, x) * spec_.g(x); }, 0.0, 1.0, k.breaks_at(t), qopt_);
        return (ag * (1 - s.beta_delta) + ad * s.beta_gamma) / s.D * fi.KA_full +
               (ag * s.alpha_delta + ad * (1 - s.alpha_gamma)) / s.D * fi.KB_full +
               std::max(p.positive, p.negative);
      };
      return grid_max(row, 0.0, 1.0).value;
    });
  }

  // Factor F with (I^0_rho) <=> f_{rho,rho/c} F > 1.
  double index_zero_factor(bool simplified) const {
    auto& slot = simplified ? i0_simple_ : i0_full_;
    return cached(slot, [&] {
      if (!simplified) return 1.0 / M_S();
      const auto& s = scalars();
      const auto& fi = functional_ints();
      const double gn = s.c2 * s.gamma_norm, dn = s.c3 * s.delta_norm;
      return (gn * (1 - s.beta_delta) + dn * s.beta_gamma) / s.D * fi.KA_ab +
             (gn * s.alpha_delta + dn * (1 - s.alpha_gamma)) / s.D * fi.KB_ab + 1.0 / greens().M_ab;
    });
  }

 private:
  template <class T, class F>
  const T& cached(std::optional<T>& slot, F&& make) const {
    {
      std::lock_guard lock(mu_);
      if (slot) return *slot;
    }
    T value = make();
    std::lock_guard lock(mu_);
    if (!slot) slot.emplace(std::move(value));
    return *slot;
  }

  ProblemSpec spec_;
  QuadratureOptions qopt_;
  mutable std::mutex mu_;
  mutable std::optional<ShiftedKernel> base_;
  mutable std::optional<ConstantsBundle> greens_;
  mutable std::optional<AssembledKernel> ak_;
  mutable std::optional<FunctionalIntegrals> fi_;
  mutable std::optional<SConstants> sc_;
  mutable std::optional<double> ct_;
  mutable std::optional<SpectralEstimate> mu_L_, mu_Lt_, mu_Lp_;
  mutable std::optional<double> i1_full_, i1_simple_, i0_full_, i0_simple_;
};

}  // namespace hkit
