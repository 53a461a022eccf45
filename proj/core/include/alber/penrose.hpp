#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "alber/mixed_state.hpp"

namespace alber {

// Linear stability of a homogeneous background Gamma. For a density mode
// k != 0 the linearized dynamics reduce to the scalar Volterra equation
//
//   rho(k,t) = rho_free(k,t) + (iq/2pi) int_0^t Phi_k(t-s) rho(k,s) ds,
//   Phi_k(tau) = sum_j (G(j+k) - G(j)) e^{i p k (2j+k) tau},
//
// whose resolvent is 1 / F_k(lambda), F_k = 1 - (iq/2pi) Laplace[Phi_k].

/// One exponential of the kernel: coefficient G(j+k) - G(j), frequency
/// p k (2j + k). Terms with zero coefficient are omitted.
struct KernelTerm {
  double weight;
  double frequency;
};

std::vector<KernelTerm> kernel_terms(const BackgroundSymbol& bg, double p, int k);

Complex volterra_kernel(const BackgroundSymbol& bg, double p, int k, double tau);
/// Laplace transform of the kernel, Re lambda > 0.
Complex laplace_symbol(const BackgroundSymbol& bg, double p, int k, Complex lambda);
/// F_k(lambda) = 1 - (iq / 2pi) laplace_symbol.
Complex dispersion(const BackgroundSymbol& bg, double p, double q, int k, Complex lambda);
/// d F_k / d lambda.
Complex dispersion_derivative(const BackgroundSymbol& bg, double p, double q, int k,
                              Complex lambda);

struct MarginScan {
  double eta_min = 1e-3;
  double eta_max = 10.0;
  int eta_count = 40;          ///< log-spaced lines Re lambda = eta
  double s_padding = 10.0;     ///< |Im lambda| <= max resonance + padding
  double s_step = 0.1;         ///< base spacing along Im lambda
  double s_density = 50.0;     ///< points per unit within 1 of a resonance
  int refine_iters = 60;
  double zero_tolerance = 1e-8;
};

struct EtaLine {
  double eta;
  double margin;  ///< min |F_k| on the scanned line
};

struct PenroseReport {
  int k = 0;
  double margin = 0.0;     ///< estimated inf |F_k| over the scanned region
  Complex argmin_lambda;
  std::vector<Complex> zeros;     ///< Newton-confirmed zeros with Re lambda > 0
  std::vector<EtaLine> small_eta; ///< the three smallest eta lines
  bool stable() const { return zeros.empty(); }
};

PenroseReport penrose_margin(const BackgroundSymbol& bg, double p, double q, int k,
                             const MarginScan& scan = {});

/// sum_j e^{i p k (2j + k) t} U0(j + k, j).
Complex free_density(const OperatorMatrix& u0, double p, int k, double t);

struct VolterraSolution {
  std::vector<double> times;
  std::vector<Complex> rho;
  bool resolution_warning = false;  ///< dt > 0.1 / max kernel frequency
};

/// Product-trapezoidal solve on t_i = i dt, i = 0..round(T/dt): rho is
/// linear between nodes and each kernel exponential is integrated against
/// it exactly.
VolterraSolution volterra_solve(const BackgroundSymbol& bg, const OperatorMatrix& u0,
                                double p, double q, int k, double dt, double horizon);

struct PropagatorInputs {
  double gamma_h1s1 = 0.0;  ///< ||Gamma||_{H^1 S^1}
  double gamma_l1 = 0.0;    ///< ||Gamma-hat||_{l^1}
  double kappa = 0.0;
  double q = 0.0;
  double eta = 1.0;
  double epsilon = 0.0;
  double c_bilinear = 0.0;  ///< empirical estimate of the bilinear constant
};

struct PropagatorConstants {
  double c_gamma_eta = 0.0;  ///< C_Gamma(eta)
  double c_star = 0.0;
  double c_gamma = 0.0;
  double t_star = 0.0;
  double a = 0.0;
  double b = 0.0;
  PropagatorInputs inputs;
};

PropagatorConstants propagator_constants(const PropagatorInputs& in);

nlohmann::json to_json(const PenroseReport& report);
nlohmann::json to_json(const PropagatorConstants& constants);

}  // namespace alber
