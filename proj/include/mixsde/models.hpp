#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mixsde/fbm.hpp"

namespace mixsde {

using StateEvaluator =
    std::function<void(double t, std::span<const double> x, std::span<double> out)>;
using CoupledEvaluator = std::function<void(double t, std::span<const double> x,
                                            std::span<const double> y, std::span<double> out)>;

/// (t, x) -> dim x columns matrix, column-major: column j is out[j*dim, (j+1)*dim).
/// The optional jacobian writes, per column j, the dim x dim matrix
/// d column_j / dx row-major into out[j*dim*dim, (j+1)*dim*dim).
struct CoefficientField {
  std::size_t dim = 1;
  std::size_t columns = 1;
  StateEvaluator eval;
  StateEvaluator jacobian;

  std::size_t output_size() const { return dim * columns; }
  bool has_jacobian() const { return static_cast<bool>(jacobian); }

  static CoefficientField zero(std::size_t dim, std::size_t columns);
};

/// (t, x, y) -> dim x columns, same layout; jacobian_y is taken in y.
struct CoupledField {
  std::size_t x_dim = 1;
  std::size_t dim = 1;
  std::size_t columns = 1;
  CoupledEvaluator eval;
  CoupledEvaluator jacobian_y;

  std::size_t output_size() const { return dim * columns; }
  bool has_jacobian() const { return static_cast<bool>(jacobian_y); }
};

enum class AssumptionSet { A, B, C, none };

std::string to_string(AssumptionSet set);
AssumptionSet assumption_set_from_string(const std::string& s);

/// What a model claims about itself. constants maps condition ids
/// ("A1", "A4.c", "C6.dc", ...) to the claimed constant.
struct AssumptionClaims {
  AssumptionSet set = AssumptionSet::none;
  std::map<std::string, double> constants;
  std::optional<double> beta;  // time-Holder exponent in (1 - mu, 1/2)
  std::optional<double> rho;   // power in [0, 2/3) for C-sets
};

/// dX = a dt + sum_i b_i dW^i + sum_j c_j dZ^j, X_0 non-random.
struct ModelSpec {
  std::string name;
  std::size_t state_dim = 1;
  std::vector<double> x0;
  double horizon = 1.0;
  CoefficientField drift;      // columns = 1
  CoefficientField diffusion;  // columns = m
  CoefficientField rough;      // columns = l
  DriverSpec drivers;
  AssumptionClaims claims;
  // Optional pathwise solution X_t as a function of (t, W_t, Z_t).
  std::function<void(double t, std::span<const double> w, std::span<const double> z, std::span<double> out)> exact;

  void validate() const;
};

/// dY = a~(t, X, Y) dt + b~ dW~ + c~ dZ~ with X solving `base`.
struct CoupledModel {
  std::string name;
  ModelSpec base;
  std::size_t state_dim = 1;
  std::vector<double> y0;
  CoupledField drift;
  CoupledField diffusion;
  CoupledField rough;
  DriverSpec drivers;
  bool shared_drivers = false;
  AssumptionClaims claims;
  std::vector<std::string> warnings;

  void validate() const;
};

using ZooModel = std::variant<ModelSpec, CoupledModel>;

// Admissible ranges from the integrability results.
double rho_upper_bound(double mu);         // 2 mu (2 mu - 1) / (2 mu + 1)
double exp_gamma_upper_bound(double mu);   // 4 mu / (2 mu + 1)
double default_time_exponent(double mu);   // midpoint of (1 - mu, 1/2)

struct LinearMixedParams {
  Eigen::MatrixXd A;
  Eigen::VectorXd a0;
  std::vector<Eigen::MatrixXd> B;
  std::vector<Eigen::VectorXd> b0;
  std::vector<Eigen::MatrixXd> C;
  std::vector<Eigen::VectorXd> c0;
  Eigen::VectorXd x0;
  double horizon = 1.0;
  std::vector<double> hurst;  // one per rough column
  std::optional<double> holder_order;

  static LinearMixedParams scalar(double a, double a0, double b, double b0, double c, double c0,
                                  double x0, double horizon = 1.0, double hurst = 0.75);
};
ModelSpec linear_mixed(const LinearMixedParams& p);

/// Componentwise on R^d with one Wiener and one fBm column:
///   a_r = alpha_a sin(x_r) + beta_a cos(omega t)
///   b_r = alpha_b cos(x_r) + beta_b
///   c_r = alpha_c sin(x_r + omega t) + beta_c
struct BoundedTrigParams {
  std::size_t dim = 1;
  double alpha_a = 0.5, beta_a = 0.2;
  double alpha_b = 0.4, beta_b = 0.3;
  double alpha_c = 0.5, beta_c = 0.4;
  double omega = 1.0;
  double x0 = 0.5;
  double horizon = 1.0;
  double hurst = 0.75;
  std::optional<double> holder_order;
  std::optional<double> time_exponent;
};
ModelSpec bounded_trig(const BoundedTrigParams& p);

/// dS = mu S dt + sigma_w S dW + sigma_b S dZ.
struct GeometricParams {
  double s0 = 1.0;
  double mu = 0.1;
  double sigma_w = 0.2;
  double sigma_b = 0.3;
  double horizon = 1.0;
  double hurst = 0.75;
  std::optional<double> holder_order;
};
ModelSpec geometric_mixed(const GeometricParams& p);

/// Negative control: dX = q X^2 dt + b0 dW + c0 dZ. It claims set A with
/// an A1 constant that the quadratic drift breaks.
struct QuadraticDriftParams {
  double q = 1.0;
  double b0 = 0.1;
  double c0 = 0.1;
  double x0 = 1.5;
  double horizon = 1.0;
  double hurst = 0.75;
  std::optional<double> holder_order;
};
ModelSpec quadratic_drift(const QuadraticDriftParams& p);

/// Volatility pair X = (X^1, X^2) from a two-dimensional bounded_trig
/// equation; price dS = drift S dt + sigma^W(X) S dW~ + sigma^B(X) S dZ~ with
///   sigma^W(x) = vol_w cos(x_1),  sigma^B(x) = vol_b (1 + x_2^2)^(rho / 2).
struct StochVolParams {
  BoundedTrigParams volatility = [] {
    BoundedTrigParams v;
    v.dim = 2;
    return v;
  }();
  double x0_2 = 0.5;  // volatility.x0 sets the first coordinate
  double y0 = 1.0;
  double drift = 0.05;
  double vol_w = 0.2;
  double vol_b = 0.3;
  double rho = 0.2;
  bool shared_drivers = false;
};
CoupledModel stochvol(const StochVolParams& p);

/// Linearized (Malliavin-derivative) equation dY = a'(X) Y dt + b'(X) Y dW +
/// c'(X) Y dZ driven by the same noise as X. Needs jacobians on all fields.
CoupledModel malliavin_linearized(const ModelSpec& base, std::optional<std::vector<double>> y0 = {});

/// Flat numeric parameters plus an optional base-model label (malliavin_linearized).
struct ModelParams {
  std::map<std::string, double> numbers;
  std::string base = "geometric_mixed";
};

std::vector<std::string> zoo_model_names();
std::vector<std::string> zoo_parameter_names(const std::string& name);

/// Builds a zoo model by name; unknown names or parameters raise DomainError.
ZooModel model_zoo(const std::string& name, const ModelParams& params = {});

}  // namespace mixsde
