#include "mixsde/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixsde/errors.hpp"

namespace mixsde {

namespace {

double op_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

void check_field(const CoefficientField& f, std::size_t dim, std::size_t columns, const char* what) {
  if (f.dim != dim || f.columns != columns)
    throw DomainError(std::string(what) + ": coefficient shape does not match the model dimensions");
  if (!f.eval) throw DomainError(std::string(what) + ": missing evaluator");
}

void check_field(const CoupledField& f, std::size_t x_dim, std::size_t dim, std::size_t columns,
                 const char* what) {
  if (f.x_dim != x_dim || f.dim != dim || f.columns != columns)
    throw DomainError(std::string(what) + ": coefficient shape does not match the model dimensions");
  if (!f.eval) throw DomainError(std::string(what) + ": missing evaluator");
}

void check_time_exponent(const AssumptionClaims& claims, const DriverSpec& drivers) {
  if (!claims.beta || drivers.rough_dim() == 0) return;
  const double mu = drivers.holder_order;
  if (!(*claims.beta > 1.0 - mu && *claims.beta < 0.5))
    throw DomainError("claimed time exponent beta must lie in (1 - mu, 1/2)");
}

}  // namespace

CoefficientField CoefficientField::zero(std::size_t dim, std::size_t columns) {
  CoefficientField f;
  f.dim = dim;
  f.columns = columns;
  f.eval = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  f.jacobian = f.eval;
  return f;
}

std::string to_string(AssumptionSet set) {
  switch (set) {
    case AssumptionSet::A: return "A";
    case AssumptionSet::B: return "B";
    case AssumptionSet::C: return "C";
    case AssumptionSet::none: return "none";
  }
  return "none";
}

AssumptionSet assumption_set_from_string(const std::string& s) {
  if (s == "A") return AssumptionSet::A;
  if (s == "B") return AssumptionSet::B;
  if (s == "C") return AssumptionSet::C;
  if (s == "none") return AssumptionSet::none;
  throw DomainError("unknown assumption set '" + s + "'");
}

void ModelSpec::validate() const {
  if (state_dim < 1) throw DomainError("ModelSpec: state dimension must be positive");
  if (x0.size() != state_dim) throw DomainError("ModelSpec: initial value has the wrong dimension");
  for (double v : x0)
    if (!std::isfinite(v)) throw DomainError("ModelSpec: initial value must be finite");
  if (!(horizon > 0.0)) throw DomainError("ModelSpec: horizon must be positive");
  check_field(drift, state_dim, 1, "drift");
  check_field(diffusion, state_dim, drivers.wiener_dim, "diffusion");
  check_field(rough, state_dim, drivers.rough_dim(), "rough coefficient");
  check_time_exponent(claims, drivers);
  if (claims.rho && !(*claims.rho >= 0.0 && *claims.rho < 2.0 / 3.0))
    throw DomainError("claimed rho must lie in [0, 2/3)");
}

void CoupledModel::validate() const {
  base.validate();
  if (state_dim < 1) throw DomainError("CoupledModel: state dimension must be positive");
  if (y0.size() != state_dim) throw DomainError("CoupledModel: initial value has the wrong dimension");
  for (double v : y0)
    if (!std::isfinite(v)) throw DomainError("CoupledModel: initial value must be finite");
  check_field(drift, base.state_dim, state_dim, 1, "coupled drift");
  check_field(diffusion, base.state_dim, state_dim, drivers.wiener_dim, "coupled diffusion");
  check_field(rough, base.state_dim, state_dim, drivers.rough_dim(), "coupled rough coefficient");
  if (shared_drivers) {
    if (drivers.wiener_dim != base.drivers.wiener_dim || drivers.rough_hurst != base.drivers.rough_hurst)
      throw DomainError("CoupledModel: shared drivers need identical driver specs");
  }
  check_time_exponent(claims, drivers);
  if (claims.rho && !(*claims.rho >= 0.0 && *claims.rho < 2.0 / 3.0))
    throw DomainError("claimed rho must lie in [0, 2/3)");
}

double rho_upper_bound(double mu) { return 2.0 * mu * (2.0 * mu - 1.0) / (2.0 * mu + 1.0); }
double exp_gamma_upper_bound(double mu) { return 4.0 * mu / (2.0 * mu + 1.0); }
double default_time_exponent(double mu) { return 0.5 * ((1.0 - mu) + 0.5); }

LinearMixedParams LinearMixedParams::scalar(double a, double a0, double b, double b0, double c,
                                            double c0, double x0, double horizon, double hurst) {
  LinearMixedParams p;
  p.A = Eigen::MatrixXd::Constant(1, 1, a);
  p.a0 = Eigen::VectorXd::Constant(1, a0);
  p.B = {Eigen::MatrixXd::Constant(1, 1, b)};
  p.b0 = {Eigen::VectorXd::Constant(1, b0)};
  p.C = {Eigen::MatrixXd::Constant(1, 1, c)};
  p.c0 = {Eigen::VectorXd::Constant(1, c0)};
  p.x0 = Eigen::VectorXd::Constant(1, x0);
  p.horizon = horizon;
  p.hurst = {hurst};
  return p;
}

ModelSpec linear_mixed(const LinearMixedParams& p) {
  const auto d = static_cast<std::size_t>(p.x0.size());
  const std::size_t m = p.B.size();
  const std::size_t l = p.C.size();
  if (p.A.rows() != p.A.cols() || static_cast<std::size_t>(p.A.rows()) != d || static_cast<std::size_t>(p.a0.size()) != d)
    throw DomainError("linear_mixed: drift matrix does not match the state dimension");
  if (p.b0.size() != m || p.c0.size() != l || p.hurst.size() != l)
    throw DomainError("linear_mixed: inconsistent column counts");
  for (std::size_t i = 0; i < m; ++i)
    if (static_cast<std::size_t>(p.B[i].rows()) != d || static_cast<std::size_t>(p.B[i].cols()) != d ||
        static_cast<std::size_t>(p.b0[i].size()) != d)
      throw DomainError("linear_mixed: diffusion block has the wrong shape");
  for (std::size_t j = 0; j < l; ++j)
    if (static_cast<std::size_t>(p.C[j].rows()) != d || static_cast<std::size_t>(p.C[j].cols()) != d ||
        static_cast<std::size_t>(p.c0[j].size()) != d)
      throw DomainError("linear_mixed: rough block has the wrong shape");

  ModelSpec model;
  model.name = "linear_mixed";
  model.state_dim = d;
  model.x0.assign(p.x0.data(), p.x0.data() + d);
  model.horizon = p.horizon;
  model.drivers = DriverSpec::make(m, p.hurst, p.holder_order);

  auto affine_columns = [d](std::vector<Eigen::MatrixXd> mats, std::vector<Eigen::VectorXd> offsets) {
    CoefficientField f;
    f.dim = d;
    f.columns = mats.size();
    f.eval = [d, mats, offsets](double, std::span<const double> x, std::span<double> out) {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < mats.size(); ++j) {
        Eigen::Map<Eigen::VectorXd> col(out.data() + j * d, static_cast<Eigen::Index>(d));
        col.noalias() = mats[j] * xv + offsets[j];
      }
    };
    f.jacobian = [d, mats](double, std::span<const double>, std::span<double> out) {
      for (std::size_t j = 0; j < mats.size(); ++j)
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c)
            out[j * d * d + r * d + c] = mats[j](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    };
    return f;
  };
  model.drift = affine_columns({p.A}, {p.a0});
  model.diffusion = affine_columns(p.B, p.b0);
  model.rough = affine_columns(p.C, p.c0);

  double b_growth = 0.0, b_lip = 0.0, c_growth = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    b_growth += std::pow(op_norm(p.B[i]) + p.b0[i].norm(), 2);
    b_lip += std::pow(op_norm(p.B[i]), 2);
  }
  for (std::size_t j = 0; j < l; ++j) c_growth += std::pow(op_norm(p.C[j]) + p.c0[j].norm(), 2);
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(l * d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < l; ++j) stacked.middleRows(static_cast<Eigen::Index>(j * d), static_cast<Eigen::Index>(d)) = p.C[j];

  model.claims.set = AssumptionSet::A;
  model.claims.constants = {
      {"A1", op_norm(p.A) + p.a0.norm() + std::sqrt(b_growth) + std::sqrt(c_growth)},
      {"A2", op_norm(stacked)},
      {"A3", op_norm(p.A) + std::sqrt(b_lip)},
      {"A4.c", 0.0},
      {"A4.dc", 0.0},
  };
  if (l > 0) model.claims.beta = default_time_exponent(model.drivers.holder_order);
  model.validate();
  return model;
}

ModelSpec bounded_trig(const BoundedTrigParams& p) {
  const std::size_t d = p.dim;
  if (d < 1) throw DomainError("bounded_trig: dimension must be positive");
  ModelSpec model;
  model.name = "bounded_trig";
  model.state_dim = d;
  model.x0.assign(d, p.x0);
  model.horizon = p.horizon;
  model.drivers = DriverSpec::make(1, {p.hurst}, p.holder_order);

  model.drift.dim = d;
  model.drift.columns = 1;
  model.drift.eval = [p, d](double t, std::span<const double> x, std::span<double> out) {
    const double forcing = p.beta_a * std::cos(p.omega * t);
    for (std::size_t r = 0; r < d; ++r) out[r] = p.alpha_a * std::sin(x[r]) + forcing;
  };
  model.drift.jacobian = [p, d](double, std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(d * d), 0.0);
    for (std::size_t r = 0; r < d; ++r) out[r * d + r] = p.alpha_a * std::cos(x[r]);
  };

  model.diffusion.dim = d;
  model.diffusion.columns = 1;
  model.diffusion.eval = [p, d](double, std::span<const double> x, std::span<double> out) {
    for (std::size_t r = 0; r < d; ++r) out[r] = p.alpha_b * std::cos(x[r]) + p.beta_b;
  };
  model.diffusion.jacobian = [p, d](double, std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(d * d), 0.0);
    for (std::size_t r = 0; r < d; ++r) out[r * d + r] = -p.alpha_b * std::sin(x[r]);
  };

  model.rough.dim = d;
  model.rough.columns = 1;
  model.rough.eval = [p, d](double t, std::span<const double> x, std::span<double> out) {
    for (std::size_t r = 0; r < d; ++r) out[r] = p.alpha_c * std::sin(x[r] + p.omega * t) + p.beta_c;
  };
  model.rough.jacobian = [p, d](double t, std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(d * d), 0.0);
    for (std::size_t r = 0; r < d; ++r) out[r * d + r] = p.alpha_c * std::cos(x[r] + p.omega * t);
  };

  const double beta = p.time_exponent.value_or(default_time_exponent(model.drivers.holder_order));
  const double root_d = std::sqrt(static_cast<double>(d));
  const double ac = std::abs(p.alpha_c);
  model.claims.set = AssumptionSet::B;
  model.claims.beta = beta;
  model.claims.constants = {
      {"B1", root_d * (std::abs(p.alpha_a) + std::abs(p.beta_a) + std::abs(p.alpha_b) + std::abs(p.beta_b) +
                       ac + std::abs(p.beta_c))},
      {"B2", ac},
      {"B3", std::abs(p.alpha_a) + std::abs(p.alpha_b) + ac},
      {"B4", (root_d + 1.0) * ac * std::abs(p.omega) * std::pow(p.horizon, 1.0 - beta)},
  };
  model.validate();
  return model;
}

ModelSpec geometric_mixed(const GeometricParams& p) {
  auto lp = LinearMixedParams::scalar(p.mu, 0.0, p.sigma_w, 0.0, p.sigma_b, 0.0, p.s0, p.horizon, p.hurst);
  lp.holder_order = p.holder_order;
  ModelSpec model = linear_mixed(lp);
  model.name = "geometric_mixed";
  model.exact = [p](double t, std::span<const double> w, std::span<const double> z, std::span<double> out) {
    out[0] = p.s0 * std::exp((p.mu - 0.5 * p.sigma_w * p.sigma_w) * t + p.sigma_w * w[0] + p.sigma_b * z[0]);
  };
  return model;
}

ModelSpec quadratic_drift(const QuadraticDriftParams& p) {
  auto lp = LinearMixedParams::scalar(0.0, 0.0, 0.0, p.b0, 0.0, p.c0, p.x0, p.horizon, p.hurst);
  lp.holder_order = p.holder_order;
  ModelSpec model = linear_mixed(lp);
  model.name = "quadratic_drift";
  const double q = p.q;
  model.drift.eval = [q](double, std::span<const double> x, std::span<double> out) { out[0] = q * x[0] * x[0]; };
  model.drift.jacobian = [q](double, std::span<const double> x, std::span<double> out) { out[0] = 2.0 * q * x[0]; };
  model.claims.constants = {{"A1", std::abs(q) + std::abs(p.b0) + std::abs(p.c0)}, {"A2", 0.0}, {"A4.c", 0.0}, {"A4.dc", 0.0}};
  return model;
}

CoupledModel stochvol(const StochVolParams& p) {
  if (p.volatility.dim != 2) throw DomainError("stochvol: the volatility state is two-dimensional");
  CoupledModel model;
  model.name = "stochvol";
  model.base = bounded_trig(p.volatility);
  model.base.name = "stochvol.volatility";
  model.base.x0[1] = p.x0_2;
  model.state_dim = 1;
  model.y0 = {p.y0};
  model.drivers = DriverSpec::make(1, {p.volatility.hurst}, p.volatility.holder_order);
  model.shared_drivers = p.shared_drivers;

  const double rho = p.rho;
  const double drift = p.drift, vol_w = p.vol_w, vol_b = p.vol_b;
  auto sigma_b = [rho, vol_b](std::span<const double> x) { return vol_b * std::pow(1.0 + x[1] * x[1], 0.5 * rho); };

  model.drift = {2, 1, 1,
                 [drift](double, std::span<const double>, std::span<const double> y, std::span<double> out) {
                   out[0] = drift * y[0];
                 },
                 [drift](double, std::span<const double>, std::span<const double>, std::span<double> out) {
                   out[0] = drift;
                 }};
  model.diffusion = {2, 1, 1,
                     [vol_w](double, std::span<const double> x, std::span<const double> y, std::span<double> out) {
                       out[0] = vol_w * std::cos(x[0]) * y[0];
                     },
                     [vol_w](double, std::span<const double> x, std::span<const double>, std::span<double> out) {
                       out[0] = vol_w * std::cos(x[0]);
                     }};
  model.rough = {2, 1, 1,
                 [sigma_b](double, std::span<const double> x, std::span<const double> y, std::span<double> out) {
                   out[0] = sigma_b(x) * y[0];
                 },
                 [sigma_b](double, std::span<const double> x, std::span<const double>, std::span<double> out) {
                   out[0] = sigma_b(x);
                 }};

  model.claims.set = AssumptionSet::C;
  model.claims.rho = rho;
  model.claims.beta = default_time_exponent(model.drivers.holder_order);
  model.claims.constants = {
      {"C1", std::abs(drift) + std::abs(vol_b)},
      {"C2", std::abs(vol_w)},
      {"C3", std::abs(vol_b)},
      {"C4", std::abs(drift) + std::abs(vol_w)},
      {"C5", std::abs(vol_b) * rho},
      {"C6.c", 0.0},
      {"C6.dc", 0.0},
  };

  const double mu = model.drivers.holder_order;
  if (!(rho > 0.0 && rho < rho_upper_bound(mu))) {
    std::ostringstream msg;
    msg << "rho = " << rho << " lies outside (0, " << rho_upper_bound(mu) << ") for holder order " << mu;
    model.warnings.push_back(msg.str());
  }
  model.validate();
  return model;
}

CoupledModel malliavin_linearized(const ModelSpec& base, std::optional<std::vector<double>> y0) {
  if (!base.drift.has_jacobian() || !base.diffusion.has_jacobian() || !base.rough.has_jacobian())
    throw DomainError("malliavin_linearized: base model must supply jacobians of every coefficient");
  const std::size_t d = base.state_dim;
  CoupledModel model;
  model.name = "malliavin_linearized";
  model.base = base;
  model.state_dim = d;
  model.y0 = y0.value_or(std::vector<double>(d, 1.0));
  model.drivers = base.drivers;
  model.shared_drivers = true;

  auto linearize = [d](const CoefficientField& f) {
    CoupledField out;
    out.x_dim = d;
    out.dim = d;
    out.columns = f.columns;
    const std::size_t cols = f.columns;
    auto jac = f.jacobian;
    out.eval = [d, cols, jac](double t, std::span<const double> x, std::span<const double> y, std::span<double> res) {
      thread_local std::vector<double> scratch;
      scratch.resize(cols * d * d);
      jac(t, x, scratch);
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t r = 0; r < d; ++r) {
          double acc = 0.0;
          for (std::size_t c = 0; c < d; ++c) acc += scratch[j * d * d + r * d + c] * y[c];
          res[j * d + r] = acc;
        }
    };
    out.jacobian_y = [jac](double t, std::span<const double> x, std::span<const double>, std::span<double> res) {
      jac(t, x, res);
    };
    return out;
  };
  model.drift = linearize(base.drift);
  model.diffusion = linearize(base.diffusion);
  model.rough = linearize(base.rough);

  model.claims.set = AssumptionSet::C;
  model.claims.rho = 0.0;
  if (base.drivers.rough_dim() > 0) model.claims.beta = default_time_exponent(base.drivers.holder_order);
  if (base.name == "geometric_mixed") {
    std::vector<double> j(1);
    const std::vector<double> x{base.x0[0]};
    base.drift.jacobian(0.0, x, j);
    const double mu = std::abs(j[0]);
    base.diffusion.jacobian(0.0, x, j);
    const double sw = std::abs(j[0]);
    base.rough.jacobian(0.0, x, j);
    const double sb = std::abs(j[0]);
    model.claims.constants = {{"C1", mu + sb}, {"C2", sw}, {"C3", sb}, {"C4", mu + sw},
                              {"C5", 0.0},     {"C6.c", 0.0}, {"C6.dc", 0.0}};
  }
  model.validate();
  return model;
}

namespace {

class ParamReader {
 public:
  ParamReader(const std::string& model, const ModelParams& params) : model_(model), params_(params) {}

  double get(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = params_.numbers.find(key);
    return it == params_.numbers.end() ? fallback : it->second;
  }
  std::optional<double> maybe(const std::string& key) {
    used_.push_back(key);
    auto it = params_.numbers.find(key);
    if (it == params_.numbers.end()) return std::nullopt;
    return it->second;
  }
  void finish() const {
    for (const auto& [key, value] : params_.numbers)
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw DomainError("model '" + model_ + "' has no parameter '" + key + "'");
  }
  const std::vector<std::string>& used() const { return used_; }

 private:
  std::string model_;
  const ModelParams& params_;
  std::vector<std::string> used_;
};

BoundedTrigParams read_trig(ParamReader& r, const std::string& prefix, BoundedTrigParams p) {
  p.alpha_a = r.get(prefix + "alpha_a", p.alpha_a);
  p.beta_a = r.get(prefix + "beta_a", p.beta_a);
  p.alpha_b = r.get(prefix + "alpha_b", p.alpha_b);
  p.beta_b = r.get(prefix + "beta_b", p.beta_b);
  p.alpha_c = r.get(prefix + "alpha_c", p.alpha_c);
  p.beta_c = r.get(prefix + "beta_c", p.beta_c);
  p.omega = r.get(prefix + "omega", p.omega);
  p.x0 = r.get(prefix + "x0", p.x0);
  return p;
}

GeometricParams read_geometric(ParamReader& r) {
  GeometricParams p;
  p.s0 = r.get("s0", p.s0);
  p.mu = r.get("mu", p.mu);
  p.sigma_w = r.get("sigma_w", p.sigma_w);
  p.sigma_b = r.get("sigma_b", p.sigma_b);
  p.horizon = r.get("T", p.horizon);
  p.hurst = r.get("hurst", p.hurst);
  p.holder_order = r.maybe("holder_order");
  return p;
}

ZooModel build(const std::string& name, ParamReader& r, const ModelParams& params) {
  if (name == "linear_mixed") {
    auto p = LinearMixedParams::scalar(r.get("a", -0.5), r.get("a0", 0.2), r.get("b", 0.3), r.get("b0", 0.1),
                                       r.get("c", 0.2), r.get("c0", 0.1), r.get("x0", 1.0), r.get("T", 1.0),
                                       r.get("hurst", 0.75));
    p.holder_order = r.maybe("holder_order");
    return linear_mixed(p);
  }
  if (name == "bounded_trig") {
    BoundedTrigParams p = read_trig(r, "", {});
    p.dim = static_cast<std::size_t>(r.get("dim", 1.0));
    p.horizon = r.get("T", p.horizon);
    p.hurst = r.get("hurst", p.hurst);
    p.holder_order = r.maybe("holder_order");
    p.time_exponent = r.maybe("beta");
    return bounded_trig(p);
  }
  if (name == "geometric_mixed") return geometric_mixed(read_geometric(r));
  if (name == "quadratic_drift") {
    QuadraticDriftParams p;
    p.q = r.get("q", p.q);
    p.b0 = r.get("b0", p.b0);
    p.c0 = r.get("c0", p.c0);
    p.x0 = r.get("x0", p.x0);
    p.horizon = r.get("T", p.horizon);
    p.hurst = r.get("hurst", p.hurst);
    p.holder_order = r.maybe("holder_order");
    return quadratic_drift(p);
  }
  if (name == "stochvol") {
    StochVolParams p;
    p.volatility = read_trig(r, "vol_", p.volatility);
    p.volatility.horizon = r.get("T", 1.0);
    p.volatility.hurst = r.get("hurst", p.volatility.hurst);
    p.volatility.holder_order = r.maybe("holder_order");
    p.x0_2 = r.get("vol_x0_2", p.x0_2);
    p.y0 = r.get("y0", p.y0);
    p.drift = r.get("drift", p.drift);
    p.vol_w = r.get("vol_w", p.vol_w);
    p.vol_b = r.get("vol_b", p.vol_b);
    p.rho = r.get("rho", p.rho);
    p.shared_drivers = r.get("shared", 0.0) != 0.0;
    return stochvol(p);
  }
  if (name == "malliavin_linearized") {
    const double y0 = r.get("y0", 1.0);
    if (params.base == "malliavin_linearized" || params.base == "stochvol")
      throw DomainError("malliavin_linearized: base must be a single-stage zoo model");
    ZooModel base = build(params.base, r, params);
    const auto& spec = std::get<ModelSpec>(base);
    return malliavin_linearized(spec, std::vector<double>(spec.state_dim, y0));
  }
  throw DomainError("unknown zoo model '" + name + "'");
}

}  // namespace

std::vector<std::string> zoo_model_names() {
  return {"linear_mixed", "bounded_trig", "geometric_mixed", "stochvol", "malliavin_linearized", "quadratic_drift"};
}

std::vector<std::string> zoo_parameter_names(const std::string& name) {
  ModelParams empty;
  if (name == "malliavin_linearized") empty.base = "geometric_mixed";
  ParamReader reader(name, empty);
  build(name, reader, empty);
  auto names = reader.used();
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

ZooModel model_zoo(const std::string& name, const ModelParams& params) {
  ParamReader reader(name, params);
  ZooModel model = build(name, reader, params);
  reader.finish();
  return model;
}

}  // namespace mixsde
