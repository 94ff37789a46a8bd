#include "mixsde/validators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "mixsde/errors.hpp"
#include "mixsde/rng.hpp"

namespace mixsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double vec_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double rows_op_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Operator norm of a dim x columns column-major matrix.
double matrix_norm(std::span<const double> data, std::size_t dim, std::size_t columns) {
  if (columns == 0) return 0.0;
  if (dim == 1 || columns == 1) return vec_norm(data);
  Eigen::Map<const Eigen::MatrixXd> m(data.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(columns));
  return rows_op_norm(m);
}

// Operator norm of the map v -> (J_1 v, ..., J_l v); each J_j is dim x dim row-major.
double jacobian_norm(std::span<const double> data, std::size_t dim, std::size_t columns) {
  if (columns == 0) return 0.0;
  if (dim == 1) return vec_norm(data);
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(columns * dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < columns; ++j)
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        stacked(static_cast<Eigen::Index>(j * dim + r), static_cast<Eigen::Index>(c)) = data[j * dim * dim + r * dim + c];
  return rows_op_norm(stacked);
}

std::vector<double> difference(const std::vector<double>& u, const std::vector<double>& v) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct NonFinite {};

// Evaluation helpers that throw NonFinite when a coefficient misbehaves.
std::vector<double> eval(const CoefficientField& f, double t, std::span<const double> x) {
  std::vector<double> out(f.output_size());
  if (f.columns > 0) f.eval(t, x, out);
  if (!all_finite(out)) throw NonFinite{};
  return out;
}

std::vector<double> jac(const CoefficientField& f, double t, std::span<const double> x) {
  std::vector<double> out(f.columns * f.dim * f.dim);
  if (f.columns == 0) return out;
  if (f.has_jacobian()) {
    f.jacobian(t, x, out);
  } else {
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    for (std::size_t c = 0; c < f.dim; ++c) {
      const double h = 1e-6 * (1.0 + std::abs(x[c]));
      xp[c] = x[c] + h;
      xm[c] = x[c] - h;
      auto fp = eval(f, t, xp), fm = eval(f, t, xm);
      for (std::size_t j = 0; j < f.columns; ++j)
        for (std::size_t r = 0; r < f.dim; ++r)
          out[j * f.dim * f.dim + r * f.dim + c] = (fp[j * f.dim + r] - fm[j * f.dim + r]) / (2.0 * h);
      xp[c] = xm[c] = x[c];
    }
  }
  if (!all_finite(out)) throw NonFinite{};
  return out;
}

std::vector<double> eval(const CoupledField& f, double t, std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(f.output_size());
  if (f.columns > 0) f.eval(t, x, y, out);
  if (!all_finite(out)) throw NonFinite{};
  return out;
}

std::vector<double> jac(const CoupledField& f, double t, std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(f.columns * f.dim * f.dim);
  if (f.columns == 0) return out;
  if (f.has_jacobian()) {
    f.jacobian_y(t, x, y, out);
  } else {
    std::vector<double> yp(y.begin(), y.end()), ym(y.begin(), y.end());
    for (std::size_t c = 0; c < f.dim; ++c) {
      const double h = 1e-6 * (1.0 + std::abs(y[c]));
      yp[c] = y[c] + h;
      ym[c] = y[c] - h;
      auto fp = eval(f, t, x, yp), fm = eval(f, t, x, ym);
      for (std::size_t j = 0; j < f.columns; ++j)
        for (std::size_t r = 0; r < f.dim; ++r)
          out[j * f.dim * f.dim + r * f.dim + c] = (fp[j * f.dim + r] - fm[j * f.dim + r]) / (2.0 * h);
      yp[c] = ym[c] = y[c];
    }
  }
  if (!all_finite(out)) throw NonFinite{};
  return out;
}

enum class BlockKind { time, ball };

struct Block {
  BlockKind kind;
  std::size_t size;
  std::string label;
  int near_to = -1;  // index of the block this one is sometimes sampled next to
};

struct Condition {
  std::string id;
  std::string description;
  std::vector<Block> blocks;
  // Receives one span per block; NaN means "not evaluable here" (coincident pair).
  std::function<double(const std::vector<std::span<const double>>&)> ratio;
};

class Search {
 public:
  Search(const Condition& cond, double horizon, double radius)
      : cond_(cond), horizon_(horizon), radius_(radius) {
    for (const auto& b : cond.blocks) {
      offsets_.push_back(width_);
      width_ += b.size;
    }
  }

  std::size_t width() const { return width_; }

  void draw(CounterStream& stream, std::vector<double>& point) const {
    point.assign(width_, 0.0);
    for (std::size_t bi = 0; bi < cond_.blocks.size(); ++bi) {
      const Block& b = cond_.blocks[bi];
      double* dst = point.data() + offsets_[bi];
      const bool near = b.near_to >= 0 && stream.uniform() < 0.5;
      if (near) {
        const double* src = point.data() + offsets_[static_cast<std::size_t>(b.near_to)];
        const double scale = (b.kind == BlockKind::time ? horizon_ : radius_) * std::pow(10.0, -4.0 + 3.0 * stream.uniform());
        if (b.kind == BlockKind::time) {
          dst[0] = src[0] + (stream.uniform() < 0.5 ? -scale : scale);
        } else {
          std::vector<double> dir(b.size);
          for (auto& v : dir) v = stream.normal();
          const double len = vec_norm(dir);
          for (std::size_t i = 0; i < b.size; ++i) dst[i] = src[i] + scale * dir[i] / len;
        }
      } else if (b.kind == BlockKind::time) {
        dst[0] = horizon_ * stream.uniform();
      } else {
        std::vector<double> dir(b.size);
        for (auto& v : dir) v = stream.normal();
        const double len = vec_norm(dir);
        const double r = radius_ * std::pow(stream.uniform(), 1.0 / static_cast<double>(b.size));
        for (std::size_t i = 0; i < b.size; ++i) dst[i] = r * dir[i] / len;
      }
      project(bi, point);
    }
  }

  // Ratio at a point; throws NonFinite from the evaluators.
  double value(const std::vector<double>& point) const {
    std::vector<std::span<const double>> parts;
    for (std::size_t bi = 0; bi < cond_.blocks.size(); ++bi)
      parts.emplace_back(point.data() + offsets_[bi], cond_.blocks[bi].size);
    return cond_.ratio(parts);
  }

  // Pattern search; returns the best value and moves `point` onto its argmax.
  double refine(std::vector<double>& point, double current) const {
    std::vector<double> step(width_);
    for (std::size_t bi = 0; bi < cond_.blocks.size(); ++bi)
      for (std::size_t i = 0; i < cond_.blocks[bi].size; ++i)
        step[offsets_[bi] + i] = 0.05 * (cond_.blocks[bi].kind == BlockKind::time ? horizon_ : radius_);
    int evaluations = 0;
    for (int sweep = 0; sweep < 60 && evaluations < 4000; ++sweep) {
      bool improved = false;
      for (std::size_t c = 0; c < width_; ++c) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> candidate = point;
          candidate[c] += sign * step[c];
          project(block_of(c), candidate);
          ++evaluations;
          const double v = value(candidate);
          if (v > current) {
            current = v;
            point = std::move(candidate);
            improved = true;
            break;
          }
        }
      }
      if (!improved)
        for (auto& s : step) s *= 0.5;
    }
    return current;
  }

  std::string layout() const {
    std::string out;
    for (const auto& b : cond_.blocks) {
      if (!out.empty()) out += ",";
      out += b.label;
      if (b.size > 1) out += "[" + std::to_string(b.size) + "]";
    }
    return out;
  }

 private:
  std::size_t block_of(std::size_t coordinate) const {
    std::size_t bi = 0;
    while (bi + 1 < offsets_.size() && offsets_[bi + 1] <= coordinate) ++bi;
    return bi;
  }

  void project(std::size_t bi, std::vector<double>& point) const {
    const Block& b = cond_.blocks[bi];
    double* p = point.data() + offsets_[bi];
    if (b.kind == BlockKind::time) {
      p[0] = std::clamp(p[0], 0.0, horizon_);
      return;
    }
    const double len = vec_norm({p, b.size});
    if (len > radius_)
      for (std::size_t i = 0; i < b.size; ++i) p[i] *= radius_ / len;
  }

  const Condition& cond_;
  double horizon_;
  double radius_;
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
};

ConditionEstimate run_condition(const Condition& cond, std::size_t index, double horizon, double radius,
                                std::size_t samples, std::uint64_t seed, const AssumptionClaims& claims) {
  Search search(cond, horizon, radius);
  ConditionEstimate est;
  est.id = cond.id;
  est.description = cond.description;
  est.witness_layout = search.layout();
  auto claimed = claims.constants.find(cond.id);
  if (claimed != claims.constants.end()) est.claimed = claimed->second;

  const std::uint64_t key = derive_key(seed, StreamRole::validator, index);
  double record = -std::numeric_limits<double>::infinity();
  double best = 0.0;
  std::vector<double> point;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterStream stream(key, i);
    search.draw(stream, point);
    double v;
    try {
      v = search.value(point);
    } catch (const NonFinite&) {
      est.violated = true;
      est.witness = point;
      est.estimate = std::numeric_limits<double>::infinity();
      est.note = "coefficient returned a non-finite value";
      return est;
    }
    if (std::isnan(v) || !(v > record)) continue;
    record = v;
    std::vector<double> refined = point;
    double r;
    try {
      r = search.refine(refined, v);
    } catch (const NonFinite&) {
      r = v;
      refined = point;
    }
    if (r > best || est.witness.empty()) {
      best = std::max(best, r);
      est.witness = refined;
    }
  }
  est.estimate = best;
  if (est.claimed && best > kViolationFactor * *est.claimed) est.violated = true;
  return est;
}

double time_exponent(const AssumptionClaims& claims, const DriverSpec& drivers) {
  if (claims.beta) return *claims.beta;
  if (drivers.rough_dim() > 0) return default_time_exponent(drivers.holder_order);
  return 0.25;
}

std::vector<Condition> state_conditions(const ModelSpec& m, AssumptionSet set) {
  const std::size_t d = m.state_dim;
  const std::size_t wm = m.drivers.wiener_dim;
  const std::size_t l = m.drivers.rough_dim();
  const double beta = time_exponent(m.claims, m.drivers);
  const Block t{BlockKind::time, 1, "t"};
  const Block s{BlockKind::time, 1, "s", 0};
  const Block x{BlockKind::ball, d, "x"};
  const Block x1{BlockKind::ball, d, "x1"};
  const Block x2{BlockKind::ball, d, "x2", 1};

  auto size_sum = [&m, d, wm, l](double tt, std::span<const double> xx) {
    return vec_norm(eval(m.drift, tt, xx)) + matrix_norm(eval(m.diffusion, tt, xx), d, wm) +
           matrix_norm(eval(m.rough, tt, xx), d, l);
  };
  auto derivative_bound = [&m, d, l](const std::vector<std::span<const double>>& p) {
    return jacobian_norm(jac(m.rough, p[0][0], p[1]), d, l);
  };
  auto lipschitz = [&m, d, wm, l](const std::vector<std::span<const double>>& p) {
    const double tt = p[0][0];
    const double dist = vec_norm(difference({p[1].begin(), p[1].end()}, {p[2].begin(), p[2].end()}));
    if (!(dist > 1e-12)) return kNaN;
    const double da = vec_norm(difference(eval(m.drift, tt, p[1]), eval(m.drift, tt, p[2])));
    const double db = matrix_norm(difference(eval(m.diffusion, tt, p[1]), eval(m.diffusion, tt, p[2])), d, wm);
    const double dc = jacobian_norm(difference(jac(m.rough, tt, p[1]), jac(m.rough, tt, p[2])), d, l);
    return (da + db + dc) / dist;
  };
  auto time_c = [&m, d, l, beta](const std::vector<std::span<const double>>& p) {
    const double gap = std::abs(p[0][0] - p[1][0]);
    if (!(gap > 1e-12)) return kNaN;
    return matrix_norm(difference(eval(m.rough, p[0][0], p[2]), eval(m.rough, p[1][0], p[2])), d, l) /
           std::pow(gap, beta);
  };
  auto time_dc = [&m, d, l, beta](const std::vector<std::span<const double>>& p) {
    const double gap = std::abs(p[0][0] - p[1][0]);
    if (!(gap > 1e-12)) return kNaN;
    return jacobian_norm(difference(jac(m.rough, p[0][0], p[2]), jac(m.rough, p[1][0], p[2])), d, l) /
           std::pow(gap, beta);
  };

  std::vector<Condition> out;
  if (set == AssumptionSet::A) {
    out.push_back({"A1", "(|a|+|b|+|c|)/(1+|x|)", {t, x}, [size_sum](const auto& p) {
                     return size_sum(p[0][0], p[1]) / (1.0 + vec_norm(p[1]));
                   }});
    out.push_back({"A2", "|c'_x|", {t, x}, derivative_bound});
    out.push_back({"A3", "(|da|+|db|+|dc'_x|)/|x1-x2| on the box", {t, x1, x2}, lipschitz});
    out.push_back({"A4.c", "|c(t,x)-c(s,x)|/(|t-s|^beta (1+|x|))", {t, s, x}, [time_c](const auto& p) {
                     return time_c(p) / (1.0 + vec_norm(p[2]));
                   }});
    out.push_back({"A4.dc", "|c'_x(t,x)-c'_x(s,x)|/|t-s|^beta", {t, s, x}, time_dc});
  } else if (set == AssumptionSet::B) {
    out.push_back({"B1", "|a|+|b|+|c|", {t, x}, [size_sum](const auto& p) { return size_sum(p[0][0], p[1]); }});
    out.push_back({"B2", "|c'_x|", {t, x}, derivative_bound});
    out.push_back({"B3", "(|da|+|db|+|dc'_x|)/|x1-x2| on the box", {t, x1, x2}, lipschitz});
    out.push_back({"B4", "(|c(t,x)-c(s,x)|+|c'_x(t,x)-c'_x(s,x)|)/|t-s|^beta", {t, s, x},
                   [time_c, time_dc](const auto& p) {
                     const double a = time_c(p);
                     return std::isnan(a) ? kNaN : a + time_dc(p);
                   }});
  } else {
    throw DomainError("validate_assumptions: set C needs a coupled model");
  }
  return out;
}

std::vector<Condition> coupled_conditions(const CoupledModel& m) {
  const std::size_t dx = m.base.state_dim;
  const std::size_t k = m.state_dim;
  const std::size_t r = m.drivers.wiener_dim;
  const std::size_t q = m.drivers.rough_dim();
  const double beta = time_exponent(m.claims, m.drivers);
  const double rho = m.claims.rho.value_or(0.0);
  const Block t{BlockKind::time, 1, "t"};
  const Block s{BlockKind::time, 1, "s", 0};
  const Block x{BlockKind::ball, dx, "x"};
  const Block y{BlockKind::ball, k, "y"};
  auto x_weight = [rho](std::span<const double> xx) { return 1.0 + std::pow(vec_norm(xx), rho); };

  std::vector<Condition> out;
  out.push_back({"C1", "(|a~|+|c~|)/((1+|x|^rho)(1+|y|))", {t, x, y}, [&m, k, q, x_weight](const auto& p) {
                   const double v = vec_norm(eval(m.drift, p[0][0], p[1], p[2])) +
                                    matrix_norm(eval(m.rough, p[0][0], p[1], p[2]), k, q);
                   return v / (x_weight(p[1]) * (1.0 + vec_norm(p[2])));
                 }});
  out.push_back({"C2", "|b~|/(1+|y|)", {t, x, y}, [&m, k, r](const auto& p) {
                   return matrix_norm(eval(m.diffusion, p[0][0], p[1], p[2]), k, r) / (1.0 + vec_norm(p[2]));
                 }});
  out.push_back({"C3", "|c~'_y|/(1+|x|^rho)", {t, x, y}, [&m, k, q, x_weight](const auto& p) {
                   return jacobian_norm(jac(m.rough, p[0][0], p[1], p[2]), k, q) / x_weight(p[1]);
                 }});
  out.push_back({"C4", "(|da~|+|db~|+|dc~'_y|)/|y1-y2| on the box",
                 {t, x, Block{BlockKind::ball, k, "y1"}, Block{BlockKind::ball, k, "y2", 2}},
                 [&m, k, r, q](const auto& p) {
                   const double tt = p[0][0];
                   const double dist = vec_norm(difference({p[2].begin(), p[2].end()}, {p[3].begin(), p[3].end()}));
                   if (!(dist > 1e-12)) return kNaN;
                   const double da = vec_norm(difference(eval(m.drift, tt, p[1], p[2]), eval(m.drift, tt, p[1], p[3])));
                   const double db = matrix_norm(
                       difference(eval(m.diffusion, tt, p[1], p[2]), eval(m.diffusion, tt, p[1], p[3])), k, r);
                   const double dc =
                       jacobian_norm(difference(jac(m.rough, tt, p[1], p[2]), jac(m.rough, tt, p[1], p[3])), k, q);
                   return (da + db + dc) / dist;
                 }});
  out.push_back({"C5", "|c~(t,x1,y)-c~(t,x2,y)|/(|x1-x2|(1+|y|))",
                 {t, Block{BlockKind::ball, dx, "x1"}, Block{BlockKind::ball, dx, "x2", 1}, y},
                 [&m, k, q](const auto& p) {
                   const double dist = vec_norm(difference({p[1].begin(), p[1].end()}, {p[2].begin(), p[2].end()}));
                   if (!(dist > 1e-12)) return kNaN;
                   const double dc =
                       matrix_norm(difference(eval(m.rough, p[0][0], p[1], p[3]), eval(m.rough, p[0][0], p[2], p[3])), k, q);
                   return dc / (dist * (1.0 + vec_norm(p[3])));
                 }});
  out.push_back({"C6.c", "|c~(t)-c~(s)|/(|t-s|^beta (1+|x|^rho)(1+|y|))", {t, s, x, y},
                 [&m, k, q, beta, x_weight](const auto& p) {
                   const double gap = std::abs(p[0][0] - p[1][0]);
                   if (!(gap > 1e-12)) return kNaN;
                   const double dc =
                       matrix_norm(difference(eval(m.rough, p[0][0], p[2], p[3]), eval(m.rough, p[1][0], p[2], p[3])), k, q);
                   return dc / (std::pow(gap, beta) * x_weight(p[2]) * (1.0 + vec_norm(p[3])));
                 }});
  out.push_back({"C6.dc", "|c~'_y(t)-c~'_y(s)|/(|t-s|^beta (1+|y|))", {t, s, x, y},
                 [&m, k, q, beta](const auto& p) {
                   const double gap = std::abs(p[0][0] - p[1][0]);
                   if (!(gap > 1e-12)) return kNaN;
                   const double dc = jacobian_norm(
                       difference(jac(m.rough, p[0][0], p[2], p[3]), jac(m.rough, p[1][0], p[2], p[3])), k, q);
                   return dc / (std::pow(gap, beta) * (1.0 + vec_norm(p[3])));
                 }});
  return out;
}

AssumptionReport run_all(const std::vector<Condition>& conditions, AssumptionSet set, double horizon,
                         double radius, std::size_t samples, std::uint64_t seed, const AssumptionClaims& claims) {
  if (samples < kMinValidatorSamples) throw DomainError("validate_assumptions: need at least 1000 samples");
  if (!(radius > 0.0)) throw DomainError("validate_assumptions: box radius must be positive");
  AssumptionReport report;
  report.set = set;
  report.box_radius = radius;
  report.samples = samples;
  const AssumptionClaims no_claims;
  const AssumptionClaims& used = claims.set == set ? claims : no_claims;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    report.conditions.push_back(run_condition(conditions[i], i, horizon, radius, samples, seed, used));
    if (report.conditions.back().violated) report.verdict = Verdict::violated;
  }
  return report;
}

}  // namespace

const ConditionEstimate& AssumptionReport::condition(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw DomainError("AssumptionReport: no condition '" + id + "'");
}

std::string to_string(Verdict v) { return v == Verdict::violated ? "violated" : "no-violation-found"; }

AssumptionReport validate_assumptions(const ModelSpec& model, AssumptionSet set, double box_radius,
                                      std::size_t samples, std::uint64_t seed) {
  model.validate();
  return run_all(state_conditions(model, set), set, model.horizon, box_radius, samples, seed, model.claims);
}

AssumptionReport validate_assumptions(const CoupledModel& model, AssumptionSet set, double box_radius,
                                      std::size_t samples, std::uint64_t seed) {
  model.validate();
  if (set != AssumptionSet::C) return validate_assumptions(model.base, set, box_radius, samples, seed);
  return run_all(coupled_conditions(model), set, model.base.horizon, box_radius, samples, seed, model.claims);
}

}  // namespace mixsde
