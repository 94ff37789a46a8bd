#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixsde/models.hpp"

namespace mixsde {

struct ConditionEstimate {
  std::string id;           // "A1", "A4.c", "C6.dc", ...
  std::string description;  // the maximized ratio
  double estimate = 0.0;    // largest ratio found
  std::optional<double> claimed;
  bool violated = false;
  std::string witness_layout;   // e.g. "t,x1,x2"
  std::vector<double> witness;  // argmax (or first non-finite point)
  std::string note;
};

enum class Verdict { no_violation_found, violated };

/// Sampling can only falsify a condition: "no_violation_found" is the
/// strongest positive verdict.
struct AssumptionReport {
  AssumptionSet set = AssumptionSet::none;
  double box_radius = 10.0;
  std::size_t samples = 0;
  std::vector<ConditionEstimate> conditions;
  Verdict verdict = Verdict::no_violation_found;

  const ConditionEstimate& condition(const std::string& id) const;
};

std::string to_string(Verdict v);

inline constexpr double kViolationFactor = 1.01;
inline constexpr std::size_t kMinValidatorSamples = 1000;

/// Monte Carlo maximization of each condition's ratio over [0, T] x {|x| <= R},
/// refined by pattern search from every running-maximum sample. A condition
/// is violated when a claimed constant is exceeded by more than 1 %, or when a
/// coefficient returns a non-finite value.
AssumptionReport validate_assumptions(const ModelSpec& model, AssumptionSet set, double box_radius,
                                      std::size_t samples, std::uint64_t seed);

/// Set C checks the coupled coefficients; A and B check the base equation.
AssumptionReport validate_assumptions(const CoupledModel& model, AssumptionSet set, double box_radius,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace mixsde
