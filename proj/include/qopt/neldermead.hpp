#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qopt {

using Objective = std::function<double(std::span<const double>)>;

enum class OptStatus { converged, budget_exhausted, stopped };

struct NelderMeadOptions {
  long long max_evaluations = 5000;
  double f_tolerance = 1e-10;   // spread of simplex values
  double x_tolerance = 1e-9;    // spread of simplex points
  // Cooperative cancellation, polled once per evaluation; return true to stop.
  std::function<bool()> should_stop;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0.0;
  long long evaluations = 0;
  OptStatus status = OptStatus::converged;
};

// Derivative-free simplex descent with standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Deterministic
// given the start point; the returned value never exceeds f(start).
NelderMeadResult local_optimize(const Objective& f, std::span<const double> start,
                                const NelderMeadOptions& options = {});

}  // namespace qopt
