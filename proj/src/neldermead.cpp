#include "qopt/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qopt {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

NelderMeadResult local_optimize(const Objective& f, std::span<const double> start,
                                const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  NelderMeadResult result;
  result.point.assign(start.begin(), start.end());

  long long evals = 0;
  bool stopped = false;
  auto evaluate = [&](const std::vector<double>& x) {
    ++evals;
    if (options.should_stop && options.should_stop()) stopped = true;
    return f(x);
  };

  result.value = evaluate(result.point);
  if (dim == 0) return result;

  // Track the best point ever seen; only strict improvements replace it, so a
  // flat objective returns the start point untouched.
  auto consider = [&](const std::vector<double>& x, double fx) {
    if (fx < result.value) {
      result.value = fx;
      result.point = x;
    }
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back(Vertex{result.point, result.value});
  for (std::size_t i = 0; i < dim && evals < options.max_evaluations && !stopped; ++i) {
    std::vector<double> x(start.begin(), start.end());
    x[i] += x[i] != 0.0 ? 0.05 * x[i] : 0.00025;
    const double fx = evaluate(x);
    consider(x, fx);
    simplex.push_back(Vertex{std::move(x), fx});
  }

  auto order = [&]() {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  while (simplex.size() == dim + 1) {
    order();
    if (evals >= options.max_evaluations || stopped) break;

    double x_spread = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double lo = simplex[0].x[i], hi = simplex[0].x[i];
      for (const Vertex& v : simplex) {
        lo = std::min(lo, v.x[i]);
        hi = std::max(hi, v.x[i]);
      }
      x_spread = std::max(x_spread, hi - lo);
    }
    if (simplex.back().f - simplex.front().f <= options.f_tolerance &&
        x_spread <= options.x_tolerance)
      break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    for (double& c : centroid) c /= static_cast<double>(dim);

    const Vertex& worst = simplex.back();
    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = centroid[i] + t * (centroid[i] - worst.x[i]);
      return p;
    };

    std::vector<double> reflected = blend(1.0);
    const double f_reflected = evaluate(reflected);
    consider(reflected, f_reflected);

    if (f_reflected < simplex[0].f) {
      std::vector<double> expanded = blend(2.0);
      const double f_expanded = evaluate(expanded);
      consider(expanded, f_expanded);
      simplex.back() = f_expanded < f_reflected ? Vertex{std::move(expanded), f_expanded}
                                                : Vertex{std::move(reflected), f_reflected};
      continue;
    }
    if (f_reflected < simplex[dim - 1].f) {
      simplex.back() = Vertex{std::move(reflected), f_reflected};
      continue;
    }

    if (f_reflected < worst.f) {
      std::vector<double> outside = blend(0.5);
      const double f_outside = evaluate(outside);
      consider(outside, f_outside);
      if (f_outside <= f_reflected) {
        simplex.back() = Vertex{std::move(outside), f_outside};
        continue;
      }
    } else {
      std::vector<double> inside = blend(-0.5);
      const double f_inside = evaluate(inside);
      consider(inside, f_inside);
      if (f_inside < worst.f) {
        simplex.back() = Vertex{std::move(inside), f_inside};
        continue;
      }
    }

    // Shrink toward the best vertex.
    for (std::size_t v = 1; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i)
        simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
      if (evals >= options.max_evaluations || stopped) break;
      simplex[v].f = evaluate(simplex[v].x);
      consider(simplex[v].x, simplex[v].f);
    }
  }

  result.evaluations = evals;
  result.status = stopped ? OptStatus::stopped
                          : (evals >= options.max_evaluations ? OptStatus::budget_exhausted
                                                              : OptStatus::converged);
  return result;
}

}  // namespace qopt
