#ifndef WEAKWHITTLE_OPTIMIZER_HPP
#define WEAKWHITTLE_OPTIMIZER_HPP

/** @file
 * Box-constrained Nelder-Mead with a grid multistart.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace weakwhittle {

struct OptimizerOptions {
  double relative_tolerance = 1e-9;
  std::size_t max_iterations = 2000;
  std::size_t grid_points_per_axis = 5;
  std::size_t max_grid_axes = 3;
  double initial_step = 0.1;  // fraction of the box width
};

struct OptimizerResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

inline Eigen::VectorXd project_to_box(Eigen::VectorXd x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

/// Nelder-Mead local search; trial points are projected onto [lo, hi].
inline OptimizerResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn, Eigen::VectorXd start,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                   const OptimizerOptions& opts = {}) {
  const Eigen::Index p = start.size();
  OptimizerResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double v = fn(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(p + 1));
  std::vector<double> values(static_cast<std::size_t>(p + 1));
  simplex[0] = project_to_box(std::move(start), lo, hi);
  for (Eigen::Index i = 0; i < p; ++i) {
    Eigen::VectorXd v = simplex[0];
    const double step = opts.initial_step * (hi[i] - lo[i]);
    v[i] += (v[i] + step <= hi[i]) ? step : -step;
    simplex[static_cast<std::size_t>(i + 1)] = project_to_box(v, lo, hi);
  }
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  for (result.iterations = 0; result.iterations < opts.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    const double spread = std::abs(values[worst] - values[best]);
    double size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v - simplex[best]).cwiseAbs().maxCoeff());
    if (std::isfinite(values[best]) && spread <= opts.relative_tolerance * std::max(1e-300, std::abs(values[best])) &&
        size <= 1e-7) {
      result.converged = true;
      break;
    }
    if (std::isfinite(values[best]) && size <= 1e-12) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
    for (std::size_t i : order)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(p);

    const Eigen::VectorXd reflected = project_to_box(centroid + (centroid - simplex[worst]), lo, hi);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Eigen::VectorXd expanded = project_to_box(centroid + 2.0 * (centroid - simplex[worst]), lo, hi);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i : order) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

/// Interior grid with `per_axis` points on the first `max_axes` coordinates; others at the box centre.
inline std::vector<Eigen::VectorXd> multistart_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                                    std::size_t per_axis, std::size_t max_axes) {
  const Eigen::Index p = lo.size();
  const auto axes = static_cast<Eigen::Index>(std::min<std::size_t>(static_cast<std::size_t>(p), max_axes));
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < axes; ++i) total *= per_axis;
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd x = 0.5 * (lo + hi);
    std::size_t rest = idx;
    for (Eigen::Index i = 0; i < axes; ++i) {
      const auto k = static_cast<double>(rest % per_axis);
      rest /= per_axis;
      x[i] = lo[i] + (k + 1.0) / static_cast<double>(per_axis + 1) * (hi[i] - lo[i]);
    }
    grid.push_back(std::move(x));
  }
  return grid;
}

/// Evaluate the multistart grid, then refine from the best point.
inline OptimizerResult minimize_in_box(const std::function<double(const Eigen::VectorXd&)>& fn,
                                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                       const OptimizerOptions& opts = {}) {
  const auto grid = multistart_grid(lo, hi, opts.grid_points_per_axis, opts.max_grid_axes);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = fn(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  OptimizerResult r = nelder_mead(fn, grid[best], lo, hi, opts);
  r.evaluations += grid.size();
  return r;
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_OPTIMIZER_HPP
