#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace jm {

struct NelderMeadOptions {
  long max_evaluations = 20000;
  double simplex_tolerance = 1e-9; // diameter below this counts as converged
  double initial_step = 0.25;
};

struct NelderMeadResult {
  Eigen::VectorXd point;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// downhill simplex with the standard reflection, expansion,
// contraction and shrink coefficients
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& start,
                                    const NelderMeadOptions& opts = {}) {
  const int n = static_cast<int>(start.size());
  NelderMeadResult result;
  if (n == 0) {
    result.point = start;
    result.value = f(start);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  long evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, start);
  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  vals[0] = eval(pts[0]);
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i) + 1][i] += opts.initial_step;
    vals[static_cast<std::size_t>(i) + 1] = eval(pts[static_cast<std::size_t>(i) + 1]);
  }

  std::vector<int> order(static_cast<std::size_t>(n) + 1);
  std::iota(order.begin(), order.end(), 0);
  bool converged = false;

  while (evals < opts.max_evaluations) {
    std::sort(order.begin(), order.end(), [&](int p, int q) { return vals[p] < vals[q]; });
    const int best = order[0];
    const int worst = order[static_cast<std::size_t>(n)];
    const int second = order[static_cast<std::size_t>(n) - 1];

    double diameter = 0.0;
    for (int i = 0; i <= n; ++i)
      diameter = std::max(diameter, (pts[static_cast<std::size_t>(i)] - pts[best]).norm());
    if (diameter < opts.simplex_tolerance) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[static_cast<std::size_t>(i)];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double fr = eval(reflected);

    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }

    bool shrink = false;
    if (fr < vals[worst]) {
      const Eigen::VectorXd outside = centroid + 0.5 * (reflected - centroid);
      const double fc = eval(outside);
      if (fc <= fr) {
        pts[worst] = outside;
        vals[worst] = fc;
      } else {
        shrink = true;
      }
    } else {
      const Eigen::VectorXd inside = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = eval(inside);
      if (fc < vals[worst]) {
        pts[worst] = inside;
        vals[worst] = fc;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (int i = 0; i <= n; ++i) {
        if (i == best) continue;
        pts[static_cast<std::size_t>(i)] = pts[best] + 0.5 * (pts[static_cast<std::size_t>(i)] - pts[best]);
        vals[static_cast<std::size_t>(i)] = eval(pts[static_cast<std::size_t>(i)]);
        if (evals >= opts.max_evaluations) break;
      }
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  result.point = pts[static_cast<std::size_t>(best_it - vals.begin())];
  result.value = *best_it;
  result.evaluations = evals;
  result.converged = converged;
  return result;
}

} // namespace jm
