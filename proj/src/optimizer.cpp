#include "jm/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "jm/bloch.hpp"
#include "jm/linalg.hpp"
#include "jm/nelder_mead.hpp"

namespace jm {

namespace {

void require_matching(const Povm& a, const Povm& b) {
  require_valid(a);
  require_valid(b);
  if (a.dim != b.dim) throw ValidationError("measurements act on different spaces");
  if (a.outcomes() != b.outcomes()) throw ValidationError("outcome counts differ");
}

// solve the last row and column of the coefficient grid from the
// marginal constraints; component zero of each row and column sums to
// the outcome count, every other component to zero
std::vector<Eigen::VectorXd> complete_coefficients(int d, int m, const Eigen::VectorXd& params) {
  std::vector<Eigen::VectorXd> grid(static_cast<std::size_t>(d) * d, Eigen::VectorXd::Zero(m));
  Eigen::VectorXd target = Eigen::VectorXd::Zero(m);
  target[0] = d;
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j)
      grid[static_cast<std::size_t>(i) * d + j] =
          params.segment(static_cast<Eigen::Index>(i * (d - 1) + j) * m, m);
  for (int i = 0; i < d - 1; ++i) {
    Eigen::VectorXd rest = target;
    for (int j = 0; j < d - 1; ++j) rest -= grid[static_cast<std::size_t>(i) * d + j];
    grid[static_cast<std::size_t>(i) * d + (d - 1)] = rest;
  }
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd rest = target;
    for (int i = 0; i < d - 1; ++i) rest -= grid[static_cast<std::size_t>(i) * d + j];
    grid[static_cast<std::size_t>(d - 1) * d + j] = rest;
  }
  return grid;
}

// same completion specialized to qubit scalar and vector grids
void complete_qubit_grids(int d, const Eigen::VectorXd& params, std::vector<double>& t0,
                          std::vector<Eigen::Vector3d>& tv) {
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j) {
      const Eigen::Index base = static_cast<Eigen::Index>(i * (d - 1) + j) * 4;
      t0[static_cast<std::size_t>(i) * d + j] = params[base];
      tv[static_cast<std::size_t>(i) * d + j] =
          Eigen::Vector3d(params[base + 1], params[base + 2], params[base + 3]);
    }
  for (int i = 0; i < d - 1; ++i) {
    double s = d;
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int j = 0; j < d - 1; ++j) {
      s -= t0[static_cast<std::size_t>(i) * d + j];
      v -= tv[static_cast<std::size_t>(i) * d + j];
    }
    t0[static_cast<std::size_t>(i) * d + (d - 1)] = s;
    tv[static_cast<std::size_t>(i) * d + (d - 1)] = v;
  }
  for (int j = 0; j < d; ++j) {
    double s = d;
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int i = 0; i < d - 1; ++i) {
      s -= t0[static_cast<std::size_t>(i) * d + j];
      v -= tv[static_cast<std::size_t>(i) * d + j];
    }
    t0[static_cast<std::size_t>(d - 1) * d + j] = s;
    tv[static_cast<std::size_t>(d - 1) * d + j] = v;
  }
}

struct FastQubitObjective {
  QubitPair qp;
  int d = 2;
  mutable std::vector<double> t0;
  mutable std::vector<Eigen::Vector3d> tv;

  explicit FastQubitObjective(QubitPair pair)
      : qp(std::move(pair)),
        d(qp.d),
        t0(static_cast<std::size_t>(qp.d) * qp.d, 0.0),
        tv(static_cast<std::size_t>(qp.d) * qp.d, Eigen::Vector3d::Zero()) {}

  double operator()(const Eigen::VectorXd& params) const {
    complete_qubit_grids(d, params, t0, tv);
    return negativity_qubit_fast(qp, t0, tv);
  }
};

struct DenseObjective {
  const Povm* a;
  const Povm* b;
  int d;
  int dim;

  double operator()(const Eigen::VectorXd& params) const {
    const auto chunks = complete_coefficients(d, dim * dim, params);
    double total = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const ComplexMatrix w =
            (a->effects[static_cast<std::size_t>(i)] + b->effects[static_cast<std::size_t>(j)]) /
                static_cast<double>(d) -
            bloch_decode(chunks[static_cast<std::size_t>(i) * d + j], dim,
                         static_cast<double>(d) * d);
        total += negative_part_norm(w);
      }
    return total / dim;
  }
};

Eigen::VectorXd uniform_start(const ThetaParameterization& par) {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(par.parameter_count());
  const int m = par.dim * par.dim;
  for (int k = 0; k < par.free_entries(); ++k) params[static_cast<Eigen::Index>(k) * m] = 1.0;
  return params;
}

// exact minimizer over diagonal scalar sets for two-outcome qubit
// pairs: the objective is convex and piecewise linear in the single
// scalar, so a ternary search pins it down
Eigen::VectorXd scalar_warm_start(const QubitPair& qp) {
  std::vector<Eigen::Vector3d> tv(4, Eigen::Vector3d::Zero());
  std::vector<double> t0(4, 0.0);
  auto value = [&](double t) {
    t0[0] = t0[3] = t;
    t0[1] = t0[2] = 2.0 - t;
    return negativity_qubit_fast(qp, t0, tv);
  };
  double lo = -2.0, hi = 4.0;
  for (int k = 0; k < 160; ++k) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (value(m1) <= value(m2))
      hi = m2;
    else
      lo = m1;
  }
  Eigen::VectorXd params = Eigen::VectorXd::Zero(4);
  params[0] = 0.5 * (lo + hi);
  return params;
}

int matched_direction(int i, int j) {
  int k = (2 * (i + j + 2)) % 3;
  if (k == 0) k = 3;
  return k - 1;
}

// analytic start for unbiased three-outcome qubit pairs: vector parts
// from the matched-direction grid at the best outcome relabeling,
// scalars from the residual-proportional split when it stays feasible
std::optional<Eigen::VectorXd> trine_warm_start(const QubitPair& qp) {
  for (int i = 0; i < 3; ++i)
    if (std::abs(qp.ta[static_cast<std::size_t>(i)] - 2.0 / 3.0) > 1e-9 ||
        std::abs(qp.tb[static_cast<std::size_t>(i)] - 2.0 / 3.0) > 1e-9)
      return std::nullopt;

  std::array<Eigen::Vector3d, 3> a, b;
  for (int i = 0; i < 3; ++i) {
    a[static_cast<std::size_t>(i)] = 1.5 * qp.va[static_cast<std::size_t>(i)];
    b[static_cast<std::size_t>(i)] = 1.5 * qp.vb[static_cast<std::size_t>(i)];
  }

  std::array<int, 3> perm = {0, 1, 2}, best_perm = {0, 1, 2};
  double best_sum = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int k = matched_direction(i, j);
        s += (a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] -
              (a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]))
                 .norm();
      }
    if (s < best_sum) {
      best_sum = s;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::array<double, 9> r{};
  double r_total = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int k = matched_direction(i, j);
      const std::size_t jj = static_cast<std::size_t>(best_perm[static_cast<std::size_t>(j)]);
      r[static_cast<std::size_t>(i) * 3 + j] =
          (a[static_cast<std::size_t>(i)] + b[jj] -
           (a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(best_perm[static_cast<std::size_t>(k)])]))
              .norm();
      if (i != j) r_total += r[static_cast<std::size_t>(i) * 3 + j];
    }

  // residual-proportional split: each off-diagonal scalar hands the
  // matching share of the slack to its vector mismatch, which makes
  // all negative parts vanish together exactly on the boundary
  std::array<double, 9> s0{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * 3 + j;
      if (i == j)
        s0[idx] = 2.0;
      else if (r_total > 1e-12)
        s0[idx] = 2.0 - 9.0 * r[idx] / r_total;
      else
        s0[idx] = 0.5;
    }

  bool feasible = true;
  for (int i = 0; i < 3; ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < 3; ++j) {
      row += s0[static_cast<std::size_t>(i) * 3 + j];
      col += s0[static_cast<std::size_t>(j) * 3 + i];
    }
    if (std::abs(row - 3.0) > 1e-9 || std::abs(col - 3.0) > 1e-9) feasible = false;
  }
  if (!feasible)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s0[static_cast<std::size_t>(i) * 3 + j] = (i == j) ? 2.0 : 0.5;

  Eigen::VectorXd params = Eigen::VectorXd::Zero(16);
  for (int i = 0; i < 2; ++i)
    for (int jp = 0; jp < 3; ++jp) {
      const int j = best_perm[static_cast<std::size_t>(jp)];
      if (j >= 2) continue;
      const int k = matched_direction(i, jp);
      const Eigen::Vector3d vec =
          a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(best_perm[static_cast<std::size_t>(k)])];
      const Eigen::Index base = static_cast<Eigen::Index>(i * 2 + j) * 4;
      params[base] = s0[static_cast<std::size_t>(i) * 3 + jp];
      params[base + 1] = vec[0];
      params[base + 2] = vec[1];
      params[base + 3] = vec[2];
    }
  return params;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix clamp_positive(const ComplexMatrix& m) {
  const EigResult r = eig_hermitian(m);
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < r.values.size(); ++k) {
    const double lam = std::max(r.values[k], 0.0);
    if (lam > 0.0) out += lam * r.vectors.col(k) * r.vectors.col(k).adjoint();
  }
  return jm::hermitize(out, 1e-8);
}

} // namespace

DifferentialSet ThetaParameterization::to_theta(const Eigen::VectorXd& params) const {
  if (params.size() != parameter_count())
    throw ValidationError("parameter vector has the wrong length");
  const auto chunks = complete_coefficients(d, dim * dim, params);
  DifferentialSet theta;
  theta.d = d;
  theta.dim = dim;
  theta.grid.reserve(chunks.size());
  for (const auto& c : chunks)
    theta.grid.push_back(bloch_decode(c, dim, static_cast<double>(d) * d));
  return theta;
}

Eigen::VectorXd ThetaParameterization::from_theta(const DifferentialSet& theta) const {
  if (theta.d != d || theta.dim != dim)
    throw ValidationError("differential set does not match the parameterization");
  const int m = dim * dim;
  Eigen::VectorXd params(parameter_count());
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j)
      params.segment(static_cast<Eigen::Index>(i * (d - 1) + j) * m, m) =
          bloch_encode(theta.at(i, j), static_cast<double>(d) * d);
  return params;
}

OptimizationResult minimize_negativity(const Povm& a, const Povm& b,
                                       const OptimizerConfig& config) {
  require_matching(a, b);
  const int d = a.outcomes();
  const int dim = a.dim;
  const ThetaParameterization par{d, dim};

  std::optional<FastQubitObjective> fast;
  DenseObjective dense{&a, &b, d, dim};
  std::function<double(const Eigen::VectorXd&)> objective;
  if (dim == 2) {
    fast.emplace(qubit_pair(a, b));
    objective = [&fast](const Eigen::VectorXd& p) { return (*fast)(p); };
  } else {
    objective = [&dense](const Eigen::VectorXd& p) { return dense(p); };
  }

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(uniform_start(par));
  if (dim == 2 && d == 2) starts.push_back(scalar_warm_start(fast->qp));
  if (dim == 2 && d == 3)
    if (auto warm = trine_warm_start(fast->qp)) starts.push_back(*warm);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 0.5);
  while (static_cast<int>(starts.size()) < std::max(config.restarts, 1)) {
    Eigen::VectorXd p = uniform_start(par);
    for (Eigen::Index k = 0; k < p.size(); ++k) p[k] += gauss(rng);
    starts.push_back(std::move(p));
  }

  long total_evals = 0;
  Eigen::VectorXd best_point = starts.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const double v = objective(s);
    ++total_evals;
    if (v < best_value) {
      best_value = v;
      best_point = s;
    }
  }

  OptimizationResult result;
  bool converged = best_value == 0.0;

  if (best_value > 0.0) {
    NelderMeadOptions opts;
    opts.max_evaluations = config.max_evaluations;
    opts.simplex_tolerance = config.simplex_tolerance;
    for (const auto& s : starts) {
      const NelderMeadResult run = nelder_mead(objective, s, opts);
      total_evals += run.evaluations;
      ++result.restarts_used;
      if (run.value < best_value) {
        best_value = run.value;
        best_point = run.point;
        converged = run.converged;
      }
      if (best_value == 0.0) break;
    }
    if (best_value > 0.0) {
      NelderMeadOptions polish = opts;
      polish.initial_step = 1e-3;
      const NelderMeadResult run = nelder_mead(objective, best_point, polish);
      total_evals += run.evaluations;
      if (run.value <= best_value) {
        best_value = run.value;
        best_point = run.point;
        converged = run.converged;
      }
    } else {
      converged = true;
    }
  }

  result.theta_star = par.to_theta(best_point);
  result.n_min = negativity(from_theta(a, b, result.theta_star));
  result.evaluations = total_evals;
  result.converged = converged;
  return result;
}

namespace {

// orthogonal projection onto the affine set with the prescribed row
// and column sums
std::vector<ComplexMatrix> project_marginals(const std::vector<ComplexMatrix>& x, const Povm& a,
                                             const Povm& b) {
  const int d = a.outcomes();
  const int dim = a.dim;
  const double dd = d;
  std::vector<ComplexMatrix> rows(static_cast<std::size_t>(d), ComplexMatrix::Zero(dim, dim));
  std::vector<ComplexMatrix> cols(static_cast<std::size_t>(d), ComplexMatrix::Zero(dim, dim));
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      rows[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i) * d + j];
      cols[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(i) * d + j];
      total += x[static_cast<std::size_t>(i) * d + j];
    }
  const ComplexMatrix closure =
      (ComplexMatrix::Identity(dim, dim) - total) / (dd * dd);
  std::vector<ComplexMatrix> out(x.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out[static_cast<std::size_t>(i) * d + j] =
          x[static_cast<std::size_t>(i) * d + j] +
          (a.effects[static_cast<std::size_t>(i)] - rows[static_cast<std::size_t>(i)]) / dd +
          (b.effects[static_cast<std::size_t>(j)] - cols[static_cast<std::size_t>(j)]) / dd -
          closure;
  return out;
}

double worst_marginal_residual(const std::vector<ComplexMatrix>& x, const Povm& a, const Povm& b) {
  const int d = a.outcomes();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix row = ComplexMatrix::Zero(a.dim, a.dim);
    ComplexMatrix col = ComplexMatrix::Zero(a.dim, a.dim);
    for (int j = 0; j < d; ++j) {
      row += x[static_cast<std::size_t>(i) * d + j];
      col += x[static_cast<std::size_t>(j) * d + i];
    }
    worst = std::max(worst, (row - a.effects[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff());
    worst = std::max(worst, (col - b.effects[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff());
  }
  return worst;
}

} // namespace

JointSearchResult joint_povm_search(const Povm& a, const Povm& b, const OptimizerConfig& config) {
  require_matching(a, b);
  const int d = a.outcomes();
  const int dim = a.dim;
  const int m = dim * dim;

  // measure-first conjunction as the starting guess
  std::vector<ComplexMatrix> guess;
  guess.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    const ComplexMatrix k = operator_sqrt(a.effects[static_cast<std::size_t>(i)]);
    for (int j = 0; j < d; ++j)
      guess.push_back(hermitize(k * b.effects[static_cast<std::size_t>(j)] * k, 1e-8));
  }
  Povm conjunction;
  conjunction.dim = dim;
  conjunction.effects = guess;
  const WMeasure w0 = from_conjunction(a, b, conjunction);

  // factor the cone-clamped entries so positivity is built in
  Eigen::VectorXd params(static_cast<Eigen::Index>(d) * d * m);
  for (int k = 0; k < d * d; ++k) {
    const ComplexMatrix h = operator_sqrt(clamp_positive(w0.grid[static_cast<std::size_t>(k)]));
    params.segment(static_cast<Eigen::Index>(k) * m, m) = bloch_encode(h, 1.0);
  }

  auto decode_joint = [&](const Eigen::VectorXd& p) {
    std::vector<ComplexMatrix> joint(static_cast<std::size_t>(d) * d);
    for (int k = 0; k < d * d; ++k) {
      const ComplexMatrix h = bloch_decode(p.segment(static_cast<Eigen::Index>(k) * m, m), dim, 1.0);
      joint[static_cast<std::size_t>(k)] = h * h;
    }
    return joint;
  };

  auto penalty = [&](const Eigen::VectorXd& p) {
    const auto joint = decode_joint(p);
    const int n = a.outcomes();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      ComplexMatrix row = ComplexMatrix::Zero(dim, dim);
      ComplexMatrix col = ComplexMatrix::Zero(dim, dim);
      for (int j = 0; j < n; ++j) {
        row += joint[static_cast<std::size_t>(i) * n + j];
        col += joint[static_cast<std::size_t>(j) * n + i];
      }
      total += (row - a.effects[static_cast<std::size_t>(i)]).squaredNorm();
      total += (col - b.effects[static_cast<std::size_t>(i)]).squaredNorm();
    }
    return 1e3 * total;
  };

  JointSearchResult result;
  result.evaluations = 1;
  std::vector<ComplexMatrix> x;
  if (penalty(params) > 1e-18) {
    NelderMeadOptions opts;
    opts.max_evaluations = config.max_evaluations;
    opts.simplex_tolerance = config.simplex_tolerance;
    const NelderMeadResult run = nelder_mead(penalty, params, opts);
    result.evaluations += run.evaluations;
    x = decode_joint(run.point);
  } else {
    x = decode_joint(params);
  }

  // alternating projections finish the search: the marginal set and
  // the positive cone are both convex, so the iteration either reaches
  // their intersection or stalls at the residual gap
  std::vector<ComplexMatrix> y;
  double lam = -std::numeric_limits<double>::infinity();
  double best_lam = -std::numeric_limits<double>::infinity();
  int stall = 0;
  for (long iter = 0; iter < std::max<long>(config.max_evaluations, 1); ++iter) {
    y = project_marginals(x, a, b);
    lam = std::numeric_limits<double>::infinity();
    for (const auto& entry : y) lam = std::min(lam, eig_hermitian(entry).values[0]);
    if (lam >= -1e-10) break;
    if (lam > best_lam + 1e-15) {
      best_lam = lam;
      stall = 0;
    } else if (++stall > 300) {
      break;
    }
    x.clear();
    x.reserve(y.size());
    for (const auto& entry : y) x.push_back(clamp_positive(entry));
  }

  result.marginal_residual = worst_marginal_residual(y, a, b);
  result.success = lam >= -1e-10 && result.marginal_residual < 1e-7;
  result.negativity_floor = result.success ? 0.0 : std::max(0.0, -lam);
  if (result.success) {
    result.joint.dim = dim;
    result.joint.effects = y;
  }
  return result;
}

LandscapeGrid negativity_landscape(const PairFamily& family, const std::vector<double>& axis1,
                                   const std::vector<double>& axis2,
                                   const OptimizerConfig& config, int threads) {
  LandscapeGrid grid;
  grid.axis1 = axis1;
  grid.axis2 = axis2;
  grid.values.resize(static_cast<Eigen::Index>(axis1.size()),
                     static_cast<Eigen::Index>(axis2.size()));
  const std::size_t cells = axis1.size() * axis2.size();
  if (cells == 0) return grid;

  if (threads <= 0) {
    if (const char* env = std::getenv("JM_THREADS")) {
      char* end = nullptr;
      const long parsed = std::strtol(env, &end, 10);
      if (end != env && parsed > 0) threads = static_cast<int>(std::min(parsed, 64L));
    }
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), cells));

  std::atomic<std::size_t> next{0};
  std::mutex error_lock;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells) return;
      {
        std::lock_guard<std::mutex> hold(error_lock);
        if (error) return;
      }
      try {
        const std::size_t i = k / axis2.size();
        const std::size_t j = k % axis2.size();
        OptimizerConfig cell = config;
        cell.seed = mix_seed(config.seed, k);
        const auto [pa, pb] = family(axis1[i], axis2[j]);
        grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            minimize_negativity(pa, pb, cell).n_min;
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return grid;
}

} // namespace jm
