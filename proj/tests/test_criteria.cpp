#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "jm/criteria.hpp"
#include "test_support.hpp"

using jm::BlochPovmSpec;
using namespace jmtest;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("unbiased two-outcome closed form") {
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();

  const auto sharp = jm::dichotomic_unbiased_verdict(z, x);
  CHECK_FALSE(sharp.jointly_measurable);
  CHECK(sharp.criterion_margin == doctest::Approx(0.41421356237309515).epsilon(1e-12));
  CHECK(*sharp.minimized_negativity == doctest::Approx(0.41421356237309515).epsilon(1e-12));

  const auto boundary = jm::dichotomic_unbiased_verdict(z / kSqrt2, x / kSqrt2);
  CHECK(boundary.jointly_measurable);
  CHECK(std::abs(boundary.criterion_margin) <= 1e-12);
  CHECK(*boundary.minimized_negativity <= 1e-12);

  const auto parallel = jm::dichotomic_unbiased_verdict(0.5 * z, 0.5 * z);
  CHECK(parallel.jointly_measurable);
  CHECK(parallel.criterion_margin == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(*parallel.minimized_negativity == 0.0);

  const auto unsharp = jm::dichotomic_unbiased_verdict(0.9 * z, 0.9 * x);
  CHECK(*unsharp.minimized_negativity == doctest::Approx(0.9 * kSqrt2 - 1.0).epsilon(1e-12));

  CHECK_THROWS_AS(jm::dichotomic_unbiased_verdict(1.5 * z, x), jm::ValidationError);
}

TEST_CASE("biased two-outcome criterion on frozen cases") {
  const auto case1 = jm::dichotomic_biased_verdict(0.2, Eigen::Vector3d(0.5, 0, 0), -0.1,
                                                   Eigen::Vector3d(0, 0.6, 0));
  CHECK(case1.jointly_measurable);
  CHECK(case1.criterion_margin == doctest::Approx(-0.34431457343369354).epsilon(1e-12));
  CHECK_FALSE(case1.minimized_negativity.has_value());

  const auto case2 = jm::dichotomic_biased_verdict(0.1, Eigen::Vector3d(0.85, 0, 0), 0.05,
                                                   Eigen::Vector3d(0, 0.9, 0));
  CHECK_FALSE(case2.jointly_measurable);
  CHECK(case2.criterion_margin == doctest::Approx(0.5431607176648158).epsilon(1e-12));

  const auto case3 = jm::dichotomic_biased_verdict(0.3, Eigen::Vector3d(0.6, 0, 0), 0.25,
                                                   Eigen::Vector3d(0.7, 0, 0));
  CHECK(case3.jointly_measurable);
  CHECK(case3.criterion_margin == doctest::Approx(-0.11803675209737519).epsilon(1e-12));

  // sharp limits have zero sharpness and a vanishing bias term
  const auto same = jm::dichotomic_biased_verdict(0.0, Eigen::Vector3d::UnitZ(), 0.0,
                                                  Eigen::Vector3d::UnitZ());
  CHECK(same.jointly_measurable);
  CHECK(std::abs(same.criterion_margin) <= 1e-12);
  const auto cross = jm::dichotomic_biased_verdict(0.0, Eigen::Vector3d::UnitZ(), 0.0,
                                                   Eigen::Vector3d::UnitX());
  CHECK_FALSE(cross.jointly_measurable);
  CHECK(cross.criterion_margin == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      jm::dichotomic_biased_verdict(0.5, Eigen::Vector3d(0.8, 0, 0), 0.0, Eigen::Vector3d::UnitX()),
      jm::ValidationError);
}

TEST_CASE("biased criterion reduces to the unbiased one at zero bias") {
  std::mt19937_64 rng(41);
  int checked = 0;
  while (checked < 1000) {
    const Eigen::Vector3d a = random_ball_vector(rng);
    const Eigen::Vector3d b = random_ball_vector(rng);
    const auto unbiased = jm::dichotomic_unbiased_verdict(a, b);
    if (std::abs(unbiased.criterion_margin) < 1e-6) continue; // skip the boundary band
    const auto biased = jm::dichotomic_biased_verdict(0.0, a, 0.0, b);
    CHECK(unbiased.jointly_measurable == biased.jointly_measurable);
    ++checked;
  }
}

TEST_CASE("three-outcome solution grid structure") {
  const auto sa = BlochPovmSpec::trichotomic(0.9, 0.0);
  const auto sb = BlochPovmSpec::trichotomic(0.8, 0.7);
  const auto sol = jm::trichotomic_solution(sa, sb);

  auto phi_kk = [&](int k) { return (sa.vecs[k] + sb.vecs[k]).eval(); };

  // fixed cells of the index map
  CHECK((sol.theta_vectors[0] - phi_kk(0)).norm() <= 1e-15);
  CHECK((sol.theta_vectors[1] - phi_kk(2)).norm() <= 1e-15);
  CHECK((sol.theta_vectors[5] - phi_kk(0)).norm() <= 1e-15);

  for (int i = 0; i < 3; ++i) {
    // diagonal matches the summed directions
    CHECK((sol.theta_vectors[static_cast<std::size_t>(i) * 3 + i] - phi_kk(i)).norm() <= 1e-15);

    // each row and column visits every matched direction once
    std::set<int> row, col;
    double row_sum = 0.0, col_sum = 0.0;
    Eigen::Vector3d row_vec = Eigen::Vector3d::Zero(), col_vec = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        if ((sol.theta_vectors[static_cast<std::size_t>(i) * 3 + j] - phi_kk(k)).norm() <= 1e-14)
          row.insert(k);
        if ((sol.theta_vectors[static_cast<std::size_t>(j) * 3 + i] - phi_kk(k)).norm() <= 1e-14)
          col.insert(k);
      }
      row_sum += sol.theta_scalars[static_cast<std::size_t>(i) * 3 + j];
      col_sum += sol.theta_scalars[static_cast<std::size_t>(j) * 3 + i];
      row_vec += sol.theta_vectors[static_cast<std::size_t>(i) * 3 + j];
      col_vec += sol.theta_vectors[static_cast<std::size_t>(j) * 3 + i];
    }
    CHECK(row.size() == 3);
    CHECK(col.size() == 3);
    CHECK(row_sum == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(col_sum == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(row_vec.norm() <= 1e-14);
    CHECK(col_vec.norm() <= 1e-14);

    CHECK(sol.theta_scalars[static_cast<std::size_t>(i) * 3 + i] == 2.0);
    for (int j = 0; j < 3; ++j)
      CHECK((sol.phi_vectors[static_cast<std::size_t>(i) * 3 + j] - (sa.vecs[i] + sb.vecs[j]))
                .norm() <= 1e-15);
  }
}

TEST_CASE("three-outcome closed form on frozen cases") {
  auto n_of = [](double mu, double phi) {
    const auto v = jm::trichotomic_verdict(BlochPovmSpec::trichotomic(mu, 0.0),
                                           BlochPovmSpec::trichotomic(mu, phi));
    return *v.minimized_negativity;
  };
  CHECK(n_of(0.9, M_PI / 3) == doctest::Approx(0.03923048454132627).epsilon(1e-12));
  CHECK(n_of(0.95, M_PI / 4) == doctest::Approx(0.08758081944159701).epsilon(1e-12));
  CHECK(n_of(0.93, M_PI / 6) == doctest::Approx(0.03728021663488201).epsilon(1e-12));
  CHECK(n_of(1.0, 0.0) == 0.0);

  // identical sharp trines sit exactly on the boundary
  const auto same = jm::trichotomic_verdict(BlochPovmSpec::trichotomic(1.0, 0.0),
                                            BlochPovmSpec::trichotomic(1.0, 0.0));
  CHECK(same.jointly_measurable);
  CHECK(std::abs(same.criterion_margin) <= 1e-12);

  // verdict flips across the sharpness threshold
  const auto below = jm::trichotomic_verdict(BlochPovmSpec::trichotomic(0.873, 0.0),
                                             BlochPovmSpec::trichotomic(0.873, M_PI / 4));
  const auto above = jm::trichotomic_verdict(BlochPovmSpec::trichotomic(0.874, 0.0),
                                             BlochPovmSpec::trichotomic(0.874, M_PI / 4));
  CHECK(below.jointly_measurable);
  CHECK_FALSE(above.jointly_measurable);
}

TEST_CASE("three-outcome closed form is relabeling invariant") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sa = BlochPovmSpec::trichotomic(u(rng), 6.28 * u(rng));
    const auto sb = BlochPovmSpec::trichotomic(u(rng), 6.28 * u(rng));
    const double reference = jm::trichotomic_verdict(sa, sb).criterion_margin;

    std::array<int, 3> perm = {0, 1, 2};
    do {
      const auto shuffled = BlochPovmSpec::trichotomic(
          std::array<Eigen::Vector3d, 3>{sb.vecs[perm[0]], sb.vecs[perm[1]], sb.vecs[perm[2]]});
      CHECK(jm::trichotomic_verdict(sa, shuffled).criterion_margin ==
            doctest::Approx(reference).epsilon(1e-12));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("verdict agrees with the sharpness threshold on the symmetric family") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const double mu = u(rng);
    const double phi = 6.28 * u(rng);
    if (std::abs(mu - jm::mu_threshold(phi)) < 1e-6) continue;
    const auto v = jm::trichotomic_verdict(BlochPovmSpec::trichotomic(mu, 0.0),
                                           BlochPovmSpec::trichotomic(mu, phi));
    CHECK(v.jointly_measurable == (mu < jm::mu_threshold(phi)));
    ++checked;
  }
}

TEST_CASE("sharpness threshold values and symmetries") {
  CHECK(jm::mu_threshold(0.0) == 1.0);
  CHECK(jm::mu_threshold(M_PI / 6) == doctest::Approx(0.8965754721680536).epsilon(1e-12));
  CHECK(jm::mu_threshold(M_PI / 4) == doctest::Approx(0.8734983028551054).epsilon(1e-12));
  CHECK(jm::mu_threshold(M_PI / 3) == doctest::Approx(0.8660254037844386).epsilon(1e-12));

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double phi = u(rng);
    CHECK(jm::mu_threshold(phi) == doctest::Approx(jm::mu_threshold(-phi)).epsilon(1e-10));
    CHECK(jm::mu_threshold(phi) ==
          doctest::Approx(jm::mu_threshold(phi + 2.0 * M_PI / 3.0)).epsilon(1e-10));
    CHECK(jm::mu_threshold(phi) <= 1.0);
    CHECK(jm::mu_threshold(phi) >= std::sqrt(3.0) / 2.0 - 1e-12);
  }
}

TEST_CASE("entropy threshold values and monotonicity") {
  CHECK(jm::r_threshold(0.0) == doctest::Approx(0.4054651081081644).epsilon(1e-12));
  CHECK(jm::r_threshold(M_PI / 6) == doctest::Approx(0.6089914746457851).epsilon(1e-12));
  CHECK(jm::r_threshold(M_PI / 4) == doctest::Approx(0.6412853094475133).epsilon(1e-12));
  CHECK(jm::r_threshold(M_PI / 3) == doctest::Approx(0.6512404747766355).epsilon(1e-12));

  double last = -1.0;
  for (int k = 0; k <= 120; ++k) {
    const double r = jm::r_threshold(k * (M_PI / 3.0) / 120.0);
    CHECK(r >= last - 1e-12);
    last = r;
  }
}

TEST_CASE("entropy curves and inversions") {
  CHECK(jm::dichotomic_entropy(1.0) == 0.0);
  CHECK(jm::dichotomic_entropy(0.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(jm::trichotomic_entropy(1.0) == doctest::Approx(0.4054651081081644).epsilon(1e-15));
  CHECK(jm::trichotomic_entropy(0.0) == doctest::Approx(1.0986122886681098).epsilon(1e-15));

  CHECK(jm::dichotomic_entropy(1.0 / kSqrt2) ==
        doctest::Approx(0.4164955306996875).epsilon(1e-12));
  CHECK(jm::dichotomic_entropy(0.6) == doctest::Approx(0.5004024235381879).epsilon(1e-12));
  CHECK(jm::trichotomic_entropy(0.8) == doctest::Approx(0.7305480814996127).epsilon(1e-12));

  CHECK(jm::dichotomic_mu_for_entropy(0.4) ==
        doctest::Approx(0.7254345636353376).epsilon(1e-10));

  for (int k = 1; k < 20; ++k) {
    const double mu = k / 20.0;
    CHECK(jm::dichotomic_mu_for_entropy(jm::dichotomic_entropy(mu)) ==
          doctest::Approx(mu).epsilon(1e-10));
    CHECK(jm::trichotomic_mu_for_entropy(jm::trichotomic_entropy(mu)) ==
          doctest::Approx(mu).epsilon(1e-10));
  }

  CHECK_THROWS_AS(jm::dichotomic_entropy(1.2), jm::ValidationError);
  CHECK_THROWS_AS(jm::dichotomic_mu_for_entropy(0.8), jm::ValidationError);
  CHECK_THROWS_AS(jm::trichotomic_mu_for_entropy(0.2), jm::ValidationError);
}

TEST_CASE("scalar window for diagonal-biased differential sets") {
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();

  const auto sharp = jm::theta0_feasibility(z, x);
  CHECK_FALSE(sharp.empty());
  CHECK(sharp.lower == doctest::Approx(0.5857864376269049).epsilon(1e-12));
  CHECK(sharp.upper == doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(sharp.contains(1.0));

  const auto interior = jm::theta0_feasibility(0.5 * z, 0.5 * z);
  CHECK(interior.empty());
  CHECK(interior.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(interior.upper == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(interior.contains(0.5));

  const auto boundary = jm::theta0_feasibility(z / kSqrt2, x / kSqrt2);
  CHECK_FALSE(boundary.empty());
  CHECK(boundary.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary.upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary.contains(1.0));

  // emptiness mirrors strict compatibility
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Vector3d a = random_ball_vector(rng);
    const Eigen::Vector3d b = random_ball_vector(rng);
    const double margin = jm::dichotomic_unbiased_verdict(a, b).criterion_margin;
    const auto window = jm::theta0_feasibility(a, b);
    if (margin > 1e-9) CHECK_FALSE(window.empty());
    if (margin < -1e-9) CHECK(window.empty());
  }
}
