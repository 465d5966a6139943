#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jm/cli.hpp"
#include "jm/criteria.hpp"
#include "jm/io.hpp"
#include "jm/linalg.hpp"
#include "jm/povm.hpp"
#include "test_support.hpp"

namespace {

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  std::vector<std::string> full{"jmcheck"};
  full.insert(full.end(), args.begin(), args.end());
  const int code = jm::run_cli(full, out, err);
  if (out_text) {
    *out_text = out.str();
  }
  if (err_text) {
    *err_text = err.str();
  }
  return code;
}

std::string write_dichotomic_file(const std::string& path, double bias,
                                  const Eigen::Vector3d& v) {
  const nlohmann::json j{
      {"bloch",
       {{"outcomes", 2}, {"bias", bias}, {"vector", {v.x(), v.y(), v.z()}}}}};
  jm::write_text_file(path, j.dump());
  return path;
}

std::string write_trine_file(const std::string& path, double mu, double phi) {
  const nlohmann::json j{{"bloch", {{"outcomes", 3}, {"mu", mu}, {"phi", phi}}}};
  jm::write_text_file(path, j.dump());
  return path;
}

std::vector<std::vector<double>> parse_csv(const std::string& csv, std::string* header) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      if (header) {
        *header = line;
      }
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("measurement json round trips") {
  const jm::Povm z = jm::dichotomic_from_spec(0.1, Eigen::Vector3d(0.2, -0.3, 0.5));
  const jm::Povm back = jm::povm_from_json(jm::povm_to_json(z));
  REQUIRE(back.dim == 2);
  REQUIRE(back.outcomes() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.effects[i] - z.effects[i]).cwiseAbs().maxCoeff() <= 1e-15);
  }

  const nlohmann::json bloch{
      {"bloch", {{"outcomes", 2}, {"bias", 0.1}, {"vector", {0.2, -0.3, 0.5}}}}};
  const jm::Povm from_bloch = jm::povm_from_json(bloch);
  for (int i = 0; i < 2; ++i) {
    CHECK((from_bloch.effects[i] - z.effects[i]).cwiseAbs().maxCoeff() <= 1e-15);
  }

  const nlohmann::json trine{{"bloch", {{"outcomes", 3}, {"mu", 0.8}, {"phi", 0.4}}}};
  const jm::Povm t = jm::povm_from_json(trine);
  const jm::Povm want = jm::trichotomic_from_spec(0.8, 0.4);
  REQUIRE(t.outcomes() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK((t.effects[i] - want.effects[i]).cwiseAbs().maxCoeff() <= 1e-15);
  }

  const nlohmann::json explicit_trine{
      {"bloch",
       {{"outcomes", 3},
        {"vectors",
         {{0.8, 0.0, 0.0}, {-0.4, 0.8 * 0.8660254037844386, 0.0},
          {-0.4, -0.8 * 0.8660254037844386, 0.0}}}}}};
  const jm::Povm t2 = jm::povm_from_json(explicit_trine);
  const jm::Povm upright = jm::trichotomic_from_spec(0.8, 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK((t2.effects[i] - upright.effects[i]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("state and statistics json parsing") {
  const jm::DensityMatrix rho =
      jm::state_from_json(nlohmann::json{{"bloch_vector", {0.0, 0.0, 1.0}}});
  CHECK(std::abs(rho.matrix(0, 0).real() - 1.0) <= 1e-15);
  CHECK(std::abs(rho.matrix(1, 1).real()) <= 1e-15);

  const nlohmann::json stats{{"pA", {0.5, 0.5}},
                             {"pB", {0.25, 0.75}},
                             {"pC", {{0.1, 0.4}, {0.15, 0.35}}}};
  const jm::MeasuredStatistics s = jm::statistics_from_json(stats);
  CHECK(s.pa.size() == 2);
  CHECK(s.pb[1] == 0.75);
  CHECK(s.pc(1, 0) == 0.15);

  CHECK_THROWS_AS(jm::povm_from_json(nlohmann::json::array()), jm::ValidationError);
  CHECK_THROWS_AS(jm::state_from_json(nlohmann::json{{"foo", 1}}), jm::ValidationError);
  CHECK_THROWS_AS(
      jm::statistics_from_json(nlohmann::json{{"pA", {0.5, 0.5}}, {"pB", {1.0}}}),
      jm::ValidationError);
}

TEST_CASE("check picks the closed dichotomic route") {
  const std::string a = write_dichotomic_file("tmp_cli_a.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, 0.5));
  const std::string b = write_dichotomic_file("tmp_cli_b.json", 0.0,
                                              Eigen::Vector3d(0.5, 0.0, 0.0));
  std::string text;
  REQUIRE(run({"check", a, b}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("method") == "closed");
  CHECK(j.at("jointly_measurable") == true);
  CHECK(j.at("criterion_margin").get<double>() ==
        doctest::Approx(0.5 * std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(j.at("minimized_negativity").get<double>() == 0.0);
  CHECK(j.at("sufficient_only") == false);
  CHECK(j.at("manifest").at("version") == "1.0.0");
  CHECK(j.at("manifest").at("command") == "check");

  const std::string az = write_dichotomic_file("tmp_cli_az.json", 0.0,
                                               Eigen::Vector3d(0.0, 0.0, 1.0));
  const std::string bx = write_dichotomic_file("tmp_cli_bx.json", 0.0,
                                               Eigen::Vector3d(1.0, 0.0, 0.0));
  REQUIRE(run({"check", az, bx}, &text) == 0);
  const nlohmann::json sharp = nlohmann::json::parse(text);
  CHECK(sharp.at("jointly_measurable") == false);
  CHECK(sharp.at("minimized_negativity").get<double>() ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("check optimizer and ssm methods") {
  const std::string az = write_dichotomic_file("tmp_cli_az.json", 0.0,
                                               Eigen::Vector3d(0.0, 0.0, 1.0));
  const std::string bx = write_dichotomic_file("tmp_cli_bx.json", 0.0,
                                               Eigen::Vector3d(1.0, 0.0, 0.0));
  std::string text;
  REQUIRE(run({"check", az, bx, "--method", "optimizer", "--seed", "7"}, &text) == 0);
  const nlohmann::json opt = nlohmann::json::parse(text);
  CHECK(opt.at("method") == "optimizer");
  CHECK(opt.at("converged") == true);
  CHECK(std::abs(opt.at("minimized_negativity").get<double>() - (std::sqrt(2.0) - 1.0)) <=
        1e-6);
  CHECK(opt.at("jointly_measurable") == false);
  CHECK(opt.at("manifest").at("seed") == 7);

  REQUIRE(run({"check", az, bx, "--method", "ssm"}, &text) == 0);
  const nlohmann::json seq = nlohmann::json::parse(text);
  CHECK(seq.at("method") == "ssm");
  CHECK(seq.at("jointly_measurable") == false);
  CHECK(seq.at("sufficient_only") == false);
}

TEST_CASE("check routes coplanar trines to the closed criterion") {
  const std::string a = write_trine_file("tmp_cli_ta.json", 0.9, 0.0);
  const std::string b = write_trine_file("tmp_cli_tb.json", 0.9,
                                         std::numbers::pi / 3.0);
  std::string text;
  REQUIRE(run({"check", a, b}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("method") == "closed");
  const jm::JmVerdict want = jm::trichotomic_verdict(
      jm::BlochPovmSpec::trichotomic(0.9, 0.0),
      jm::BlochPovmSpec::trichotomic(0.9, std::numbers::pi / 3.0));
  CHECK(j.at("jointly_measurable") == want.jointly_measurable);
  CHECK(j.at("criterion_margin").get<double>() ==
        doctest::Approx(want.criterion_margin).epsilon(1e-12));
}

TEST_CASE("check falls back to the optimizer off the covered families") {
  const double mu = 0.6;
  const double h = mu * 0.8660254037844386;
  const nlohmann::json xz_trine{
      {"bloch",
       {{"outcomes", 3}, {"vectors", {{mu, 0.0, 0.0}, {-mu / 2, 0.0, h}, {-mu / 2, 0.0, -h}}}}}};
  jm::write_text_file("tmp_cli_xz.json", xz_trine.dump());
  const std::string a = write_trine_file("tmp_cli_ta.json", 0.6, 0.0);

  std::string text;
  std::string err;
  REQUIRE(run({"check", a, "tmp_cli_xz.json", "--method", "closed"}, &text, &err) == 2);
  CHECK(err.find("closed-form") != std::string::npos);

  REQUIRE(run({"check", a, "tmp_cli_xz.json", "--seed", "3"}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("method") == "optimizer");
  CHECK(j.at("minimized_negativity").get<double>() >= 0.0);
}

TEST_CASE("cli reports usage and input failures") {
  std::string text;
  std::string err;
  CHECK(run({"check", "no_such_file.json", "also_missing.json"}, &text, &err) == 2);
  CHECK(err.find("no_such_file.json") != std::string::npos);

  jm::write_text_file("tmp_cli_bad.json", "{not json");
  CHECK(run({"validate", "tmp_cli_bad.json"}, &text, &err) == 2);

  CHECK(run({"check"}, &text, &err) == 2);
  CHECK(run({"frobnicate"}, &text, &err) == 2);
  CHECK(run({}, &text, &err) == 2);

  REQUIRE(run({"--version"}, &text, &err) == 0);
  CHECK(text.find("1.0.0") != std::string::npos);
}

TEST_CASE("thresholds table pins the reference orientations") {
  std::string first;
  std::string second;
  REQUIRE(run({"thresholds", "--resolution", "40"}, &first) == 0);
  REQUIRE(run({"thresholds", "--resolution", "40"}, &second) == 0);
  CHECK(first == second);

  std::string header;
  const auto rows = parse_csv(first, &header);
  CHECK(header == "phi,mu_th,r_th");
  REQUIRE(rows.size() >= 40);

  bool saw_zero = false;
  bool saw_quarter = false;
  double prev_r = -1.0;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    CHECK(row[2] >= prev_r - 1e-12);
    prev_r = row[2];
    if (std::abs(row[0]) < 1e-12) {
      saw_zero = true;
      CHECK(row[1] == 1.0);
      CHECK(std::abs(row[2] - std::log(1.5)) <= 1e-12);
    }
    if (std::abs(row[0] - std::numbers::pi / 4.0) < 1e-12) {
      saw_quarter = true;
      CHECK(std::abs(row[1] - 0.873498) <= 1e-5);
      CHECK(std::abs(row[2] - 0.641283) <= 1e-4);
    }
  }
  CHECK(saw_zero);
  CHECK(saw_quarter);
}

TEST_CASE("scan sweeps are deterministic and reproducible row by row") {
  std::string first;
  std::string second;
  const std::vector<std::string> args{"scan", "--family", "dichotomic-unbiased",
                                      "--resolution", "5"};
  REQUIRE(run(args, &first) == 0);
  REQUIRE(run(args, &second) == 0);
  CHECK(first == second);

  std::string header;
  const auto rows = parse_csv(first, &header);
  CHECK(header == "mu,angle,jointly_measurable,criterion_margin,n_min");
  REQUIRE(rows.size() == 25);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 5);
    CHECK((row[2] == 0.0 || row[2] == 1.0));
    const Eigen::Vector3d va(0.0, 0.0, row[0]);
    const Eigen::Vector3d vb(row[0] * std::sin(row[1]), 0.0, row[0] * std::cos(row[1]));
    const jm::JmVerdict v = jm::dichotomic_unbiased_verdict(va, vb);
    CHECK(std::abs(row[3] - v.criterion_margin) <= 1e-15);
    CHECK(std::abs(row[4] - *v.minimized_negativity) <= 1e-15);
    CHECK((row[2] == 1.0) == v.jointly_measurable);
  }

  // a scan cell must agree with a standalone check on the same pair
  const auto& probe = rows[18];
  const std::string a = write_dichotomic_file("tmp_cli_ra.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, probe[0]));
  const std::string b = write_dichotomic_file(
      "tmp_cli_rb.json", 0.0,
      Eigen::Vector3d(probe[0] * std::sin(probe[1]), 0.0, probe[0] * std::cos(probe[1])));
  std::string text;
  REQUIRE(run({"check", a, b}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(std::abs(j.at("criterion_margin").get<double>() - probe[3]) <= 1e-15);
  CHECK((j.at("jointly_measurable").get<bool>() ? 1.0 : 0.0) == probe[2]);
}

TEST_CASE("scan covers the trine and biased families") {
  std::string text;
  REQUIRE(run({"scan", "--family", "trichotomic", "--resolution", "4"}, &text) == 0);
  std::string header;
  const auto rows = parse_csv(text, &header);
  CHECK(header == "mu,phi,jointly_measurable,criterion_margin,n_min");
  REQUIRE(rows.size() == 16);
  for (const auto& row : rows) {
    const jm::JmVerdict v =
        jm::trichotomic_verdict(jm::BlochPovmSpec::trichotomic(row[0], 0.0),
                                jm::BlochPovmSpec::trichotomic(row[0], row[1]));
    CHECK(std::abs(row[3] - v.criterion_margin) <= 1e-15);
    CHECK((row[2] == 1.0) == v.jointly_measurable);
  }

  std::string again;
  const std::vector<std::string> biased{"scan",  "--family", "dichotomic-biased",
                                        "--resolution", "3",  "--seed", "11"};
  REQUIRE(run(biased, &text) == 0);
  REQUIRE(run(biased, &again) == 0);
  CHECK(text == again);
  const auto brows = parse_csv(text, &header);
  REQUIRE(brows.size() == 9);
  for (const auto& row : brows) {
    CHECK(row[4] >= 0.0);
    const jm::JmVerdict v = jm::dichotomic_biased_verdict(
        0.1, Eigen::Vector3d(0.0, 0.0, row[0]), 0.1,
        Eigen::Vector3d(row[0] * std::sin(row[1]), 0.0, row[0] * std::cos(row[1])));
    CHECK((row[2] == 1.0) == v.jointly_measurable);
  }
}

TEST_CASE("scan entropy axes track the closed criteria") {
  std::string text;
  REQUIRE(run({"scan", "--family", "dichotomic-unbiased", "--axes", "ra-rb",
               "--resolution", "9"},
              &text) == 0);
  std::string header;
  const auto rows = parse_csv(text, &header);
  CHECK(header == "r_a,r_b,jointly_measurable,criterion_margin,n_min");
  REQUIRE(rows.size() == 81);
  for (const auto& row : rows) {
    const double mu_a = jm::dichotomic_mu_for_entropy(row[0]);
    const double mu_b = jm::dichotomic_mu_for_entropy(row[1]);
    const jm::JmVerdict v = jm::dichotomic_unbiased_verdict(
        Eigen::Vector3d(0.0, 0.0, mu_a), Eigen::Vector3d(mu_b, 0.0, 0.0));
    CHECK(std::abs(row[3] - v.criterion_margin) <= 1e-15);
    CHECK((row[2] == 1.0) == v.jointly_measurable);
  }

  REQUIRE(run({"scan", "--family", "trichotomic", "--axes", "phi-r",
               "--resolution", "5"},
              &text) == 0);
  const auto trows = parse_csv(text, &header);
  CHECK(header == "phi,r,jointly_measurable,criterion_margin,n_min");
  REQUIRE(trows.size() == 25);
  for (const auto& row : trows) {
    const double mu = jm::trichotomic_mu_for_entropy(row[1]);
    const jm::JmVerdict v =
        jm::trichotomic_verdict(jm::BlochPovmSpec::trichotomic(mu, 0.0),
                                jm::BlochPovmSpec::trichotomic(mu, row[0]));
    CHECK(std::abs(row[3] - v.criterion_margin) <= 1e-15);
    CHECK((row[2] == 1.0) == v.jointly_measurable);
  }

  REQUIRE(run({"scan", "--family", "dichotomic-unbiased", "--axes", "ra-rb",
               "--resolution", "3", "--range1", "0.2", "0.4", "--range2", "0.1", "0.3"},
              &text) == 0);
  const auto rrows = parse_csv(text, &header);
  REQUIRE(rrows.size() == 9);
  CHECK(rrows.front()[0] == 0.2);
  CHECK(rrows.back()[0] == 0.4);
  CHECK(rrows.front()[1] == 0.1);
  CHECK(rrows.back()[1] == 0.3);

  std::string err;
  CHECK(run({"scan", "--family", "dichotomic-unbiased", "--axes", "ra-rb",
             "--range1", "0.5", "0.2"},
            &text, &err) == 2);
  CHECK(run({"scan", "--family", "dichotomic-unbiased", "--axes", "ra-rb",
             "--range1", "-1.0", "2.0"},
            &text, &err) == 2);
  CHECK(run({"scan", "--family", "trichotomic", "--axes", "ra-rb"}, &text, &err) == 2);
}

TEST_CASE("ssm command reports quasiprobabilities") {
  const std::string a = write_dichotomic_file("tmp_cli_az.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, 1.0));
  const std::string b = write_dichotomic_file("tmp_cli_bx.json", 0.0,
                                              Eigen::Vector3d(1.0, 0.0, 0.0));
  std::string text;
  REQUIRE(run({"ssm", a, b, "--samples", "64", "--seed", "5"}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("jointly_measurable") == false);
  CHECK(std::abs(j.at("worst_quasiprob").get<double>() - (1.0 - std::sqrt(2.0)) / 4.0) <=
        1e-10);
  CHECK(j.at("sampled_min").get<double>() >=
        j.at("worst_quasiprob").get<double>() - 1e-12);
  CHECK(j.at("manifest").at("command") == "ssm");

  jm::write_text_file("tmp_cli_state.json",
                      nlohmann::json{{"bloch_vector", {0.0, 0.0, 0.0}}}.dump());
  REQUIRE(run({"ssm", a, b, "--state", "tmp_cli_state.json"}, &text) == 0);
  const nlohmann::json mixed = nlohmann::json::parse(text);
  for (const auto& row : mixed.at("q_table")) {
    for (const auto& cell : row) {
      CHECK(std::abs(cell.get<double>() - 0.25) <= 1e-12);
    }
  }
  CHECK(std::abs(mixed.at("q_min").get<double>() - 0.25) <= 1e-12);

  const nlohmann::json stats{{"pA", {0.5, 0.5}},
                             {"pB", {0.5, 0.5}},
                             {"pC", {{0.25, 0.25}, {0.25, 0.25}}}};
  jm::write_text_file("tmp_cli_stats.json", stats.dump());
  REQUIRE(run({"ssm", a, b, "--statistics", "tmp_cli_stats.json", "--samples", "8"},
              &text) == 0);
  const nlohmann::json with_stats = nlohmann::json::parse(text);
  CHECK(std::abs(with_stats.at("statistics_q_min").get<double>() - 0.25) <= 1e-12);
}

TEST_CASE("validate reports effect health") {
  const std::string a = write_dichotomic_file("tmp_cli_sharp.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, 1.0));
  std::string text;
  REQUIRE(run({"validate", a}, &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("ok") == true);
  CHECK(j.at("pvm") == true);
  CHECK(j.at("dim") == 2);
  CHECK(j.at("outcomes") == 2);

  const nlohmann::json broken{
      {"dim", 2},
      {"effects",
       {{{{1.2, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.2, 0.0}}},
        {{{-0.2, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {-0.2, 0.0}}}}}};
  jm::write_text_file("tmp_cli_broken.json", broken.dump());
  REQUIRE(run({"validate", "tmp_cli_broken.json"}, &text) == 0);
  const nlohmann::json bad = nlohmann::json::parse(text);
  CHECK(bad.at("ok") == false);
  CHECK(bad.at("worst_eigenvalue").get<double>() == doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("w-out dumps the operator grid") {
  const std::string a = write_dichotomic_file("tmp_cli_az.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, 1.0));
  const std::string b = write_dichotomic_file("tmp_cli_bx.json", 0.0,
                                              Eigen::Vector3d(1.0, 0.0, 0.0));
  std::string text;
  REQUIRE(run({"check", a, b, "--method", "optimizer", "--w-out", "tmp_cli_w.json"},
              &text) == 0);
  const nlohmann::json wj = nlohmann::json::parse(read_file("tmp_cli_w.json"));
  CHECK(wj.at("d") == 2);
  CHECK(wj.at("dim") == 2);
  REQUIRE(wj.at("grid").size() == 4);
  CHECK(std::abs(wj.at("negativity").get<double>() - (std::sqrt(2.0) - 1.0)) <= 1e-6);
  const jm::ComplexMatrix entry = jm::matrix_from_json(wj.at("grid")[0]);
  CHECK((entry - entry.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(wj.at("manifest").at("command") == "check");

  REQUIRE(run({"ssm", a, b, "--samples", "0", "--w-out", "tmp_cli_ws.json"}, &text) == 0);
  const nlohmann::json sj = nlohmann::json::parse(read_file("tmp_cli_ws.json"));
  double lo = 1.0;
  for (const auto& cell : sj.at("grid")) {
    const jm::ComplexMatrix m = jm::matrix_from_json(cell);
    lo = std::min(lo, jm::eig_hermitian(m).values.minCoeff());
  }
  CHECK(std::abs(lo - (1.0 - std::sqrt(2.0)) / 4.0) <= 1e-10);

  std::string err;
  CHECK(run({"check", a, b, "--w-out", "tmp_cli_w2.json"}, &text, &err) == 2);
  CHECK(err.find("operator grid") != std::string::npos);
}

TEST_CASE("out flag writes results and manifest sidecars") {
  const std::string a = write_dichotomic_file("tmp_cli_a.json", 0.0,
                                              Eigen::Vector3d(0.0, 0.0, 0.5));
  const std::string b = write_dichotomic_file("tmp_cli_b.json", 0.0,
                                              Eigen::Vector3d(0.5, 0.0, 0.0));
  std::string text;
  REQUIRE(run({"check", a, b, "--out", "tmp_cli_check_out.json"}, &text) == 0);
  CHECK(read_file("tmp_cli_check_out.json") == text);

  REQUIRE(run({"thresholds", "--resolution", "8", "--out", "tmp_cli_thr.csv"}, &text) == 0);
  CHECK(read_file("tmp_cli_thr.csv") == text);
  const nlohmann::json manifest =
      nlohmann::json::parse(read_file("tmp_cli_thr.csv.manifest.json"));
  CHECK(manifest.at("command") == "thresholds");
  CHECK(manifest.at("version") == "1.0.0");
  CHECK(manifest.at("wall_seconds").get<double>() >= 0.0);
  CHECK(manifest.at("config").at("resolution") == 8);
}
