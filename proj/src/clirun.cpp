#include "jm/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "jm/criteria.hpp"
#include "jm/io.hpp"
#include "jm/linalg.hpp"
#include "jm/optimizer.hpp"
#include "jm/povm.hpp"
#include "jm/ssm.hpp"
#include "jm/wmeasure.hpp"

namespace jm {

std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

class WallTimer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> values;
  if (count <= 1) {
    values.push_back(lo);
    return values;
  }
  values.reserve(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int k = 0; k < count; ++k) {
    values.push_back(k == count - 1 ? hi : lo + step * k);
  }
  return values;
}

int resolve_threads(int requested, long total) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("JM_THREADS")) {
      char* end = nullptr;
      const long parsed = std::strtol(env, &end, 10);
      if (end != env && parsed > 0) {
        n = static_cast<int>(std::min<long>(parsed, 64));
      }
    }
  }
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (n <= 0) {
    n = 1;
  }
  return static_cast<int>(std::min<long>(n, std::max<long>(total, 1)));
}

void parallel_cells(long total, int threads, const std::function<void(long)>& work) {
  threads = resolve_threads(threads, total);
  if (threads <= 1) {
    for (long k = 0; k < total; ++k) {
      work(k);
    }
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const long k = next.fetch_add(1);
        if (k >= total) {
          return;
        }
        try {
          work(k);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(guard);
          if (!failure) {
            failure = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) {
    th.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

json make_manifest(const std::string& command, const std::vector<std::string>& inputs,
                   json config, std::uint64_t seed, double wall_seconds) {
  return json{{"command", command}, {"inputs", inputs},   {"config", std::move(config)},
              {"seed", seed},       {"version", kCliVersion}, {"wall_seconds", wall_seconds}};
}

void emit_json(const json& payload, const std::string& out_path, std::ostream& out) {
  const std::string text = payload.dump(2) + "\n";
  out << text;
  if (!out_path.empty()) {
    write_text_file(out_path, text);
  }
}

// csv bytes stay free of timing data so reruns match exactly; the manifest
// rides in a sidecar file when the table is written to disk
void emit_csv(const std::string& csv, const json& manifest, const std::string& out_path,
              std::ostream& out) {
  out << csv;
  if (!out_path.empty()) {
    write_text_file(out_path, csv);
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
}

json table_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json verdict_json(const JmVerdict& v) {
  json j{{"jointly_measurable", v.jointly_measurable},
         {"criterion_margin", v.criterion_margin},
         {"sufficient_only", v.sufficient_only}};
  j["minimized_negativity"] =
      v.minimized_negativity ? json(*v.minimized_negativity) : json(nullptr);
  return j;
}

bool qubit_dichotomic(const Povm& p, double& bias, Eigen::Vector3d& vec) {
  if (p.dim != 2 || p.outcomes() != 2) {
    return false;
  }
  double t = 0.0;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  qubit_components(p.effects[1], t, v);
  bias = t - 1.0;
  vec = v;
  return true;
}

struct TrineShape {
  double mu = 0.0;
  std::array<Eigen::Vector3d, 3> vecs;
};

// recognizes equal-weight three-outcome qubit measurements whose bloch
// vectors share a plane and sit 120 degrees apart
std::optional<TrineShape> planar_trine(const Povm& p) {
  if (p.dim != 2 || p.outcomes() != 3) {
    return std::nullopt;
  }
  constexpr double tol = 1e-9;
  TrineShape s;
  for (int i = 0; i < 3; ++i) {
    double t = 0.0;
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    qubit_components(p.effects[static_cast<std::size_t>(i)], t, v);
    if (std::abs(t - 2.0 / 3.0) > tol) {
      return std::nullopt;
    }
    s.vecs[static_cast<std::size_t>(i)] = 1.5 * v;
  }
  if ((s.vecs[0] + s.vecs[1] + s.vecs[2]).norm() > 10 * tol) {
    return std::nullopt;
  }
  s.mu = s.vecs[0].norm();
  for (const Eigen::Vector3d& v : s.vecs) {
    if (std::abs(v.norm() - s.mu) > tol) {
      return std::nullopt;
    }
  }
  if (s.mu > tol) {
    for (int i = 0; i < 3; ++i) {
      const double d = s.vecs[static_cast<std::size_t>(i)].dot(
          s.vecs[static_cast<std::size_t>((i + 1) % 3)]);
      if (std::abs(d + 0.5 * s.mu * s.mu) > 10 * tol) {
        return std::nullopt;
      }
    }
  }
  return s;
}

// the closed trichotomic criterion is exact for equally sharp coplanar trines,
// so automatic dispatch only claims pairs inside that family
bool trine_pair_covered(const TrineShape& a, const TrineShape& b) {
  if (std::abs(a.mu - b.mu) > 1e-9) {
    return false;
  }
  if (a.mu <= 1e-9 || b.mu <= 1e-9) {
    return true;
  }
  const Eigen::Vector3d na = a.vecs[0].cross(a.vecs[1]).normalized();
  const Eigen::Vector3d nb = b.vecs[0].cross(b.vecs[1]).normalized();
  return na.cross(nb).norm() <= 1e-9;
}

struct CheckOptions {
  std::string a_path;
  std::string b_path;
  std::string out_path;
  std::string w_out;
  std::string method = "auto";
  std::uint64_t seed = 0;
  int restarts = 8;
  double tolerance = 1e-7;
};

int do_check(const CheckOptions& o, std::ostream& out) {
  const WallTimer timer;
  const Povm a = povm_from_json(read_json_file(o.a_path));
  const Povm b = povm_from_json(read_json_file(o.b_path));
  require_valid(a);
  require_valid(b);

  double bias_a = 0.0;
  double bias_b = 0.0;
  Eigen::Vector3d vec_a = Eigen::Vector3d::Zero();
  Eigen::Vector3d vec_b = Eigen::Vector3d::Zero();
  const bool dichotomic =
      qubit_dichotomic(a, bias_a, vec_a) && qubit_dichotomic(b, bias_b, vec_b);
  const std::optional<TrineShape> trine_a = planar_trine(a);
  const std::optional<TrineShape> trine_b = planar_trine(b);
  const bool trine = trine_a && trine_b && trine_pair_covered(*trine_a, *trine_b);

  std::string resolved = o.method;
  if (o.method == "auto") {
    resolved = (dichotomic || trine) ? "closed" : "optimizer";
  }
  if (resolved == "closed" && !(dichotomic || trine)) {
    throw ValidationError("no closed-form criterion covers this pair; use --method optimizer");
  }

  json payload;
  int exit_code = 0;
  std::optional<WMeasure> w_dump;
  if (resolved == "closed") {
    if (!o.w_out.empty()) {
      throw ValidationError(
          "the closed route builds no operator grid; use --method optimizer or ssm");
    }
    JmVerdict v;
    if (dichotomic) {
      const bool unbiased = std::abs(bias_a) <= 1e-12 && std::abs(bias_b) <= 1e-12;
      v = unbiased ? dichotomic_unbiased_verdict(vec_a, vec_b)
                   : dichotomic_biased_verdict(bias_a, vec_a, bias_b, vec_b);
    } else {
      v = trichotomic_verdict(BlochPovmSpec::trichotomic(trine_a->vecs),
                              BlochPovmSpec::trichotomic(trine_b->vecs));
    }
    payload = verdict_json(v);
  } else if (resolved == "optimizer") {
    OptimizerConfig cfg;
    cfg.seed = o.seed;
    cfg.restarts = o.restarts;
    cfg.jm_tolerance = o.tolerance;
    const OptimizationResult r = minimize_negativity(a, b, cfg);
    payload["jointly_measurable"] = r.n_min <= cfg.jm_tolerance;
    payload["criterion_margin"] = r.n_min;
    payload["minimized_negativity"] = r.n_min;
    payload["sufficient_only"] = false;
    payload["converged"] = r.converged;
    payload["evaluations"] = r.evaluations;
    payload["restarts_used"] = r.restarts_used;
    if (!r.converged) {
      exit_code = 3;
    }
    if (!o.w_out.empty()) {
      w_dump = from_theta(a, b, r.theta_star);
    }
  } else {
    payload = verdict_json(ssm_jm_test(a, b));
    if (!o.w_out.empty()) {
      w_dump = ssm_wmeasure(a, b);
    }
  }
  payload["method"] = resolved;
  const json manifest = make_manifest("check", {o.a_path, o.b_path},
                                      json{{"method", o.method},
                                           {"seed", o.seed},
                                           {"restarts", o.restarts},
                                           {"tolerance", o.tolerance}},
                                      o.seed, timer.seconds());
  payload["manifest"] = manifest;
  if (w_dump) {
    json wj = wmeasure_to_json(*w_dump);
    wj["manifest"] = manifest;
    write_text_file(o.w_out, wj.dump(2) + "\n");
  }
  emit_json(payload, o.out_path, out);
  return exit_code;
}

struct ThresholdsOptions {
  int resolution = 121;
  std::string out_path;
};

int do_thresholds(const ThresholdsOptions& o, std::ostream& out) {
  const WallTimer timer;
  if (o.resolution < 2) {
    throw ValidationError("resolution must be at least 2");
  }
  const double hi = std::numbers::pi / 3.0;
  std::vector<double> phis = linspace(0.0, hi, o.resolution);
  const std::array<double, 4> anchors{0.0, std::numbers::pi / 6.0, std::numbers::pi / 4.0, hi};
  for (const double anchor : anchors) {
    bool merged = false;
    for (double& phi : phis) {
      if (std::abs(phi - anchor) < 1e-12) {
        phi = anchor;
        merged = true;
        break;
      }
    }
    if (!merged) {
      phis.push_back(anchor);
    }
  }
  std::sort(phis.begin(), phis.end());
  std::string csv = "phi,mu_th,r_th\n";
  for (const double phi : phis) {
    csv += format_double(phi);
    csv += ',';
    csv += format_double(mu_threshold(phi));
    csv += ',';
    csv += format_double(r_threshold(phi));
    csv += '\n';
  }
  emit_csv(csv,
           make_manifest("thresholds", {}, json{{"resolution", o.resolution}}, 0,
                         timer.seconds()),
           o.out_path, out);
  return 0;
}

struct ScanOptions {
  std::string family;
  std::string axes;
  std::string method = "closed";
  int resolution = 21;
  std::uint64_t seed = 0;
  int restarts = 8;
  double tolerance = 1e-7;
  double bias_a = 0.1;
  double bias_b = 0.1;
  double angle = std::numbers::pi / 2.0;
  std::vector<double> range1;
  std::vector<double> range2;
  int threads = 0;
  std::string out_path;
};

struct ScanRow {
  double x = 0.0;
  double y = 0.0;
  bool jm = false;
  double margin = 0.0;
  double n_min = 0.0;
};

// a scan pair: both measurements plus the closed verdict when one applies
struct ScanCell {
  Povm a;
  Povm b;
  std::optional<JmVerdict> closed;
};

std::pair<double, double> axis_range(const std::vector<double>& override_range,
                                     double lo, double hi, double domain_lo,
                                     double domain_hi, const char* what) {
  if (!override_range.empty()) {
    if (override_range.size() != 2) {
      throw ValidationError(std::string(what) + " range needs exactly two numbers");
    }
    lo = override_range[0];
    hi = override_range[1];
  }
  if (!(lo <= hi)) {
    throw ValidationError(std::string(what) + " range is inverted");
  }
  if (lo < domain_lo - 1e-12 || hi > domain_hi + 1e-12) {
    throw ValidationError(std::string(what) + " range leaves the valid domain");
  }
  return {std::max(lo, domain_lo), std::min(hi, domain_hi)};
}

int do_scan(const ScanOptions& o, std::ostream& out) {
  const WallTimer timer;
  if (o.resolution < 1) {
    throw ValidationError("resolution must be at least 1");
  }
  const double pi = std::numbers::pi;
  const double ln2 = std::log(2.0);
  const double ln3 = std::log(3.0);
  const double ln32 = std::log(1.5);
  const bool unbiased = o.family == "dichotomic-unbiased";
  const bool biased = o.family == "dichotomic-biased";
  const bool trine = o.family == "trichotomic";
  if (!unbiased && !biased && !trine) {
    throw ValidationError("unknown scan family " + o.family);
  }

  std::string axes = o.axes;
  if (axes.empty()) {
    axes = trine ? "mu-phi" : "mu-angle";
  }
  const bool mu_angle = axes == "mu-angle" && !trine;
  const bool ra_rb = axes == "ra-rb" && unbiased;
  const bool mu_phi = axes == "mu-phi" && trine;
  const bool phi_r = axes == "phi-r" && trine;
  if (!mu_angle && !ra_rb && !mu_phi && !phi_r) {
    throw ValidationError("axes " + axes + " are not available for family " + o.family);
  }

  std::vector<double> axis1;
  std::vector<double> axis2;
  std::string header;
  if (mu_angle) {
    double mu_hi = 1.0;
    if (biased) {
      mu_hi = 1.0 - std::max(std::abs(o.bias_a), std::abs(o.bias_b));
      if (mu_hi < 0.0) {
        throw ValidationError("bias magnitudes must stay below 1");
      }
    }
    const auto [m_lo, m_hi] = axis_range(o.range1, 0.0, mu_hi, 0.0, mu_hi, "mu");
    const auto [a_lo, a_hi] = axis_range(o.range2, 0.0, pi / 2.0, 0.0, 2.0 * pi, "angle");
    axis1 = linspace(m_lo, m_hi, o.resolution);
    axis2 = linspace(a_lo, a_hi, o.resolution);
    header = "mu,angle,jointly_measurable,criterion_margin,n_min\n";
  } else if (ra_rb) {
    const auto [ra_lo, ra_hi] = axis_range(o.range1, 0.0, ln2, 0.0, ln2, "r_a");
    const auto [rb_lo, rb_hi] = axis_range(o.range2, 0.0, ln2, 0.0, ln2, "r_b");
    axis1 = linspace(ra_lo, ra_hi, o.resolution);
    axis2 = linspace(rb_lo, rb_hi, o.resolution);
    header = "r_a,r_b,jointly_measurable,criterion_margin,n_min\n";
  } else if (mu_phi) {
    const auto [m_lo, m_hi] = axis_range(o.range1, 0.0, 1.0, 0.0, 1.0, "mu");
    const auto [p_lo, p_hi] = axis_range(o.range2, 0.0, 2.0 * pi / 3.0, 0.0, 2.0 * pi, "phi");
    axis1 = linspace(m_lo, m_hi, o.resolution);
    axis2 = linspace(p_lo, p_hi, o.resolution);
    header = "mu,phi,jointly_measurable,criterion_margin,n_min\n";
  } else {
    const auto [p_lo, p_hi] = axis_range(o.range1, 0.0, 2.0 * pi / 3.0, 0.0, 2.0 * pi, "phi");
    const auto [r_lo, r_hi] = axis_range(o.range2, ln32, ln3, ln32, ln3, "r");
    axis1 = linspace(p_lo, p_hi, o.resolution);
    axis2 = linspace(r_lo, r_hi, o.resolution);
    header = "phi,r,jointly_measurable,criterion_margin,n_min\n";
  }

  const auto build_cell = [&](double x, double y) {
    ScanCell cell;
    if (mu_angle) {
      const Eigen::Vector3d va(0.0, 0.0, x);
      const Eigen::Vector3d vb(x * std::sin(y), 0.0, x * std::cos(y));
      const double ba = biased ? o.bias_a : 0.0;
      const double bb = biased ? o.bias_b : 0.0;
      cell.a = dichotomic_from_spec(ba, va);
      cell.b = dichotomic_from_spec(bb, vb);
      cell.closed = biased ? dichotomic_biased_verdict(ba, va, bb, vb)
                           : dichotomic_unbiased_verdict(va, vb);
    } else if (ra_rb) {
      const double mu_a = dichotomic_mu_for_entropy(x);
      const double mu_b = dichotomic_mu_for_entropy(y);
      const Eigen::Vector3d va(0.0, 0.0, mu_a);
      const Eigen::Vector3d vb(mu_b * std::sin(o.angle), 0.0, mu_b * std::cos(o.angle));
      cell.a = dichotomic_from_spec(0.0, va);
      cell.b = dichotomic_from_spec(0.0, vb);
      cell.closed = dichotomic_unbiased_verdict(va, vb);
    } else {
      const double mu = mu_phi ? x : trichotomic_mu_for_entropy(y);
      const double phi = mu_phi ? y : x;
      const BlochPovmSpec sa = BlochPovmSpec::trichotomic(mu, 0.0);
      const BlochPovmSpec sb = BlochPovmSpec::trichotomic(mu, phi);
      cell.a = to_povm(sa);
      cell.b = to_povm(sb);
      cell.closed = trichotomic_verdict(sa, sb);
    }
    return cell;
  };

  OptimizerConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  cfg.jm_tolerance = o.tolerance;
  const bool use_optimizer = o.method == "optimizer" || biased;

  const long total = static_cast<long>(axis1.size()) * static_cast<long>(axis2.size());
  std::vector<ScanRow> rows(static_cast<std::size_t>(total));
  const auto evaluate = [&](long k) {
    const double x = axis1[static_cast<std::size_t>(k) / axis2.size()];
    const double y = axis2[static_cast<std::size_t>(k) % axis2.size()];
    const ScanCell cell = build_cell(x, y);
    ScanRow row;
    row.x = x;
    row.y = y;
    row.margin = cell.closed->criterion_margin;
    row.jm = cell.closed->jointly_measurable;
    row.n_min = cell.closed->minimized_negativity.value_or(0.0);
    if (use_optimizer) {
      const OptimizationResult r = minimize_negativity(cell.a, cell.b, cfg);
      row.n_min = r.n_min;
      if (o.method == "optimizer") {
        row.jm = r.n_min <= cfg.jm_tolerance;
        row.margin = r.n_min;
      }
    }
    rows[static_cast<std::size_t>(k)] = row;
  };
  parallel_cells(total, use_optimizer ? o.threads : 1, evaluate);

  std::string csv = header;
  for (const ScanRow& row : rows) {
    csv += format_double(row.x);
    csv += ',';
    csv += format_double(row.y);
    csv += ',';
    csv += row.jm ? '1' : '0';
    csv += ',';
    csv += format_double(row.margin);
    csv += ',';
    csv += format_double(row.n_min);
    csv += '\n';
  }
  emit_csv(csv,
           make_manifest("scan", {},
                         json{{"family", o.family},
                              {"axes", axes},
                              {"method", o.method},
                              {"resolution", o.resolution},
                              {"seed", o.seed},
                              {"restarts", o.restarts},
                              {"tolerance", o.tolerance},
                              {"bias_a", o.bias_a},
                              {"bias_b", o.bias_b},
                              {"angle", o.angle},
                              {"range1", {axis1.front(), axis1.back()}},
                              {"range2", {axis2.front(), axis2.back()}},
                              {"threads", o.threads}},
                         o.seed, timer.seconds()),
           o.out_path, out);
  return 0;
}

struct SsmOptions {
  std::string a_path;
  std::string b_path;
  std::string state_path;
  std::string stats_path;
  std::string out_path;
  std::string w_out;
  bool swapped = false;
  int samples = 1000;
  std::uint64_t seed = 0;
};

int do_ssm(const SsmOptions& o, std::ostream& out) {
  const WallTimer timer;
  const Povm a = povm_from_json(read_json_file(o.a_path));
  const Povm b = povm_from_json(read_json_file(o.b_path));
  require_valid(a);
  require_valid(b);
  const SequentialOrder order =
      o.swapped ? SequentialOrder::SecondThenFirst : SequentialOrder::FirstThenSecond;
  const WMeasure w = ssm_wmeasure(a, b, order);

  json payload = verdict_json(ssm_jm_test(a, b, order));
  payload["order"] = o.swapped ? "second-then-first" : "first-then-second";
  payload["worst_quasiprob"] = worst_state_quasiprob(w);

  std::vector<std::string> inputs{o.a_path, o.b_path};
  if (!o.state_path.empty()) {
    inputs.push_back(o.state_path);
    const DensityMatrix rho = state_from_json(read_json_file(o.state_path));
    const Quasiprobability q = quasiprob_from_state(w, rho);
    payload["q_table"] = table_to_json(q.table);
    payload["q_min"] = q.table.minCoeff();
  } else if (o.samples > 0) {
    double lo = std::numeric_limits<double>::infinity();
    for (const DensityMatrix& rho : haar_pure_states(a.dim, o.samples, o.seed)) {
      lo = std::min(lo, quasiprob_from_state(w, rho).table.minCoeff());
    }
    payload["sampled_min"] = lo;
    payload["samples"] = o.samples;
  }
  if (!o.stats_path.empty()) {
    inputs.push_back(o.stats_path);
    const MeasuredStatistics s = statistics_from_json(read_json_file(o.stats_path));
    const Quasiprobability q = quasiprob_from_statistics(s.pa, s.pb, s.pc);
    payload["statistics_q_table"] = table_to_json(q.table);
    payload["statistics_q_min"] = q.table.minCoeff();
  }
  const json manifest = make_manifest("ssm", inputs,
                                      json{{"order", payload["order"]},
                                           {"samples", o.samples},
                                           {"seed", o.seed}},
                                      o.seed, timer.seconds());
  payload["manifest"] = manifest;
  if (!o.w_out.empty()) {
    json wj = wmeasure_to_json(w);
    wj["manifest"] = manifest;
    write_text_file(o.w_out, wj.dump(2) + "\n");
  }
  emit_json(payload, o.out_path, out);
  return 0;
}

struct ValidateOptions {
  std::string path;
  std::string out_path;
};

int do_validate(const ValidateOptions& o, std::ostream& out) {
  const WallTimer timer;
  const Povm p = povm_from_json(read_json_file(o.path));
  const ValidationReport report = validate(p);
  json payload{{"ok", report.ok},
               {"worst_eigenvalue", report.worst_eigenvalue},
               {"completeness_residual", report.completeness_residual},
               {"dim", p.dim},
               {"outcomes", p.outcomes()},
               {"pvm", report.ok && is_pvm(p)}};
  payload["manifest"] =
      make_manifest("validate", {o.path}, json::object(), 0, timer.seconds());
  emit_json(payload, o.out_path, out);
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"joint-measurability tools for finite quantum measurements"};
  app.set_version_flag("--version", kCliVersion);
  app.require_subcommand(1);

  CheckOptions check;
  CLI::App* check_cmd =
      app.add_subcommand("check", "decide whether two measurements are jointly measurable");
  check_cmd->add_option("a", check.a_path, "first measurement file")->required();
  check_cmd->add_option("b", check.b_path, "second measurement file")->required();
  check_cmd->add_option("--method", check.method, "auto, closed, optimizer, or ssm")
      ->check(CLI::IsMember({"auto", "closed", "optimizer", "ssm"}));
  check_cmd->add_option("--seed", check.seed, "seed for optimizer restarts");
  check_cmd->add_option("--restarts", check.restarts, "optimizer restart count");
  check_cmd->add_option("--tolerance", check.tolerance,
                        "negativity at or below this counts as jointly measurable");
  check_cmd->add_option("--out", check.out_path, "also write the JSON result to this file");
  check_cmd->add_option("--w-out", check.w_out,
                        "write the constructed operator grid as JSON (optimizer or ssm)");

  ThresholdsOptions thresholds;
  CLI::App* thresholds_cmd = app.add_subcommand(
      "thresholds", "tabulate the critical sharpness and entropy for symmetric trine pairs");
  thresholds_cmd->add_option("--resolution", thresholds.resolution,
                             "grid points across the orientation range");
  thresholds_cmd->add_option("--out", thresholds.out_path,
                             "write the CSV here plus a .manifest.json sidecar");

  ScanOptions scan;
  CLI::App* scan_cmd =
      app.add_subcommand("scan", "sweep a measurement family and report verdicts as CSV");
  scan_cmd->add_option("--family", scan.family, "measurement family to sweep")
      ->required()
      ->check(CLI::IsMember({"dichotomic-unbiased", "dichotomic-biased", "trichotomic"}));
  scan_cmd->add_option("--axes", scan.axes,
                       "mu-angle or ra-rb for two-outcome sweeps, mu-phi or phi-r for trines")
      ->check(CLI::IsMember({"mu-angle", "ra-rb", "mu-phi", "phi-r"}));
  scan_cmd->add_option("--method", scan.method, "closed or optimizer")
      ->check(CLI::IsMember({"closed", "optimizer"}));
  scan_cmd->add_option("--resolution", scan.resolution, "grid points per axis");
  scan_cmd->add_option("--angle", scan.angle,
                       "fixed orientation between the pair for the ra-rb axes");
  scan_cmd->add_option("--range1", scan.range1, "first axis range as two numbers")
      ->expected(2);
  scan_cmd->add_option("--range2", scan.range2, "second axis range as two numbers")
      ->expected(2);
  scan_cmd->add_option("--seed", scan.seed, "seed for optimizer restarts");
  scan_cmd->add_option("--restarts", scan.restarts, "optimizer restart count");
  scan_cmd->add_option("--tolerance", scan.tolerance,
                       "negativity at or below this counts as jointly measurable");
  scan_cmd->add_option("--bias-a", scan.bias_a, "first-measurement bias for the biased family");
  scan_cmd->add_option("--bias-b", scan.bias_b, "second-measurement bias for the biased family");
  scan_cmd->add_option("--threads", scan.threads,
                       "worker threads; 0 reads JM_THREADS then the hardware count");
  scan_cmd->add_option("--out", scan.out_path,
                       "write the CSV here plus a .manifest.json sidecar");

  SsmOptions ssm;
  CLI::App* ssm_cmd = app.add_subcommand(
      "ssm", "run the sequential-measurement test and report quasiprobabilities");
  ssm_cmd->add_option("a", ssm.a_path, "first measurement file")->required();
  ssm_cmd->add_option("b", ssm.b_path, "second measurement file")->required();
  ssm_cmd->add_option("--state", ssm.state_path, "state file for an exact quasiprobability table");
  ssm_cmd->add_option("--statistics", ssm.stats_path,
                      "measured marginals and correlations to convert");
  ssm_cmd->add_flag("--swapped", ssm.swapped, "measure the second observable first");
  ssm_cmd->add_option("--samples", ssm.samples,
                      "random pure states to sample when no state is given");
  ssm_cmd->add_option("--seed", ssm.seed, "seed for state sampling");
  ssm_cmd->add_option("--out", ssm.out_path, "also write the JSON result to this file");
  ssm_cmd->add_option("--w-out", ssm.w_out, "write the sequential operator grid as JSON");

  ValidateOptions validate_opts;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check that a measurement file is a valid POVM");
  validate_cmd->add_option("file", validate_opts.path, "measurement file")->required();
  validate_cmd->add_option("--out", validate_opts.out_path,
                           "also write the JSON report to this file");

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& s : args) {
      argv.push_back(s.c_str());
    }
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(check_cmd)) {
      return do_check(check, out);
    }
    if (app.got_subcommand(thresholds_cmd)) {
      return do_thresholds(thresholds, out);
    }
    if (app.got_subcommand(scan_cmd)) {
      return do_scan(scan, out);
    }
    if (app.got_subcommand(ssm_cmd)) {
      return do_ssm(ssm, out);
    }
    if (app.got_subcommand(validate_cmd)) {
      return do_validate(validate_opts, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc));
  for (int k = 0; k < argc; ++k) {
    args.emplace_back(argv[k]);
  }
  return run_cli(args, out, err);
}

} // namespace jm
