#include "ginibre/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ginibre/cell_stats.hpp"
#include "ginibre/discrete_dpp.hpp"
#include "ginibre/probabilities.hpp"
#include "ginibre/sampling.hpp"
#include "ginibre/spectral.hpp"

namespace ginibre::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kModels = {"ginibre", "palm", "hkpv", "thinned", "poisson"};
const std::vector<std::string> kSuites = {"analytic", "discrete", "montecarlo"};
const std::vector<std::string> kQuantities = {"void_prob", "H", "W_k", "J", "side_prob", "moments"};

bool one_of(const std::string& s, const std::vector<std::string>& v) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string param(const RunConfig& c, const std::string& key, const std::string& def) {
  auto it = c.params.find(key);
  return it == c.params.end() ? def : it->second;
}

double param_double(const RunConfig& c, const std::string& key, double def) {
  auto it = c.params.find(key);
  if (it == c.params.end()) return def;
  double v = 0.0;
  auto r = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  require(r.ec == std::errc() && r.ptr == it->second.data() + it->second.size(), "bad number for " + key);
  return v;
}

std::int64_t budget_or(const RunConfig& c, std::int64_t def) { return c.budget > 0 ? c.budget : def; }

Check check(std::string name, bool ok, double value, double reference, double tol, std::string detail = "") {
  return {std::move(name), ok, value, reference, tol, std::move(detail)};
}

std::vector<Check> analytic_suite() {
  namespace pr = probabilities;
  std::vector<Check> out;
  auto ev = pr::ev_typical_cell();
  out.push_back(check("ev_typical_cell", std::abs(ev.value - kPi) < 1e-6, ev.value, kPi, 1e-6));
  auto c0 = pr::ev_c0();
  out.push_back(check("ev_c0_bound", c0.value + c0.error < 0.75 * kPi, c0.value, 0.75 * kPi, 0.0));
  auto mehta = pr::mehta_check(1000, 0.01);
  out.push_back(check("mehta_bound", mehta.violations == 0, mehta.violations, 0, 0,
                      "min log margin " + format_double(mehta.min_log_margin)));
  auto nb = pr::neighbor_bound_k1();
  out.push_back(check("neighbor_bound_chain", nb.chain_holds(), nb.ratio_bound, nb.floor, 0.0,
                      "holder " + format_double(nb.holder)));
  double spec_err = 0.0, void_err = 0.0;
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    auto an = spectral::disk_modes(KernelSpec::ginibre(), r);
    auto ny = spectral::nystrom_decompose(KernelSpec::ginibre(), spectral::PlanarDomain::disk(0.0, r));
    for (std::size_t n = 0; n < an.size() && an.eigenvalues[n] >= 1e-8; ++n) {
      double b = n < ny.size() ? ny.eigenvalues[n] : 0.0;
      spec_err = std::max(spec_err, std::abs(an.eigenvalues[n] - b));
    }
    double vp = pr::void_prob_disk(r).value;
    void_err = std::max(void_err, std::abs(spectral::fredholm_det(ny) - vp) / vp);
  }
  out.push_back(check("disk_spectra", spec_err < 1e-6, spec_err, 0.0, 1e-6));
  out.push_back(check("void_probability_quadrature", void_err < 1e-4, void_err, 0.0, 1e-4));
  double plat = 0.0;
  for (double r : {0.25, 0.5}) {
    auto d = spectral::PlanarDomain::disk(0.0, r, 2048);
    std::vector<ComplexPoint> one = {ComplexPoint(0.3 * r, 0.2 * r)};
    std::vector<ComplexPoint> two = {ComplexPoint(0.3 * r, 0.2 * r), ComplexPoint(-0.4 * r, 0.1 * r)};
    plat = std::max(plat, spectral::platrier_residual(KernelSpec::ginibre(), d, one, 8));
    plat = std::max(plat, spectral::platrier_residual(KernelSpec::ginibre(), d, two, 8));
  }
  out.push_back(check("platrier_identity", plat < 1e-5, plat, 0.0, 1e-5));
  double zdev = 0.0;
  bool zok = true;
  for (double r : {0.5, 1.0, 2.0}) {
    auto z = pr::z_marginal_series(0.0, r);
    double d = std::abs(z.value - (1.0 - std::exp(-r * r)));
    zdev = std::max(zdev, d);
    zok = zok && d <= z.error;
  }
  out.push_back(check("z_marginal", zok, zdev, 0.0, 0.0));
  auto h = pr::H_integral();
  double gap = kPi - c0.value;
  out.push_back(check("two_path_relation", std::abs(gap - 0.5 * h.value) < 1e-6, gap, 0.5 * h.value, 1e-6,
                      "int H " + format_double(h.value)));
  return out;
}

std::vector<Check> discrete_suite(const RunConfig& c, std::ostream& log) {
  using namespace discrete;
  int instances = static_cast<int>(budget_or(c, 1000));
  RngStream rng(c.seed, 0x900);
  double e3 = 0, e5 = 0, e9 = 0, e11 = 0, e12 = 0;
  std::int64_t bound_fail = 0, nonneg_fail = 0;
  for (int it = 0; it < instances; ++it) {
    int N = 4 + it % 7;
    auto d = random_dpp(N, rng);
    auto law = exact_law(d);
    Blocks b{{0, 1}, {2}, {3}};
    for (auto counts : std::vector<std::vector<int>>{{0, 0, 0}, {1, 1, 0}, {2, 0, 1}, {1, 1, 1}})
      e3 = std::max(e3, std::abs(counting_distribution(d, b, counts) - law_marginal(law, b, counts)));
    std::vector<int> anchors = {N - 1};
    if (it % 2) anchors.push_back(0);
    auto lu = exact_law(condition(d, anchors));
    Blocks b5{{1, 2}, {3, N - 1}};
    for (auto counts : std::vector<std::vector<int>>{{0, 0}, {1, 0}, {1, 1}, {2, 1}})
      e5 = std::max(e5, std::abs(conditioned_counting(d, anchors, b5, counts) - law_marginal(lu, b5, counts)));
    std::vector<int> U;
    for (int i = 0; i < N - 1; ++i) U.push_back(i);
    for (int k = 0; k < N; ++k) {
      auto r = prop9_difference(d, 0, U, k);
      e9 = std::max(e9, std::abs(r.formula - r.brute));
      bound_fail += !r.bound_holds();
      nonneg_fail += !r.nonnegative();
    }
    std::vector<int> inside = {0};
    if (it % 2) inside.push_back(N - 2);
    bound_fail += !conditioned_cdf_bound(d, inside, U, 1 + it % 2).holds();
    std::vector<int> A = {0, 1, 2};
    for (int u : {N - 1, 1}) {
      auto lawu = count_law(exact_law(condition(d, {u})), to_mask(A));
      double s = 0.0;
      for (int k = 0; k <= 2; ++k) {
        s += lawu[k];
        e11 = std::max(e11, std::abs(palm_cdf_from_resolvent(d, u, A, k) - s));
      }
    }
    auto m = random_modal(N, std::max(1, N / 2), 3, rng);
    e12 = std::max(e12, prop12_equivalence(m, rotate_blocks(m, rng)));
  }
  std::vector<Check> out;
  out.push_back(check("block_counting", e3 < 1e-10, e3, 0.0, 1e-10));
  out.push_back(check("conditioned_counting", e5 < 1e-10, e5, 0.0, 1e-10));
  out.push_back(check("palm_cdf_difference", e9 < 1e-10 && nonneg_fail == 0, e9, 0.0, 1e-10));
  out.push_back(check("conditioned_cdf_bound", bound_fail == 0, static_cast<double>(bound_fail), 0.0, 0.0));
  out.push_back(check("palm_cdf_reconstruction", e11 < 1e-10, e11, 0.0, 1e-10));
  out.push_back(check("gramian_equivalence", e12 < 1e-10, e12, 0.0, 1e-10));
  log << "discrete: " << instances << " instances\n";
  std::int64_t viol = 0, events = 0;
  double worst = -1.0;
  for (int it = 0; it < instances; ++it) {
    bool full = it % 2 == 0;
    int N = full ? 3 + (it / 2) % 6 : 4 + (it / 2) % 9;
    auto [K, L] = random_loewner_pair(N, rng);
    auto r = domination_check(K, L, full ? DominationMode::Full : DominationMode::Elementary);
    viol += r.violations;
    events += r.events_checked;
    worst = std::max(worst, r.worst_margin);
  }
  out.push_back(check("domination", viol == 0, static_cast<double>(viol), 0.0, 1e-10,
                      std::to_string(events) + " events, worst margin " + format_double(worst)));
  return out;
}

std::vector<Check> montecarlo_suite(const RunConfig& c, std::ostream& log) {
  std::int64_t b = budget_or(c, 100000);
  std::vector<Check> out;
  auto w1 = cell_stats::w_constant(1, b, c.seed, c.threads);
  out.push_back(check("w1", std::abs(w1.value - 0.5) <= 3 * w1.std_error, w1.value, 0.5, 3 * w1.std_error));
  auto tb = cell_stats::small_r_ratio(1, {0.1, 0.2, 0.3, 0.4, 0.5}, b, c.seed, c.threads);
  out.push_back(check("small_r_intercept", std::abs(tb.intercept - 0.5) <= 3 * tb.intercept_se, tb.intercept, 0.5,
                      3 * tb.intercept_se));
  log << "montecarlo: moments done\n";
  auto rows = cell_stats::tail_bound_check(1, {0.5, 1.0, 1.5, 2.0}, std::max<std::int64_t>(1000, b / 10), c.seed,
                                           c.threads);
  double margin = 1e300;
  for (auto& r : rows) margin = std::min(margin, r.margin);
  out.push_back(check("tail_bound_k1", margin > 0.0, margin, 0.0, 0.0));
  int reps = static_cast<int>(std::max<std::int64_t>(200, b / 100));
  auto ks = sampling::radial_law_ks(16, reps, c.seed, c.threads);
  out.push_back(check("radial_ks_M16",
                      ks.passed(),
                      std::min({ks.min_p_matrix_kostlan, ks.min_p_hkpv_kostlan, ks.min_p_matrix_hkpv}),
                      ks.threshold, 0.0, std::to_string(reps) + " reps"));
  log << "montecarlo: radial laws done\n";
  auto cells = cell_stats::empirical_typical_cell(c.M, std::max<std::int64_t>(200, b / 100), c.seed, c.threads);
  out.push_back(check("palm_cell_area", std::abs(cells.area.value - kPi) <= 3 * cells.area.std_error,
                      cells.area.value, kPi, 3 * cells.area.std_error));
  cell_stats::SideOptions so;
  so.draws = std::max<std::int64_t>(1000, b / 50);
  so.seed = c.seed;
  so.threads = c.threads;
  auto s4 = cell_stats::side_probability(4, so);
  double se = std::hypot(s4.estimate.std_error, cells.side_frequency_se(4));
  out.push_back(check("side_prob_k4", std::abs(s4.estimate.value - cells.side_frequency(4)) <= 3 * se,
                      s4.estimate.value, cells.side_frequency(4), 3 * se));
  return out;
}

Table table_void_prob(const RunConfig& c) {
  Table t;
  t.params = {"r"};
  for (double r : parse_grid(param(c, "r", "0.25:3:0.25"))) {
    auto v = probabilities::void_prob_disk(r);
    t.rows.push_back({{r}, v.value, -1.0});
  }
  return t;
}

Table table_H(const RunConfig& c) {
  Table t;
  t.params = {"r"};
  for (double r : parse_grid(param(c, "r", "0.25:4:0.25"))) {
    auto v = probabilities::H_disk(r);
    t.rows.push_back({{r}, v.value, -1.0});
  }
  return t;
}

Table table_W(const RunConfig& c) {
  Table t;
  t.params = {"k"};
  t.monte_carlo = true;
  for (double k : parse_grid(param(c, "k", "1"))) {
    auto e = cell_stats::w_constant(static_cast<int>(k), budget_or(c, 100000), c.seed, c.threads);
    t.rows.push_back({{k}, e.value, e.std_error});
  }
  return t;
}

Table table_J(const RunConfig& c) {
  Table t;
  t.params = {"R"};
  for (double R : parse_grid(param(c, "R", "0.5:3:0.5"))) t.rows.push_back({{R}, cell_stats::J(R), -1.0});
  return t;
}

Table table_side(const RunConfig& c) {
  Table t;
  t.params = {"k"};
  t.monte_carlo = true;
  cell_stats::SideOptions so;
  so.draws = budget_or(c, 20000);
  so.seed = c.seed;
  so.threads = c.threads;
  for (double k : parse_grid(param(c, "k", "3,4,5,6"))) {
    auto e = cell_stats::side_probability(static_cast<int>(k), so);
    t.rows.push_back({{k}, e.estimate.value, e.estimate.std_error});
  }
  return t;
}

Table table_moments(const RunConfig& c) {
  Table t;
  t.params = {"k", "radius"};
  t.monte_carlo = true;
  std::string region = param(c, "region", "whole_plane");
  std::string model = param(c, "model", "ginibre");
  require(one_of(region, {"ball", "complement_ball", "whole_plane"}), "moments: unknown region " + region);
  require(one_of(model, {"ginibre", "zero_cell", "poisson"}), "moments: unknown model " + model);
  auto mm = model == "ginibre" ? cell_stats::MomentModel::Ginibre
            : model == "zero_cell" ? cell_stats::MomentModel::ZeroCell
                                   : cell_stats::MomentModel::Poisson;
  cell_stats::MomentOptions mo;
  mo.draws = budget_or(c, 20000);
  mo.seed = c.seed;
  mo.threads = c.threads;
  auto radii = region == "whole_plane" ? std::vector<double>{0.0} : parse_grid(param(c, "radius", "1"));
  for (double k : parse_grid(param(c, "k", "1,2")))
    for (double r : radii) {
      auto reg = region == "ball"              ? cell_stats::Region::ball(r)
                 : region == "complement_ball" ? cell_stats::Region::complement_ball(r)
                                               : cell_stats::Region::whole_plane();
      auto e = cell_stats::moment_in_region(static_cast<int>(k), reg, mm, mo);
      t.rows.push_back({{k, r}, e.value, e.std_error});
    }
  return t;
}

ordered_json sample_json(const sampling::PointSample& s) {
  ordered_json j;
  j["model"] = sampling::model_name(s.model);
  j["M"] = s.M;
  j["count"] = s.points.size();
  j["resamples"] = s.resamples;
  if (s.model == sampling::PointSample::Model::Thinned) j["alpha"] = s.alpha;
  if (s.model == sampling::PointSample::Model::Poisson) {
    j["intensity"] = s.intensity;
    j["window_radius"] = s.window_radius;
  }
  auto pts = ordered_json::array();
  for (auto z : s.points) pts.push_back({z.real(), z.imag()});
  j["points"] = std::move(pts);
  return j;
}

sampling::PointSample draw_sample(const RunConfig& c) {
  using sampling::PointSample;
  if (c.target == "ginibre") return sampling::ginibre_matrix_sample(c.M, c.seed);
  if (c.target == "palm") return sampling::hkpv_sample(KernelSpec::truncated_palm(c.M), c.seed);
  if (c.target == "hkpv") return sampling::hkpv_sample(KernelSpec::truncated_ginibre(c.M), c.seed);
  if (c.target == "thinned")
    return sampling::thin_and_rescale(sampling::ginibre_matrix_sample(c.M, c.seed), param_double(c, "alpha", 0.5),
                                      c.seed);
  return sampling::poisson_sample(param_double(c, "intensity", 1.0 / kPi), param_double(c, "window", 8.0), c.seed);
}

std::string csv_header(const RunConfig& c, const std::string& timestamp) {
  std::string s = "# config: " + to_json(c).dump() + "\n";
  s += "# timestamp: " + timestamp + "\n";
  return s;
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0) continue;
    if (line.find("\"timestamp\":") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_grid(const std::string& s) {
  auto num = [&](const std::string& t) {
    double v = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    require(!t.empty() && r.ec == std::errc() && r.ptr == t.data() + t.size(), "bad grid value '" + t + "'");
    return v;
  };
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    auto p1 = s.find(':'), p2 = s.find(':', p1 + 1);
    require(p2 != std::string::npos, "grid must be a:b:step");
    double a = num(s.substr(0, p1)), b = num(s.substr(p1 + 1, p2 - p1 - 1)), h = num(s.substr(p2 + 1));
    require(h > 0.0 && b >= a, "grid needs step > 0 and b >= a");
    auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    require(n < 100000, "grid too long");
    for (long i = 0; i <= n; ++i) out.push_back(a + h * static_cast<double>(i));
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    out.push_back(num(s.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

std::string current_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["target"] = c.target;
  j["seed"] = c.seed;
  j["M"] = c.M;
  j["threads"] = c.threads;
  j["budget"] = c.budget;
  j["out"] = c.out;
  j["format"] = c.format;
  j["params"] = c.params;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.target = j.at("target").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.M = j.at("M").get<int>();
  c.threads = j.at("threads").get<int>();
  c.budget = j.at("budget").get<std::int64_t>();
  c.out = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.params = j.at("params").get<std::map<std::string, std::string>>();
  return c;
}

void validate(const RunConfig& c) {
  require(c.format == "json" || c.format == "csv", "format must be json or csv");
  require(c.budget >= 0, "budget must be positive");
  require(c.threads >= 0, "threads must be >= 0");
  if (c.command == "sample") {
    require(one_of(c.target, kModels), "unknown model '" + c.target + "'");
    require(c.M >= 1 && c.M <= 4096, "M must be in [1, 4096]");
    if (c.target == "palm") require(c.M >= 2, "palm needs M >= 2");
  } else if (c.command == "verify") {
    require(one_of(c.target, kSuites), "unknown suite '" + c.target + "'");
    require(c.format == "json", "verify writes json");
    require(c.M >= 32, "verify needs M >= 32");
  } else if (c.command == "table") {
    require(one_of(c.target, kQuantities), "unknown quantity '" + c.target + "'");
  } else {
    throw PreconditionError("unknown command '" + c.command + "'");
  }
  if (!c.out.empty()) {
    std::ofstream probe(c.out, std::ios::app);
    require(static_cast<bool>(probe), "output path not writable: " + c.out);
  }
}

Table make_table(const RunConfig& c) {
  if (c.target == "void_prob") return table_void_prob(c);
  if (c.target == "H") return table_H(c);
  if (c.target == "W_k") return table_W(c);
  if (c.target == "J") return table_J(c);
  if (c.target == "side_prob") return table_side(c);
  if (c.target == "moments") return table_moments(c);
  throw PreconditionError("unknown quantity '" + c.target + "'");
}

std::vector<Check> verify_suite(const RunConfig& c, std::ostream& log) {
  if (c.target == "analytic") return analytic_suite();
  if (c.target == "discrete") return discrete_suite(c, log);
  if (c.target == "montecarlo") return montecarlo_suite(c, log);
  throw PreconditionError("unknown suite '" + c.target + "'");
}

std::string render(const RunConfig& c, const std::string& timestamp, std::ostream& log, int& exit_code) {
  exit_code = kOk;
  if (c.command == "sample") {
    auto s = draw_sample(c);
    if (c.format == "csv") {
      std::string text = csv_header(c, timestamp) + "x,y\n";
      for (auto z : s.points) text += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
      return text;
    }
    ordered_json j;
    j["config"] = to_json(c);
    j["timestamp"] = timestamp;
    j["sample"] = sample_json(s);
    return j.dump(2) + "\n";
  }
  if (c.command == "verify") {
    auto checks = verify_suite(c, log);
    ordered_json j;
    j["config"] = to_json(c);
    j["timestamp"] = timestamp;
    auto arr = ordered_json::array();
    bool all = true;
    for (const auto& k : checks) {
      ordered_json e;
      e["name"] = k.name;
      e["passed"] = k.passed;
      e["value"] = k.value;
      e["reference"] = k.reference;
      e["tolerance"] = k.tolerance;
      e["detail"] = k.detail;
      arr.push_back(std::move(e));
      all = all && k.passed;
      if (!k.passed) log << "FAILED check: " << k.name << " (value " << format_double(k.value) << ")\n";
    }
    j["suite"] = c.target;
    j["passed"] = all;
    j["checks"] = std::move(arr);
    exit_code = all ? kOk : kCheckFailed;
    return j.dump(2) + "\n";
  }
  auto t = make_table(c);
  if (c.format == "csv") {
    std::string text = csv_header(c, timestamp);
    for (const auto& p : t.params) text += p + ",";
    text += "value,stderr,seed\n";
    for (const auto& r : t.rows) {
      for (double p : r.params) text += format_double(p) + ",";
      text += format_double(r.value) + ",";
      text += (r.std_error < 0 ? std::string() : format_double(r.std_error)) + ",";
      text += (t.monte_carlo ? std::to_string(c.seed) : std::string()) + "\n";
    }
    return text;
  }
  ordered_json j;
  j["config"] = to_json(c);
  j["timestamp"] = timestamp;
  j["quantity"] = c.target;
  auto cols = ordered_json::array();
  for (const auto& p : t.params) cols.push_back(p);
  for (const char* s : {"value", "stderr", "seed"}) cols.push_back(s);
  j["columns"] = std::move(cols);
  auto rows = ordered_json::array();
  for (const auto& r : t.rows) {
    auto row = ordered_json::array();
    for (double p : r.params) row.push_back(p);
    row.push_back(r.value);
    row.push_back(r.std_error < 0 ? ordered_json() : ordered_json(r.std_error));
    row.push_back(t.monte_carlo ? ordered_json(c.seed) : ordered_json());
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

int run(const RunConfig& c, std::ostream& log) {
  std::string text;
  int code = kOk;
  try {
    validate(c);
    text = render(c, current_timestamp(), log, code);
  } catch (const PreconditionError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
      log << "config error: cannot write " << c.out << "\n";
      return kConfigError;
    }
  }
  return code;
}

int replay(const std::string& path, const std::string& out, std::ostream& log) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    log << "config error: cannot read " << path << "\n";
    return kConfigError;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  std::string original = ss.str();
  RunConfig c;
  try {
    if (original.rfind("# config: ", 0) == 0) {
      auto eol = original.find('\n');
      c = config_from_json(json::parse(original.substr(10, eol - 10)));
    } else {
      c = config_from_json(json::parse(original).at("config"));
    }
    validate(c);
  } catch (const std::exception& e) {
    log << "config error: no replayable config in " << path << ": " << e.what() << "\n";
    return kConfigError;
  }
  std::string text;
  int code = kOk;
  try {
    text = render(c, current_timestamp(), log, code);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (!out.empty()) {
    std::ofstream o(out, std::ios::binary | std::ios::trunc);
    o << text;
  }
  bool same = strip_timestamp(text) == strip_timestamp(original);
  log << (same ? "replay identical apart from timestamp\n" : "replay differs from original\n");
  return same ? kOk : kCheckFailed;
}

}  // namespace ginibre::cli
