#include "tfive/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tfive/fixture.hpp"
#include "tfive/psystem.hpp"

namespace tfive {

namespace {

Json rational_json(const Rational& q) { return to_text(q); }


std::array<RMat, 5> ordered(const Candidate& c) {
  std::array<RMat, 5> t;
  for (std::size_t k = 0; k < 5; ++k) t[k] = c.set[static_cast<std::size_t>(c.ordering[k])];
  return t;
}

Json witness_json(const TNWitness& w) {
  const RootField f = w.field();
  Json kappa = Json::array();
  for (const auto& k : w.kappa) kappa.push_back(f.approx(k));
  return Json{{"ordering", to_text(w.ordering)},
              {"mu", {{"lo", to_text(w.mu.lo)}, {"hi", to_text(w.mu.hi)}, {"approx", f.approx(AlgNum::mu())}}},
              {"kappa", kappa}};
}

Json independence_json(const std::vector<IndexIndependence>& v) {
  Json out = Json::array();
  for (const auto& r : v)
    out.push_back({{"element", r.element + 1},
                   {"status", to_text(r.status)},
                   {"method", r.method},
                   {"rows", {r.rows[0], r.rows[1], r.rows[2]}}});
  return out;
}

Json wedge_json(const Candidate& c) {
  const auto t = ordered(c);
  const CriterionResult r = solve_criterion(std::span<const RMat>(t.data(), t.size()), c.ordering);
  if (r.witnesses.empty()) return nullptr;
  const WedgeSlopes w = wedge_slopes(r.witnesses.front());
  auto slope = [](const AlgebraicSlope& s) -> Json {
    if (s.vertical) return "vertical";
    return s.approx;
  };
  Json j{{"ordering", to_text(c.ordering)},
         {"sigma_first", slope(w.first)},
         {"sigma_last", slope(w.last)},
         {"rows_consistent", w.first.consistent && w.last.consistent}};
  if (w.first_below_last) {
    j["first_below_last"] = *w.first_below_last;
    const int a = c.ordering.front() + 1, b = c.ordering.back() + 1;
    j["wedge_pair"] = *w.first_below_last ? Json{a, b} : Json{b, a};
  } else {
    j["first_below_last"] = nullptr;
  }
  return j;
}

Json stability_json(const LargeT5Certificate& cert, const RunConfig& cfg) {
  const StabilityReport s = perturb_and_recertify(cert, cfg.radius, cfg.trials, cfg.seed);
  Json notes = Json::array();
  for (const auto& t : s.trials)
    if (!t.ok()) notes.push_back(t.note);
  return Json{{"radius", to_text(s.radius)},
              {"seed", s.seed},
              {"trials", static_cast<int>(s.trials.size())},
              {"successes", s.successes()},
              {"failures", notes}};
}

std::string hex(const unsigned char* p, unsigned n) {
  std::ostringstream os;
  for (unsigned k = 0; k < n; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(p[k]);
  return os.str();
}

}  // namespace

Rational parse_exact(const std::string& text) {
  if (text.find_first_of(".eE") == std::string::npos) {
    try {
      return parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError("bad rational '" + text + "': " + e.what());
    }
  }
  // decimal: [sign] digits [. digits] [e exp]
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
  std::string digits;
  long exp10 = 0;
  bool any = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    any = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      --exp10;
      any = true;
    }
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    try {
      exp10 += std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + text + "'");
    }
    pos += used;
  }
  if (!any || pos != text.size()) throw ParseError("bad number '" + text + "'");
  Rational q{Integer(digits, 10)};
  Integer p10 = 1;
  for (long k = 0; k < std::abs(exp10); ++k) p10 *= 10;
  q = exp10 >= 0 ? Rational(q * p10) : Rational(q / p10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

void apply_config(RunConfig& cfg, const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "restarts") cfg.search.restarts = val.get<int>();
      else if (key == "tol_eq") cfg.search.tol_eq = val.get<double>();
      else if (key == "tol_ineq") cfg.search.tol_ineq = val.get<double>();
      else if (key == "det_margin") cfg.search.det_margin = val.get<double>();
      else if (key == "box") cfg.search.box = val.get<double>();
      else if (key == "d_box") cfg.search.d_box = val.get<double>();
      else if (key == "grid") cfg.pressure.grid = val.get<int>();
      else if (key == "margin") cfg.pressure.margin = val.get<double>();
      else if (key == "delta_frac") cfg.pressure.delta_frac = val.get<double>();
      else if (key == "delta_cap") cfg.pressure.delta_cap = val.get<double>();
      else if (key == "radius") cfg.radius = val.is_string() ? parse_exact(val.get<std::string>()) : from_double(val.get<double>());
      else if (key == "trials") cfg.trials = val.get<int>();
      else if (key == "branch_samples") cfg.branch_samples = val.get<int>();
      else if (key == "second_difference_samples") cfg.second_difference_samples = val.get<int>();
      else throw ParseError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!(cfg.search.tol_eq > 0) || !(cfg.search.tol_ineq > 0) || !(cfg.search.det_margin > 0))
    throw ParseError("config: tolerances must be positive");
  if (cfg.search.restarts < 1) throw ParseError("config: restarts must be >= 1");
  if (cfg.pressure.grid < 3) throw ParseError("config: grid must be >= 3");
  if (cfg.trials < 0 || cfg.branch_samples < 1 || cfg.second_difference_samples < 1)
    throw ParseError("config: sample counts must be positive");
  if (cfg.radius < 0) throw ParseError("config: radius must be >= 0");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  RunConfig cfg;
  try {
    apply_config(cfg, Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
  return cfg;
}

void write_candidate(std::ostream& os, const Candidate& c) {
  os << "tfive-candidate 1\n";
  os << "ordering " << to_text(c.ordering) << '\n';
  os << "symmetry " << c.symmetry << '\n';
  for (std::size_t i = 0; i < 5; ++i) {
    const RMat& m = c.set[i];
    os << "matrix " << i + 1 << '\n';
    os << to_text(m.e11) << ' ' << to_text(m.e12) << '\n';
    os << to_text(m.e21) << ' ' << to_text(m.e22) << '\n';
  }
}

std::string candidate_text(const Candidate& c) {
  std::ostringstream os;
  write_candidate(os, c);
  return os.str();
}

Candidate read_candidate(std::istream& is) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  std::size_t at = 0;
  auto next = [&](const std::string& what) -> std::istringstream {
    if (at >= lines.size()) throw ParseError("candidate: unexpected end of file, expected " + what);
    return std::istringstream(lines[at++]);
  };
  auto entry = [&](std::istringstream& ls, const std::string& what) {
    std::string tok;
    if (!(ls >> tok)) throw ParseError("candidate: missing entry in " + what);
    try {
      return parse_rational(tok);
    } catch (const std::invalid_argument&) {
      throw ParseError("candidate: bad rational '" + tok + "' in " + what);
    }
  };

  Candidate c;
  {
    auto ls = next("header");
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "tfive-candidate") throw ParseError("candidate: missing 'tfive-candidate' header");
    if (version != 1) throw ParseError("candidate: unsupported format version " + std::to_string(version));
  }
  {
    auto ls = next("ordering line");
    std::string key;
    ls >> key;
    if (key != "ordering") throw ParseError("candidate: expected 'ordering'");
    c.ordering.clear();
    int k = 0;
    while (ls >> k) c.ordering.push_back(k - 1);
    Ordering sorted = c.ordering;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != identity_ordering(5)) throw ParseError("candidate: ordering must be a permutation of 1..5");
  }
  {
    auto ls = next("symmetry line");
    std::string key;
    ls >> key >> c.symmetry;
    if (key != "symmetry" || (c.symmetry != "skew" && c.symmetry != "none"))
      throw ParseError("candidate: expected 'symmetry skew' or 'symmetry none'");
  }
  for (int i = 1; i <= 5; ++i) {
    const std::string what = "matrix " + std::to_string(i);
    auto hs = next(what + " header");
    std::string key;
    int idx = 0;
    if (!(hs >> key >> idx) || key != "matrix" || idx != i) throw ParseError("candidate: expected '" + what + "'");
    auto r1 = next(what + " row 1");
    RMat m;
    m.e11 = entry(r1, what);
    m.e12 = entry(r1, what);
    auto r2 = next(what + " row 2");
    m.e21 = entry(r2, what);
    m.e22 = entry(r2, what);
    c.set[static_cast<std::size_t>(i - 1)] = m;
  }
  if (at != lines.size()) throw ParseError("candidate: trailing content after matrix 5");
  return c;
}

Candidate parse_candidate(const std::string& text) {
  std::istringstream is(text);
  return read_candidate(is);
}

Candidate reference_candidate() {
  Candidate c;
  c.set = reference_large_t5();
  return c;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  return hex(md, len);
}

Json config_json(const RunConfig& c) {
  return Json{{"seed", c.seed},
              {"restarts", c.search.restarts},
              {"tol_eq", c.search.tol_eq},
              {"tol_ineq", c.search.tol_ineq},
              {"det_margin", c.search.det_margin},
              {"box", c.search.box},
              {"d_box", c.search.d_box},
              {"grid", c.pressure.grid},
              {"margin", c.pressure.margin},
              {"delta_frac", c.pressure.delta_frac},
              {"delta_cap", c.pressure.delta_cap},
              {"radius", to_text(c.radius)},
              {"trials", c.trials},
              {"branch_samples", c.branch_samples},
              {"second_difference_samples", c.second_difference_samples}};
}

Json report_header(const std::string& command) {
  return Json{{"tool", "tfive"}, {"version", kToolVersion}, {"command", command}};
}

StageResult run_search(const RunConfig& cfg, Candidate* found) {
  StageResult res;
  SearchProblem p;
  LargeT5Certificate cert;
  const SearchResult r = solve(p, cfg.search, cfg.seed, [&](const SearchResult& cand) {
    cert = certify_large_t5(rationalize(p, cand));
    return cert.ok();
  });
  Json z = Json::array();
  for (double v : r.z) z.push_back(v);
  res.report = Json{{"stage", "search"},
                    {"ok", r.feasible},
                    {"seed", r.seed},
                    {"restart", r.restart},
                    {"restarts_tried", r.restarts_tried},
                    {"iterations", r.iterations},
                    {"residuals",
                     {{"eq_norm", r.residuals.eq_norm()},
                      {"min_slack", r.residuals.min_slack()},
                      {"min_det", r.residuals.min_det()},
                      {"scale", r.residuals.scale}}},
                    {"note", r.note},
                    {"z", z}};
  if (!r.feasible) {
    res.exit_code = exit_search;
    return res;
  }
  Candidate c;
  c.set = rationalize(p, r);
  res.report["promotion"] = "dyadic";
  res.report["candidate"] = candidate_text(c);
  if (found) *found = c;
  return res;
}

StageResult run_certify(const Candidate& c, const RunConfig& cfg, LargeT5Certificate* cert_out) {
  StageResult res;
  LargeT5Certificate cert;
  Json& j = res.report;
  j["stage"] = "certify";
  try {
    cert = certify_large_t5(c.set);
  } catch (const std::exception& e) {
    j["ok"] = false;
    j["failures"] = Json{std::string("certification aborted: ") + e.what()};
    j["candidate"] = candidate_text(c);
    res.exit_code = exit_certify;
    return res;
  }
  j["ok"] = cert.ok();
  j["failures"] = cert.failures;
  bool sym = true;
  for (const auto& s : cert.symmetry_residual) sym = sym && s == 0;
  j["symmetry_exact"] = sym;
  Json pairs = Json::array();
  for (const auto& pd : cert.pair_dets)
    pairs.push_back({{"i", pd.i + 1}, {"j", pd.j + 1}, {"det", rational_json(pd.det)}, {"nonzero", pd.det != 0}});
  j["pair_determinants"] = pairs;
  Json dj = Json::array();
  for (std::size_t i = 0; i < cert.d.intervals.size(); ++i) {
    const auto& iv = cert.d.intervals[i];
    Json e{{"element", i + 1}, {"lo", iv.lo ? Json(to_text(*iv.lo)) : Json(nullptr)}, {"hi", to_text(iv.hi)},
           {"nonempty", !iv.empty()}};
    if (!iv.empty()) e["representative"] = to_text(iv.representative());
    dj.push_back(e);
  }
  j["d_intervals"] = dj;
  Json found = Json::array();
  for (const auto& w : cert.scanned) found.push_back(to_text(w.ordering));
  j["orderings_found"] = found;
  Json wit = Json::array();
  for (const auto& w : cert.witnesses) wit.push_back(witness_json(w));
  j["witnesses"] = wit;
  j["independence"] = independence_json(cert.independence);
  j["literal_independence"] = independence_json(cert.literal_independence);
  const bool pair_ok = std::all_of(cert.pair_dets.begin(), cert.pair_dets.end(),
                                   [](const PairDet& p) { return p.det != 0; });
  j["wedge"] = pair_ok ? wedge_json(c) : Json(nullptr);
  if (cert.ok() && cfg.trials > 0) j["stability"] = stability_json(cert, cfg);
  j["candidate"] = candidate_text(c);
  if (!cert.ok()) res.exit_code = exit_certify;
  if (cert_out) *cert_out = std::move(cert);
  return res;
}

StageResult run_convexify(const Candidate& c, const RunConfig& cfg, std::optional<PressureLaw>* law_out) {
  StageResult res;
  Json& j = res.report;
  j["stage"] = "convexify";
  try {
    const PressureLaw law = pressure_from_set(c.set, cfg.pressure);
    std::vector<Rational> v, h;
    for (const auto& m : c.set) {
      v.push_back(m.e11);
      h.push_back(m.e22);
    }
    const EpsilonChoice ec = epsilon0_max(data_1d(v, h, law.slopes()));
    const auto& eta = law.interpolant();
    Json slopes = Json::array();
    for (const auto& d : law.slopes()) slopes.push_back(to_text(d));
    j["slopes"] = slopes;
    j["eps_star"] = ec.eps_star.get_d();
    j["eps0"] = eta.eps0();
    j["delta"] = eta.delta();
    j["scale"] = law.scale();
    j["grid"] = {{"lo", law.grid_lo()}, {"hi", law.grid_hi()}, {"points", law.table().size()}};
    const PressureGridCheck g = check_grid(law);
    j["grid_check"] = {{"min_dp_fd", g.min_dp},
                       {"max_d2p_fd", g.max_d2p},
                       {"min_dp", g.min_dp_exact},
                       {"max_d2p", g.max_d2p_exact},
                       {"ok", g.ok()}};
    const NodeCheck nc = check_nodes(law);
    const double scale = law.scale();
    const bool nodes_ok = nc.max_value_error <= 1e-8 * scale && nc.max_slope_error <= 1e-6 * scale;
    j["node_check"] = {{"max_value_error", nc.max_value_error},
                       {"max_slope_error", nc.max_slope_error},
                       {"value_tolerance", 1e-8 * scale},
                       {"slope_tolerance", 1e-6 * scale},
                       {"ok", nodes_ok}};
    const double lo = law.grid_lo(), hi = law.grid_hi();
    const double threshold = eta.eps0();  // 2 eps0 with factor-2 slack
    const auto sd = second_differences(eta, std::span<const double>(&lo, 1), std::span<const double>(&hi, 1),
                                       1e-4 * scale, 1e-2 * scale, cfg.second_difference_samples, threshold,
                                       cfg.seed);
    j["second_differences"] = {{"samples", sd.samples},
                               {"below", sd.below},
                               {"min_quotient", sd.min_quotient},
                               {"threshold", threshold},
                               {"ok", sd.below == 0}};
    const bool ok = g.ok() && nodes_ok && sd.below == 0;
    j["ok"] = ok;
    if (!ok) res.exit_code = exit_convexify;
    if (law_out) law_out->emplace(law);
  } catch (const ConvexifyError& e) {
    j["ok"] = false;
    j["error"] = e.what();
    res.exit_code = exit_convexify;
  }
  return res;
}

StageResult run_psystem(const Candidate& c, const PressureLaw& law, const std::vector<PressureRow>* table,
                        const RunConfig& cfg) {
  StageResult res;
  Json& j = res.report;
  j["stage"] = "psystem";
  bool ok = true;

  if (table) {
    double dp_max = 0, dd_max = 0, dv_max = 0;
    bool shape = table->size() == law.table().size();
    if (shape)
      for (std::size_t k = 0; k < table->size(); ++k) {
        dv_max = std::max(dv_max, std::abs((*table)[k].v - law.table()[k].v));
        dp_max = std::max(dp_max, std::abs((*table)[k].p - law.table()[k].p));
        dd_max = std::max(dd_max, std::abs((*table)[k].dp - law.table()[k].dp));
      }
    const double tol = 1e-10 * std::max(law.scale(), 1.0);
    const bool match = shape && dv_max <= tol && dp_max <= tol && dd_max <= tol;
    j["table_check"] = {{"rows", table->size()},
                        {"max_v_diff", dv_max},
                        {"max_p_diff", dp_max},
                        {"max_dp_diff", dd_max},
                        {"ok", match}};
    ok = ok && match;
  }

  Json pairs = Json::array();
  bool shock_free = true;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) {
      const bool r1 = is_rank_one_connected(c.set[a], c.set[b]);
      const auto speed = rh_speed(c.set[a], c.set[b]);
      shock_free = shock_free && !r1 && !speed;
      pairs.push_back({{"i", a + 1},
                       {"j", b + 1},
                       {"rank_one", r1},
                       {"rh_speed", speed ? Json(to_text(*speed)) : Json(nullptr)}});
    }
  j["pairs"] = pairs;
  j["no_pair_admits_rh_speed"] = shock_free;
  ok = ok && shock_free;

  Json branches = Json::array();
  for (std::size_t node = 0; node < 5; ++node) {
    const State base = state_of(to_double(c.set[node]));
    for (int family = 1; family <= 2; ++family) {
      for (const bool admissible : {true, false}) {
        const bool left = (family == 1) == admissible;
        const double end = left ? law.grid_lo() : law.grid_hi();
        const HugoniotBranch b = hugoniot_trace(base, family, law, end, cfg.branch_samples);
        int lax = 0, liu = 0;
        double resolution = 0;
        for (std::size_t m = 1; m < b.samples.size(); ++m) {
          lax += lax_check(b, m);
          if (admissible) {
            const LiuResult lr = liu_check(b, m, &law);
            liu += lr.ok;
            resolution = std::max(resolution, lr.resolution);
          }
        }
        const int n = static_cast<int>(b.samples.size()) - 1;
        const bool rh_ok = b.max_rh_residual <= 1e-8 * b.scale;
        const bool branch_ok = !b.truncated && rh_ok && (admissible ? lax == n && liu == n : lax == 0);
        Json e{{"node", node + 1},
               {"family", family},
               {"side", admissible ? "admissible" : "opposite"},
               {"samples", n},
               {"lax_pass", lax},
               {"max_rh_residual", b.max_rh_residual},
               {"rh_tolerance", 1e-8 * b.scale},
               {"ok", branch_ok}};
        if (admissible) {
          e["liu_pass"] = liu;
          e["liu_resolution"] = resolution;
        }
        if (b.truncated) e["note"] = b.note;
        branches.push_back(e);
        ok = ok && branch_ok;
      }
    }
  }
  j["branches"] = branches;
  j["wedge"] = shock_free ? wedge_json(c) : Json(nullptr);
  j["ok"] = ok;
  if (!ok) res.exit_code = exit_psystem;
  return res;
}

StageResult run_pipeline(const RunConfig& cfg) {
  StageResult res;
  res.report = report_header("pipeline");
  res.report["config"] = config_json(cfg);
  Json stages = Json::object();
  auto finish = [&](int code) {
    res.report["stages"] = stages;
    res.report["verdict"] = code == exit_ok ? "pass" : "fail";
    res.report["exit_code"] = code;
    res.exit_code = code;
    return res;
  };

  Candidate c;
  StageResult s = run_search(cfg, &c);
  stages["search"] = s.report;
  if (s.exit_code) return finish(s.exit_code);

  s = run_certify(c, cfg);
  stages["certify"] = s.report;
  if (s.exit_code) return finish(s.exit_code);

  std::optional<PressureLaw> law;
  s = run_convexify(c, cfg, &law);
  stages["convexify"] = s.report;
  if (s.exit_code) return finish(s.exit_code);

  s = run_psystem(c, *law, nullptr, cfg);
  stages["psystem"] = s.report;
  return finish(s.exit_code);
}

}  // namespace tfive
