// Command-line driver: search, certify, verify-fixture, convexify, psystem,
// pipeline. Reports are JSON on stdout (or --out); see README for the keys.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tfive/report.hpp"

using namespace tfive;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_eq, tol_ineq;
  std::optional<int> restarts, grid, trials;
  std::optional<std::string> radius;
  std::string out;
};

RunConfig make_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  Json j = Json::object();
  if (o.seed) j["seed"] = *o.seed;
  if (o.tol_eq) j["tol_eq"] = *o.tol_eq;
  if (o.tol_ineq) j["tol_ineq"] = *o.tol_ineq;
  if (o.restarts) j["restarts"] = *o.restarts;
  if (o.grid) j["grid"] = *o.grid;
  if (o.trials) j["trials"] = *o.trials;
  if (o.radius) j["radius"] = *o.radius;
  apply_config(cfg, j);
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

void emit(const Json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// A report (JSON) or a candidate file; reports carry the candidate they
// certified.
Candidate load_candidate(const std::string& text, Json* stored_report) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json r;
    try {
      r = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("report: ") + e.what());
    }
    const Json* node = &r;
    if (r.contains("stages") && r["stages"].contains("certify")) node = &r["stages"]["certify"];
    if (!node->contains("candidate")) throw ParseError("report has no embedded candidate");
    if (stored_report) *stored_report = *node;
    return parse_candidate((*node)["candidate"].get<std::string>());
  }
  return parse_candidate(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-T5 search, exact certification, pressure law construction and shock checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  const char* env = std::getenv("TFIVE_CONFIG");
  if (env) o.config = env;
  app.add_option("--config", o.config, "JSON config file (default: $TFIVE_CONFIG)");
  app.add_option("--seed", o.seed, "search and perturbation seed");
  app.add_option("--tol-eq", o.tol_eq, "equality residual tolerance");
  app.add_option("--tol-ineq", o.tol_ineq, "inequality slack tolerance");
  app.add_option("--restarts", o.restarts, "search restarts");
  app.add_option("--grid", o.grid, "pressure grid points");
  app.add_option("--radius", o.radius, "perturbation radius (rational or decimal, exact)");
  app.add_option("--trials", o.trials, "perturbation trials (0 skips)");
  app.add_option("--out", o.out, "output path (candidate, table or report)");

  auto* search = app.add_subcommand("search", "multistart search; writes a candidate file");
  std::string candidate_path, table_path;
  auto* certify = app.add_subcommand("certify", "exact large-T5 certification of a candidate or report");
  certify->add_option("candidate", candidate_path, "candidate file or earlier report")->required();
  auto* fixture = app.add_subcommand("verify-fixture", "certify the embedded reference set");
  auto* convexify = app.add_subcommand("convexify", "pressure law for a certified candidate; writes a table");
  convexify->add_option("candidate", candidate_path, "candidate file or report")->required();
  auto* psystem = app.add_subcommand("psystem", "shock checks on the pressure law");
  psystem->add_option("candidate", candidate_path, "candidate file or report")->required();
  psystem->add_option("table", table_path, "pressure table from convexify")->required();
  auto* pipeline = app.add_subcommand("pipeline", "search, certify, convexify and psystem in one run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_parse;
  }

  try {
    const RunConfig cfg = make_config(o);
    const auto t0 = Clock::now();

    if (search->parsed()) {
      Candidate c;
      StageResult r = run_search(cfg, &c);
      Json rep = report_header("search");
      rep["config"] = config_json(cfg);
      rep["stages"]["search"] = r.report;
      if (r.exit_code == exit_ok) {
        const std::string path = o.out.empty() ? "candidate.txt" : o.out;
        write_file(path, candidate_text(c));
        rep["candidate_path"] = path;
      }
      rep["verdict"] = r.exit_code == exit_ok ? "pass" : "fail";
      rep["exit_code"] = r.exit_code;
      rep["timings_ms"] = {{"total", ms_since(t0)}};
      emit(rep, "");
      return r.exit_code;
    }

    if (certify->parsed() || fixture->parsed()) {
      Json rep = report_header(certify->parsed() ? "certify" : "verify-fixture");
      rep["config"] = config_json(cfg);
      Candidate c = reference_candidate();
      Json stored;
      if (certify->parsed()) {
        const std::string text = slurp(candidate_path);
        rep["inputs"] = Json::array({{{"path", candidate_path}, {"sha256", sha256_hex(text)}}});
        c = load_candidate(text, &stored);
      }
      StageResult r = run_certify(c, cfg);
      rep["stages"]["certify"] = r.report;
      if (!stored.is_null()) {
        // re-verification of an earlier report
        rep["reproduces_report"] = stored.value("ok", !r.report["ok"].get<bool>()) == r.report["ok"] &&
                                   stored.value("failures", Json()) == r.report["failures"];
      }
      rep["verdict"] = r.exit_code == exit_ok ? "pass" : "fail";
      rep["exit_code"] = r.exit_code;
      rep["timings_ms"] = {{"total", ms_since(t0)}};
      emit(rep, o.out);
      return r.exit_code;
    }

    if (convexify->parsed()) {
      const std::string text = slurp(candidate_path);
      const Candidate c = load_candidate(text, nullptr);
      Json rep = report_header("convexify");
      rep["config"] = config_json(cfg);
      rep["inputs"] = Json::array({{{"path", candidate_path}, {"sha256", sha256_hex(text)}}});
      RunConfig quick = cfg;
      quick.trials = 0;
      StageResult cr = run_certify(c, quick);
      rep["stages"]["certify"] = cr.report;
      int code = cr.exit_code;
      if (code == exit_ok) {
        std::optional<PressureLaw> law;
        StageResult r = run_convexify(c, cfg, &law);
        rep["stages"]["convexify"] = r.report;
        code = r.exit_code;
        if (law) {
          const std::string path = o.out.empty() ? "pressure.tsv" : o.out;
          std::ostringstream ts;
          write_table(ts, *law);
          write_file(path, ts.str());
          rep["table_path"] = path;
        }
      }
      rep["verdict"] = code == exit_ok ? "pass" : "fail";
      rep["exit_code"] = code;
      rep["timings_ms"] = {{"total", ms_since(t0)}};
      emit(rep, "");
      return code;
    }

    if (psystem->parsed()) {
      const std::string text = slurp(candidate_path);
      const std::string table_text = slurp(table_path);
      const Candidate c = load_candidate(text, nullptr);
      std::istringstream ts(table_text);
      std::vector<PressureRow> table;
      try {
        table = read_table(ts);
      } catch (const std::runtime_error& e) {
        throw ParseError(e.what());
      }
      Json rep = report_header("psystem");
      rep["config"] = config_json(cfg);
      rep["inputs"] = Json::array({{{"path", candidate_path}, {"sha256", sha256_hex(text)}},
                                   {{"path", table_path}, {"sha256", sha256_hex(table_text)}}});
      RunConfig same = cfg;
      same.pressure.grid = static_cast<int>(table.size());
      std::optional<PressureLaw> law;
      StageResult cv = run_convexify(c, same, &law);
      int code = cv.exit_code;
      if (code == exit_ok) {
        StageResult r = run_psystem(c, *law, &table, same);
        rep["stages"]["psystem"] = r.report;
        code = r.exit_code;
      } else {
        rep["stages"]["convexify"] = cv.report;
      }
      rep["verdict"] = code == exit_ok ? "pass" : "fail";
      rep["exit_code"] = code;
      rep["timings_ms"] = {{"total", ms_since(t0)}};
      emit(rep, o.out);
      return code;
    }

    if (pipeline->parsed()) {
      StageResult r = run_pipeline(cfg);
      r.report["timings_ms"] = {{"total", ms_since(t0)}};
      emit(r.report, o.out);
      return r.exit_code;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_parse;
  }
  return exit_parse;
}
