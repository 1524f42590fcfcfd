#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfive/convexify.hpp"
#include "tfive/criterion.hpp"
#include "tfive/large_t5.hpp"
#include "tfive/search.hpp"

namespace tfive {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum ExitCode : int {
  exit_ok = 0,
  exit_parse = 1,
  exit_search = 2,
  exit_certify = 3,
  exit_convexify = 4,
  exit_psystem = 5,
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  SearchConfig search;
  PressureConfig pressure;
  Rational radius = Rational(1) / Rational(1000000000);
  int trials = 20;                      // perturbation trials; 0 skips stability
  int branch_samples = 1000;            // s_R values per Hugoniot branch side
  int second_difference_samples = 1000;
};

/// Reads a JSON object; unknown keys are an error. Keys: seed, restarts,
/// tol_eq, tol_ineq, det_margin, box, d_box, grid, margin, delta_frac,
/// delta_cap, radius, trials, branch_samples, second_difference_samples.
void apply_config(RunConfig& cfg, const Json& j);
RunConfig load_config(const std::string& path);
/// "3/7", "12", "1e-9" or "0.25", read exactly.
Rational parse_exact(const std::string& text);

/// Plain-text candidate set:
///   tfive-candidate 1
///   ordering 1 2 3 4 5
///   symmetry skew
///   matrix 1
///   e11 e12
///   e21 e22
///   ...
/// with every entry written as num/den.
struct Candidate {
  std::array<RMat, 5> set;
  Ordering ordering = identity_ordering(5);
  std::string symmetry = "skew";  // "skew": e12 = -e21 for every matrix; "none" otherwise
};
void write_candidate(std::ostream& os, const Candidate& c);
std::string candidate_text(const Candidate& c);
Candidate read_candidate(std::istream& is);
Candidate parse_candidate(const std::string& text);
Candidate reference_candidate();

std::string sha256_hex(const std::string& bytes);

struct StageResult {
  Json report;
  int exit_code = exit_ok;
};

StageResult run_search(const RunConfig& cfg, Candidate* found);
StageResult run_certify(const Candidate& c, const RunConfig& cfg, LargeT5Certificate* cert_out = nullptr);
StageResult run_convexify(const Candidate& c, const RunConfig& cfg, std::optional<PressureLaw>* law_out = nullptr);
/// `table` (from a convexify run) is cross-checked against the rebuilt law.
StageResult run_psystem(const Candidate& c, const PressureLaw& law, const std::vector<PressureRow>* table,
                        const RunConfig& cfg);
/// search, rationalize, certify, convexify, psystem; stops at the first
/// failing stage.
StageResult run_pipeline(const RunConfig& cfg);

Json config_json(const RunConfig& cfg);

/// Tool, version and command header shared by every report.
Json report_header(const std::string& command);

}  // namespace tfive
