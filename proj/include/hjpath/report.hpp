#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjpath/action.hpp"
#include "hjpath/hj.hpp"
#include "hjpath/legendre.hpp"
#include "hjpath/model.hpp"

namespace hjpath {

inline constexpr const char* kToolName = "hjpath";
inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct RunOptions {
  std::uint64_t seed = 0;
  int rank_samples = 5;
  int max_iter = 32;
  double tol = 1e-10;
};

/// Everything the analyze command knows about one system. Equations of
/// motion and the action form are present for closed systems and, flagged
/// by `forced`, for non-involutive ones.
struct Analysis {
  SystemSpec spec;
  LegendreAnalysis legendre;
  ClosureResult closure;
  ReducedPhaseSpace reduced;
  std::optional<TotalDifferentialSystem> eom;
  std::optional<ActionForm> action;
  bool forced = false;
  std::vector<std::string> warnings;
};

Analysis analyze_system(const SystemSpec& spec, const RunOptions& options);

/// Reproducibility header: tool, version, command and every flag value.
Json run_header(const std::string& command, const Json& flags);

Json report_json(const Analysis& a, const Json& header);
std::string report_text(const Analysis& a, const Json& header);
std::string report_latex(const Analysis& a);

Json action_json(const Analysis& a, const Json& header);
std::string action_text(const Analysis& a);
std::string action_latex(const Analysis& a);

/// Re-reads a serialized report: every expression field is parsed with the
/// system's symbol table and printed again in canonical form. Throws
/// ParseError when an expression does not parse.
Json reparse_report(const Json& doc);

}  // namespace hjpath
