#pragma once

#include "metaot/sqw_dsw.hpp"

#include "json.hpp"

#include <iosfwd>

namespace metaot::cli {

inline constexpr const char* kToolName = "metaot";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Entry point of the `metaot` command-line tool. One-line summaries go to
/// `out`; diagnostics, warnings and --verbose timing lines go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Slicing settings from a JSON object; absent keys keep `defaults`.
SlicingConfig slicing_from_json(const nlohmann::json& j, SlicingConfig defaults = {});
/// Resolved settings (thread count excluded: it never changes results).
nlohmann::json slicing_to_json(const SlicingConfig& config);

}  // namespace metaot::cli
