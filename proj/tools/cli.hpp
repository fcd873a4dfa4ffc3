#pragma once

#include <monochrome/monochrome.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace monochrome::cli {

enum ExitCode : int { Success = 0, NotFound = 1, UsageError = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// JSON views of library results, shared by the subcommands.
nlohmann::json to_json(const Element& e);
nlohmann::json to_json(const std::vector<Element>& v);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const PSWitness& w);
nlohmann::json to_json(const HjResult& r);

/// Flattens merged JSON reports into one CSV table, one row per report.
std::string reports_to_csv(const std::vector<nlohmann::json>& reports);

}  // namespace monochrome::cli
