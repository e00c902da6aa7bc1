#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace tensorval {

// Outcome of an exact verification suite; failures name the offending parameters.
struct SuiteReport {
    std::string name;
    nlohmann::json params;
    long points = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty() && points > 0; }
    nlohmann::json to_json() const;
};

std::vector<std::string> suite_names();
// Runs a named suite over the given ambient dimensions (an empty list selects the suite's default grid).
SuiteReport run_suite(const std::string& name, const std::vector<int>& dims = {});

// Exit codes: 0 success, 1 usage or input error, 2 verification failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tensorval
