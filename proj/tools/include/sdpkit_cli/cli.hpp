#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sdpkit::cli {

enum ExitCode { kOk = 0, kParseError = 2, kNumericalFailure = 3 };

// args excludes the program name. `--input -` reads from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Floats keep 12 significant digits; NaN and infinities throw NumericalTrouble.
double json_number(double v);

// Flattened key/value table used by --format text.
void write_text(std::ostream& out, const nlohmann::json& j);

}  // namespace sdpkit::cli
