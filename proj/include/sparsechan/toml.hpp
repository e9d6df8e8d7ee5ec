#pragma once

#include <string>

#include <json.hpp>

namespace sparsechan {

// Parses the TOML subset used by the benchmark configs into a JSON tree:
// [table] and [[array-of-table]] headers, key = value pairs with string,
// integer, float, boolean, and single-line array values, and # comments.
// Throws std::runtime_error with a line number on malformed input.
nlohmann::json toml_to_json(const std::string& text);

}  // namespace sparsechan
