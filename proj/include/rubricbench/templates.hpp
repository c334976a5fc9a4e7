#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rubricbench::templates {

namespace detail {
struct RawTemplate {
  const char* name;
  const char* text;
};
const std::vector<RawTemplate>& raw_templates();
}  // namespace detail

// Text of the template file templates/<name>.txt. Throws Error if unknown.
std::string_view get(std::string_view name);

// SHA-256 of the template text, as recorded in run manifests.
std::string hash(std::string_view name);

// name -> hash for every bundled template.
std::map<std::string, std::string> all_hashes();

// Replaces every {{key}} in `text`. A placeholder without a value is an error.
std::string render(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace rubricbench::templates
