#include "rubricbench/templates.hpp"

#include "rubricbench/digest.hpp"
#include "rubricbench/error.hpp"

namespace rubricbench::templates {

std::string_view get(std::string_view name) {
  for (const auto& t : detail::raw_templates()) {
    if (name == t.name) return t.text;
  }
  throw Error("unknown prompt template '" + std::string(name) + "'");
}

std::string hash(std::string_view name) { return sha256_hex(get(name)); }

std::map<std::string, std::string> all_hashes() {
  std::map<std::string, std::string> out;
  for (const auto& t : detail::raw_templates()) out.emplace(t.name, sha256_hex(t.text));
  return out;
}

std::string render(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(text.size() * 2);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw Error("unterminated placeholder in template");
    out.append(text.substr(pos, open - pos));
    const auto key = text.substr(open + 2, close - open - 2);
    bool found = false;
    for (const auto& [k, v] : values) {
      if (k == key) {
        out.append(v);
        found = true;
        break;
      }
    }
    if (!found) throw Error("template placeholder '" + std::string(key) + "' has no value");
    pos = close + 2;
  }
  return out;
}

}  // namespace rubricbench::templates
