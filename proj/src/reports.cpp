#include "mintool/reports.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mintool {

std::string canonical_dump(const nlohmann::json& j) {
  // nlohmann::json keeps object keys sorted and emits shortest round-trip
  // doubles, so dump() is already canonical; pin the indent here.
  return j.dump(2) + "\n";
}

void write_report(const std::string& path, const nlohmann::json& j) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << canonical_dump(j);
}

}  // namespace mintool
