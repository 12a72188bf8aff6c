#include "qmanifold/config.hpp"

#include <array>

#include "qmanifold/errors.hpp"

namespace qmfd {

namespace {

struct Entry {
  const char* name;
  double Tolerances::* member;
};

constexpr std::array<Entry, 8> kEntries = {{
    {"nonzero", &Tolerances::nonzero},
    {"section", &Tolerances::section},
    {"translation", &Tolerances::translation},
    {"fiber", &Tolerances::fiber},
    {"chart", &Tolerances::chart},
    {"point", &Tolerances::point},
    {"indist", &Tolerances::indist},
    {"grid_margin", &Tolerances::grid_margin},
}};

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  if (value <= 0.0) throw ConfigError("tolerance '" + name + "' must be positive");
  for (const auto& e : kEntries) {
    if (name == e.name) {
      this->*(e.member) = value;
      return;
    }
  }
  throw ConfigError("unknown tolerance '" + name + "'");
}

double Tolerances::get(const std::string& name) const {
  for (const auto& e : kEntries) {
    if (name == e.name) return this->*(e.member);
  }
  throw ConfigError("unknown tolerance '" + name + "'");
}

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kEntries) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

}  // namespace qmfd
