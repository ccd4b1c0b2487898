#include "momspace/common.hpp"

#include <algorithm>

namespace momspace {

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Interval01: return "interval01";
    case Domain::HalfLine: return "halfline";
    case Domain::RealLine: return "realline";
  }
  return "?";
}

Domain domain_from_string(const std::string& s) {
  if (s == "interval01" || s == "[0,1]") return Domain::Interval01;
  if (s == "halfline" || s == "[0,inf)") return Domain::HalfLine;
  if (s == "realline" || s == "R") return Domain::RealLine;
  throw Error("unknown domain: " + s);
}

bool coordinate_in_domain(Domain d, int j, Real y) {
  switch (d) {
    case Domain::Interval01: return y > 0 && y < 1;
    case Domain::HalfLine: return y > 0;
    case Domain::RealLine: return (j % 2 != 0) ? std::isfinite(y) : y > 0;
  }
  return false;
}

Real coordinate_margin(Domain d, int j, Real y) {
  switch (d) {
    case Domain::Interval01: return std::min(y, 1 - y);
    case Domain::HalfLine: return y;
    case Domain::RealLine: return (j % 2 != 0) ? kInf : y;
  }
  return -kInf;
}

Constraint::Constraint(std::vector<Entry> e) : entries(std::move(e)) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index < 1) throw Error("constraint index must be positive");
    if (i > 0 && entries[i].index == entries[i - 1].index)
      throw Error("duplicate constraint index " + std::to_string(entries[i].index));
  }
}

bool Constraint::constrains(int j) const {
  for (const auto& e : entries)
    if (e.index == j) return true;
  return false;
}

Real Constraint::value_at(int j) const {
  for (const auto& e : entries)
    if (e.index == j) return e.value;
  throw Error("index " + std::to_string(j) + " is not constrained");
}

int Constraint::deficiency(int j) const {
  int d = 0;
  for (const auto& e : entries)
    if (e.index > j) ++d;
  return d;
}

}  // namespace momspace
