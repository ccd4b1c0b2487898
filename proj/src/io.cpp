#include "momspace/io.hpp"

#include <charconv>

namespace momspace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

json constraint_to_json(const Constraint& c) {
  json arr = json::array();
  for (const auto& e : c.entries)
    arr.push_back({{"index", e.index}, {"value", static_cast<double>(e.value)}});
  return arr;
}

Constraint constraint_from_json(const json& j) {
  std::vector<Constraint::Entry> entries;
  for (const auto& e : j)
    entries.push_back({e.at("index").get<int>(), static_cast<Real>(e.at("value").get<double>())});
  return Constraint(std::move(entries));
}

namespace {

std::string ref_name(RefKind k) {
  switch (k) {
    case RefKind::ArcsineLike: return "arcsine";
    case RefKind::SemicircleLike: return "semicircle";
    case RefKind::MarchenkoPasturLike: return "marchenko-pastur";
  }
  return "?";
}

RefKind ref_from_name(const std::string& s) {
  if (s == "arcsine") return RefKind::ArcsineLike;
  if (s == "semicircle") return RefKind::SemicircleLike;
  if (s == "marchenko-pastur") return RefKind::MarchenkoPasturLike;
  throw Error("unknown reference kind: " + s);
}

json real_array(const std::vector<Real>& v) {
  json arr = json::array();
  for (Real x : v) arr.push_back(static_cast<double>(x));
  return arr;
}

std::vector<Real> real_vector(const json& j) {
  std::vector<Real> v;
  for (const auto& x : j) v.push_back(static_cast<Real>(x.get<double>()));
  return v;
}

}  // namespace

json measure_to_json(const Measure& mu) {
  json j;
  if (mu.ac) {
    j["ac"] = {{"reference", ref_name(mu.ac->reference)},
               {"support", {static_cast<double>(mu.ac->support_lo),
                            static_cast<double>(mu.ac->support_hi)}},
               {"prefactor", static_cast<double>(mu.ac->prefactor)},
               {"denominator", real_array(mu.ac->denominator.coeffs)}};
  }
  json atoms = json::array();
  for (const Atom& a : mu.atoms)
    atoms.push_back({{"location", static_cast<double>(a.location)},
                     {"weight", static_cast<double>(a.weight)}});
  j["atoms"] = atoms;
  return j;
}

Measure measure_from_json(const json& j) {
  Measure mu;
  if (j.contains("ac")) {
    const json& a = j.at("ac");
    AbsContPart ac;
    ac.reference = ref_from_name(a.at("reference").get<std::string>());
    ac.support_lo = static_cast<Real>(a.at("support")[0].get<double>());
    ac.support_hi = static_cast<Real>(a.at("support")[1].get<double>());
    ac.prefactor = static_cast<Real>(a.at("prefactor").get<double>());
    ac.denominator = Polynomial(real_vector(a.at("denominator")));
    mu.ac = ac;
  }
  for (const auto& e : j.at("atoms"))
    mu.atoms.push_back({static_cast<Real>(e.at("location").get<double>()),
                        static_cast<Real>(e.at("weight").get<double>())});
  return mu;
}

json limit_to_json(const LimitResult& limit) {
  json j;
  j["schema"] = kSchema;
  j["domain"] = to_string(limit.domain);
  j["constraint"] = constraint_to_json(limit.constraint);
  j["tail"] = {{"odd", static_cast<double>(limit.tail_odd)},
               {"even", static_cast<double>(limit.tail_even)}};
  json mins = json::array();
  for (const auto& m : limit.minimizers) {
    mins.push_back({{"weight", static_cast<double>(m.weight)},
                    {"coordinates", real_array(m.head.values)},
                    {"measure", measure_to_json(m.measure)}});
  }
  j["minimizers"] = mins;
  if (limit.covariance) {
    json rows = json::array();
    for (int r = 0; r < limit.covariance->rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < limit.covariance->cols(); ++c)
        row.push_back(static_cast<double>((*limit.covariance)(r, c)));
      rows.push_back(row);
    }
    j["covariance"] = rows;
  }
  return j;
}

}  // namespace momspace
