// momspace - command line harness for constrained moment spaces:
// limiting measures, sampling, statistical verification and spectral output.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "momspace/expr.hpp"
#include "momspace/io.hpp"
#include "momspace/limits.hpp"
#include "momspace/sampler.hpp"
#include "momspace/spectral.hpp"
#include "momspace/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace momspace;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNotAdmissible = 2;
constexpr int kExitNonIntegrable = 3;
constexpr int kExitDegenerateMinimizer = 4;
constexpr int kExitChainNotConverged = 5;
constexpr int kExitVerifyFailed = 6;

struct CommonOptions {
  std::string domain = "interval01";
  std::vector<std::string> constraint;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> potential;  // V_1, V_2, ... expressions in y
  std::string preset;                  // named potential preset
};

struct SampleOptions {
  int n = 50;
  int count = 1000;
  int burn_in = 500;
  int thinning = 5;
  int chains = 4;
  double target_acceptance = 0.234;
  std::string from_metadata;
};

struct LimitOptions {
  int covariance_l = 0;  // 0 = skip
  int grid = 512;
};

struct VerifyOptions {
  int n = 200;
  int count = 2000;
  int l = 2;
};

Constraint parse_constraint_args(const std::vector<std::string>& args) {
  std::vector<Constraint::Entry> entries;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw Error("constraint must look like m2=0.3: " + a);
    std::string key = a.substr(0, eq);
    if (!key.empty() && (key[0] == 'm' || key[0] == 'M')) key = key.substr(1);
    entries.push_back({std::stoi(key), std::stold(a.substr(eq + 1))});
  }
  return Constraint(std::move(entries));
}

std::optional<PotentialSpec> build_potential(const CommonOptions& opt, Domain domain) {
  std::vector<std::string> exprs = opt.potential;
  if (!opt.preset.empty()) {
    if (opt.preset == "example-r") {
      exprs = {"(y-1)^2", "8*y^2"};
    } else if (opt.preset == "double-well") {
      exprs = {"(y^2-1)^2", "y^2"};
    } else {
      throw Error("unknown preset '" + opt.preset + "' (try example-r, double-well)");
    }
  }
  if (exprs.empty()) return std::nullopt;
  if (exprs.size() < 2) throw Error("a potential needs at least V1 and V2");
  std::vector<std::function<Real(Real)>> fns;
  for (const auto& e : exprs) fns.push_back(parse_expression(e));
  return make_potential(domain, std::move(fns));
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

json config_json(const CommonOptions& c) {
  return {{"domain", c.domain},
          {"constraint", join(c.constraint, ";")},
          {"out", c.out},
          {"seed", c.seed},
          {"potential", join(c.potential, ";")},
          {"preset", c.preset}};
}

void write_metadata(const fs::path& dir, const std::string& command, const json& config,
                    const json& extra) {
  json meta;
  meta["schema"] = kSchema;
  meta["command"] = command;
  meta["config"] = config;
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

// ---- limit ----

int run_limit(const CommonOptions& common, const LimitOptions& opt) {
  const Domain domain = domain_from_string(common.domain);
  const Constraint constraint = parse_constraint_args(common.constraint);
  const auto potential = build_potential(common, domain);
  if (!potential && domain != Domain::Interval01)
    throw Error("the uniform distribution needs domain interval01; give a potential otherwise");

  LimitResult limit = potential ? solve_general_limits(*potential, constraint, domain)
                                : solve_uniform_limit(constraint);
  if (opt.covariance_l > 0)
    limit.covariance = potential
                           ? clt_covariance_general(limit, opt.covariance_l, constraint, *potential)
                           : clt_covariance_uniform(limit, opt.covariance_l, constraint);

  const json out = limit_to_json(limit);
  const fs::path dir(common.out);
  fs::create_directories(dir);
  write_file(dir / "limit.json", out.dump(2) + "\n");

  // density of the dominant minimizer on a uniform grid over the open support
  const Measure& mu = limit.minimizers.front().measure;
  std::ostringstream csv;
  csv << "x,density\r\n";
  if (mu.ac) {
    const Real a = mu.ac->support_lo, b = mu.ac->support_hi;
    for (int i = 0; i < opt.grid; ++i) {
      const Real x = a + (b - a) * (Real(i) + 0.5L) / opt.grid;
      csv << format_double(static_cast<double>(x)) << ","
          << format_double(static_cast<double>(density_at(mu, x))) << "\r\n";
    }
  }
  write_file(dir / "density.csv", csv.str());
  write_metadata(dir, "limit", config_json(common),
                 {{"covariance_l", opt.covariance_l}, {"grid", opt.grid}});
  return 0;
}

// ---- sample ----

json sample_config_json(const CommonOptions& common, const SampleOptions& s) {
  json j = config_json(common);
  j["n"] = s.n;
  j["count"] = s.count;
  j["burn_in"] = s.burn_in;
  j["thinning"] = s.thinning;
  j["chains"] = s.chains;
  j["target_acceptance"] = s.target_acceptance;
  return j;
}

void load_sample_config(const json& cfg, CommonOptions& common, SampleOptions& s) {
  auto split = [](const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!item.empty()) out.push_back(item);
    return out;
  };
  common.domain = cfg.at("domain").get<std::string>();
  common.constraint = split(cfg.at("constraint").get<std::string>());
  common.seed = cfg.at("seed").get<std::uint64_t>();
  common.potential = split(cfg.at("potential").get<std::string>());
  common.preset = cfg.at("preset").get<std::string>();
  s.n = cfg.at("n").get<int>();
  s.count = cfg.at("count").get<int>();
  s.burn_in = cfg.at("burn_in").get<int>();
  s.thinning = cfg.at("thinning").get<int>();
  s.chains = cfg.at("chains").get<int>();
  s.target_acceptance = cfg.at("target_acceptance").get<double>();
}

int run_sample(CommonOptions common, SampleOptions opt) {
  if (!opt.from_metadata.empty()) {
    std::ifstream f(opt.from_metadata);
    if (!f) throw Error("cannot read " + opt.from_metadata);
    json meta = json::parse(f);
    const std::string out_keep = common.out;
    load_sample_config(meta.at("config"), common, opt);
    common.out = out_keep;  // allow re-running into a fresh directory
  }
  const Domain domain = domain_from_string(common.domain);
  const auto potential = build_potential(common, domain);
  if (!potential && domain != Domain::Interval01)
    throw Error("the uniform sampler lives on interval01; give a potential otherwise");

  SamplerConfig cfg;
  cfg.n = opt.n;
  cfg.constraint = parse_constraint_args(common.constraint);
  cfg.domain = domain;
  cfg.potential = potential;
  cfg.seed = common.seed;
  cfg.mcmc.burn_in = opt.burn_in;
  cfg.mcmc.thinning = opt.thinning;
  cfg.mcmc.chains = opt.chains;
  cfg.mcmc.target_acceptance = opt.target_acceptance;

  MomentSampler sampler =
      potential ? MomentSampler::general(cfg) : MomentSampler::uniform(cfg);

  const int i_k = cfg.constraint.max_index();
  std::vector<double> first_tail;
  std::ostringstream csv;
  csv << "m_1";
  for (int j = 2; j <= opt.n; ++j) csv << ",m_" << j;
  csv << "\r\n";
  for (int s = 0; s < opt.count; ++s) {
    const CanonicalCoordinates coords = sampler.next_coordinates();
    if (i_k < opt.n) first_tail.push_back(static_cast<double>(coords.values[i_k]));
    const MomentVector m = moments_of(coords, opt.n);
    for (int j = 0; j < opt.n; ++j) {
      if (j) csv << ",";
      csv << format_double(static_cast<double>(m.values[j]));
    }
    csv << "\r\n";
  }
  const fs::path dir(common.out);
  fs::create_directories(dir);
  write_file(dir / "samples.csv", csv.str());

  json extra;
  extra["seed"] = common.seed;
  extra["acceptance_rates"] = sampler.diagnostics().acceptance_rate;
  extra["rhat"] = sampler.diagnostics().rhat;
  if (!potential && !first_tail.empty()) {
    // first tail coordinate is exactly Beta(n-i_k, n-i_k); report the KS fit
    const double a = opt.n - (i_k + 1) + 1;
    const double d =
        ks_statistic(first_tail, [&](double x) { return beta_cdf(a, a, x); });
    extra["ks_tail"] = {{"statistic", d},
                        {"pvalue", ks_pvalue(d, static_cast<double>(first_tail.size()))}};
  }
  write_metadata(dir, "sample", sample_config_json(common, opt), extra);
  return 0;
}

// ---- verify ----

int run_verify(const CommonOptions& common, const VerifyOptions& opt) {
  const Constraint constraint = parse_constraint_args(common.constraint);
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, bool pass, const json& detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all_pass = all_pass && pass;
  };

  const LimitResult limit = solve_uniform_limit(constraint);
  const int l = std::max(opt.l, constraint.max_index());

  // reference moments of the barycenter
  CanonicalCoordinates full = limit.minimizers.front().head;
  for (int j = full.size() + 1; j <= l; ++j) full.values.push_back(0.5L);
  const MomentVector m_star = canonical_to_moments(full);

  SamplerConfig cfg;
  cfg.n = opt.n;
  cfg.constraint = constraint;
  cfg.seed = common.seed;
  MomentSampler sampler = MomentSampler::uniform(cfg);

  std::vector<std::vector<double>> samples(l);
  for (int s = 0; s < opt.count; ++s) {
    const MomentVector m = sampler.next(l);
    for (int j = 0; j < l; ++j) samples[j].push_back(static_cast<double>(m.values[j]));
  }

  // LLN drift: sample means within 4 standard errors of the barycenter moments
  {
    bool pass = true;
    json detail = json::array();
    for (int j = 0; j < l; ++j) {
      if (constraint.constrains(j + 1)) continue;
      double mean = 0;
      for (double v : samples[j]) mean += v;
      mean /= samples[j].size();
      double var = 0;
      for (double v : samples[j]) var += (v - mean) * (v - mean);
      var /= (samples[j].size() - 1);
      const double se = std::sqrt(var / samples[j].size());
      const double drift = std::fabs(mean - static_cast<double>(m_star.values[j]));
      const bool ok = drift <= 4 * se + 4.0 / opt.n / opt.n;
      pass = pass && ok;
      detail.push_back({{"moment", j + 1}, {"drift", drift}, {"stderr", se}, {"pass", ok}});
    }
    record("lln-drift", pass, detail);
  }

  // CLT: empirical covariance of sqrt(n)(m - m*) vs Sigma_l (Frobenius)
  {
    const Mat sigma = clt_covariance_uniform(limit, l, constraint);
    Mat emp = Mat::Zero(l, l);
    std::vector<double> mean(l, 0);
    for (int j = 0; j < l; ++j) {
      for (double v : samples[j]) mean[j] += v;
      mean[j] /= samples[j].size();
    }
    for (std::size_t s = 0; s < samples[0].size(); ++s)
      for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b)
          emp(a, b) += (samples[a][s] - mean[a]) * (samples[b][s] - mean[b]);
    emp *= Real(opt.n) / Real(samples[0].size() - 1);
    const double rel =
        static_cast<double>((emp - sigma).norm() / std::max<Real>(sigma.norm(), 1e-30L));
    const bool ok = rel <= 0.10;
    record("clt-covariance", ok, {{"frobenius_rel_error", rel}});
  }

  // volume: exact product identity and the regime dichotomy
  {
    const Real v2 = volume_unconstrained(2);
    const bool exact_ok = std::fabs(v2 - Real(1) / 6) <= 1e-9L;
    const auto reg_as = volume_ratio(Constraint({{3, arcsine_moment(3)}}), opt.n);
    const auto reg_off = volume_ratio(Constraint({{3, 0.1L}}), opt.n);
    const bool ok = exact_ok && reg_as.regime == VolumeRegime::Polynomial &&
                    reg_off.regime == VolumeRegime::Exponential;
    record("volume", ok,
           {{"vol_m2", static_cast<double>(v2)},
            {"regime_arcsine", reg_as.regime == VolumeRegime::Polynomial ? "polynomial" : "exponential"},
            {"regime_offset", reg_off.regime == VolumeRegime::Polynomial ? "polynomial" : "exponential"}});
  }

  json out;
  out["schema"] = kSchema;
  out["checks"] = checks;
  out["pass"] = all_pass;
  const fs::path dir(common.out);
  fs::create_directories(dir);
  write_file(dir / "verify.json", out.dump(2) + "\n");
  json cfg_j = config_json(common);
  cfg_j["n"] = opt.n;
  cfg_j["count"] = opt.count;
  cfg_j["l"] = opt.l;
  write_metadata(dir, "verify", cfg_j, {});
  std::cout << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES, see verify.json\n");
  return all_pass ? 0 : kExitVerifyFailed;
}

// ---- spectral ----

int run_spectral(const CommonOptions& common, const std::string& coords_file, int size) {
  const Domain domain = domain_from_string(common.domain);
  std::ifstream f(coords_file);
  if (!f) throw Error("cannot read " + coords_file);
  std::vector<Real> values;
  std::string tok;
  while (f >> tok) {
    while (!tok.empty() && (tok.back() == ',' || tok.back() == ';')) tok.pop_back();
    if (!tok.empty()) values.push_back(std::stold(tok));
  }
  const CanonicalCoordinates coords{domain, values};
  const RecurrenceCoefficients rec = canonical_to_recurrence(coords);
  int n = static_cast<int>(std::min(rec.alphas.size(), rec.betas.size() + 1));
  if (size > 0) n = std::min(n, size);
  const Measure mu = spectral_measure(jacobi_matrix(rec, n));

  std::ostringstream csv;
  csv << "eigenvalue,weight\r\n";
  for (const Atom& a : mu.atoms)
    csv << format_double(static_cast<double>(a.location)) << ","
        << format_double(static_cast<double>(a.weight)) << "\r\n";
  const fs::path dir(common.out);
  fs::create_directories(dir);
  write_file(dir / "spectral.csv", csv.str());
  json cfg_j = config_json(common);
  cfg_j["coords"] = coords_file;
  cfg_j["size"] = size;
  write_metadata(dir, "spectral", cfg_j, {});
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--domain", common.domain, "interval01 | halfline | realline")
      ->capture_default_str();
  cmd->add_option("--constraint", common.constraint,
                  "fixed moments, e.g. --constraint m1=0.3 m3=0.2");
  cmd->add_option("--out", common.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", common.seed, "64-bit RNG seed")->capture_default_str();
  cmd->add_option("--potential", common.potential,
                  "potential expressions V1 V2 ... in the variable y");
  cmd->add_option("--preset", common.preset, "named potential preset (example-r, double-well)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momspace: constrained moment spaces - limits, sampling, verification"};
  app.set_config("--config", "", "configuration file (key=value, sections per subcommand)");
  app.require_subcommand(1);

  CommonOptions c_limit, c_sample, c_verify, c_spectral;
  LimitOptions l_opt;
  SampleOptions s_opt;
  VerifyOptions v_opt;
  std::string coords_file;
  int spectral_size = 0;

  CLI::App* limit = app.add_subcommand("limit", "compute the limiting measure(s)");
  add_common(limit, c_limit);
  limit->add_option("--covariance", l_opt.covariance_l, "emit Sigma_l for this l (0 = off)")
      ->capture_default_str();
  limit->add_option("--grid", l_opt.grid, "density grid points")->capture_default_str();

  CLI::App* sample = app.add_subcommand("sample", "draw random moment vectors");
  add_common(sample, c_sample);
  sample->add_option("--n", s_opt.n, "moment space dimension")->capture_default_str();
  sample->add_option("--count", s_opt.count, "number of samples")->capture_default_str();
  sample->add_option("--burn-in", s_opt.burn_in, "MCMC burn-in steps")->capture_default_str();
  sample->add_option("--thinning", s_opt.thinning, "MCMC thinning")->capture_default_str();
  sample->add_option("--chains", s_opt.chains, "number of chains")->capture_default_str();
  sample->add_option("--target-acceptance", s_opt.target_acceptance, "adaptation target")
      ->capture_default_str();
  sample->add_option("--from-metadata", s_opt.from_metadata,
                     "re-run the configuration stored in a metadata.json");

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo checks of the limit theorems");
  add_common(verify, c_verify);
  verify->add_option("--n", v_opt.n, "moment space dimension")->capture_default_str();
  verify->add_option("--count", v_opt.count, "number of samples")->capture_default_str();
  verify->add_option("--l", v_opt.l, "moments compared")->capture_default_str();

  CLI::App* spectral = app.add_subcommand("spectral", "spectral measure of a coordinate file");
  add_common(spectral, c_spectral);
  spectral->add_option("--coords", coords_file, "file of canonical coordinates")->required();
  spectral->add_option("--size", spectral_size, "Jacobi matrix truncation (0 = all)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (limit->parsed()) return run_limit(c_limit, l_opt);
    if (sample->parsed()) return run_sample(c_sample, s_opt);
    if (verify->parsed()) return run_verify(c_verify, v_opt);
    if (spectral->parsed()) return run_spectral(c_spectral, coords_file, spectral_size);
  } catch (const NotAdmissibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotAdmissible;
  } catch (const NonIntegrableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonIntegrable;
  } catch (const DegenerateMinimizerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerateMinimizer;
  } catch (const ChainNotConvergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitChainNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
