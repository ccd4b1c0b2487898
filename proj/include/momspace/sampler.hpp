#ifndef MOMSPACE_SAMPLER_HPP
#define MOMSPACE_SAMPLER_HPP

#include <memory>
#include <optional>
#include <vector>

#include "momspace/canonical.hpp"
#include "momspace/limits.hpp"
#include "momspace/rng.hpp"

namespace momspace {

struct McmcOptions {
  int burn_in = 500;
  int thinning = 5;
  double target_acceptance = 0.234;
  int chains = 4;
  double rhat_threshold = 1.05;
};

struct SamplerConfig {
  int n = 1;
  Constraint constraint;
  Domain domain = Domain::Interval01;
  std::optional<PotentialSpec> potential;
  std::uint64_t seed = 1;
  McmcOptions mcmc;
};

struct SamplerDiagnostics {
  std::vector<double> acceptance_rate;  // per chain (empty head block -> 1)
  std::vector<double> rhat;             // per head coordinate
  std::vector<double> step_size;        // frozen after burn-in, per chain
};

// Draws moment vectors from the uniform distribution on M_n^C([0,1]) or from
// P^C_{n,E,V}. Tail coordinates (j > i_k) are independent exact draws — Beta
// in the uniform case, numeric inverse-CDF tables otherwise. The head block
// runs `chains` adaptive random-walk Metropolis chains over the unconstrained
// moments; adaptation freezes after burn-in and a split-Rhat check guards
// convergence. Streams are bit-reproducible functions of (config, seed).
class MomentSampler {
 public:
  // Uniform distribution on the constrained moment space (Interval01).
  static MomentSampler uniform(const SamplerConfig& config);
  // General distribution: config.potential required, growth check enforced.
  static MomentSampler general(const SamplerConfig& config);

  // Full canonical coordinate vector y_1..y_n of the next sample.
  CanonicalCoordinates next_coordinates();
  // Moments m_1..m_l of the next sample (l = 0 means l = n).
  MomentVector next(int l = 0);

  const SamplerDiagnostics& diagnostics() const { return diag_; }
  const SamplerConfig& config() const { return config_; }

  ~MomentSampler();
  MomentSampler(MomentSampler&&) noexcept;
  MomentSampler& operator=(MomentSampler&&) noexcept;

 private:
  MomentSampler(const SamplerConfig& config, bool uniform_mode);

  struct Impl;
  std::unique_ptr<Impl> impl_;
  SamplerConfig config_;
  SamplerDiagnostics diag_;
};

// Moments of the first l coordinates (helper shared with the CLI).
MomentVector moments_of(const CanonicalCoordinates& coords, int l);

}  // namespace momspace

#endif
