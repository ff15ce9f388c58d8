#pragma once

#include "hgmom/model.hpp"
#include "hgmom/rng.hpp"
#include "hgmom/weights.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hgmom {

struct SampledHypergraph {
  int N = 0;
  int q = 2;
  std::vector<std::vector<int>> edges;  // ascending 0-based vertex subsets
  std::vector<double> weights;          // parallel to edges
};

/// Draws the edge set of the dilute ensemble: every q-subset of the N
/// vertices is present independently with probability p / N^(q-1).  Small
/// subset spaces are swept with per-subset Bernoulli draws; larger ones use
/// the equivalent binomial-count-then-uniform-distinct-subsets sampler.
/// Weights are i.i.d. draws from `dist`, assigned in lexicographic edge
/// order under both samplers.
SampledHypergraph sample_hypergraph(int N, int q, const Rat& p,
                                    const WeightDistribution& dist, Rng& rng);

// The two sampler paths, individually addressable (they realize the same
// product law; tests compare them statistically).
SampledHypergraph sample_hypergraph_bernoulli(int N, int q, const Rat& p,
                                              const WeightDistribution& dist,
                                              Rng& rng);
SampledHypergraph sample_hypergraph_binomial(int N, int q, const Rat& p,
                                             const WeightDistribution& dist,
                                             Rng& rng);

// Number of q-subsets at or below which the Bernoulli sweep is used.
inline constexpr long long kBernoulliSweepLimit = 1'000'000;

// Exact binomial draw by CDF inversion; used by the large-N edge sampler.
long long sample_binomial_count(double trials, double prob, Rng& rng);

/// Symmetric adjacency matrix with zero diagonal; overlapping hyperedges
/// add their weights on shared vertex pairs.
Eigen::MatrixXd assemble_adjacency(const SampledHypergraph& h);

/// Tr(A^k) / N for k = 1..k_max via iterated multiplication.
std::vector<double> trace_power_moments(const Eigen::MatrixXd& A, int k_max);

/// Eigenvalues in ascending order; throws std::runtime_error if the
/// symmetric eigensolver fails to converge.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& A);

/// Same normalized trace powers computed from an eigenvalue list.
std::vector<double> eigenvalue_moments(const std::vector<double>& eigenvalues,
                                       int k_max);

struct HistogramSpec {
  int bins = 60;
  bool has_range = false;
  double lo = 0.0;
  double hi = 0.0;
};

/// (bin center, mass) pairs over the given values; mass sums to 1 when the
/// range covers them all.
std::vector<std::pair<double, double>> histogram_from_values(
    const std::vector<double>& values, const HistogramSpec& spec);

/// (bin center, eigenvalue mass) pairs; mass sums to 1 when the range
/// covers the spectrum.
std::vector<std::pair<double, double>> eigen_histogram(const Eigen::MatrixXd& A,
                                                       const HistogramSpec& spec);

struct SimConfig {
  int N = 200;
  int q = 3;
  Rat p = 1;
  WeightDistribution dist = WeightDistribution::constant(1);
  int trials = 200;
  int k_max = 6;
  std::uint64_t seed = 1;
  int workers = 1;
  // Also run the eigendecomposition path per trial: pools eigenvalues for
  // histograms and cross-checks the two moment paths to 1e-9 relative.
  bool with_eigenvalues = false;
};

struct SimRun {
  SimConfig config;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::vector<double>> trial_moments;  // [trial][k-1]
  std::vector<double> mean;                        // per k
  std::vector<double> se;                          // standard error per k
  bool has_correlators = false;
  std::vector<std::vector<double>> correlators;    // sample covariance, k x k
  std::vector<double> pooled_eigenvalues;          // trial order, when requested
};

/// Runs independent trials (optionally across worker threads) and reduces
/// them in trial order; the result is bit-identical for any worker count.
SimRun run_trials(const SimConfig& config);

struct DecayPoint {
  int N = 0;
  double correlator = 0.0;
  double se_boot = 0.0;
};

struct DecayStudy {
  int k = 2;
  int m = 2;
  std::vector<DecayPoint> points;
  bool degenerate = false;  // some point statistically indistinguishable from 0
  double slope = 0.0;
  double intercept = 0.0;
  double slope_lo = 0.0;  // bootstrap 95% band
  double slope_hi = 0.0;
};

/// Correlator estimates across an N grid plus a log-log slope fit with a
/// bootstrap confidence interval.  Requires at least four grid points.
DecayStudy correlator_decay_study(const SimConfig& base,
                                  const std::vector<int>& N_grid, int k, int m,
                                  int bootstrap_rounds = 200);

}  // namespace hgmom
