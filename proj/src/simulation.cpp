#include "hgmom/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace hgmom {
namespace {

Int count_subsets(int N, int q) { return binomial(N, q); }

void validate_edge_probability(int N, int q, const Rat& p) {
  if (N < q) throw std::invalid_argument("need at least q vertices");
  if (p <= 0) throw std::invalid_argument("sparsity p must be positive");
  if (p > Rat(rat_pow(Rat(N), q - 1)))
    throw std::invalid_argument("edge probability p/N^(q-1) exceeds 1");
}

}  // namespace

long long sample_binomial_count(double trials, double prob, Rng& rng) {
  if (prob <= 0.0) return 0;
  if (prob >= 1.0) return static_cast<long long>(trials);
  const double u = rng.next_unit();
  double pmf = std::exp(trials * std::log1p(-prob));
  double cdf = pmf;
  const double odds = prob / (1.0 - prob);
  long long j = 0;
  while (u > cdf && j < static_cast<long long>(trials)) {
    pmf *= (trials - static_cast<double>(j)) / (static_cast<double>(j) + 1.0) * odds;
    ++j;
    cdf += pmf;
  }
  return j;
}

SampledHypergraph sample_hypergraph_bernoulli(int N, int q, const Rat& p,
                                              const WeightDistribution& dist,
                                              Rng& rng) {
  validate_edge_probability(N, q, p);
  const double theta = to_double(p / Rat(rat_pow(Rat(N), q - 1)));
  SampledHypergraph h;
  h.N = N;
  h.q = q;
  // Lexicographic Bernoulli sweep over every q-subset.
  std::vector<int> comb(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (rng.next_unit() < theta) {
      h.edges.push_back(comb);
      h.weights.push_back(dist.sample(rng));
    }
    int i = q - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == N - q + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < q; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return h;
}

SampledHypergraph sample_hypergraph_binomial(int N, int q, const Rat& p,
                                             const WeightDistribution& dist,
                                             Rng& rng) {
  validate_edge_probability(N, q, p);
  const double theta = to_double(p / Rat(rat_pow(Rat(N), q - 1)));
  SampledHypergraph h;
  h.N = N;
  h.q = q;
  const Int subsets = count_subsets(N, q);
  const long long count =
      sample_binomial_count(subsets.convert_to<double>(), theta, rng);
  std::set<std::vector<int>> picked;
  std::vector<int> subset(static_cast<std::size_t>(q));
  while (static_cast<long long>(picked.size()) < count) {
    for (int i = 0; i < q; ++i) {
      bool fresh;
      do {
        subset[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(N)));
        fresh = true;
        for (int j = 0; j < i; ++j)
          if (subset[static_cast<std::size_t>(j)] == subset[static_cast<std::size_t>(i)]) fresh = false;
      } while (!fresh);
    }
    std::sort(subset.begin(), subset.end());
    picked.insert(subset);
  }
  for (const auto& s : picked) {
    h.edges.push_back(s);
    h.weights.push_back(dist.sample(rng));
  }
  return h;
}

SampledHypergraph sample_hypergraph(int N, int q, const Rat& p,
                                    const WeightDistribution& dist, Rng& rng) {
  validate_edge_probability(N, q, p);
  if (count_subsets(N, q) <= kBernoulliSweepLimit)
    return sample_hypergraph_bernoulli(N, q, p, dist, rng);
  return sample_hypergraph_binomial(N, q, p, dist, rng);
}

Eigen::MatrixXd assemble_adjacency(const SampledHypergraph& h) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(h.N, h.N);
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const auto& verts = h.edges[e];
    const double w = h.weights[e];
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        A(verts[i], verts[j]) += w;
        A(verts[j], verts[i]) += w;
      }
    }
  }
  return A;
}

std::vector<double> trace_power_moments(const Eigen::MatrixXd& A, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  const double n = static_cast<double>(A.rows());
  std::vector<double> moments;
  moments.reserve(static_cast<std::size_t>(k_max));
  Eigen::MatrixXd power = A;
  moments.push_back(power.trace() / n);
  for (int k = 2; k <= k_max; ++k) {
    power = power * A;
    moments.push_back(power.trace() / n);
  }
  return moments;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed to converge");
  const auto& vals = solver.eigenvalues();
  return std::vector<double>(vals.data(), vals.data() + vals.size());
}

std::vector<double> eigenvalue_moments(const std::vector<double>& eigenvalues,
                                       int k_max) {
  std::vector<double> moments(static_cast<std::size_t>(k_max), 0.0);
  for (double lambda : eigenvalues) {
    double power = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      power *= lambda;
      moments[static_cast<std::size_t>(k - 1)] += power;
    }
  }
  const double n = static_cast<double>(eigenvalues.size());
  for (auto& m : moments) m /= n;
  return moments;
}

std::vector<std::pair<double, double>> histogram_from_values(
    const std::vector<double>& eigenvalues, const HistogramSpec& spec) {
  if (spec.bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (eigenvalues.empty()) throw std::invalid_argument("histogram of nothing");
  double lo = spec.lo;
  double hi = spec.hi;
  if (!spec.has_range) {
    lo = *std::min_element(eigenvalues.begin(), eigenvalues.end());
    hi = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  }
  if (lo >= hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / spec.bins;
  std::vector<double> mass(static_cast<std::size_t>(spec.bins), 0.0);
  const double unit = 1.0 / static_cast<double>(eigenvalues.size());
  for (double lambda : eigenvalues) {
    if (lambda < lo || lambda > hi) continue;
    int bin = static_cast<int>((lambda - lo) / width);
    bin = std::clamp(bin, 0, spec.bins - 1);
    mass[static_cast<std::size_t>(bin)] += unit;
  }
  std::vector<std::pair<double, double>> result;
  result.reserve(static_cast<std::size_t>(spec.bins));
  for (int b = 0; b < spec.bins; ++b)
    result.emplace_back(lo + (b + 0.5) * width, mass[static_cast<std::size_t>(b)]);
  return result;
}

std::vector<std::pair<double, double>> eigen_histogram(const Eigen::MatrixXd& A,
                                                       const HistogramSpec& spec) {
  return histogram_from_values(symmetric_eigenvalues(A), spec);
}

SimRun run_trials(const SimConfig& config) {
  validate_edge_probability(config.N, config.q, config.p);
  if (config.trials < 1) throw std::invalid_argument("need at least one trial");
  if (config.k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (config.workers < 1) throw std::invalid_argument("need at least one worker");
  if (!config.dist.can_sample())
    throw std::invalid_argument("weight distribution does not support sampling");

  SimRun run;
  run.config = config;
  run.trial_seeds.resize(static_cast<std::size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t)
    run.trial_seeds[static_cast<std::size_t>(t)] =
        derive_seed(config.seed, static_cast<std::uint64_t>(t));
  run.trial_moments.assign(static_cast<std::size_t>(config.trials), {});
  std::vector<std::vector<double>> trial_eigenvalues;
  if (config.with_eigenvalues)
    trial_eigenvalues.assign(static_cast<std::size_t>(config.trials), {});

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::string failure;
  auto worker = [&]() {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= config.trials) break;
      try {
        Rng rng(run.trial_seeds[static_cast<std::size_t>(t)]);
        const auto h =
            sample_hypergraph(config.N, config.q, config.p, config.dist, rng);
        const auto A = assemble_adjacency(h);
        const auto traced = trace_power_moments(A, config.k_max);
        if (config.with_eigenvalues) {
          auto eigenvalues = symmetric_eigenvalues(A);
          const auto spectral = eigenvalue_moments(eigenvalues, config.k_max);
          for (int k = 0; k < config.k_max; ++k) {
            const double a = traced[static_cast<std::size_t>(k)];
            const double b = spectral[static_cast<std::size_t>(k)];
            if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
              throw std::runtime_error("trace and eigenvalue moment paths disagree");
          }
          trial_eigenvalues[static_cast<std::size_t>(t)] = std::move(eigenvalues);
        }
        run.trial_moments[static_cast<std::size_t>(t)] = traced;
      } catch (const std::exception& err) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure.empty())
          failure = std::string(err.what()) + " (trial " + std::to_string(t) +
                    ", seed " +
                    std::to_string(run.trial_seeds[static_cast<std::size_t>(t)]) + ")";
      }
    }
  };
  const int thread_count = std::min(config.workers, config.trials);
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!failure.empty()) throw std::runtime_error(failure);
  if (config.with_eigenvalues) {
    run.pooled_eigenvalues.reserve(static_cast<std::size_t>(config.trials) *
                                   static_cast<std::size_t>(config.N));
    for (const auto& vals : trial_eigenvalues)
      run.pooled_eigenvalues.insert(run.pooled_eigenvalues.end(), vals.begin(),
                                    vals.end());
  }

  const int T = config.trials;
  const int K = config.k_max;
  run.mean.assign(static_cast<std::size_t>(K), 0.0);
  run.se.assign(static_cast<std::size_t>(K), 0.0);
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < K; ++k)
      run.mean[static_cast<std::size_t>(k)] +=
          run.trial_moments[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  for (auto& m : run.mean) m /= static_cast<double>(T);

  if (T >= 2) {
    run.has_correlators = true;
    run.correlators.assign(static_cast<std::size_t>(K),
                           std::vector<double>(static_cast<std::size_t>(K), 0.0));
    for (int t = 0; t < T; ++t) {
      const auto& row = run.trial_moments[static_cast<std::size_t>(t)];
      for (int a = 0; a < K; ++a) {
        const double da = row[static_cast<std::size_t>(a)] - run.mean[static_cast<std::size_t>(a)];
        for (int b = a; b < K; ++b) {
          const double db = row[static_cast<std::size_t>(b)] - run.mean[static_cast<std::size_t>(b)];
          run.correlators[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += da * db;
        }
      }
    }
    for (int a = 0; a < K; ++a)
      for (int b = a; b < K; ++b) {
        run.correlators[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] /=
            static_cast<double>(T - 1);
        run.correlators[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
            run.correlators[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    for (int k = 0; k < K; ++k)
      run.se[static_cast<std::size_t>(k)] =
          std::sqrt(run.correlators[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] /
                    static_cast<double>(T));
  }
  return run;
}

namespace {

double covariance_of(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& indices, int a, int b) {
  const double T = static_cast<double>(indices.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (int t : indices) {
    mean_a += rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)];
    mean_b += rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
  }
  mean_a /= T;
  mean_b /= T;
  double acc = 0.0;
  for (int t : indices)
    acc += (rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)] - mean_a) *
           (rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)] - mean_b);
  return acc / (T - 1.0);
}

std::pair<double, double> least_squares(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

}  // namespace

DecayStudy correlator_decay_study(const SimConfig& base,
                                  const std::vector<int>& N_grid, int k, int m,
                                  int bootstrap_rounds) {
  if (N_grid.size() < 4)
    throw std::invalid_argument("decay study needs at least four grid points");
  if (k < 1 || m < 1) throw std::invalid_argument("correlator orders start at 1");
  if (base.trials < 2)
    throw std::invalid_argument("correlators need at least two trials");

  DecayStudy study;
  study.k = k;
  study.m = m;

  std::vector<std::vector<std::vector<double>>> per_point_rows;
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    SimConfig cfg = base;
    cfg.N = N_grid[i];
    cfg.k_max = std::max({base.k_max, k, m});
    cfg.seed = derive_seed(base.seed, 0x4E000000ull + i);
    SimRun run = run_trials(cfg);
    DecayPoint point;
    point.N = cfg.N;
    point.correlator = run.correlators[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)];
    study.points.push_back(point);
    per_point_rows.push_back(std::move(run.trial_moments));
  }

  // Bootstrap over trials, independently per grid point.
  Rng boot(derive_seed(base.seed, 0xB007B007ull));
  std::vector<double> slopes;
  std::vector<std::vector<double>> boot_covs(N_grid.size());
  std::vector<double> xs;
  for (int n : N_grid) xs.push_back(std::log(static_cast<double>(n)));
  for (int round = 0; round < bootstrap_rounds; ++round) {
    bool positive = true;
    std::vector<double> ys(N_grid.size());
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
      const int T = static_cast<int>(per_point_rows[i].size());
      std::vector<int> indices(static_cast<std::size_t>(T));
      for (auto& idx : indices)
        idx = static_cast<int>(boot.next_below(static_cast<std::uint64_t>(T)));
      const double cov = covariance_of(per_point_rows[i], indices, k - 1, m - 1);
      boot_covs[i].push_back(cov);
      if (cov <= 0.0) positive = false;
      ys[i] = cov > 0.0 ? std::log(cov) : 0.0;
    }
    if (positive) slopes.push_back(least_squares(xs, ys).first);
  }
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    double mean = 0.0;
    for (double c : boot_covs[i]) mean += c;
    mean /= static_cast<double>(boot_covs[i].size());
    double var = 0.0;
    for (double c : boot_covs[i]) var += (c - mean) * (c - mean);
    var /= static_cast<double>(boot_covs[i].size() - 1);
    study.points[i].se_boot = std::sqrt(var);
  }

  for (const auto& point : study.points)
    if (point.correlator <= 0.0 || std::abs(point.correlator) <= 2.0 * point.se_boot)
      study.degenerate = true;
  if (slopes.size() < static_cast<std::size_t>(std::max(2, bootstrap_rounds / 2)))
    study.degenerate = true;

  if (!study.degenerate) {
    std::vector<double> ys;
    for (const auto& point : study.points) ys.push_back(std::log(point.correlator));
    const auto [slope, intercept] = least_squares(xs, ys);
    study.slope = slope;
    study.intercept = intercept;
    std::sort(slopes.begin(), slopes.end());
    const auto pick = [&](double prob) {
      const auto idx = static_cast<std::size_t>(
          std::llround(prob * static_cast<double>(slopes.size() - 1)));
      return slopes[idx];
    };
    study.slope_lo = pick(0.025);
    study.slope_hi = pick(0.975);
  }
  return study;
}

}  // namespace hgmom
