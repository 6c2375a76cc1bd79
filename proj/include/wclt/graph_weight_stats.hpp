#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "wclt/pattern_graph.hpp"
#include "wclt/weight_model.hpp"

namespace wclt {

/// One realization of weighted G(n,p). Every edge of K_n carries a single
/// uniform v: the edge is present iff v < p, and its weight is F^{-1}(v/p).
class HostSample {
 public:
  /// Uniforms drawn from the counter stream keyed (seed, replicate, edge).
  static HostSample draw(long n, double p, const WeightModel& model, std::uint64_t seed,
                         std::uint64_t replicate);
  static HostSample from_uniforms(long n, double p, const WeightModel& model,
                                  std::vector<double> uniforms);

  long n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  std::size_t edge_count() const noexcept { return uniforms_.size(); }
  const std::vector<double>& uniforms() const noexcept { return uniforms_; }
  bool present(std::size_t edge) const { return present_[edge] != 0; }
  /// Zero for absent edges.
  double weight(std::size_t edge) const { return weights_[edge]; }
  std::size_t present_edge_count() const;
  HostGraph present_graph() const;

 private:
  HostSample(long n, double p, const WeightModel& model, std::vector<double> uniforms);

  long n_;
  double p_;
  std::vector<double> uniforms_;
  std::vector<char> present_;
  std::vector<double> weights_;
};

/// Uniform for edge `edge` of replicate `replicate` (shared by every sampler).
double host_uniform(std::uint64_t seed, std::uint64_t replicate, std::size_t edge);

/// All copies of G inside K_n as K_n edge indices, with per-edge incidence.
/// Built independently of `enumerate_copies` (canonical injective maps
/// modulo automorphisms), so the two can cross-check each other.
class CopyIndex {
 public:
  CopyIndex(const PatternGraph& g, long n);

  long n() const noexcept { return n_; }
  int edges_per_copy() const noexcept { return edges_per_copy_; }
  std::size_t copy_count() const noexcept { return copy_count_; }
  std::span<const std::uint32_t> copy(std::size_t i) const {
    return {edges_.data() + i * static_cast<std::size_t>(edges_per_copy_),
            static_cast<std::size_t>(edges_per_copy_)};
  }
  /// Indices of the copies that contain the given K_n edge.
  const std::vector<std::uint32_t>& copies_containing(std::size_t edge) const {
    return incidence_[edge];
  }

 private:
  long n_;
  int edges_per_copy_;
  std::size_t copy_count_ = 0;
  std::vector<std::uint32_t> edges_;
  std::vector<std::vector<std::uint32_t>> incidence_;
};

/// W via enumeration of the copies present in the host graph.
double combined_weight_enumerated(const PatternGraph& g, const HostSample& host);

/// W = sum_e weight(e) * (number of present copies containing e).
double combined_weight_edge_centric(const CopyIndex& index, const HostSample& host);

/// W = sum over present copies of the copy's weight sum (simulation kernel).
double combined_weight_copy_sum(const CopyIndex& index, const HostSample& host);

/// Computes W both by copy enumeration and edge-centrically; throws
/// std::logic_error if the two disagree beyond 1e-9 relative.
double combined_weight(const PatternGraph& g, const HostSample& host);

double exact_mean(const PatternGraph& g, long n, double p, const WeightModel& model);

/// Ordered pairs of copies of G in K_n keyed by shared edge count h >= 1.
using PairCensus = std::map<int, std::uint64_t>;

inline constexpr double kCensusPairCap = 1e8;

PairCensus intersection_pair_census(const PatternGraph& g, long n);
PairCensus intersection_pair_census(const CopyIndex& index);
/// Brute-force reference over all ordered pairs (tests only scale).
PairCensus intersection_pair_census_serial(const CopyIndex& index);

double exact_variance(const PatternGraph& g, long n, double p, const WeightModel& model);
double variance_from_census(const PairCensus& census, int pattern_edges, double p,
                            const WeightModel& model);

/// (var + (1-p) m1^2) * max_variance_term(G, n, p).
double asymptotic_variance(const PatternGraph& g, long n, double p, const WeightModel& model);

// ---------------------------------------------------------------------------
// Monte Carlo replicates

/// Raw W for replicates first..first+count-1. OpenMP over replicates.
std::vector<double> simulate_raw(const CopyIndex& index, double p, const WeightModel& model,
                                 std::uint64_t seed, std::uint64_t count, std::uint64_t first = 0);
/// Single-threaded reference; bit-identical to simulate_raw.
std::vector<double> simulate_raw_serial(const CopyIndex& index, double p, const WeightModel& model,
                                        std::uint64_t seed, std::uint64_t count,
                                        std::uint64_t first = 0);

struct StatisticSample {
  std::uint64_t replicate = 0;
  double raw_w = 0.0;
  double normalized = 0.0;
};

struct SampleSet {
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  PairCensus census;
  std::vector<StatisticSample> samples;
};

/// Throws DegenerateError when exact_variance <= 1e-12 * exact_mean^2.
SampleSet normalized_samples(const PatternGraph& g, long n, double p, const WeightModel& model,
                             std::uint64_t reps, std::uint64_t seed);

}  // namespace wclt
