#include "wclt/graph_weight_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wclt/errors.hpp"
#include "wclt/rng.hpp"

namespace wclt {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("retention probability p must lie in (0,1)");
}

void check_host_n(long n) {
  if (n < 2 || n > 200) throw DomainError("host size n must lie in [2, 200]");
}

}  // namespace

double host_uniform(std::uint64_t seed, std::uint64_t replicate, std::size_t edge) {
  return counter_uniform(mix64(seed ^ kHostStreamTag), replicate, edge);
}

HostSample::HostSample(long n, double p, const WeightModel& model, std::vector<double> uniforms)
    : n_(n), p_(p), uniforms_(std::move(uniforms)) {
  check_host_n(n);
  check_p(p);
  if (uniforms_.size() != complete_edge_count(n)) throw DomainError("need one uniform per edge of K_n");
  present_.resize(uniforms_.size());
  weights_.resize(uniforms_.size());
  for (std::size_t e = 0; e < uniforms_.size(); ++e) {
    const double v = uniforms_[e];
    if (!(v > 0.0 && v < 1.0)) throw DomainError("edge uniforms must lie in (0,1)");
    present_[e] = v < p ? 1 : 0;
    weights_[e] = present_[e] ? quantile(model, v / p) : 0.0;
  }
}

HostSample HostSample::draw(long n, double p, const WeightModel& model, std::uint64_t seed,
                            std::uint64_t replicate) {
  check_host_n(n);
  std::vector<double> u(complete_edge_count(n));
  for (std::size_t e = 0; e < u.size(); ++e) u[e] = host_uniform(seed, replicate, e);
  return HostSample(n, p, model, std::move(u));
}

HostSample HostSample::from_uniforms(long n, double p, const WeightModel& model,
                                     std::vector<double> uniforms) {
  return HostSample(n, p, model, std::move(uniforms));
}

std::size_t HostSample::present_edge_count() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), 1));
}

HostGraph HostSample::present_graph() const {
  if (n_ > 64) throw ResourceError("host graph view limited to 64 vertices");
  HostGraph h(static_cast<int>(n_));
  for (std::size_t e = 0; e < present_.size(); ++e) {
    if (present_[e]) {
      const Edge ed = edge_from_index(e, static_cast<int>(n_));
      h.add_edge(ed.first, ed.second);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> automorphisms(const PatternGraph& g) {
  std::vector<int> perm(static_cast<std::size_t>(g.num_vertices()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (const Edge& e : g.edges()) {
      if (!g.has_edge(perm[static_cast<std::size_t>(e.first)], perm[static_cast<std::size_t>(e.second)])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

CopyIndex::CopyIndex(const PatternGraph& g, long n) : n_(n), edges_per_copy_(g.num_edges()) {
  if (g.has_isolated_vertices()) throw DomainError("copy index needs a pattern without isolated vertices");
  if (g.num_vertices() > 10) throw ResourceError("copy index limited to patterns with at most 10 vertices");
  if (n < 2) throw DomainError("host size must be at least 2");
  const std::uint64_t expected = copies_in_complete(g, n);
  if (static_cast<double>(expected) * edges_per_copy_ > 5e7) {
    throw ResourceError("copy index too large for desk scale");
  }
  const auto autos = automorphisms(g);
  const int v = g.num_vertices();
  std::vector<int> image(static_cast<std::size_t>(v), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  edges_.reserve(expected * static_cast<std::size_t>(edges_per_copy_));
  std::vector<std::uint32_t> scratch(static_cast<std::size_t>(edges_per_copy_));

  // Keep a map only if it is the lexicographically smallest in its
  // automorphism orbit; each copy then appears exactly once.
  auto canonical = [&]() {
    for (const auto& sigma : autos) {
      for (int i = 0; i < v; ++i) {
        const int other = image[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];
        const int mine = image[static_cast<std::size_t>(i)];
        if (other < mine) return false;
        if (other > mine) break;
      }
    }
    return true;
  };

  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == v) {
      if (!canonical()) return;
      for (int i = 0; i < edges_per_copy_; ++i) {
        const Edge& e = g.edges()[static_cast<std::size_t>(i)];
        scratch[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(
            edge_index(image[static_cast<std::size_t>(e.first)], image[static_cast<std::size_t>(e.second)],
                       static_cast<int>(n)));
      }
      std::sort(scratch.begin(), scratch.end());
      edges_.insert(edges_.end(), scratch.begin(), scratch.end());
      ++copy_count_;
      return;
    }
    for (long x = 0; x < n; ++x) {
      if (used[static_cast<std::size_t>(x)]) continue;
      used[static_cast<std::size_t>(x)] = true;
      image[static_cast<std::size_t>(depth)] = static_cast<int>(x);
      self(self, depth + 1);
      used[static_cast<std::size_t>(x)] = false;
    }
  };
  recurse(recurse, 0);
  if (copy_count_ != expected) throw std::logic_error("copy index count disagrees with copies_in_complete");

  incidence_.assign(complete_edge_count(n), {});
  for (std::size_t c = 0; c < copy_count_; ++c) {
    for (std::uint32_t e : copy(c)) incidence_[e].push_back(static_cast<std::uint32_t>(c));
  }
}

// ---------------------------------------------------------------------------

double combined_weight_enumerated(const PatternGraph& g, const HostSample& host) {
  const int n = static_cast<int>(host.n());
  double total = 0.0;
  for (const Copy& copy : enumerate_copies(g, host.present_graph())) {
    for (const Edge& e : copy) total += host.weight(edge_index(e.first, e.second, n));
  }
  return total;
}

double combined_weight_edge_centric(const CopyIndex& index, const HostSample& host) {
  if (index.n() != host.n()) throw DomainError("copy index and host sizes differ");
  double total = 0.0;
  for (std::size_t e = 0; e < host.edge_count(); ++e) {
    if (!host.present(e)) continue;
    std::uint64_t multiplicity = 0;
    for (std::uint32_t c : index.copies_containing(e)) {
      const auto edges = index.copy(c);
      if (std::all_of(edges.begin(), edges.end(), [&](std::uint32_t f) { return host.present(f); })) {
        ++multiplicity;
      }
    }
    total += host.weight(e) * static_cast<double>(multiplicity);
  }
  return total;
}

double combined_weight_copy_sum(const CopyIndex& index, const HostSample& host) {
  if (index.n() != host.n()) throw DomainError("copy index and host sizes differ");
  double total = 0.0;
  for (std::size_t c = 0; c < index.copy_count(); ++c) {
    double copy_weight = 0.0;
    bool all_present = true;
    for (std::uint32_t e : index.copy(c)) {
      if (!host.present(e)) {
        all_present = false;
        break;
      }
      copy_weight += host.weight(e);
    }
    if (all_present) total += copy_weight;
  }
  return total;
}

double combined_weight(const PatternGraph& g, const HostSample& host) {
  const double by_copies = combined_weight_enumerated(g, host);
  const double by_edges = combined_weight_edge_centric(CopyIndex(g, host.n()), host);
  if (std::abs(by_copies - by_edges) > 1e-9 * std::max(1.0, std::abs(by_copies))) {
    throw std::logic_error("combined weight routes disagree");
  }
  return by_copies;
}

double exact_mean(const PatternGraph& g, long n, double p, const WeightModel& model) {
  if (n < g.num_vertices()) throw DomainError("n must be at least v_G");
  check_p(p);
  const int e = g.num_edges();
  return static_cast<double>(copies_in_complete(g, n)) * e * std::pow(p, e) * moments(model).mean;
}

// ---------------------------------------------------------------------------

namespace {

void check_pair_cap(const CopyIndex& index) {
  const double pairs = static_cast<double>(index.copy_count()) * static_cast<double>(index.copy_count());
  if (pairs > kCensusPairCap) {
    throw ResourceError("pair census needs " + std::to_string(pairs) + " pairs, cap is 1e8");
  }
}

}  // namespace

PairCensus intersection_pair_census(const CopyIndex& index) {
  check_pair_cap(index);
  const std::size_t copies = index.copy_count();
  const int e = index.edges_per_copy();
  std::vector<std::uint64_t> histogram(static_cast<std::size_t>(e) + 1, 0);

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(static_cast<std::size_t>(e) + 1, 0);
    std::vector<int> shared(copies, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(static)
    for (std::size_t a = 0; a < copies; ++a) {
      for (std::uint32_t edge : index.copy(a)) {
        for (std::uint32_t b : index.copies_containing(edge)) {
          if (shared[b]++ == 0) touched.push_back(b);
        }
      }
      for (std::uint32_t b : touched) {
        ++local[static_cast<std::size_t>(shared[b])];
        shared[b] = 0;
      }
      touched.clear();
    }
#pragma omp critical
    for (std::size_t h = 0; h < local.size(); ++h) histogram[h] += local[h];
  }

  PairCensus census;
  for (int h = 1; h <= e; ++h) {
    if (histogram[static_cast<std::size_t>(h)] > 0) census[h] = histogram[static_cast<std::size_t>(h)];
  }
  return census;
}

PairCensus intersection_pair_census_serial(const CopyIndex& index) {
  check_pair_cap(index);
  PairCensus census;
  std::vector<std::uint32_t> common;
  for (std::size_t a = 0; a < index.copy_count(); ++a) {
    for (std::size_t b = 0; b < index.copy_count(); ++b) {
      const auto x = index.copy(a), y = index.copy(b);
      common.clear();
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
      if (!common.empty()) ++census[static_cast<int>(common.size())];
    }
  }
  return census;
}

PairCensus intersection_pair_census(const PatternGraph& g, long n) {
  const double copies = static_cast<double>(copies_in_complete(g, n));
  if (copies * copies > kCensusPairCap) throw ResourceError("pair census exceeds the 1e8 pair cap");
  return intersection_pair_census(CopyIndex(g, n));
}

double variance_from_census(const PairCensus& census, int pattern_edges, double p,
                            const WeightModel& model) {
  const Moments mo = moments(model);
  const int e = pattern_edges;
  double total = 0.0;
  for (const auto& [h, pairs] : census) {
    const double cov = std::pow(p, 2 * e - h) *
                       (h * mo.variance + static_cast<double>(e) * e * (1.0 - std::pow(p, h)) * mo.mean * mo.mean);
    total += static_cast<double>(pairs) * cov;
  }
  return total;
}

double exact_variance(const PatternGraph& g, long n, double p, const WeightModel& model) {
  check_p(p);
  return variance_from_census(intersection_pair_census(g, n), g.num_edges(), p, model);
}

double asymptotic_variance(const PatternGraph& g, long n, double p, const WeightModel& model) {
  const Moments mo = moments(model);
  return (mo.variance + (1.0 - p) * mo.mean * mo.mean) * max_variance_term(g, n, p);
}

// ---------------------------------------------------------------------------

namespace {

double replicate_weight(const CopyIndex& index, double p, const WeightModel& model, std::uint64_t seed,
                        std::uint64_t replicate, std::vector<double>& weights) {
  const std::size_t edges = weights.size();
  for (std::size_t e = 0; e < edges; ++e) {
    const double v = host_uniform(seed, replicate, e);
    weights[e] = v < p ? quantile(model, v / p) : -1.0;  // -1 marks an absent edge
  }
  double total = 0.0;
  for (std::size_t c = 0; c < index.copy_count(); ++c) {
    double copy_weight = 0.0;
    bool all_present = true;
    for (std::uint32_t e : index.copy(c)) {
      if (weights[e] < 0.0) {
        all_present = false;
        break;
      }
      copy_weight += weights[e];
    }
    if (all_present) total += copy_weight;
  }
  return total;
}

void check_simulation(double p) { check_p(p); }

}  // namespace

std::vector<double> simulate_raw(const CopyIndex& index, double p, const WeightModel& model,
                                 std::uint64_t seed, std::uint64_t count, std::uint64_t first) {
  check_simulation(p);
  std::vector<double> out(count);
  const std::size_t edges = complete_edge_count(index.n());
  const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    std::vector<double> weights(edges);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < total; ++r) {
      out[static_cast<std::size_t>(r)] =
          replicate_weight(index, p, model, seed, first + static_cast<std::uint64_t>(r), weights);
    }
  }
  return out;
}

std::vector<double> simulate_raw_serial(const CopyIndex& index, double p, const WeightModel& model,
                                        std::uint64_t seed, std::uint64_t count, std::uint64_t first) {
  check_simulation(p);
  std::vector<double> out(count);
  std::vector<double> weights(complete_edge_count(index.n()));
  for (std::uint64_t r = 0; r < count; ++r) out[r] = replicate_weight(index, p, model, seed, first + r, weights);
  return out;
}

SampleSet normalized_samples(const PatternGraph& g, long n, double p, const WeightModel& model,
                             std::uint64_t reps, std::uint64_t seed) {
  check_host_n(n);
  check_p(p);
  const CopyIndex index(g, n);
  SampleSet set;
  set.exact_mean = exact_mean(g, n, p, model);
  set.census = intersection_pair_census(index);
  set.exact_variance = variance_from_census(set.census, g.num_edges(), p, model);
  if (!(set.exact_variance > 1e-12 * set.exact_mean * set.exact_mean)) {
    throw DegenerateError("exact variance of W is numerically zero; normalization undefined");
  }
  const auto raw = simulate_raw(index, p, model, seed, reps);
  const double sd = std::sqrt(set.exact_variance);
  set.samples.resize(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    set.samples[r] = {r, raw[r], (raw[r] - set.exact_mean) / sd};
  }
  return set;
}

}  // namespace wclt
