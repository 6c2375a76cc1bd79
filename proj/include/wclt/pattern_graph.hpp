#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wclt {

using Rational = boost::rational<long long>;

/// Unordered vertex pair, stored with first < second.
struct Edge {
  int first = 0;
  int second = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A fixed small pattern graph G. Vertices are 0..num_vertices-1; edges are
/// validated on construction (no self-loops, no duplicates, in range).
class PatternGraph {
 public:
  PatternGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const noexcept { return num_vertices_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_isolated_vertices() const noexcept { return has_isolated_; }
  std::vector<int> degrees() const;
  bool is_connected() const;
  bool has_edge(int u, int v) const;

  friend bool operator==(const PatternGraph&, const PatternGraph&) = default;

 private:
  int num_vertices_;
  std::vector<Edge> edges_;
  bool has_isolated_ = false;
};

/// (v_H, e_H) with the number of nonempty edge subsets of G realizing it.
struct SubgraphProfile {
  int vertices = 0;
  int edges = 0;
  std::uint64_t multiplicity = 0;

  friend bool operator==(const SubgraphProfile&, const SubgraphProfile&) = default;
};

PatternGraph parse_pattern(std::string_view text);

/// Named patterns: "triangle", "edge", "cycle:r", "complete:r", "path:r"
/// (r vertices) and "star:r" (K_{1,r}).
PatternGraph named_pattern(std::string_view spec);

/// Accepts a named pattern or, failing that, a path to a pattern file.
PatternGraph load_pattern(const std::string& spec_or_path);

std::string format_pattern(const PatternGraph& g);

/// One profile per (v_H, e_H) over all nonempty edge subsets, sorted by
/// (edges, vertices).
std::vector<SubgraphProfile> edge_subgraph_profiles(const PatternGraph& g);

Rational beta(const PatternGraph& g);

/// log of min over profiles of n^{v_H} p^{e_H}.
double log_min_subgraph_term(const PatternGraph& g, long n, double p);
double min_subgraph_term(const PatternGraph& g, long n, double p);

/// log of max over profiles of n^{2v_G - v_H} p^{2e_G - e_H}.
double log_max_variance_term(const PatternGraph& g, long n, double p);
double max_variance_term(const PatternGraph& g, long n, double p);

/// Balance condition: (e_H-1)/(v_H-2) over profiles with v_H >= 3 is
/// maximized by G itself. Throws DomainError for v_G < 3.
bool is_balanced_B(const PatternGraph& g);

std::uint64_t automorphism_count(const PatternGraph& g);

/// Number of edge subsets of K_n isomorphic to G (n falling factorial over
/// the automorphism count). Returns 0 when n < v_G.
std::uint64_t copies_in_complete(const PatternGraph& g, long n);

/// Undirected host graph on n labeled vertices (n <= 64).
class HostGraph {
 public:
  explicit HostGraph(int n);
  HostGraph(int n, const std::vector<Edge>& edges);

  static HostGraph complete(int n);

  int num_vertices() const noexcept { return n_; }
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const noexcept {
    return (adjacency_[static_cast<std::size_t>(u)] >> v) & 1ULL;
  }
  std::uint64_t neighbors(int u) const noexcept {
    return adjacency_[static_cast<std::size_t>(u)];
  }
  int degree(int u) const noexcept;

 private:
  int n_;
  std::vector<std::uint64_t> adjacency_;
};

/// A copy of G in a host, as its sorted host edge list.
using Copy = std::vector<Edge>;

/// Every (not necessarily induced) copy of G in the host, each once, sorted
/// lexicographically. G must not have isolated vertices.
std::vector<Copy> enumerate_copies(const PatternGraph& g, const HostGraph& host);

// Edge numbering of K_n: (i,j), i<j, in lexicographic order, 0-based.
inline std::size_t complete_edge_count(long n) {
  return static_cast<std::size_t>(n * (n - 1) / 2);
}
std::size_t edge_index(int i, int j, int n);
Edge edge_from_index(std::size_t index, int n);

}  // namespace wclt
