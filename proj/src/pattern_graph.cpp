#include "wclt/pattern_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "wclt/errors.hpp"

namespace wclt {

PatternGraph::PatternGraph(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  if (num_vertices_ < 1) throw DomainError("pattern must have at least one vertex");
  std::vector<bool> touched(static_cast<std::size_t>(num_vertices_), false);
  std::set<Edge> seen;
  for (Edge& e : edges_) {
    if (e.first == e.second) {
      throw DomainError("self-loop at vertex " + std::to_string(e.first));
    }
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= num_vertices_) {
      throw DomainError("edge " + std::to_string(e.first) + " " + std::to_string(e.second) +
                        " out of range for " + std::to_string(num_vertices_) + " vertices");
    }
    if (!seen.insert(e).second) {
      throw DomainError("duplicate edge " + std::to_string(e.first) + " " +
                        std::to_string(e.second));
    }
    touched[static_cast<std::size_t>(e.first)] = true;
    touched[static_cast<std::size_t>(e.second)] = true;
  }
  has_isolated_ = std::find(touched.begin(), touched.end(), false) != touched.end();
}

std::vector<int> PatternGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(num_vertices_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.first)];
    ++deg[static_cast<std::size_t>(e.second)];
  }
  return deg;
}

bool PatternGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::find(edges_.begin(), edges_.end(), Edge{u, v}) != edges_.end();
}

bool PatternGraph::is_connected() const {
  std::vector<int> parent(static_cast<std::size_t>(num_vertices_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  int components = num_vertices_;
  for (const Edge& e : edges_) {
    const int a = find(e.first), b = find(e.second);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

int parse_positive_int(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(std::string(text), &used);
    if (used != text.size() || value < 1) throw std::invalid_argument("bad");
    return value;
  } catch (const std::exception&) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
}

}  // namespace

PatternGraph parse_pattern(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int num_vertices = -1;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (num_vertices < 0) {
      try {
        num_vertices = parse_positive_int(line, "vertex count");
      } catch (const ParseError& e) {
        throw ParseError(where + e.what());
      }
      continue;
    }
    std::istringstream fields(line);
    long a = 0, b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(where + "expected 'i j', got '" + line + "'");
    }
    if (a == b) throw ParseError(where + "self-loop " + line);
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) {
      throw ParseError(where + "vertex index out of range in '" + line + "'");
    }
    Edge e{static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))};
    if (!seen.insert(e).second) throw ParseError(where + "duplicate edge " + line);
    edges.push_back(e);
  }
  if (num_vertices < 0) throw ParseError("empty pattern: missing vertex count");
  return PatternGraph(num_vertices, std::move(edges));
}

PatternGraph named_pattern(std::string_view spec) {
  const std::string s(spec);
  if (s == "triangle") return named_pattern("cycle:3");
  if (s == "edge") return named_pattern("path:2");
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ParseError("unknown pattern name '" + s + "'");
  const std::string kind = s.substr(0, colon);
  const int r = parse_positive_int(s.substr(colon + 1), "pattern size");
  std::vector<Edge> edges;
  if (kind == "cycle") {
    if (r < 3) throw ParseError("cycle needs r >= 3");
    for (int i = 0; i < r; ++i) edges.push_back({std::min(i, (i + 1) % r), std::max(i, (i + 1) % r)});
    return PatternGraph(r, edges);
  }
  if (kind == "complete") {
    if (r < 2) throw ParseError("complete needs r >= 2");
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) edges.push_back({i, j});
    return PatternGraph(r, edges);
  }
  if (kind == "path") {
    if (r < 2) throw ParseError("path needs r >= 2 vertices");
    for (int i = 0; i + 1 < r; ++i) edges.push_back({i, i + 1});
    return PatternGraph(r, edges);
  }
  if (kind == "star") {
    for (int i = 1; i <= r; ++i) edges.push_back({0, i});
    return PatternGraph(r + 1, edges);
  }
  throw ParseError("unknown pattern family '" + kind + "'");
}

PatternGraph load_pattern(const std::string& spec_or_path) {
  try {
    return named_pattern(spec_or_path);
  } catch (const ParseError&) {
    std::ifstream file(spec_or_path);
    if (!file) throw ParseError("unknown pattern '" + spec_or_path + "' (not a name or readable file)");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_pattern(buffer.str());
  }
}

std::string format_pattern(const PatternGraph& g) {
  std::ostringstream out;
  out << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.first << ' ' << e.second << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Subgraph lattice statistics

std::vector<SubgraphProfile> edge_subgraph_profiles(const PatternGraph& g) {
  const int e = g.num_edges();
  if (e < 1) throw DomainError("pattern needs at least one edge");
  if (e > 30) throw ResourceError("edge subset enumeration limited to 30 edges");
  std::map<std::pair<int, int>, std::uint64_t> counts;  // (e_H, v_H)
  const auto& edges = g.edges();
  for (std::uint64_t mask = 1; mask < (1ULL << e); ++mask) {
    std::uint64_t vertices = 0;
    for (int i = 0; i < e; ++i) {
      if ((mask >> i) & 1ULL) {
        vertices |= 1ULL << edges[static_cast<std::size_t>(i)].first;
        vertices |= 1ULL << edges[static_cast<std::size_t>(i)].second;
      }
    }
    ++counts[{std::popcount(mask), std::popcount(vertices)}];
  }
  std::vector<SubgraphProfile> out;
  out.reserve(counts.size());
  for (const auto& [key, count] : counts) out.push_back({key.second, key.first, count});
  return out;
}

Rational beta(const PatternGraph& g) {
  Rational best(0);
  for (const auto& h : edge_subgraph_profiles(g)) best = std::max(best, Rational(h.edges, h.vertices));
  return best;
}

namespace {

void check_n_p(const PatternGraph& g, long n, double p) {
  if (n < g.num_vertices()) throw DomainError("n must be at least v_G");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
}

}  // namespace

double log_min_subgraph_term(const PatternGraph& g, long n, double p) {
  check_n_p(g, n, p);
  const double ln_n = std::log(static_cast<double>(n));
  const double ln_p = std::log(p);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : edge_subgraph_profiles(g)) best = std::min(best, h.vertices * ln_n + h.edges * ln_p);
  return best;
}

double min_subgraph_term(const PatternGraph& g, long n, double p) {
  return std::exp(log_min_subgraph_term(g, n, p));
}

double log_max_variance_term(const PatternGraph& g, long n, double p) {
  check_n_p(g, n, p);
  const double ln_n = std::log(static_cast<double>(n));
  const double ln_p = std::log(p);
  const int v = g.num_vertices(), e = g.num_edges();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& h : edge_subgraph_profiles(g)) {
    best = std::max(best, (2 * v - h.vertices) * ln_n + (2 * e - h.edges) * ln_p);
  }
  return best;
}

double max_variance_term(const PatternGraph& g, long n, double p) {
  return std::exp(log_max_variance_term(g, n, p));
}

bool is_balanced_B(const PatternGraph& g) {
  if (g.num_vertices() < 3) throw DomainError("balance class B needs graphs with at least three vertices");
  const Rational target(g.num_edges() - 1, g.num_vertices() - 2);
  for (const auto& h : edge_subgraph_profiles(g)) {
    if (h.vertices >= 3 && Rational(h.edges - 1, h.vertices - 2) > target) return false;
  }
  return true;
}

std::uint64_t automorphism_count(const PatternGraph& g) {
  const int v = g.num_vertices();
  if (v > 10) throw ResourceError("automorphism brute force limited to 10 vertices");
  std::vector<int> perm(static_cast<std::size_t>(v));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (const Edge& e : g.edges()) {
      if (!g.has_edge(perm[static_cast<std::size_t>(e.first)], perm[static_cast<std::size_t>(e.second)])) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::uint64_t copies_in_complete(const PatternGraph& g, long n) {
  if (g.has_isolated_vertices()) {
    throw DomainError("copy counting is undefined for patterns with isolated vertices");
  }
  if (n < g.num_vertices()) return 0;
  std::uint64_t falling = 1;
  for (long i = 0; i < g.num_vertices(); ++i) {
    if (__builtin_mul_overflow(falling, static_cast<std::uint64_t>(n - i), &falling)) {
      throw ResourceError("copy count overflows 64 bits");
    }
  }
  return falling / automorphism_count(g);
}

// ---------------------------------------------------------------------------
// Host graphs and copy enumeration

HostGraph::HostGraph(int n) : n_(n), adjacency_(static_cast<std::size_t>(n), 0) {
  if (n < 1 || n > 64) throw DomainError("host graphs support 1..64 vertices");
}

HostGraph::HostGraph(int n, const std::vector<Edge>& edges) : HostGraph(n) {
  for (const Edge& e : edges) add_edge(e.first, e.second);
}

HostGraph HostGraph::complete(int n) {
  HostGraph h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h.add_edge(i, j);
  return h;
}

void HostGraph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) throw DomainError("invalid host edge");
  adjacency_[static_cast<std::size_t>(u)] |= 1ULL << v;
  adjacency_[static_cast<std::size_t>(v)] |= 1ULL << u;
}

int HostGraph::degree(int u) const noexcept { return std::popcount(neighbors(u)); }

namespace {

// Backtracking over injective vertex maps; each copy is reached once per
// automorphism and deduplicated through its sorted edge image.
class CopyMatcher {
 public:
  CopyMatcher(const PatternGraph& g, const HostGraph& host) : g_(g), host_(host) {
    const int v = g.num_vertices();
    const auto deg = g.degrees();
    // Order pattern vertices so each one (after the first of a component)
    // is adjacent to an earlier one: high degree first, then BFS.
    std::vector<bool> placed(static_cast<std::size_t>(v), false);
    while (static_cast<int>(order_.size()) < v) {
      int best = -1;
      for (int u = 0; u < v; ++u) {
        if (placed[static_cast<std::size_t>(u)]) continue;
        int links = 0;
        for (int w : order_) links += g.has_edge(u, w) ? 1 : 0;
        const bool better = best < 0 ||
            links > links_of(best, placed) ||
            (links == links_of(best, placed) && deg[static_cast<std::size_t>(u)] > deg[static_cast<std::size_t>(best)]);
        if (better) best = u;
      }
      placed[static_cast<std::size_t>(best)] = true;
      order_.push_back(best);
    }
    pattern_degree_ = deg;
    image_.assign(static_cast<std::size_t>(v), -1);
  }

  std::vector<Copy> run() {
    extend(0, 0);
    return {found_.begin(), found_.end()};
  }

 private:
  int links_of(int u, const std::vector<bool>& placed) const {
    int links = 0;
    for (int w = 0; w < g_.num_vertices(); ++w) links += (placed[static_cast<std::size_t>(w)] && g_.has_edge(u, w)) ? 1 : 0;
    return links;
  }

  void extend(std::size_t depth, std::uint64_t used) {
    if (depth == order_.size()) {
      Copy copy;
      copy.reserve(g_.edges().size());
      for (const Edge& e : g_.edges()) {
        int a = image_[static_cast<std::size_t>(e.first)], b = image_[static_cast<std::size_t>(e.second)];
        copy.push_back({std::min(a, b), std::max(a, b)});
      }
      std::sort(copy.begin(), copy.end());
      found_.insert(std::move(copy));
      return;
    }
    const int u = order_[depth];
    for (int x = 0; x < host_.num_vertices(); ++x) {
      if ((used >> x) & 1ULL) continue;
      if (host_.degree(x) < pattern_degree_[static_cast<std::size_t>(u)]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) {
        const int w = order_[i];
        if (g_.has_edge(u, w) && !host_.has_edge(x, image_[static_cast<std::size_t>(w)])) ok = false;
      }
      if (!ok) continue;
      image_[static_cast<std::size_t>(u)] = x;
      extend(depth + 1, used | (1ULL << x));
      image_[static_cast<std::size_t>(u)] = -1;
    }
  }

  const PatternGraph& g_;
  const HostGraph& host_;
  std::vector<int> order_;
  std::vector<int> pattern_degree_;
  std::vector<int> image_;
  std::set<Copy> found_;
};

}  // namespace

std::vector<Copy> enumerate_copies(const PatternGraph& g, const HostGraph& host) {
  if (g.has_isolated_vertices()) {
    throw DomainError("copy enumeration is undefined for patterns with isolated vertices");
  }
  if (g.num_vertices() > host.num_vertices()) return {};
  return CopyMatcher(g, host).run();
}

std::size_t edge_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) throw DomainError("invalid edge for K_n numbering");
  const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j), nn = static_cast<std::size_t>(n);
  return ii * (2 * nn - ii - 1) / 2 + (jj - ii - 1);
}

Edge edge_from_index(std::size_t index, int n) {
  std::size_t remaining = index;
  for (int i = 0; i < n - 1; ++i) {
    const auto row = static_cast<std::size_t>(n - i - 1);
    if (remaining < row) return {i, i + 1 + static_cast<int>(remaining)};
    remaining -= row;
  }
  throw DomainError("edge index out of range");
}

}  // namespace wclt
