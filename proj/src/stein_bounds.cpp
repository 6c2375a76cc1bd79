#include "wclt/stein_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "wclt/errors.hpp"

namespace wclt {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::dense: return "dense";
    case Regime::sparse_mid: return "sparse-mid";
    case Regime::sparse_low: return "sparse-low";
  }
  return "unknown";
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::cycle: return "cycle";
    case FamilyKind::complete: return "complete";
    case FamilyKind::tree: return "tree";
    case FamilyKind::general_B: return "general-B";
    case FamilyKind::general: return "general";
  }
  return "unknown";
}

PatternFamily classify_family(const PatternGraph& g) {
  const int v = g.num_vertices();
  const int e = g.num_edges();
  if (g.has_isolated_vertices() || !g.is_connected()) return {};
  const auto deg = g.degrees();
  if (v >= 3 && e == v && std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; })) {
    return {FamilyKind::cycle, v};
  }
  if (v >= 3 && e == v * (v - 1) / 2) return {FamilyKind::complete, v};
  if (e == v - 1) return {FamilyKind::tree, e};
  return {};
}

PatternFamily bound_family(const PatternGraph& g) {
  PatternFamily f = classify_family(g);
  if (f.kind == FamilyKind::general && g.num_vertices() >= 3 && !g.has_isolated_vertices() &&
      is_balanced_B(g)) {
    f.kind = FamilyKind::general_B;
  }
  return f;
}

namespace {

void check_inputs(const PatternGraph& g, long n, double p) {
  if (g.has_isolated_vertices()) throw DomainError("bounds need a pattern without isolated vertices");
  if (n < g.num_vertices()) throw DomainError("n must be at least v_G");
  if (p == 1.0) throw DegenerateError("p = 1 makes the bound vacuous (n^2 (1-p) does not diverge)");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
}

void check_cutoff(double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("cutoff c must lie in (0,1)");
}

double dense_factor(const WeightModel& model) {
  const Moments m = moments(model);
  if (!(m.variance > 0.0)) throw DegenerateError("dense regime bound divides by Var X = 0");
  return std::sqrt(m.raw4) / m.variance;
}

double sparse_factor(const WeightModel& model) {
  const Moments m = moments(model);
  return std::sqrt(m.raw4) / m.raw2;
}

}  // namespace

double rate_term(const PatternGraph& g, long n, double p) {
  check_inputs(g, n, p);
  return std::exp(-0.5 * (std::log1p(-p) + log_min_subgraph_term(g, n, p)));
}

double regime_threshold(const PatternFamily& family, const PatternGraph& g, long n) {
  const double ln = std::log(static_cast<double>(n));
  const double r = family.r;
  switch (family.kind) {
    case FamilyKind::cycle: return std::exp(-ln * (r - 2.0) / (r - 1.0));
    case FamilyKind::complete: return std::exp(-ln * 2.0 / (r + 1.0));
    case FamilyKind::tree: return 1.0 / static_cast<double>(n);
    case FamilyKind::general_B:
      return std::exp(-ln * (g.num_vertices() - 2.0) / (g.num_edges() - 1.0));
    case FamilyKind::general: break;
  }
  throw UnsupportedPattern("no regime threshold for a pattern outside class B; use wasserstein_bound");
}

BoundReport wasserstein_bound(const PatternGraph& g, long n, double p, const WeightModel& model,
                              double cutoff) {
  check_cutoff(cutoff);
  BoundReport rep;
  rep.rate_term = rate_term(g, n, p);
  rep.moment_ratio = moment_ratio(model, p);
  rep.bound_value = rep.rate_term * rep.moment_ratio;
  rep.count_bound = rep.rate_term;
  rep.cutoff = cutoff;
  rep.family = bound_family(g);
  if (p > cutoff) {
    rep.regime = Regime::dense;
  } else if (rep.family.kind != FamilyKind::general) {
    rep.threshold = regime_threshold(rep.family, g, n);
    rep.regime = p > *rep.threshold ? Regime::sparse_mid : Regime::sparse_low;
  } else {
    rep.regime = Regime::sparse_mid;
  }
  return rep;
}

BoundReport regime_bound(const PatternGraph& g, long n, double p, const WeightModel& model,
                         double cutoff) {
  check_cutoff(cutoff);
  check_inputs(g, n, p);
  BoundReport rep;
  rep.cutoff = cutoff;
  rep.family = bound_family(g);
  if (rep.family.kind == FamilyKind::general) {
    throw UnsupportedPattern("pattern is not in class B and not a cycle, complete graph or tree; use wasserstein_bound");
  }
  rep.threshold = regime_threshold(rep.family, g, n);
  rep.count_bound = rate_term(g, n, p);
  const double ln = std::log(static_cast<double>(n));
  const double lp = std::log(p);
  if (p > cutoff) {
    rep.regime = Regime::dense;
    rep.moment_ratio = dense_factor(model);
    rep.rate_term = std::exp(-ln - 0.5 * std::log1p(-p));
  } else if (p > *rep.threshold) {
    rep.regime = Regime::sparse_mid;
    rep.moment_ratio = sparse_factor(model);
    rep.rate_term = std::exp(-ln - 0.5 * lp);
  } else {
    rep.regime = Regime::sparse_low;
    rep.moment_ratio = sparse_factor(model);
    const double r = rep.family.r;
    double log_den = 0.0;
    switch (rep.family.kind) {
      case FamilyKind::cycle: log_den = 0.5 * r * (ln + lp); break;
      case FamilyKind::complete: log_den = 0.5 * r * ln + 0.25 * r * (r - 1.0) * lp; break;
      case FamilyKind::tree: log_den = 0.5 * (r + 1.0) * ln + 0.5 * r * lp; break;
      default: log_den = 0.5 * g.num_vertices() * ln + 0.5 * g.num_edges() * lp; break;
    }
    rep.rate_term = std::exp(-log_den);
  }
  rep.bound_value = rep.rate_term * rep.moment_ratio;
  return rep;
}

BoundReport cutoff_bound(const PatternGraph& g, long n, double p, const WeightModel& model, double cutoff) {
  check_cutoff(cutoff);
  BoundReport rep;
  rep.cutoff = cutoff;
  rep.family = bound_family(g);
  rep.count_bound = rate_term(g, n, p);
  if (p > cutoff) {
    rep.regime = Regime::dense;
    rep.moment_ratio = dense_factor(model);
    rep.rate_term = 1.0 / (static_cast<double>(n) * std::sqrt(1.0 - p));
  } else {
    rep.regime = Regime::sparse_mid;
    rep.moment_ratio = sparse_factor(model);
    rep.rate_term = *rep.count_bound;
  }
  rep.bound_value = rep.rate_term * rep.moment_ratio;
  return rep;
}

}  // namespace wclt
