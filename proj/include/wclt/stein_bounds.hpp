#pragma once

#include <optional>
#include <string>

#include "wclt/pattern_graph.hpp"
#include "wclt/weight_model.hpp"

namespace wclt {

enum class Regime { dense, sparse_mid, sparse_low };
enum class FamilyKind { cycle, complete, tree, general_B, general };

struct PatternFamily {
  FamilyKind kind = FamilyKind::general;
  int r = 0;  ///< vertices for cycle/complete, edges for tree, 0 otherwise
};

std::string to_string(Regime r);
std::string to_string(FamilyKind k);

/// Structural detection, checked in the order cycle, complete, tree. Never
/// returns general_B; see `bound_family`.
PatternFamily classify_family(const PatternGraph& g);

/// classify_family, with `general` upgraded to `general_B` for balanced G.
PatternFamily bound_family(const PatternGraph& g);

/// Rate factors only: the unknown constants are never included, so every
/// report carries rate_only = true and supports ratio/slope comparisons only.
struct BoundReport {
  double rate_term = 0.0;
  double moment_ratio = 0.0;
  double bound_value = 0.0;  ///< rate_term * moment_ratio
  Regime regime = Regime::dense;
  std::optional<double> threshold;
  double cutoff = 0.5;
  PatternFamily family;
  std::optional<double> count_bound;
  bool rate_only = true;
};

/// ((1-p) min_H n^{v_H} p^{e_H})^{-1/2}, evaluated in log scale.
double rate_term(const PatternGraph& g, long n, double p);

/// Lower edge of the sparse-mid regime for a family, e.g. n^{-(v-2)/(e-1)}.
double regime_threshold(const PatternFamily& family, const PatternGraph& g, long n);

/// moment_ratio(model, p) * rate_term(G, n, p).
BoundReport wasserstein_bound(const PatternGraph& g, long n, double p, const WeightModel& model,
                              double cutoff = 0.5);

/// Three-regime bound for balanced G, with the cycle/complete/tree exponents
/// when the family is detected.
BoundReport regime_bound(const PatternGraph& g, long n, double p, const WeightModel& model,
                         double cutoff = 0.5);

/// Two-regime simplification: sqrt(E X^4)/E X^2 * rate_term for p <= c,
/// sqrt(E X^4)/(n sqrt(1-p) Var X) above.
BoundReport cutoff_bound(const PatternGraph& g, long n, double p, const WeightModel& model,
                         double cutoff = 0.5);

}  // namespace wclt
