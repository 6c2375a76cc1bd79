#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wclt/graph_weight_stats.hpp"
#include "wclt/pattern_graph.hpp"
#include "wclt/weight_model.hpp"

namespace wclt {

/// K blocks [2k, 2k+2], each split into M cells of width 2/M. A grid index
/// is block * M + cell.
struct GridSpec {
  int K = 1;
  int M = 1;

  int size() const noexcept { return K * M; }
  double width() const noexcept { return 2.0 / M; }
  int block(int index) const noexcept { return index / M; }
  int cell(int index) const noexcept { return index % M; }
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr int kMaxGridSize = 256;
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 23;

/// (K*M)^order, or ResourceError past kMaxTensorEntries.
std::size_t tensor_size(const GridSpec& grid, int order);

/// Raw dense array over order-tuples of grid indices, row-major.
struct Tensor {
  GridSpec grid;
  int order = 0;
  std::vector<double> values;

  Tensor() = default;
  Tensor(GridSpec g, int n);
  Tensor(GridSpec g, int n, std::vector<double> v);
};

/// Piecewise-constant kernel with cached structural flags. Immutable.
class Kernel {
 public:
  struct Flags {
    bool symmetric = true;
    bool off_delta_zero = true;
    bool int0 = true;

    friend bool operator==(const Flags&, const Flags&) = default;
  };

  Kernel(GridSpec grid, int order);
  explicit Kernel(Tensor t);
  static Kernel scalar(GridSpec grid, double value);

  int order() const noexcept { return t_.order; }
  const GridSpec& grid() const noexcept { return t_.grid; }
  const std::vector<double>& values() const noexcept { return t_.values; }
  const Tensor& tensor() const noexcept { return t_; }
  std::size_t size() const noexcept { return t_.values.size(); }
  double operator[](std::size_t i) const { return t_.values[i]; }
  double scalar_value() const;
  const Flags& flags() const noexcept { return flags_; }
  double max_abs() const noexcept { return max_abs_; }
  bool is_zero() const noexcept { return max_abs_ == 0.0; }

  Kernel scaled(double c) const;

 private:
  Tensor t_;
  Flags flags_;
  double max_abs_ = 0.0;
};

Kernel operator+(const Kernel& a, const Kernel& b);

/// Constant term plus kernels of orders 1..N (kernels[i] has order i+1).
struct KernelFamily {
  GridSpec grid;
  double constant = 0.0;
  std::vector<Kernel> kernels;

  explicit KernelFamily(GridSpec g) : grid(g) {}
  int max_order() const noexcept { return static_cast<int>(kernels.size()); }
  /// Adds k into its order slot (order 0 goes to the constant).
  void add(const Kernel& k);
  const Kernel& order(int n) const { return kernels.at(static_cast<std::size_t>(n - 1)); }
  bool all_int0() const;
};

/// u_k in (-1,1), one per block.
struct PathRealization {
  std::vector<double> u;
};

/// Cell of block k containing 2k+1+u_k, per block.
std::vector<int> point_cells(const GridSpec& grid, const PathRealization& path);
/// Path whose points sit at the centers of the given cells.
PathRealization path_from_cells(const GridSpec& grid, const std::vector<int>& cells);

PathRealization sample_path(const GridSpec& grid, std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// Kernel operations

Kernel symmetrize(const Tensor& f);
bool check_int0(const Kernel& f);
Kernel psi_bar(const Kernel& f);

double inner_hat(const Kernel& f, const Kernel& g);
double l2_hat_norm(const Kernel& f);
/// Squared Lebesgue L2 norm: sum of v^2 * width^order.
double l2_norm_sq(const Tensor& f);

/// f *_k^l g of order n+m-k-l: first l shared variables integrated with
/// weight 1/2 per variable, next k-l identified, the rest free.
Tensor contraction(const Kernel& f, const Kernel& g, int k, int l);
Kernel contraction_sym(const Kernel& f, const Kernel& g, int k, int l);

// ---------------------------------------------------------------------------
// Evaluation

/// I_n(f) at a path, as the contraction of f with (point indicator - w/2)
/// in every coordinate. f must vanish off the diagonal region.
double eval_integral(const Kernel& f, const PathRealization& path);
double eval_integral_cells(const Kernel& f, const std::vector<int>& cells);
/// Alternating-sum definition, term by term (slow reference).
double eval_integral_reference(const Kernel& f, const PathRealization& path);
/// Sum over distinct block tuples of f at the path points.
double eval_ustat(const Kernel& f, const PathRealization& path);
double eval_family(const KernelFamily& F, const PathRealization& path);
double eval_family_cells(const KernelFamily& F, const std::vector<int>& cells);

/// {f^(0), ..., f^(n)} with f^(r) = C(n,r) 2^{r-n} * integral over the last
/// n-r variables; the U-statistic equals their chaos sum pathwise.
KernelFamily ustat_decompose(const Kernel& f);

/// f(t, .) as an order n-1 kernel.
Kernel slice(const Kernel& f, int t);

/// grad_t X for every grid index t, via sum_j j I_{j-1}(f_j(t,.)).
/// Requires an int0 family.
std::vector<double> grad_all(const KernelFamily& F, const PathRealization& path);
double grad_at(const KernelFamily& F, int t, const PathRealization& path);
/// Finite-difference definition: force block(t) to cell t, subtract the
/// average over the block's cells.
double grad_reference(const KernelFamily& F, int t, const PathRealization& path);

KernelFamily apply_L(const KernelFamily& F);
KernelFamily apply_L_inv(const KernelFamily& F);
KernelFamily apply_sqrtL(const KernelFamily& F);

/// Exact E[X^2] by enumerating all M^K equally likely cell configurations.
double exact_second_moment(const KernelFamily& F);
/// constant^2 + sum_n n! ||f_n||^2 (int0 families).
double isometry_second_moment(const KernelFamily& F);

// ---------------------------------------------------------------------------
// Bounds and identities

struct SteinReport {
  double ex2 = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double total = 0.0;
  double se_term2 = 0.0;
  double se_term3 = 0.0;
  std::uint64_t paths = 0;
};

SteinReport stein_rhs(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed);

/// Right-hand side of the product formula as a family; evaluating it at a
/// path gives I_n(f) I_m(g) for int0 inputs.
KernelFamily multiplication_expansion(const Kernel& f, const Kernel& g);

struct MultiplicationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};
MultiplicationCheck multiplication_check(const Kernel& f, const Kernel& g, const PathRealization& path);

struct ContractionBound {
  double ex2 = 0.0;
  double contraction_sum = 0.0;
  double value = 0.0;
  bool rate_only = true;
};
/// |1 - E X^2| + sqrt of the contraction-norm sum (Lebesgue L2), without
/// the order-dependent constant.
ContractionBound contraction_bound_rhs(const KernelFamily& F);

struct NormIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double inequality_rhs = 0.0;
};
NormIdentity norm_identity_check(const KernelFamily& F);

struct ContractionInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// Only for l < k: the statement with 2^{2n-2k-1} on the left.
  bool printed_checked = false;
  double printed_lhs = 0.0;
  double printed_rhs = 0.0;
  bool printed_holds = false;
};
ContractionInequality contraction_inequalities_check(const Kernel& f, const Kernel& g, int k, int l);

// ---------------------------------------------------------------------------
// Graph kernels

struct GraphKernelFactors {
  GridSpec grid;  ///< K = n(n-1)/2
  int edges = 0;
  double p = 0.0;
  /// g_k over the M^k local cells of one block (grid {1, M}).
  std::vector<Tensor> g;
  /// Ordered edge-sequence extension counts over K^k block tuples.
  std::vector<std::vector<double>> counts;
};

/// Requires p*M integer, and q*p*M integer for two-point laws.
GraphKernelFactors graph_kernel_factors(const PatternGraph& G, long n, double p, const WeightModel& model,
                                        const GridSpec& grid);

/// h_k = g_k * counts, before projection (not int0).
KernelFamily graph_kernels_unprojected(const GraphKernelFactors& factors);
/// hbar_k = (Psi...Psi g_k) * counts.
KernelFamily graph_kernels(const GraphKernelFactors& factors);
KernelFamily graph_kernels(const PatternGraph& G, long n, double p, const WeightModel& model,
                           const GridSpec& grid);

/// Host whose per-edge uniforms are (1 + u_k)/2.
HostSample host_from_path(const PathRealization& path, long n, double p, const WeightModel& model);

struct ProjectedNorms {
  double lhs1 = 0.0;
  double lhs2 = 0.0;
};
/// lhs1 = int (Psi..Psi g_k)^2; lhs2 = int (int over the first l variables
/// of (Psi..Psi g_k)^2)^2 over the remaining k-l.
ProjectedNorms projected_kernel_norms(const Tensor& g_k, int k, int l);

struct ProjectedRates {
  double rate1 = 0.0;
  double rate2 = 0.0;
};
/// p^{2e-k}(1-p)^{k-1}(Var X + (1-p)m1^2) and
/// p^{4e-3k+l}(1-p)^{k+l-2}(c4 + (1-p)^2 m1^4).
ProjectedRates projected_kernel_rates(int edges, int k, int l, double p, const WeightModel& model);

// ---------------------------------------------------------------------------
// Sampling

/// Values of the family on paths 0..paths-1. OpenMP over paths.
std::vector<double> sample_family(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed);
std::vector<double> sample_family_serial(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Dump format: JSON header (format_version, order, K, M, flags) + values.

struct LoadedKernel {
  Kernel kernel;
  Kernel::Flags stored_flags;
};

std::string kernel_to_json(const Kernel& f);
LoadedKernel kernel_from_json(const std::string& text);

struct LoadedFamily {
  KernelFamily family;
  std::vector<Kernel::Flags> stored_flags;
};

std::string family_to_json(const KernelFamily& F);
LoadedFamily family_from_json(const std::string& text);

}  // namespace wclt
