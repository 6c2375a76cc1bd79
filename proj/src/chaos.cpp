#include "wclt/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "wclt/errors.hpp"
#include "wclt/rng.hpp"

namespace wclt {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// digits[0] is the most significant coordinate.
void decode(std::size_t flat, std::size_t base, int order, int* digits) {
  for (int j = order - 1; j >= 0; --j) {
    digits[j] = static_cast<int>(flat % base);
    flat /= base;
  }
}

std::size_t encode(const int* digits, std::size_t base, int order) {
  std::size_t flat = 0;
  for (int j = 0; j < order; ++j) flat = flat * base + static_cast<std::size_t>(digits[j]);
  return flat;
}

bool distinct_blocks(const int* digits, int order, int M) {
  for (int a = 0; a < order; ++a) {
    for (int b = a + 1; b < order; ++b) {
      if (digits[a] / M == digits[b] / M) return false;
    }
  }
  return true;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw DomainError("kernels live on different grids");
}

// Contracts the trailing `times` coordinates of a row-major array with `mu`.
std::vector<double> tail_contract(const std::vector<double>& v, std::size_t N, int times,
                                  const std::vector<double>& mu) {
  std::vector<double> cur = v;
  for (int t = 0; t < times; ++t) {
    const std::size_t rows = cur.size() / N;
    std::vector<double> next(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = cur.data() + r * N;
      double s = 0.0;
      for (std::size_t c = 0; c < N; ++c) s += row[c] * mu[c];
      next[r] = s;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> point_measure(const GridSpec& grid, const std::vector<int>& cells) {
  if (static_cast<int>(cells.size()) != grid.K) throw DomainError("path length differs from the block count");
  const double half = grid.width() / 2.0;
  std::vector<double> mu(static_cast<std::size_t>(grid.size()), -half);
  for (int b = 0; b < grid.K; ++b) mu[static_cast<std::size_t>(b * grid.M + cells[static_cast<std::size_t>(b)])] += 1.0;
  return mu;
}

void require_int0(const KernelFamily& F, const char* what) {
  if (!F.all_int0()) throw DomainError(std::string(what) + " needs int0 kernels; apply psi_bar first");
}

}  // namespace

// ---------------------------------------------------------------------------

void GridSpec::validate() const {
  if (K < 1 || M < 1) throw DomainError("grid needs K >= 1 and M >= 1");
  if (K * M > kMaxGridSize) throw ResourceError("grid K*M exceeds 256");
}

std::size_t tensor_size(const GridSpec& grid, int order) {
  grid.validate();
  if (order < 0) throw DomainError("negative kernel order");
  std::size_t s = 1;
  for (int i = 0; i < order; ++i) {
    s *= static_cast<std::size_t>(grid.size());
    if (s > kMaxTensorEntries) throw ResourceError("kernel of order " + std::to_string(order) + " too large");
  }
  return s;
}

Tensor::Tensor(GridSpec g, int n) : grid(g), order(n), values(tensor_size(g, n), 0.0) {}

Tensor::Tensor(GridSpec g, int n, std::vector<double> v) : grid(g), order(n), values(std::move(v)) {
  if (values.size() != tensor_size(g, n)) throw DomainError("value count does not match (K*M)^order");
}

Kernel::Kernel(GridSpec grid, int order) : Kernel(Tensor(grid, order)) {}

Kernel::Kernel(Tensor t) : t_(std::move(t)) {
  const auto& v = t_.values;
  for (double x : v) max_abs_ = std::max(max_abs_, std::abs(x));
  const int n = t_.order;
  if (n == 0) return;
  const int M = t_.grid.M;
  const auto N = static_cast<std::size_t>(t_.grid.size());
  const double tol = 1e-12 * max_abs_;
  std::vector<int> d(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < v.size(); ++i) {
    decode(i, N, n, d.data());
    if (flags_.off_delta_zero && !distinct_blocks(d.data(), n, M) && std::abs(v[i]) > tol) {
      flags_.off_delta_zero = false;
    }
    if (flags_.symmetric) {
      for (int j = 0; j + 1 < n; ++j) {
        std::swap(d[static_cast<std::size_t>(j)], d[static_cast<std::size_t>(j + 1)]);
        const std::size_t other = encode(d.data(), N, n);
        std::swap(d[static_cast<std::size_t>(j)], d[static_cast<std::size_t>(j + 1)]);
        if (std::abs(v[i] - v[other]) > tol) {
          flags_.symmetric = false;
          break;
        }
      }
    }
  }
  for (int axis = 0; axis < n && flags_.int0; ++axis) {
    const std::size_t stride = ipow(N, n - 1 - axis);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if ((i / stride) % N % static_cast<std::size_t>(M) != 0) continue;
      double s = 0.0;
      for (int c = 0; c < M; ++c) s += v[i + static_cast<std::size_t>(c) * stride];
      if (std::abs(s) > tol * M) {
        flags_.int0 = false;
        break;
      }
    }
  }
}

Kernel Kernel::scalar(GridSpec grid, double value) { return Kernel(Tensor(grid, 0, {value})); }

double Kernel::scalar_value() const {
  if (order() != 0) throw DomainError("scalar_value on a kernel of positive order");
  return t_.values[0];
}

Kernel Kernel::scaled(double c) const {
  Tensor t = t_;
  for (double& x : t.values) x *= c;
  return Kernel(std::move(t));
}

Kernel operator+(const Kernel& a, const Kernel& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.order() != b.order()) throw DomainError("cannot add kernels of different orders");
  Tensor t = a.tensor();
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += b[i];
  return Kernel(std::move(t));
}

void KernelFamily::add(const Kernel& k) {
  require_same_grid(grid, k.grid());
  if (k.order() == 0) {
    constant += k.scalar_value();
    return;
  }
  while (max_order() < k.order()) kernels.emplace_back(grid, max_order() + 1);
  auto& slot = kernels[static_cast<std::size_t>(k.order() - 1)];
  slot = slot + k;
}

bool KernelFamily::all_int0() const {
  return std::all_of(kernels.begin(), kernels.end(), [](const Kernel& k) { return k.flags().int0; });
}

// ---------------------------------------------------------------------------

std::vector<int> point_cells(const GridSpec& grid, const PathRealization& path) {
  if (static_cast<int>(path.u.size()) != grid.K) throw DomainError("path length differs from the block count");
  std::vector<int> cells(path.u.size());
  for (std::size_t k = 0; k < path.u.size(); ++k) {
    const double u = path.u[k];
    if (!(u > -1.0 && u < 1.0)) throw DomainError("path values must lie in (-1,1)");
    const int c = static_cast<int>(std::floor((1.0 + u) * grid.M / 2.0));
    cells[k] = std::clamp(c, 0, grid.M - 1);
  }
  return cells;
}

PathRealization path_from_cells(const GridSpec& grid, const std::vector<int>& cells) {
  PathRealization path;
  path.u.reserve(cells.size());
  for (int c : cells) path.u.push_back((c + 0.5) * grid.width() - 1.0);
  return path;
}

PathRealization sample_path(const GridSpec& grid, std::uint64_t seed, std::uint64_t index) {
  PathRealization path;
  path.u.resize(static_cast<std::size_t>(grid.K));
  const std::uint64_t key = mix64(seed ^ kPathStreamTag);
  for (int k = 0; k < grid.K; ++k) {
    path.u[static_cast<std::size_t>(k)] = 2.0 * counter_uniform(key, index, static_cast<std::uint64_t>(k)) - 1.0;
  }
  return path;
}

// ---------------------------------------------------------------------------

Kernel symmetrize(const Tensor& f) {
  const int n = f.order;
  if (n <= 1) {
    Tensor t = f;
    return Kernel(std::move(t));
  }
  const auto N = static_cast<std::size_t>(f.grid.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double inv = 1.0 / static_cast<double>(perms.size());

  Tensor out(f.grid, n);
  const auto total = static_cast<std::int64_t>(f.values.size());
#pragma omp parallel
  {
    std::vector<int> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      decode(static_cast<std::size_t>(i), N, n, d.data());
      if (!distinct_blocks(d.data(), n, f.grid.M)) continue;
      double acc = 0.0;
      for (const auto& s : perms) {
        for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(s[static_cast<std::size_t>(j)])];
        acc += f.values[encode(e.data(), N, n)];
      }
      out.values[static_cast<std::size_t>(i)] = acc * inv;
    }
  }
  return Kernel(std::move(out));
}

bool check_int0(const Kernel& f) { return f.flags().int0; }

Kernel psi_bar(const Kernel& f) {
  Tensor t = f.tensor();
  const int n = t.order;
  const auto N = static_cast<std::size_t>(t.grid.size());
  const int M = t.grid.M;
  for (int axis = 0; axis < n; ++axis) {
    const std::size_t stride = ipow(N, n - 1 - axis);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if ((i / stride) % N % static_cast<std::size_t>(M) != 0) continue;
      double s = 0.0;
      for (int c = 0; c < M; ++c) s += t.values[i + static_cast<std::size_t>(c) * stride];
      const double avg = s / M;
      for (int c = 0; c < M; ++c) t.values[i + static_cast<std::size_t>(c) * stride] -= avg;
    }
  }
  return Kernel(std::move(t));
}

double inner_hat(const Kernel& f, const Kernel& g) {
  require_same_grid(f.grid(), g.grid());
  if (f.order() != g.order()) throw DomainError("inner product of kernels of different orders");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * std::pow(f.grid().width() / 2.0, f.order());
}

double l2_hat_norm(const Kernel& f) { return std::sqrt(inner_hat(f, f)); }

double l2_norm_sq(const Tensor& f) {
  double s = 0.0;
  for (double x : f.values) s += x * x;
  return s * std::pow(f.grid.width(), f.order);
}

Tensor contraction(const Kernel& f, const Kernel& g, int k, int l) {
  require_same_grid(f.grid(), g.grid());
  const int n = f.order();
  const int m = g.order();
  if (!(0 <= l && l <= k && k <= std::min(n, m))) {
    throw DomainError("contraction needs 0 <= l <= k <= min(n, m)");
  }
  const auto N = static_cast<std::size_t>(f.grid().size());
  const std::size_t nx = ipow(N, k - l), ny = ipow(N, n - k), nz = ipow(N, m - k), nw = ipow(N, l);
  const std::size_t f_w = ipow(N, n - l), g_w = ipow(N, m - l);
  const std::size_t f_x = ipow(N, n - k), g_x = ipow(N, m - k);
  Tensor out(f.grid(), n + m - k - l);
  const double weight = std::pow(f.grid().width() / 2.0, l);
  const auto outer = static_cast<std::int64_t>(nx * ny);
#pragma omp parallel for schedule(static)
  for (std::int64_t xy = 0; xy < outer; ++xy) {
    const std::size_t x = static_cast<std::size_t>(xy) / ny;
    const std::size_t y = static_cast<std::size_t>(xy) % ny;
    for (std::size_t z = 0; z < nz; ++z) {
      double s = 0.0;
      for (std::size_t w = 0; w < nw; ++w) s += f[w * f_w + x * f_x + y] * g[w * g_w + x * g_x + z];
      out.values[(x * ny + y) * nz + z] = s * weight;
    }
  }
  return out;
}

Kernel contraction_sym(const Kernel& f, const Kernel& g, int k, int l) {
  return symmetrize(contraction(f, g, k, l));
}

// ---------------------------------------------------------------------------

double eval_integral_cells(const Kernel& f, const std::vector<int>& cells) {
  if (f.order() == 0) return f.scalar_value();
  if (!f.flags().off_delta_zero) throw DomainError("I_n needs a kernel vanishing off the diagonal region");
  const auto mu = point_measure(f.grid(), cells);
  return tail_contract(f.values(), static_cast<std::size_t>(f.grid().size()), f.order(), mu)[0];
}

double eval_integral(const Kernel& f, const PathRealization& path) {
  return eval_integral_cells(f, point_cells(f.grid(), path));
}

double eval_integral_reference(const Kernel& f, const PathRealization& path) {
  const GridSpec& grid = f.grid();
  const auto cells = point_cells(grid, path);
  const int n = f.order();
  if (n == 0) return f.scalar_value();
  if (!f.flags().off_delta_zero) throw DomainError("I_n needs a kernel vanishing off the diagonal region");
  const auto N = static_cast<std::size_t>(grid.size());
  std::vector<int> d(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int r = 0; r <= n; ++r) {
    // First r coordinates evaluated at the path, last n-r integrated.
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      decode(i, N, n, d.data());
      bool at_points = true;
      for (int j = 0; j < r && at_points; ++j) {
        const int idx = d[static_cast<std::size_t>(j)];
        at_points = grid.cell(idx) == cells[static_cast<std::size_t>(grid.block(idx))];
      }
      if (at_points && distinct_blocks(d.data(), n, grid.M)) s += f[i];
    }
    const double sign = (n - r) % 2 == 0 ? 1.0 : -1.0;
    total += sign * binomial(n, r) / std::pow(2.0, n - r) * s * std::pow(grid.width(), n - r);
  }
  return total;
}

double eval_ustat(const Kernel& f, const PathRealization& path) {
  const GridSpec& grid = f.grid();
  const auto cells = point_cells(grid, path);
  const int n = f.order();
  if (n == 0) return f.scalar_value();
  const auto N = static_cast<std::size_t>(grid.size());
  std::vector<int> b(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
  const std::size_t tuples = ipow(static_cast<std::size_t>(grid.K), n);
  double s = 0.0;
  for (std::size_t t = 0; t < tuples; ++t) {
    decode(t, static_cast<std::size_t>(grid.K), n, b.data());
    bool distinct = true;
    for (int a = 0; a < n && distinct; ++a) {
      for (int c = a + 1; c < n; ++c) distinct = distinct && b[static_cast<std::size_t>(a)] != b[static_cast<std::size_t>(c)];
    }
    if (!distinct) continue;
    for (int j = 0; j < n; ++j) {
      const int blk = b[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(j)] = blk * grid.M + cells[static_cast<std::size_t>(blk)];
    }
    s += f[encode(d.data(), N, n)];
  }
  return s;
}

double eval_family_cells(const KernelFamily& F, const std::vector<int>& cells) {
  double s = F.constant;
  for (const Kernel& k : F.kernels) s += eval_integral_cells(k, cells);
  return s;
}

double eval_family(const KernelFamily& F, const PathRealization& path) {
  return eval_family_cells(F, point_cells(F.grid, path));
}

KernelFamily ustat_decompose(const Kernel& f) {
  const GridSpec& grid = f.grid();
  const int n = f.order();
  KernelFamily out(grid);
  if (n == 0) {
    out.constant = f.scalar_value();
    return out;
  }
  const auto N = static_cast<std::size_t>(grid.size());
  for (int r = 0; r <= n; ++r) {
    const std::size_t tail = ipow(N, n - r);
    Tensor t(grid, r);
    for (std::size_t x = 0; x < t.values.size(); ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < tail; ++y) s += f[x * tail + y];
      t.values[x] = s;
    }
    const double coef = binomial(n, r) * std::pow(grid.width() / 2.0, n - r);
    out.add(Kernel(std::move(t)).scaled(coef));
  }
  return out;
}

Kernel slice(const Kernel& f, int t) {
  if (f.order() < 1) throw DomainError("slice needs order >= 1");
  if (t < 0 || t >= f.grid().size()) throw DomainError("slice index outside the grid");
  const std::size_t len = ipow(static_cast<std::size_t>(f.grid().size()), f.order() - 1);
  const auto begin = f.values().begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(t) * len);
  return Kernel(Tensor(f.grid(), f.order() - 1, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(len))));
}

namespace {

// c_j(t) = I_{j-1}(f_j(t, .)) for every t, j = 1..max_order.
std::vector<std::vector<double>> slice_integrals(const KernelFamily& F, const std::vector<double>& mu) {
  const auto N = static_cast<std::size_t>(F.grid.size());
  std::vector<std::vector<double>> out;
  out.reserve(F.kernels.size());
  for (const Kernel& k : F.kernels) out.push_back(tail_contract(k.values(), N, k.order() - 1, mu));
  return out;
}

}  // namespace

std::vector<double> grad_all(const KernelFamily& F, const PathRealization& path) {
  require_int0(F, "gradient");
  const auto mu = point_measure(F.grid, point_cells(F.grid, path));
  const auto c = slice_integrals(F, mu);
  std::vector<double> g(static_cast<std::size_t>(F.grid.size()), 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t t = 0; t < g.size(); ++t) g[t] += static_cast<double>(j + 1) * c[j][t];
  }
  return g;
}

double grad_at(const KernelFamily& F, int t, const PathRealization& path) {
  if (t < 0 || t >= F.grid.size()) throw DomainError("gradient index outside the grid");
  return grad_all(F, path)[static_cast<std::size_t>(t)];
}

double grad_reference(const KernelFamily& F, int t, const PathRealization& path) {
  const GridSpec& grid = F.grid;
  if (t < 0 || t >= grid.size()) throw DomainError("gradient index outside the grid");
  auto cells = point_cells(grid, path);
  const auto b = static_cast<std::size_t>(grid.block(t));
  cells[b] = grid.cell(t);
  const double forced = eval_family_cells(F, cells);
  double avg = 0.0;
  for (int c = 0; c < grid.M; ++c) {
    cells[b] = c;
    avg += eval_family_cells(F, cells);
  }
  return forced - avg / grid.M;
}

namespace {

template <class Fn>
KernelFamily scale_orders(const KernelFamily& F, Fn factor) {
  KernelFamily out(F.grid);
  for (const Kernel& k : F.kernels) out.kernels.push_back(k.scaled(factor(k.order())));
  return out;
}

}  // namespace

KernelFamily apply_L(const KernelFamily& F) {
  return scale_orders(F, [](int n) { return -static_cast<double>(n); });
}

KernelFamily apply_L_inv(const KernelFamily& F) {
  if (F.constant != 0.0) throw DomainError("L^{-1} is defined on centered families only");
  return scale_orders(F, [](int n) { return -1.0 / n; });
}

KernelFamily apply_sqrtL(const KernelFamily& F) {
  return scale_orders(F, [](int n) { return std::sqrt(static_cast<double>(n)); });
}

double exact_second_moment(const KernelFamily& F) {
  const GridSpec& grid = F.grid;
  const double configs = std::pow(static_cast<double>(grid.M), grid.K);
  if (configs > 4194304.0) throw ResourceError("exact enumeration over M^K cell configurations too large");
  std::vector<int> cells(static_cast<std::size_t>(grid.K), 0);
  double s = 0.0;
  for (;;) {
    const double x = eval_family_cells(F, cells);
    s += x * x;
    int b = 0;
    while (b < grid.K && ++cells[static_cast<std::size_t>(b)] == grid.M) cells[static_cast<std::size_t>(b++)] = 0;
    if (b == grid.K) break;
  }
  return s / configs;
}

double isometry_second_moment(const KernelFamily& F) {
  double s = F.constant * F.constant;
  for (const Kernel& k : F.kernels) s += factorial(k.order()) * inner_hat(k, k);
  return s;
}

// ---------------------------------------------------------------------------

SteinReport stein_rhs(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed) {
  if (F.constant != 0.0) throw DomainError("Stein bound needs a centered family");
  require_int0(F, "Stein bound");
  if (paths < 2) throw DomainError("Stein bound needs at least two Monte Carlo paths");
  const GridSpec& grid = F.grid;
  const auto N = static_cast<std::size_t>(grid.size());
  const double half = grid.width() / 2.0;

  SteinReport rep;
  rep.paths = paths;
  rep.ex2 = isometry_second_moment(F);
  rep.term1 = std::abs(1.0 - rep.ex2);

  std::vector<double> inner(paths), quartic(paths);
  const auto total = static_cast<std::int64_t>(paths);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) {
    const auto path = sample_path(grid, seed, static_cast<std::uint64_t>(i));
    const auto mu = point_measure(grid, point_cells(grid, path));
    const auto c = slice_integrals(F, mu);
    double ip = 0.0, q = 0.0;
    for (std::size_t t = 0; t < N; ++t) {
      double grad = 0.0, grad_inv = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        grad += static_cast<double>(j + 1) * c[j][t];
        grad_inv += c[j][t];
      }
      ip += grad * grad_inv;
      q += grad * grad * grad * grad;
    }
    inner[static_cast<std::size_t>(i)] = ip * half;
    quartic[static_cast<std::size_t>(i)] = q * half;
  }

  const double P = static_cast<double>(paths);
  double mean_inner = 0.0, mean_q = 0.0;
  for (std::uint64_t i = 0; i < paths; ++i) {
    mean_inner += inner[i];
    mean_q += quartic[i];
  }
  mean_inner /= P;
  mean_q /= P;
  double m2 = 0.0, m4 = 0.0, var_q = 0.0;
  for (std::uint64_t i = 0; i < paths; ++i) {
    const double d = inner[i] - mean_inner;
    m2 += d * d;
    m4 += d * d * d * d;
    const double e = quartic[i] - mean_q;
    var_q += e * e;
  }
  m4 /= P;
  const double var = m2 / (P - 1.0);
  var_q /= (P - 1.0);

  rep.term2 = std::sqrt(var);
  rep.se_term2 = rep.term2 > 0.0 ? std::sqrt(std::max(m4 - var * var, 0.0) / P) / (2.0 * rep.term2) : 0.0;
  rep.term3 = 2.0 * std::sqrt(rep.ex2 * mean_q);
  rep.se_term3 = mean_q > 0.0 ? std::sqrt(rep.ex2) * std::sqrt(var_q / P) / std::sqrt(mean_q) : 0.0;
  rep.total = rep.term1 + rep.term2 + rep.term3;
  return rep;
}

KernelFamily multiplication_expansion(const Kernel& f, const Kernel& g) {
  require_same_grid(f.grid(), g.grid());
  if (!f.flags().int0 || !g.flags().int0) throw DomainError("product formula needs int0 kernels");
  const int n = f.order();
  const int m = g.order();
  KernelFamily out(f.grid());
  for (int k = 0; k <= std::min(n, m); ++k) {
    for (int i = 0; i <= k; ++i) {
      const double coef = factorial(k) * binomial(m, k) * binomial(n, k) * binomial(k, i);
      out.add(contraction_sym(f, g, k, i).scaled(coef));
    }
  }
  return out;
}

MultiplicationCheck multiplication_check(const Kernel& f, const Kernel& g, const PathRealization& path) {
  const auto expansion = multiplication_expansion(f, g);
  return {eval_integral(f, path) * eval_integral(g, path), eval_family(expansion, path)};
}

ContractionBound contraction_bound_rhs(const KernelFamily& F) {
  require_int0(F, "contraction bound");
  ContractionBound rep;
  rep.ex2 = isometry_second_moment(F);
  double s = 0.0;
  const int top = F.max_order();
  for (int i = 1; i <= top; ++i) {
    const Kernel& fi = F.order(i);
    for (int l = 0; l < i; ++l) s += l2_norm_sq(contraction(fi, fi, i, l));
  }
  for (int i = 2; i <= top; ++i) {
    const Kernel& fi = F.order(i);
    for (int l = 1; l < i; ++l) {
      s += l2_norm_sq(contraction(fi, fi, l, l));
      s += l2_norm_sq(contraction(F.order(l), fi, l, l));
    }
  }
  rep.contraction_sum = s;
  rep.value = std::abs(1.0 - rep.ex2) + std::sqrt(s);
  return rep;
}

NormIdentity norm_identity_check(const KernelFamily& F) {
  NormIdentity rep;
  const double half = F.grid.width() / 2.0;
  for (const Kernel& k : F.kernels) {
    const int n = k.order();
    double slices = 0.0;
    for (int t = 0; t < F.grid.size(); ++t) {
      const Kernel s = slice(k, t);
      slices += inner_hat(s, s) * half;
    }
    const double norm_sq = inner_hat(k, k);
    rep.lhs += n * n * factorial(n - 1) * slices;
    rep.rhs += n * factorial(n) * norm_sq;
    rep.inequality_rhs += n * n * factorial(n) * norm_sq;
  }
  return rep;
}

ContractionInequality contraction_inequalities_check(const Kernel& f, const Kernel& g, int k, int l) {
  const int n = f.order();
  const int m = g.order();
  if (!(0 <= l && l <= k && k <= std::min(n, m))) {
    throw DomainError("contraction inequality needs 0 <= l <= k <= min(n, m)");
  }
  auto holds = [](double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-12) + 1e-300; };
  ContractionInequality rep;
  rep.lhs = l2_norm_sq(contraction(f, g, k, l));
  if (l < k) {
    const double a = l2_norm_sq(contraction(f, f, n, l + n - k));
    const double b = l2_norm_sq(contraction(g, g, m, l + m - k));
    const double cf = std::pow(2.0, 2 * n - 2 * k - 1);
    const double cg = std::pow(2.0, 2 * m - 2 * k - 1);
    rep.rhs = cf * a + cg * b;
    rep.printed_checked = true;
    rep.printed_lhs = cf * rep.lhs;
    rep.printed_rhs = a + cg * b;
    rep.printed_holds = holds(rep.printed_lhs, rep.printed_rhs);
  } else {
    const double a = l2_norm_sq(contraction(f, f, n - k, n - k));
    const double b = l2_norm_sq(contraction(g, g, m - k, m - k));
    rep.rhs = std::pow(2.0, 2 * n - 4 * k - 1) * a + std::pow(2.0, 2 * m - 4 * k - 1) * b;
  }
  rep.holds = holds(rep.lhs, rep.rhs);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

GraphKernelFactors graph_kernel_factors(const PatternGraph& G, long n, double p, const WeightModel& model,
                                        const GridSpec& grid) {
  grid.validate();
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
  if (n < G.num_vertices()) throw DomainError("n must be at least v_G");
  if (grid.K != static_cast<int>(complete_edge_count(n))) {
    throw DomainError("graph kernels need K = n(n-1)/2 blocks");
  }
  const int M = grid.M;
  const double pM = p * M;
  if (!is_integer(pM)) throw AlignmentError("p*M must be an integer (p=" + std::to_string(p) + ", M=" + std::to_string(M) + ")");
  const int cut = static_cast<int>(std::lround(pM));
  if (const auto* tp = std::get_if<TwoPointLaw>(&model.law())) {
    if (!is_integer(tp->q * pM)) throw AlignmentError("two-point atoms need q*p*M to be an integer");
  }

  const int e = G.num_edges();
  const double m1 = moments(model).mean;
  std::vector<double> Q(static_cast<std::size_t>(cut));
  for (int c = 0; c < cut; ++c) Q[static_cast<std::size_t>(c)] = pM * quantile_integral(model, c / pM, (c + 1) / pM);

  GraphKernelFactors out;
  out.grid = grid;
  out.edges = e;
  out.p = p;
  const GridSpec local{1, M};
  const CopyIndex index(G, n);
  for (int k = 0; k <= e; ++k) {
    Tensor g(local, k);
    const double coef = std::pow(p, e - k) / (factorial(e - k) * factorial(k));
    std::vector<int> c(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      decode(i, static_cast<std::size_t>(M), k, c.data());
      double s = (e - k) * m1;
      bool inside = true;
      for (int v : c) {
        if (v >= cut) {
          inside = false;
          break;
        }
        s += Q[static_cast<std::size_t>(v)];
      }
      g.values[i] = inside ? coef * s : 0.0;
    }
    out.g.push_back(std::move(g));

    // Each copy containing the k chosen edges extends in (e-k)! orders.
    const auto K = static_cast<std::size_t>(grid.K);
    std::vector<double> counts(ipow(K, k), 0.0);
    const double ext = factorial(e - k);
    std::vector<int> pos(static_cast<std::size_t>(k)), blk(static_cast<std::size_t>(k));
    const std::size_t choices = ipow(static_cast<std::size_t>(e), k);
    for (std::size_t copy = 0; copy < index.copy_count(); ++copy) {
      const auto edges = index.copy(copy);
      for (std::size_t t = 0; t < choices; ++t) {
        decode(t, static_cast<std::size_t>(e), k, pos.data());
        bool distinct = true;
        for (int a = 0; a < k && distinct; ++a) {
          for (int b = a + 1; b < k; ++b) distinct = distinct && pos[static_cast<std::size_t>(a)] != pos[static_cast<std::size_t>(b)];
        }
        if (!distinct) continue;
        for (int j = 0; j < k; ++j) blk[static_cast<std::size_t>(j)] = static_cast<int>(edges[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])]);
        counts[encode(blk.data(), K, k)] += ext;
      }
    }
    out.counts.push_back(std::move(counts));
  }
  return out;
}

namespace {

KernelFamily assemble_graph_family(const GraphKernelFactors& factors, bool project) {
  const GridSpec& grid = factors.grid;
  KernelFamily out(grid);
  const auto N = static_cast<std::size_t>(grid.size());
  const auto K = static_cast<std::size_t>(grid.K);
  const auto M = static_cast<std::size_t>(grid.M);
  for (int k = 0; k <= factors.edges; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const Kernel local = project ? psi_bar(Kernel(factors.g[kk])) : Kernel(factors.g[kk]);
    if (k == 0) {
      out.constant = local.scalar_value() * factors.counts[0][0];
      continue;
    }
    Tensor h(grid, k);
    std::vector<int> d(kk), b(kk), c(kk);
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      decode(i, N, k, d.data());
      for (std::size_t j = 0; j < kk; ++j) {
        b[j] = d[j] / grid.M;
        c[j] = d[j] % grid.M;
      }
      const double count = factors.counts[kk][encode(b.data(), K, k)];
      if (count != 0.0) h.values[i] = local[encode(c.data(), M, k)] * count;
    }
    out.add(Kernel(std::move(h)));
  }
  return out;
}

}  // namespace

KernelFamily graph_kernels_unprojected(const GraphKernelFactors& factors) {
  return assemble_graph_family(factors, false);
}

KernelFamily graph_kernels(const GraphKernelFactors& factors) { return assemble_graph_family(factors, true); }

KernelFamily graph_kernels(const PatternGraph& G, long n, double p, const WeightModel& model,
                           const GridSpec& grid) {
  return graph_kernels(graph_kernel_factors(G, n, p, model, grid));
}

HostSample host_from_path(const PathRealization& path, long n, double p, const WeightModel& model) {
  std::vector<double> v(path.u.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (1.0 + path.u[k]) / 2.0;
  return HostSample::from_uniforms(n, p, model, std::move(v));
}

ProjectedNorms projected_kernel_norms(const Tensor& g_k, int k, int l) {
  if (g_k.order != k || g_k.grid.K != 1) throw DomainError("expected a local order-k factor on one block");
  if (!(0 <= l && l <= k)) throw DomainError("need 0 <= l <= k");
  const Kernel psi = psi_bar(Kernel(g_k));
  const double w = g_k.grid.width();
  const auto M = static_cast<std::size_t>(g_k.grid.M);
  ProjectedNorms rep;
  for (double x : psi.values()) rep.lhs1 += x * x;
  rep.lhs1 *= std::pow(w, k);
  const std::size_t inner = ipow(M, l), outer = ipow(M, k - l);
  for (std::size_t z = 0; z < outer; ++z) {
    double s = 0.0;
    for (std::size_t x = 0; x < inner; ++x) {
      const double v = psi[x * outer + z];
      s += v * v;
    }
    s *= std::pow(w, l);
    rep.lhs2 += s * s;
  }
  rep.lhs2 *= std::pow(w, k - l);
  return rep;
}

ProjectedRates projected_kernel_rates(int edges, int k, int l, double p, const WeightModel& model) {
  const Moments mo = moments(model);
  const double e = edges;
  ProjectedRates r;
  r.rate1 = std::pow(p, 2 * e - k) * std::pow(1 - p, k - 1) * (mo.variance + (1 - p) * mo.mean * mo.mean);
  r.rate2 = std::pow(p, 4 * e - 3 * k + l) * std::pow(1 - p, k + l - 2) *
            (mo.central4 + (1 - p) * (1 - p) * std::pow(mo.mean, 4));
  return r;
}

// ---------------------------------------------------------------------------

std::vector<double> sample_family(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed) {
  std::vector<double> out(paths);
  const auto total = static_cast<std::int64_t>(paths);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) {
    out[static_cast<std::size_t>(i)] = eval_family(F, sample_path(F.grid, seed, static_cast<std::uint64_t>(i)));
  }
  return out;
}

std::vector<double> sample_family_serial(const KernelFamily& F, std::uint64_t paths, std::uint64_t seed) {
  std::vector<double> out(paths);
  for (std::uint64_t i = 0; i < paths; ++i) out[i] = eval_family(F, sample_path(F.grid, seed, i));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

constexpr int kDumpVersion = 1;

json kernel_json(const Kernel& f) {
  return json{{"order", f.order()},
              {"K", f.grid().K},
              {"M", f.grid().M},
              {"flags",
               {{"symmetric", f.flags().symmetric},
                {"off_delta_zero", f.flags().off_delta_zero},
                {"int0", f.flags().int0}}},
              {"values", f.values()}};
}

LoadedKernel kernel_from(const json& j) {
  const GridSpec grid{j.at("K").get<int>(), j.at("M").get<int>()};
  const int order = j.at("order").get<int>();
  if (grid.K < 1 || grid.M < 1 || order < 0) throw ParseError("kernel dump has a bad grid or order");
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != tensor_size(grid, order)) throw ParseError("kernel dump value count does not match (K*M)^order");
  Kernel k(Tensor(grid, order, std::move(values)));
  Kernel::Flags stored;
  const auto& fl = j.at("flags");
  stored.symmetric = fl.at("symmetric").get<bool>();
  stored.off_delta_zero = fl.at("off_delta_zero").get<bool>();
  stored.int0 = fl.at("int0").get<bool>();
  return {std::move(k), stored};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("kernel dump is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::string kernel_to_json(const Kernel& f) {
  json j = kernel_json(f);
  j["format_version"] = kDumpVersion;
  return j.dump();
}

LoadedKernel kernel_from_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    if (j.at("format_version").get<int>() != kDumpVersion) throw ParseError("unsupported kernel dump format_version");
    return kernel_from(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed kernel dump: ") + e.what());
  }
}

std::string family_to_json(const KernelFamily& F) {
  json kernels = json::array();
  for (const Kernel& k : F.kernels) kernels.push_back(kernel_json(k));
  json j{{"format_version", kDumpVersion},
         {"K", F.grid.K},
         {"M", F.grid.M},
         {"constant", F.constant},
         {"kernels", kernels}};
  return j.dump();
}

LoadedFamily family_from_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    if (j.at("format_version").get<int>() != kDumpVersion) throw ParseError("unsupported family dump format_version");
    const GridSpec grid{j.at("K").get<int>(), j.at("M").get<int>()};
    grid.validate();
    LoadedFamily out{KernelFamily(grid), {}};
    out.family.constant = j.at("constant").get<double>();
    int expected = 1;
    for (const auto& kj : j.at("kernels")) {
      auto loaded = kernel_from(kj);
      if (loaded.kernel.order() != expected++) throw ParseError("family kernels must have orders 1, 2, ...");
      require_same_grid(grid, loaded.kernel.grid());
      out.family.kernels.push_back(std::move(loaded.kernel));
      out.stored_flags.push_back(loaded.stored_flags);
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed family dump: ") + e.what());
  }
}

}  // namespace wclt
