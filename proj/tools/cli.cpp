#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "wclt/chaos.hpp"
#include "wclt/empirical_distance.hpp"
#include "wclt/errors.hpp"
#include "wclt/graph_weight_stats.hpp"
#include "wclt/pattern_graph.hpp"
#include "wclt/rng.hpp"
#include "wclt/stein_bounds.hpp"
#include "wclt/weight_model.hpp"

namespace wclt::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

struct RunConfig {
  std::string subcommand;
  std::string pattern = "triangle";
  long n = 10;
  std::optional<double> p;
  std::string weights = "unif:1";
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  std::string grid = "4,2";
  std::string out;
  std::string in;
  std::string column = "normalized";
  std::vector<long> sweep_n;
  std::vector<double> sweep_p;
  std::string p_rule;
  bool sweep = false;
  double cutoff_c = 0.5;
  std::string fixture;
  bool corrupt = false;
  std::string dump_fixture;
};

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  if (c.subcommand == "distance") {
    j["in"] = c.in;
    j["column"] = c.column;
  } else if (c.subcommand == "chaos-verify") {
    j["grid"] = c.grid;
    j["reps"] = c.reps;
    j["seed"] = c.seed;
    j["fixture"] = c.fixture;
    j["corrupt"] = c.corrupt;
  } else {
    j["pattern"] = c.pattern;
    j["n"] = c.n;
    j["p"] = c.p ? ordered_json(*c.p) : ordered_json(nullptr);
    j["weights"] = c.weights;
    j["reps"] = c.reps;
    j["seed"] = c.seed;
    j["cutoff_c"] = c.cutoff_c;
    j["sweep"] = c.sweep;
    j["sweep_n"] = c.sweep_n;
    j["sweep_p"] = c.sweep_p;
    j["p_rule"] = c.p_rule;
  }
  j["out"] = c.out;
  return j;
}

// Temp file in the destination directory, then rename.
void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) throw DomainError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DomainError("cannot move output into place at '" + path + "'");
  }
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out.empty()) {
    out << content;
  } else {
    write_atomic(c.out, content);
  }
}

void emit_sidecar(const RunConfig& c, const ordered_json& meta) {
  if (!c.out.empty()) write_atomic(c.out + ".json", meta.dump(2) + "\n");
}

ordered_json envelope(const RunConfig& c) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["config"] = config_json(c);
  return j;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridSpec parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("--grid expects K,M");
  try {
    GridSpec g{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    g.validate();
    return g;
  } catch (const std::logic_error&) {
    throw ParseError("--grid expects two integers K,M");
  }
}

double require_p(const RunConfig& c) {
  if (!c.p) throw ParseError("--p is required");
  return *c.p;
}

ordered_json family_json(const PatternFamily& f) {
  return {{"kind", to_string(f.kind)}, {"r", f.r}};
}

ordered_json report_json(const BoundReport& r) {
  ordered_json j;
  j["rate_term"] = r.rate_term;
  j["moment_ratio"] = r.moment_ratio;
  j["bound_value"] = r.bound_value;
  j["regime"] = to_string(r.regime);
  j["threshold"] = r.threshold ? ordered_json(*r.threshold) : ordered_json(nullptr);
  j["cutoff"] = r.cutoff;
  j["family"] = family_json(r.family);
  j["count_bound"] = r.count_bound ? ordered_json(*r.count_bound) : ordered_json(nullptr);
  j["rate_only"] = r.rate_only;
  return j;
}

// ---------------------------------------------------------------------------

int cmd_bound(const RunConfig& c, std::ostream& out) {
  const PatternGraph g = load_pattern(c.pattern);
  const WeightModel model = WeightModel::parse(c.weights);

  if (c.sweep) {
    if (c.sweep_n.empty() || c.sweep_p.empty()) throw ParseError("--sweep needs --sweep-n and --sweep-p");
    std::ostringstream csv;
    csv << "n,p,rate_term,moment_ratio,bound_value,regime,regime_bound\n";
    for (long n : c.sweep_n) {
      for (double p : c.sweep_p) {
        const BoundReport r = wasserstein_bound(g, n, p, model, c.cutoff_c);
        std::string regime_value = "";
        try {
          regime_value = fmt(regime_bound(g, n, p, model, c.cutoff_c).bound_value);
        } catch (const DomainError&) {
        } catch (const DegenerateError&) {
        }
        csv << n << ',' << fmt(p) << ',' << fmt(r.rate_term) << ',' << fmt(r.moment_ratio) << ','
            << fmt(r.bound_value) << ',' << to_string(r.regime) << ',' << regime_value << '\n';
      }
    }
    emit(c, csv.str(), out);
    emit_sidecar(c, envelope(c));
    return kExitOk;
  }

  const double p = require_p(c);
  ordered_json j = envelope(c);
  j["report"] = report_json(wasserstein_bound(g, c.n, p, model, c.cutoff_c));
  try {
    j["regime_bound"] = report_json(regime_bound(g, c.n, p, model, c.cutoff_c));
  } catch (const Error& e) {
    j["regime_bound"] = {{"error", e.what()}};
  }
  try {
    j["cutoff_bound"] = report_json(cutoff_bound(g, c.n, p, model, c.cutoff_c));
  } catch (const Error& e) {
    j["cutoff_bound"] = {{"error", e.what()}};
  }
  j["asymptotic_variance"] = asymptotic_variance(g, c.n, p, model);
  try {
    j["exact_variance"] = exact_variance(g, c.n, p, model);
  } catch (const Error&) {
    j["exact_variance"] = nullptr;
  }
  j["exact_mean"] = exact_mean(g, c.n, p, model);
  emit(c, j.dump(2) + "\n", out);
  return kExitOk;
}

ordered_json census_json(const PairCensus& census) {
  ordered_json j = ordered_json::object();
  for (const auto& [h, count] : census) j[std::to_string(h)] = count;
  return j;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const PatternGraph g = load_pattern(c.pattern);
  const WeightModel model = WeightModel::parse(c.weights);
  const SampleSet set = normalized_samples(g, c.n, require_p(c), model, c.reps, c.seed);
  std::ostringstream csv;
  csv << "replicate,raw_w,normalized\n";
  for (const auto& s : set.samples) csv << s.replicate << ',' << fmt(s.raw_w) << ',' << fmt(s.normalized) << '\n';
  emit(c, csv.str(), out);
  ordered_json meta = envelope(c);
  meta["exact_mean"] = set.exact_mean;
  meta["exact_variance"] = set.exact_variance;
  meta["census"] = census_json(set.census);
  meta["rows"] = set.samples.size();
  emit_sidecar(c, meta);
  return kExitOk;
}

std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw DomainError("'" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw ParseError("'" + path + "' has no column '" + column + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t i = 0;
    bool found = false;
    while (std::getline(ss, cell, ',')) {
      if (i++ == col) {
        found = true;
        break;
      }
    }
    if (!found) throw ParseError("line " + std::to_string(row) + " has no value for '" + column + "'");
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(row) + ": bad number '" + cell + "'");
    }
  }
  return values;
}

int cmd_distance(const RunConfig& c, std::ostream& out) {
  if (c.in.empty()) throw ParseError("--in is required");
  const auto values = read_column(c.in, c.column);
  const DistanceResult d = wasserstein1_to_normal(values);
  ordered_json j = envelope(c);
  j["w1"] = d.w1;
  j["sample_size"] = d.sample_size;
  j["estimated_statistical_error"] = d.estimated_statistical_error;
  emit(c, j.dump(2) + "\n", out);
  return kExitOk;
}

double p_from_rule(const RunConfig& c, long n) {
  if (c.p_rule.empty()) return require_p(c);
  const auto colon = c.p_rule.find(':');
  const std::string kind = c.p_rule.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : c.p_rule.substr(colon + 1);
  try {
    if (kind == "const") return std::stod(args);
    if (kind == "pow") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw ParseError("pow rule expects pow:s,a");
      return std::stod(args.substr(0, comma)) * std::pow(static_cast<double>(n), -std::stod(args.substr(comma + 1)));
    }
  } catch (const std::logic_error&) {
    throw ParseError("bad --p-rule '" + c.p_rule + "'");
  }
  throw ParseError("unknown --p-rule '" + c.p_rule + "' (use const:x or pow:s,a)");
}

int cmd_rate_sweep(const RunConfig& c, std::ostream& out) {
  if (c.sweep_n.empty()) throw ParseError("--sweep-n must list at least one n");
  const PatternGraph g = load_pattern(c.pattern);
  const WeightModel model = WeightModel::parse(c.weights);
  std::ostringstream csv;
  csv << "n,p,empirical_dw,rate_term,ratio\n";
  ordered_json rows = ordered_json::array();
  for (long n : c.sweep_n) {
    const double p = p_from_rule(c, n);
    const SampleSet set = normalized_samples(g, n, p, model, c.reps, c.seed);
    std::vector<double> z;
    z.reserve(set.samples.size());
    for (const auto& s : set.samples) z.push_back(s.normalized);
    const double dw = wasserstein1_to_normal(z).w1;
    const double rate = rate_term(g, n, p);
    csv << n << ',' << fmt(p) << ',' << fmt(dw) << ',' << fmt(rate) << ',' << fmt(dw / rate) << '\n';
    rows.push_back({{"n", n}, {"exact_mean", set.exact_mean}, {"exact_variance", set.exact_variance}});
  }
  emit(c, csv.str(), out);
  ordered_json meta = envelope(c);
  meta["rows"] = rows;
  emit_sidecar(c, meta);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// chaos-verify

struct Check {
  Check(std::string n, double deviation, double tol) : name(std::move(n)), max_deviation(deviation), tolerance(tol) {}

  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string note;
};

class Uniforms {
 public:
  explicit Uniforms(std::uint64_t seed) : key_(mix64(seed ^ kWeightStreamTag)) {}
  double next() { return 2.0 * counter_uniform(key_, 0, counter_++) - 1.0; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Kernel random_raw(const GridSpec& grid, int order, Uniforms& u) {
  Tensor t(grid, order);
  for (double& x : t.values) x = u.next();
  return symmetrize(t);
}

void track(Check& c, double deviation) { c.max_deviation = std::max(c.max_deviation, deviation); }

void finish(Check& c) { c.passed = c.passed && c.max_deviation <= c.tolerance; }

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

std::vector<Check> identity_suite(const GridSpec& grid, std::uint64_t paths, std::uint64_t seed) {
  Uniforms u(seed);
  const Kernel raw1 = random_raw(grid, 1, u);
  const Kernel raw2 = random_raw(grid, 2, u);
  const Kernel f1 = psi_bar(raw1);
  const Kernel f2 = psi_bar(raw2);
  KernelFamily F(grid);
  F.add(f1);
  F.add(f2);

  std::vector<Check> checks;
  Check product{"product_formula", 0, 1e-9};
  Check ustat{"ustat_decomposition", 0, 1e-9};
  Check psi{"psi_invariance", 0, 1e-9};
  Check reference{"integral_reference", 0, 1e-9};
  Check grad{"gradient_formula", 0, 1e-9};
  const auto e11 = multiplication_expansion(f1, f1);
  const auto e12 = multiplication_expansion(f1, f2);
  const auto e22 = multiplication_expansion(f2, f2);
  const auto decomposition = ustat_decompose(raw2);
  for (std::uint64_t i = 0; i < paths; ++i) {
    const auto path = sample_path(grid, seed, i);
    const double i1 = eval_integral(f1, path), i2 = eval_integral(f2, path);
    track(product, rel(i1 * i1, eval_family(e11, path)));
    track(product, rel(i1 * i2, eval_family(e12, path)));
    track(product, rel(i2 * i2, eval_family(e22, path)));
    const double us = eval_ustat(raw2, path);
    track(ustat, rel(us, eval_family(decomposition, path)));
    track(psi, rel(eval_integral(raw2, path), i2));
    track(psi, rel(eval_integral(raw1, path), i1));
    track(reference, rel(eval_integral_reference(raw2, path), eval_integral(raw2, path)));
    if (i < 100) {
      const auto g = grad_all(F, path);
      for (int t = 0; t < grid.size(); ++t) track(grad, rel(grad_reference(F, t, path), g[static_cast<std::size_t>(t)]));
    }
  }
  for (Check* c : {&product, &ustat, &psi, &reference, &grad}) {
    finish(*c);
    checks.push_back(*c);
  }

  Check norms{"norm_identity", 0, 1e-12};
  const auto ni = norm_identity_check(F);
  track(norms, std::abs(ni.lhs - ni.rhs) / std::max(1.0, ni.rhs));
  norms.passed = ni.lhs <= ni.inequality_rhs * (1 + 1e-12);
  finish(norms);
  checks.push_back(norms);

  Check iso{"isometry_exact", 0, 1e-12};
  try {
    const double exact = exact_second_moment(F);
    const double formula = isometry_second_moment(F);
    track(iso, std::abs(exact - formula) / std::max(1.0, formula));
  } catch (const ResourceError&) {
    iso.note = "skipped: M^K too large for exact enumeration";
  }
  finish(iso);
  checks.push_back(iso);

  Check ineq{"contraction_inequalities", 0, 0};
  int printed_violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Kernel a = psi_bar(random_raw(grid, 1 + trial % 2, u));
    const Kernel b = psi_bar(random_raw(grid, 1 + (trial / 2) % 2, u));
    for (int k = 0; k <= std::min(a.order(), b.order()); ++k) {
      for (int l = 0; l <= k; ++l) {
        const auto r = contraction_inequalities_check(a, b, k, l);
        if (!r.holds) {
          ineq.passed = false;
          track(ineq, r.lhs - r.rhs);
        }
        if (r.printed_checked && !r.printed_holds) ++printed_violations;
      }
    }
  }
  ineq.note = "statement-as-printed variant violated " + std::to_string(printed_violations) + " times";
  checks.push_back(ineq);

  Check graph{"graph_kernel_identity", 0, 1e-9};
  struct Case {
    long n;
    int M;
    WeightModel model;
  };
  const PatternGraph triangle = named_pattern("triangle");
  for (const Case& gc : {Case{3, 2, WeightModel::constant(1)}, Case{4, 4, WeightModel::two_point(1, 3, 0.5)}}) {
    const GridSpec gg{static_cast<int>(complete_edge_count(gc.n)), gc.M};
    const auto family = graph_kernels(triangle, gc.n, 0.5, gc.model, gg);
    for (std::uint64_t i = 0; i < paths; ++i) {
      const auto path = sample_path(gg, seed, i);
      const double w = combined_weight(triangle, host_from_path(path, gc.n, 0.5, gc.model));
      track(graph, rel(w, eval_family(family, path)));
    }
  }
  finish(graph);
  checks.push_back(graph);

  Check dual{"dual_weight_algorithms", 0, 1e-9};
  for (const char* name : {"triangle", "path:3", "cycle:4"}) {
    const PatternGraph g = named_pattern(name);
    const CopyIndex index(g, 8);
    const WeightModel model = WeightModel::exponential(1.0);
    for (std::uint64_t i = 0; i < std::min<std::uint64_t>(paths, 300); ++i) {
      const HostSample host = HostSample::draw(8, 0.5, model, seed, i);
      const double enumerated = combined_weight_enumerated(g, host);
      track(dual, rel(enumerated, combined_weight_edge_centric(index, host)));
      track(dual, rel(enumerated, combined_weight_copy_sum(index, host)));
    }
  }
  finish(dual);
  checks.push_back(dual);
  return checks;
}

KernelFamily default_fixture(const GridSpec& grid, std::uint64_t seed) {
  Uniforms u(seed);
  KernelFamily F(grid);
  F.add(psi_bar(random_raw(grid, 1, u)));
  F.add(psi_bar(random_raw(grid, 2, u)));
  return F;
}

// Breaks symmetry and int0 of the highest-order kernel at one in-Delta entry.
KernelFamily corrupt_family(const KernelFamily& F) {
  KernelFamily out(F.grid);
  out.constant = F.constant;
  out.kernels = F.kernels;
  if (out.kernels.empty()) throw DomainError("cannot corrupt an empty family");
  Kernel& k = out.kernels.back();
  Tensor t = k.tensor();
  // (block 0 cell 0, block 1 cell 0, ...) lies in Delta when K >= order.
  const std::size_t target = k.order() >= 2 && F.grid.K >= 2 ? static_cast<std::size_t>(F.grid.M) : 0;
  t.values[target] += 1.0 + k.max_abs();
  k = Kernel(std::move(t));
  return out;
}

std::vector<Check> fixture_suite(const LoadedFamily& loaded, std::uint64_t paths, std::uint64_t seed) {
  const KernelFamily& F = loaded.family;
  std::vector<Check> checks;

  Check flags{"fixture_flags", 0, 0};
  for (std::size_t i = 0; i < F.kernels.size(); ++i) {
    if (i < loaded.stored_flags.size() && !(loaded.stored_flags[i] == F.kernels[i].flags())) {
      flags.passed = false;
      flags.note = "stored flags disagree with recomputed flags for order " + std::to_string(i + 1);
    }
  }
  checks.push_back(flags);

  Check sym{"fixture_symmetry", 0, 1e-12};
  for (const Kernel& k : F.kernels) {
    const Kernel s = symmetrize(k.tensor());
    for (std::size_t i = 0; i < k.size(); ++i) track(sym, std::abs(s[i] - k[i]));
  }
  finish(sym);
  checks.push_back(sym);

  Check int0{"fixture_int0", 0, 1e-12};
  for (const Kernel& k : F.kernels) {
    const Kernel psi = psi_bar(k);
    for (std::size_t i = 0; i < k.size(); ++i) track(int0, std::abs(psi[i] - k[i]));
  }
  finish(int0);
  checks.push_back(int0);

  Check product{"fixture_product_formula", 0, 1e-9};
  if (F.all_int0()) {
    for (const Kernel& a : F.kernels) {
      for (const Kernel& b : F.kernels) {
        const auto expansion = multiplication_expansion(a, b);
        for (std::uint64_t i = 0; i < paths; ++i) {
          const auto path = sample_path(F.grid, seed, i);
          track(product, rel(eval_integral(a, path) * eval_integral(b, path), eval_family(expansion, path)));
        }
      }
    }
  } else {
    product.passed = false;
    product.note = "fixture kernels are not int0";
  }
  finish(product);
  checks.push_back(product);

  Check norms{"fixture_norm_identity", 0, 1e-12};
  const auto ni = norm_identity_check(F);
  track(norms, std::abs(ni.lhs - ni.rhs) / std::max(1.0, ni.rhs));
  finish(norms);
  checks.push_back(norms);
  return checks;
}

int cmd_chaos_verify(const RunConfig& c, std::ostream& out) {
  const GridSpec grid = parse_grid(c.grid);
  if (!c.dump_fixture.empty()) {
    write_atomic(c.dump_fixture, family_to_json(default_fixture(grid, c.seed)) + "\n");
  }
  std::vector<Check> checks = identity_suite(grid, c.reps, c.seed);
  if (!c.fixture.empty()) {
    std::ifstream f(c.fixture);
    if (!f) throw ParseError("cannot read fixture '" + c.fixture + "'");
    std::stringstream buffer;
    buffer << f.rdbuf();
    LoadedFamily loaded = family_from_json(buffer.str());
    if (c.corrupt) loaded.family = corrupt_family(loaded.family);
    for (auto& check : fixture_suite(loaded, std::min<std::uint64_t>(c.reps, 200), c.seed)) checks.push_back(check);
  } else if (c.corrupt) {
    throw ParseError("--corrupt needs --fixture");
  }

  ordered_json j = envelope(c);
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const Check& ch : checks) {
    all = all && ch.passed;
    arr.push_back({{"name", ch.name},
                   {"passed", ch.passed},
                   {"max_deviation", ch.max_deviation},
                   {"tolerance", ch.tolerance},
                   {"note", ch.note}});
  }
  j["checks"] = arr;
  j["all_passed"] = all;
  emit(c, j.dump(2) + "\n", out);
  return all ? kExitOk : kExitChecksFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted subgraph CLT toolkit"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_graph_opts = [&c](CLI::App* s) {
    s->add_option("--pattern", c.pattern, "named pattern or pattern file");
    s->add_option("--n", c.n, "host graph size");
    s->add_option("--p", c.p, "edge retention probability");
    s->add_option("--weights", c.weights, "const:c | unif:b | exp:lambda | twopoint:a,b,q");
    s->add_option("--out", c.out, "output path (stdout if omitted)");
  };

  auto* bound = app.add_subcommand("bound", "rate factors of the Wasserstein bound");
  add_graph_opts(bound);
  bound->add_option("--cutoff-c", c.cutoff_c, "regime cutoff c in (0,1)");
  bound->add_flag("--sweep", c.sweep, "CSV over the --sweep-n x --sweep-p grid");
  bound->add_option("--sweep-n", c.sweep_n)->delimiter(',');
  bound->add_option("--sweep-p", c.sweep_p)->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "normalized Monte Carlo samples of W");
  add_graph_opts(simulate);
  simulate->add_option("--reps", c.reps, "replicates");
  simulate->add_option("--seed", c.seed, "seed");

  auto* distance = app.add_subcommand("distance", "W1 distance of a sample column to N(0,1)");
  distance->add_option("--in", c.in, "samples CSV")->required();
  distance->add_option("--column", c.column, "column name");
  distance->add_option("--out", c.out, "output path (stdout if omitted)");

  auto* verify = app.add_subcommand("chaos-verify", "run the chaos identity suite");
  verify->add_option("--grid", c.grid, "K,M");
  verify->add_option("--reps", c.reps, "paths per pathwise check");
  verify->add_option("--seed", c.seed, "seed");
  verify->add_option("--fixture", c.fixture, "kernel family dump to verify");
  verify->add_flag("--corrupt", c.corrupt, "perturb the fixture before verifying");
  verify->add_option("--dump-fixture", c.dump_fixture, "write the default fixture family here");
  verify->add_option("--out", c.out, "output path (stdout if omitted)");

  auto* sweep = app.add_subcommand("rate-sweep", "empirical d_W against the rate term over n");
  add_graph_opts(sweep);
  sweep->add_option("--reps", c.reps, "replicates per n");
  sweep->add_option("--seed", c.seed, "seed");
  sweep->add_option("--sweep-n", c.sweep_n)->delimiter(',');
  sweep->add_option("--p-rule", c.p_rule, "const:x or pow:s,a (p = s n^-a)");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("wclt");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bound) {
      c.subcommand = "bound";
      return cmd_bound(c, out);
    }
    if (*simulate) {
      c.subcommand = "simulate";
      return cmd_simulate(c, out);
    }
    if (*distance) {
      c.subcommand = "distance";
      return cmd_distance(c, out);
    }
    if (*verify) {
      c.subcommand = "chaos-verify";
      return cmd_chaos_verify(c, out);
    }
    c.subcommand = "rate-sweep";
    return cmd_rate_sweep(c, out);
  } catch (const DegenerateError& e) {
    err << "degenerate configuration: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace wclt::cli
