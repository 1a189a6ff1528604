#pragma once

// Configuration-driven n-sweeps: class error brackets against an order
// expression, ratio bands, log-log slopes and a verdict per spec.
//
// Config text is flat "key = value" with '#' comments. Global keys come
// first; each "[spec]" line opens a block that may override the sweep keys.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "zygmund/class_error.hpp"
#include "zygmund/errors.hpp"
#include "zygmund/format.hpp"
#include "zygmund/numerics.hpp"
#include "zygmund/order_bounds.hpp"

namespace zygmund {

// Config and file-system problems, kept apart from numerical failures so the
// command line can map them to their own exit code.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

enum class BoundKind { theorem1, theorem2, theorem3 };

inline char const* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::theorem1: return "theorem1";
    case BoundKind::theorem2: return "theorem2";
    case BoundKind::theorem3: return "theorem3";
  }
  return "?";
}

struct SweepSettings {
  std::size_t n_start = 8;
  double n_factor = 2.0;
  std::size_t n_count = 10;
  double tol = 1e-6;
  double ratio_low = 0.05;
  double ratio_high = 20.0;
  double slope_tol = 0.15;
};

struct ExperimentSpec {
  std::string name;
  ClassSpec cls;
  BoundKind bound = BoundKind::theorem1;
  SweepSettings sweep;
  std::vector<std::size_t> n_grid;
};

struct ExperimentConfig {
  SweepSettings defaults;
  std::vector<ExperimentSpec> specs;
  std::string output_dir;  // empty: no files written
  std::size_t parallelism = 1;
};

// n_j = round(start * factor^j); must come out strictly increasing.
inline std::vector<std::size_t> geometric_grid(std::size_t start, double factor, std::size_t count) {
  if (start < 1) throw ConfigError("n_start must be >= 1");
  if (!(factor > 1.0)) throw ConfigError("n_factor must be > 1");
  if (count < 1) throw ConfigError("n_count must be >= 1");
  std::vector<std::size_t> grid;
  double n = static_cast<double>(start);
  for (std::size_t j = 0; j < count; ++j) {
    auto const v = static_cast<std::size_t>(std::llround(n));
    if (!grid.empty() && v <= grid.back())
      throw ConfigError("n grid is not strictly increasing at index " + std::to_string(j));
    grid.push_back(v);
    n *= factor;
  }
  return grid;
}

// Default worker count: ZYGMUND_THREADS if set, else 1.
inline std::size_t default_parallelism() {
  if (char const* env = std::getenv("ZYGMUND_THREADS")) {
    char* end = nullptr;
    long const v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

namespace detail {

inline double config_real(std::string_view value, std::string const& key, int line) {
  try {
    return parse_double(value, key);
  } catch (InvalidArgument const&) {
    throw ConfigError("line " + std::to_string(line) + ": " + key + " needs a decimal number, got '" +
                      std::string(value) + "'");
  }
}

inline std::size_t config_count(std::string_view value, std::string const& key, int line) {
  double const v = config_real(value, key, line);
  if (v < 0.0 || v != std::floor(v) || v > 1e15)
    throw ConfigError("line " + std::to_string(line) + ": " + key + " needs a non-negative integer, got '" +
                      std::string(value) + "'");
  return static_cast<std::size_t>(v);
}

inline bool apply_sweep_key(SweepSettings& s, std::string const& key, std::string_view value, int line) {
  if (key == "n_start") s.n_start = config_count(value, key, line);
  else if (key == "n_factor") s.n_factor = config_real(value, key, line);
  else if (key == "n_count") s.n_count = config_count(value, key, line);
  else if (key == "tol") s.tol = config_real(value, key, line);
  else if (key == "ratio_low") s.ratio_low = config_real(value, key, line);
  else if (key == "ratio_high") s.ratio_high = config_real(value, key, line);
  else if (key == "slope_tol") s.slope_tol = config_real(value, key, line);
  else return false;
  return true;
}

inline void check_sweep(SweepSettings const& s, std::string const& where) {
  if (!(s.tol > 0.0)) throw ConfigError(where + ": tol must be > 0");
  if (!(s.ratio_low > 0.0) || !(s.ratio_low < s.ratio_high))
    throw ConfigError(where + ": need 0 < ratio_low < ratio_high");
  if (!(s.slope_tol >= 0.0)) throw ConfigError(where + ": slope_tol must be >= 0");
}

struct RawSpec {
  int line = 0;
  std::map<std::string, std::string> fields;
  SweepSettings sweep;
};

inline ExperimentSpec build_spec(RawSpec const& raw, std::size_t index) {
  std::string const where = "[spec] at line " + std::to_string(raw.line);
  auto const get = [&](std::string const& key) -> std::optional<std::string> {
    auto const it = raw.fields.find(key);
    if (it == raw.fields.end()) return std::nullopt;
    return it->second;
  };
  auto const require = [&](std::string const& key) {
    auto v = get(key);
    if (!v) throw ConfigError(where + ": missing '" + key + "'");
    return *v;
  };
  auto const real = [&](std::string const& key, double fallback) {
    auto v = get(key);
    return v ? config_real(*v, key, raw.line) : fallback;
  };

  std::string const name = get("name").value_or("spec" + std::to_string(index + 1));
  if (name.empty() || name.find_first_of("/\\ \t") != std::string::npos)
    throw ConfigError(where + ": name '" + name + "' is not usable as a file name");

  PsiFamily family = [&] {
    try {
      return PsiFamily::parse(require("family"));
    } catch (ConfigError const&) {
      throw;
    } catch (InvalidArgument const& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }();

  std::string const method_text = get("method").value_or("zygmund");
  ClassSpec::Method method;
  if (method_text == "zygmund") method = ClassSpec::Method::zygmund;
  else if (method_text == "fejer") method = ClassSpec::Method::fejer;
  else throw ConfigError(where + ": method must be zygmund or fejer, got '" + method_text + "'");

  std::string const bound_text = get("bound").value_or("theorem1");
  BoundKind bound;
  if (bound_text == "theorem1") bound = BoundKind::theorem1;
  else if (bound_text == "theorem2") bound = BoundKind::theorem2;
  else if (bound_text == "theorem3") bound = BoundKind::theorem3;
  else throw ConfigError(where + ": bound must be theorem1, theorem2 or theorem3, got '" + bound_text + "'");

  double const p = real("p", 2.0), beta = real("beta", 0.0), s = real("s", 1.0);
  std::optional<ClassSpec> cls;
  try {
    cls.emplace(std::move(family), beta, p, s, method);
  } catch (InvalidArgument const& e) {
    throw ConfigError(where + ": " + e.what());
  }
  check_sweep(raw.sweep, where);
  return {name, std::move(*cls), bound, raw.sweep,
          geometric_grid(raw.sweep.n_start, raw.sweep.n_factor, raw.sweep.n_count)};
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.parallelism = default_parallelism();
  std::vector<detail::RawSpec> raws;
  std::string line_text;
  int line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    std::string_view body = line_text;
    if (auto const hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    if (body == "[spec]") {
      detail::RawSpec raw;
      raw.line = line;
      raw.sweep = cfg.defaults;  // globals seen so far
      raws.push_back(std::move(raw));
      continue;
    }
    if (body.front() == '[') throw ConfigError("line " + std::to_string(line) + ": unknown section " + std::string(body));
    auto const eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    std::string const key(trim(body.substr(0, eq)));
    std::string_view const value = trim(body.substr(eq + 1));
    if (raws.empty()) {
      if (detail::apply_sweep_key(cfg.defaults, key, value, line)) continue;
      if (key == "output_dir") cfg.output_dir = std::string(value);
      else if (key == "parallelism") {
        cfg.parallelism = detail::config_count(value, key, line);
        if (cfg.parallelism < 1) throw ConfigError("line " + std::to_string(line) + ": parallelism must be >= 1");
      } else
        throw ConfigError("line " + std::to_string(line) + ": unknown global key '" + key + "'");
      continue;
    }
    detail::RawSpec& raw = raws.back();
    if (detail::apply_sweep_key(raw.sweep, key, value, line)) continue;
    static constexpr std::string_view spec_keys[] = {"name", "family", "p", "beta", "s", "method", "bound"};
    if (std::find(std::begin(spec_keys), std::end(spec_keys), key) == std::end(spec_keys))
      throw ConfigError("line " + std::to_string(line) + ": unknown spec key '" + key + "'");
    if (!raw.fields.emplace(key, std::string(value)).second)
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
  }
  detail::check_sweep(cfg.defaults, "globals");
  geometric_grid(cfg.defaults.n_start, cfg.defaults.n_factor, cfg.defaults.n_count);
  for (std::size_t i = 0; i < raws.size(); ++i) cfg.specs.push_back(detail::build_spec(raws[i], i));
  for (std::size_t i = 0; i < cfg.specs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (cfg.specs[i].name == cfg.specs[j].name) throw ConfigError("duplicate spec name '" + cfg.specs[i].name + "'");
  return cfg;
}

inline ExperimentConfig parse_config_text(std::string const& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

struct RatioRow {
  std::size_t n = 0;
  double U = std::numeric_limits<double>::quiet_NaN();
  double L = std::numeric_limits<double>::quiet_NaN();
  double B = std::numeric_limits<double>::quiet_NaN();
  double U_over_B = std::numeric_limits<double>::quiet_NaN();
  double L_over_B = std::numeric_limits<double>::quiet_NaN();
  double quad_err = std::numeric_limits<double>::quiet_NaN();
  double trunc_err = std::numeric_limits<double>::quiet_NaN();
  std::string error;       // empty when the row computed
  bool not_applicable = false;  // the error says the bound or class does not exist here
  bool parity_warning = false;

  bool ok() const { return error.empty(); }
};

enum class Verdict { pass, fail, hypotheses_violated, not_applicable };

inline char const* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::hypotheses_violated: return "hypotheses-violated";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "?";
}

struct RatioReport {
  std::string name;
  BoundKind bound = BoundKind::theorem1;
  std::vector<RatioRow> rows;
  double max_ratio = std::numeric_limits<double>::quiet_NaN();
  double min_ratio = std::numeric_limits<double>::quiet_NaN();
  double slope_U = std::numeric_limits<double>::quiet_NaN();
  double slope_B = std::numeric_limits<double>::quiet_NaN();
  bool band_ok = false;
  bool slope_ok = false;
  bool hypotheses_ok = false;
  std::string hypothesis_note;
  Verdict verdict = Verdict::not_applicable;
};

inline RatioRow compute_row(ExperimentSpec const& spec, std::size_t n) {
  RatioRow row;
  row.n = n;
  try {
    ErrorConfig ecfg;
    ecfg.tol = spec.sweep.tol;
    BoundValue bound;
    switch (spec.bound) {
      case BoundKind::theorem1: bound = theory_bound(spec.cls, n); break;
      case BoundKind::theorem2: bound = mc_simplified_bound(spec.cls, n); break;
      case BoundKind::theorem3: bound = theorem3_bound(spec.cls, n); break;
    }
    ErrorBracket const b = error_bracket(spec.cls, n, ecfg);
    row.U = b.upper;
    row.L = b.lower;
    row.B = bound.value;
    row.U_over_B = b.upper / bound.value;
    row.L_over_B = b.lower / bound.value;
    row.quad_err = b.quad_err;
    row.trunc_err = b.trunc_err;
    row.parity_warning = bound.parity_warning;
  } catch (DivergentTail const& e) {
    row.error = e.what();
    row.not_applicable = true;
  } catch (ConstraintViolated const& e) {
    row.error = e.what();
    row.not_applicable = true;
  } catch (Error const& e) {
    row.error = e.what();
  }
  return row;
}

namespace detail {

// Runs task(i) for i in [0, count) on up to `threads` workers. Each result
// lands in its own slot, so the outcome does not depend on scheduling.
template <class Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  for (auto& t : pool) t.join();
}

inline std::string describe_hypotheses(ConditionsReport const& c) {
  std::string note;
  auto const add = [&](bool ok, char const* what) {
    if (ok) return;
    if (!note.empty()) note += "; ";
    note += what;
  };
  add(c.convergence_ok, "tail sum diverges");
  add(c.alpha_ok, "inf alpha below threshold");
  add(c.m0_ok, "g_1/p not in M_0");
  add(c.gm_ok, "GM+ fails");
  add(c.ga_ok, "GA+ fails");
  return note;
}

}  // namespace detail

inline void summarize(RatioReport& report, ExperimentSpec const& spec) {
  std::vector<RatioRow const*> good;
  bool all_not_applicable = !report.rows.empty();
  bool any_error = false;
  for (auto const& row : report.rows) {
    if (row.ok()) {
      good.push_back(&row);
      all_not_applicable = false;
    } else {
      any_error = true;
      if (!row.not_applicable) all_not_applicable = false;
    }
  }
  if (all_not_applicable || report.rows.empty()) {
    report.verdict = Verdict::not_applicable;
    return;
  }

  report.band_ok = !any_error;
  for (auto const* row : good) {
    for (double r : {row->U_over_B, row->L_over_B}) {
      if (!(r >= spec.sweep.ratio_low && r <= spec.sweep.ratio_high)) report.band_ok = false;
      report.max_ratio = std::isnan(report.max_ratio) ? r : std::max(report.max_ratio, r);
      report.min_ratio = std::isnan(report.min_ratio) ? r : std::min(report.min_ratio, r);
    }
  }

  // slopes on the top half of the grid
  std::size_t const from = good.size() / 2;
  std::vector<double> x, yu, yb;
  for (std::size_t i = from; i < good.size(); ++i) {
    x.push_back(std::log(static_cast<double>(good[i]->n)));
    yu.push_back(std::log(good[i]->U));
    yb.push_back(std::log(good[i]->B));
  }
  if (x.size() >= 2) {
    report.slope_U = fit_slope(x, yu);
    report.slope_B = fit_slope(x, yb);
    report.slope_ok = std::abs(report.slope_U - report.slope_B) <= spec.sweep.slope_tol;
  }

  bool const criteria = report.band_ok && report.slope_ok;
  if (!report.hypotheses_ok)
    report.verdict = Verdict::hypotheses_violated;
  else
    report.verdict = criteria ? Verdict::pass : Verdict::fail;
}

// One report per spec, in config order. Rows and hypothesis checks run in
// parallel; each lands in a fixed slot.
inline std::vector<RatioReport> run_sweep(ExperimentConfig const& cfg) {
  std::vector<RatioReport> reports(cfg.specs.size());
  std::vector<std::pair<std::size_t, std::size_t>> tasks;  // (spec, row); row = npos: hypotheses
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    reports[i].name = cfg.specs[i].name;
    reports[i].bound = cfg.specs[i].bound;
    reports[i].rows.resize(cfg.specs[i].n_grid.size());
    tasks.emplace_back(i, std::string::npos);
    for (std::size_t j = 0; j < cfg.specs[i].n_grid.size(); ++j) tasks.emplace_back(i, j);
  }
  // hypotheses are cheap but independent of the rows; the bound kind adds
  // its own requirement on top of the Theorem 1 conditions
  std::vector<ConditionsReport> conditions(cfg.specs.size());
  std::vector<std::string> extra(cfg.specs.size());
  detail::parallel_for(tasks.size(), cfg.parallelism, [&](std::size_t t) {
    auto const [i, j] = tasks[t];
    ExperimentSpec const& spec = cfg.specs[i];
    if (j != std::string::npos) {
      reports[i].rows[j] = compute_row(spec, spec.n_grid[j]);
      return;
    }
    conditions[i] = conditions_report(spec.cls);
    if (spec.bound == BoundKind::theorem2 && !conditions[i].mc) extra[i] = "alpha of g_1/p unbounded (not M_C)";
  });
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    RatioReport& r = reports[i];
    std::string note = detail::describe_hypotheses(conditions[i]);
    if (!extra[i].empty()) note += (note.empty() ? "" : "; ") + extra[i];
    r.hypotheses_ok = note.empty();
    r.hypothesis_note = note;
    summarize(r, cfg.specs[i]);
  }
  return reports;
}

inline constexpr char const* ratio_csv_header = "n,U,L,B,U_over_B,L_over_B,quad_err,trunc_err";

inline std::string render_csv(RatioReport const& report) {
  std::ostringstream out;
  out << ratio_csv_header << '\n';
  for (auto const& r : report.rows) {
    out << r.n << ',' << format_sci(r.U) << ',' << format_sci(r.L) << ',' << format_sci(r.B) << ','
        << format_sci(r.U_over_B) << ',' << format_sci(r.L_over_B) << ',' << format_sci(r.quad_err) << ','
        << format_sci(r.trunc_err) << '\n';
  }
  return out.str();
}

// Three blocks (U, L, B) of "log n  log value", separated by blank lines.
inline std::string render_plot(RatioReport const& report) {
  std::ostringstream out;
  auto const series = [&](char const* label, double RatioRow::*field) {
    out << "# " << report.name << ' ' << label << '\n';
    for (auto const& r : report.rows) {
      double const v = r.*field;
      if (!(v > 0.0)) continue;
      out << format_sci(std::log(static_cast<double>(r.n))) << ' ' << format_sci(std::log(v)) << '\n';
    }
    out << "\n\n";
  };
  series("U", &RatioRow::U);
  series("L", &RatioRow::L);
  series("B", &RatioRow::B);
  return out.str();
}

inline void emit_outputs(std::vector<RatioReport> const& reports, std::string const& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir + "': " + ec.message());
  auto const write = [](fs::path const& path, std::string const& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw OutputError("cannot write '" + path.string() + "'");
  };
  for (auto const& r : reports) {
    write(fs::path(dir) / (r.name + ".csv"), render_csv(r));
    write(fs::path(dir) / (r.name + ".plot"), render_plot(r));
  }
}

inline void print_summary(std::ostream& out, std::vector<RatioReport> const& reports) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-24s %-9s %-20s %10s %10s %9s %9s\n", "spec", "bound", "verdict",
                "min ratio", "max ratio", "slope U", "slope B");
  out << buf;
  for (auto const& r : reports) {
    std::snprintf(buf, sizeof buf, "%-24s %-9s %-20s %10.4g %10.4g %9.4f %9.4f\n", r.name.c_str(),
                  to_string(r.bound), to_string(r.verdict), r.min_ratio, r.max_ratio, r.slope_U, r.slope_B);
    out << buf;
    if (!r.hypothesis_note.empty()) out << "    hypotheses: " << r.hypothesis_note << '\n';
    if (r.verdict == Verdict::hypotheses_violated)
      out << "    band/slope criteria " << (r.band_ok && r.slope_ok ? "held" : "did not hold") << '\n';
    std::size_t warned = 0;
    for (auto const& row : r.rows) {
      if (!row.ok()) out << "    n=" << row.n << ": " << row.error << '\n';
      if (row.parity_warning && warned++ == 0) out << "    warning: cos(beta pi/2) is nearly zero for a non-integer beta\n";
    }
  }
}

// 0 when every spec whose hypotheses hold passes, 1 otherwise. Writes
// outputs when the config names a directory.
inline int verify(ExperimentConfig const& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.specs.empty()) {
    err << "warning: config has no [spec] blocks, nothing to verify\n";
    return 0;
  }
  std::vector<RatioReport> const reports = run_sweep(cfg);
  if (!cfg.output_dir.empty()) emit_outputs(reports, cfg.output_dir);
  print_summary(out, reports);
  bool const failed = std::any_of(reports.begin(), reports.end(),
                                  [](RatioReport const& r) { return r.verdict == Verdict::fail; });
  out << (failed ? "verification FAILED" : "verification passed") << '\n';
  return failed ? 1 : 0;
}

}  // namespace zygmund
