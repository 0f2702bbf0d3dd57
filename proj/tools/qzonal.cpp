// qzonal: command-line front end for zonal tables, pFq evaluation, Wishart
// extreme-eigenvalue distributions, simulation and the validation suite.
//
// Exit codes: 0 ok, 1 validation failure, 2 usage, 3 domain, 4 truncation, 5 divergence.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "qzonal/errors.hpp"
#include "qzonal/hypergeom.hpp"
#include "qzonal/mc.hpp"
#include "qzonal/partitions.hpp"
#include "qzonal/precision.hpp"
#include "qzonal/table_cache.hpp"
#include "qzonal/validation.hpp"
#include "qzonal/wishart.hpp"
#include "qzonal/zonal.hpp"

namespace {

using namespace qzonal;
using json = nlohmann::ordered_json;

enum ExitCode { exit_ok = 0, exit_validation = 1, exit_usage = 2, exit_domain = 3, exit_truncation = 4, exit_divergence = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputSpec {
  std::string format = "csv";
  std::string path;
  int precision = 15;
};

// ---- parsing -------------------------------------------------------------

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.find_first_not_of(" \t") == std::string::npos) return out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("empty item in list \"" + s + "\"");
    out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("not a finite number: \"" + s + "\"");
  return v;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item));
  return out;
}

BigInt parse_int(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("not an integer: \"" + s + "\"");
  return BigInt(s);
}

/// Exact value of "p/q", "-12", or a decimal such as "0.25" or "1.5e-3".
BigRational parse_rational(std::string s) {
  if (const auto e = s.find_first_of("eE"); e != std::string::npos && s.find('/') == std::string::npos) {
    const std::string ex = s.substr(e + 1);
    int power = 0;
    const char* first = ex.data() + (!ex.empty() && ex[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, ex.data() + ex.size(), power);
    if (ec != std::errc() || ptr != ex.data() + ex.size() || std::abs(power) > 4000)
      throw UsageError("bad exponent in \"" + s + "\"");
    BigInt scale{1};
    for (int i = 0; i < std::abs(power); ++i) scale *= 10;
    const BigRational mant = parse_rational(s.substr(0, e));
    return power >= 0 ? BigRational(mant * scale) : BigRational(mant / scale);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  BigRational q;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in \"" + s + "\"");
    q = BigRational(parse_int(s.substr(0, slash)), den);
  } else if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw UsageError("not a number: \"" + s + "\"");
    BigInt scale{1};
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    q = BigRational(parse_int((ip.empty() ? "0" : ip) + (fp.empty() ? "" : fp)), scale);
  } else {
    q = BigRational(parse_int(s));
  }
  return neg ? BigRational(-q) : q;
}

Partition parse_partition(const std::string& s) {
  std::vector<int> parts;
  for (const auto& item : split_list(s)) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v < 1)
      throw UsageError("partition parts must be positive integers: \"" + s + "\"");
    if (!parts.empty() && v > parts.back()) throw UsageError("partition parts must be non-increasing: \"" + s + "\"");
    parts.push_back(v);
  }
  return Partition(parts);
}

// ---- output --------------------------------------------------------------

using Cell = std::variant<std::string, double, long long, bool>;

struct Rows {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return {buf, r.ptr};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

class Writer {
 public:
  explicit Writer(const OutputSpec& spec) : spec_{spec} {
    if (!spec.path.empty()) {
      file_.open(spec.path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file " + spec.path);
      file_.imbue(std::locale::classic());
    }
    std::cout.imbue(std::locale::classic());
  }

  std::ostream& out() { return spec_.path.empty() ? std::cout : file_; }

  void rows(const Rows& r) {
    if (spec_.format == "json") {
      json arr = json::array();
      for (const auto& row : r.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = to_json(row[i]);
        arr.push_back(std::move(obj));
      }
      out() << arr.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < r.columns.size(); ++i) out() << (i ? "," : "") << csv_field(r.columns[i]);
    out() << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out() << (i ? "," : "") << to_csv(row[i]);
      out() << '\n';
    }
  }

  void document(const json& j) { out() << j.dump(2) << '\n'; }

 private:
  std::string to_csv(const Cell& c) const {
    if (auto s = std::get_if<std::string>(&c)) return csv_field(*s);
    if (auto d = std::get_if<double>(&c)) return format_number(*d, spec_.precision);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
  }

  json to_json(const Cell& c) const {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) {
      if (!std::isfinite(*d)) return nullptr;
      // the JSON value is the number the CSV text denotes, so both agree at any precision
      return parse_double(format_number(*d, spec_.precision));
    }
    if (auto i = std::get_if<long long>(&c)) return *i;
    return std::get<bool>(c);
  }

  OutputSpec spec_;
  std::ofstream file_;
};

TruncationPolicy cli_policy(int max_degree, double tol, bool hard_fail) {
  TruncationPolicy p{max_degree, tol, hard_fail};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

void warn_if_unconverged(const HypergeomResult& r, const std::string& where) {
  if (!r.converged)
    std::cerr << "warning: " << where << " stopped at the degree cap " << r.degree_used
              << " without meeting the layer tolerance (last layer " << r.last_layer_magnitude << ")\n";
}

// ---- commands ------------------------------------------------------------

int cmd_zonal_table(int k, std::optional<int> part_cap, const OutputSpec& spec) {
  if (k < 1) throw UsageError("--k must be at least 1");
  if (part_cap && *part_cap < 1) throw UsageError("--part-cap must be at least 1");
  const ZonalTable t = build_table(k, part_cap.value_or(k));
  Writer w(spec);
  if (spec.format == "json") {
    w.document(table_to_json(t));
    return exit_ok;
  }
  Rows r{{"kappa", "lambda", "numerator", "denominator"}, {}};
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a; b < t.size(); ++b) {
      const BigRational& c = t.coeff(a, b);
      r.rows.push_back({t.partitions()[a].to_string(), t.partitions()[b].to_string(),
                        boost::multiprecision::numerator(c).str(), boost::multiprecision::denominator(c).str()});
    }
  w.rows(r);
  return exit_ok;
}

int cmd_eval(const std::string& kappa_text, const std::string& eigs_text, bool exact, std::optional<int> part_cap,
             const OutputSpec& spec) {
  const Partition kappa = parse_partition(kappa_text);
  const auto items = split_list(eigs_text);
  if (items.empty()) throw UsageError("--eigs needs at least one value");
  const int m = static_cast<int>(items.size());
  const int cap = part_cap.value_or(std::max<int>(m, static_cast<int>(kappa.length())));
  if (cap < 1) throw UsageError("--part-cap must be at least 1");
  const auto table = table_cache().get(kappa.weight(), cap);
  if (!table->index_of(kappa))
    throw DomainError("partition " + kappa.to_string() + " has more parts than the part cap " + std::to_string(cap));
  if (!table->full() && table->part_cap() < m)
    throw DomainError("part cap " + std::to_string(cap) + " is below the number of eigenvalues " + std::to_string(m));

  // decimal input is exact, so evaluate in rationals and round once
  std::vector<BigRational> y;
  for (const auto& s : items) {
    if (!exact) (void)parse_double(s);
    y.push_back(parse_rational(s));
  }
  const BigRational v = eval_zonal_rational(*table, kappa, y);
  Rows r{{"kappa", "value"}, {}};
  std::vector<Cell> row{kappa.to_string(), Mp100(v).convert_to<double>()};
  if (exact) {
    r.columns.push_back("exact");
    row.push_back(v.str());
  }
  r.rows.push_back(std::move(row));
  Writer(spec).rows(r);
  return exit_ok;
}

int cmd_pfq(const std::string& a, const std::string& b, const std::string& eigs, const std::string& eigs_y,
            const TruncationPolicy& policy, const OutputSpec& spec) {
  const auto av = parse_doubles(a), bv = parse_doubles(b), x = parse_doubles(eigs);
  if (x.empty()) throw UsageError("--eigs needs at least one value");
  HypergeomResult res;
  if (eigs_y.empty()) {
    res = pfq(av, bv, x, policy);
  } else {
    const auto y = parse_doubles(eigs_y);
    if (y.size() != x.size()) throw UsageError("--eigs and --eigs-y differ in length");
    res = pfq_two(av, bv, x, y, policy);
  }
  warn_if_unconverged(res, "pfq");
  Rows r{{"value", "degree_used", "converged", "last_layer"}, {}};
  r.rows.push_back({res.value, static_cast<long long>(res.degree_used), res.converged, res.last_layer_magnitude});
  Writer(spec).rows(r);
  return exit_ok;
}

int cmd_wishart(const std::string& kind, int m, int n, double sigma2, const std::string& grid,
                const TruncationPolicy& policy, const OutputSpec& spec) {
  if (m < 1 || n < m) throw UsageError("need n >= m >= 1");
  if (!(sigma2 > 0.0)) throw UsageError("--sigma2 must be positive");
  const auto xs = parse_doubles(grid);
  if (xs.empty()) throw UsageError("--x needs at least one grid point");
  for (double x : xs)
    if (x < 0.0) throw DomainError("grid points must be nonnegative");
  const auto p = WishartParams::isotropic(m, n, sigma2);
  const long long finite_degree = static_cast<long long>(m) * (2 * n - 2 * m + 1);
  Rows r{{"x", "value", "degree_used", "converged"}, {}};
  for (double x : xs) {
    if (kind == "lmax-cdf" || kind == "lmax-pdf") {
      const HypergeomResult res = kind == "lmax-cdf" ? lambda_max_cdf(x, p, policy) : lambda_max_pdf(x, p, policy);
      warn_if_unconverged(res, kind + " at x=" + format_number(x, 6));
      r.rows.push_back({x, res.value, static_cast<long long>(res.degree_used), res.converged});
    } else {
      const double v = kind == "lmin-sf" ? lambda_min_sf(x, p) : lambda_min_pdf(x, p);
      r.rows.push_back({x, v, x == 0.0 ? 0LL : finite_degree, true});
    }
  }
  Writer(spec).rows(r);
  return exit_ok;
}

int cmd_simulate(int m, int n, double sigma2, int samples, std::uint64_t seed, const std::string& statistic,
                 const OutputSpec& spec) {
  if (m < 1 || n < m) throw UsageError("need n >= m >= 1");
  if (!(sigma2 > 0.0)) throw UsageError("--sigma2 must be positive");
  if (samples < 1) throw UsageError("--samples must be at least 1");
  const auto p = WishartParams::isotropic(m, n, sigma2);
  RngStream rng(seed, 0);
  std::vector<double> values;
  values.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const QMatrix w = sample_wishart(p, rng);
    if (statistic == "trace") {
      values.push_back(retr(w));
    } else {
      const auto e = hermitian_eigenvalues(w).values;
      values.push_back(statistic == "lmax" ? e.front() : e.back());
    }
  }
  Rows r{{"kind", "index", "value"}, {}};
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.rows.push_back({std::string("sample"), static_cast<long long>(i), values[i]});
    mean += values[i];
  }
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1) / values.size()) : 0.0;
  r.rows.push_back({std::string("mean"), std::string(""), mean});
  r.rows.push_back({std::string("stderr"), std::string(""), se});

  const EmpiricalCdf ecdf(values);
  if (statistic == "trace") {
    const double shape = 2.0 * m * n;
    r.rows.push_back({std::string("ks"), std::string(""),
                      ks_distance(ecdf, [&](double t) { return t <= 0 ? 0.0 : boost::math::gamma_p(shape, 2.0 * t / sigma2); })});
  } else if (statistic == "lmin") {
    r.rows.push_back(
        {std::string("ks"), std::string(""), ks_distance(ecdf, [&](double x) { return x <= 0 ? 0.0 : 1.0 - lambda_min_sf(x, p); })});
  } else if (m == 1) {
    const TruncationPolicy pol{200, 1e-15, false};
    r.rows.push_back({std::string("ks"), std::string(""),
                      ks_distance(ecdf, [&](double x) { return x <= 0 ? 0.0 : lambda_max_cdf(x, p, pol).value; })});
  } else {
    // the series CDF is too costly at every sample; compare at 20 sample quantiles
    const TruncationPolicy pol{200, 1e-15, false};
    double d = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double x = ecdf.sorted_samples()[static_cast<std::size_t>((i - 0.5) / 20.0 * ecdf.n())];
      d = std::max(d, std::abs(ecdf(x) - lambda_max_cdf(x, p, pol).value));
    }
    r.rows.push_back({std::string("sup_quantile_grid"), std::string(""), d});
  }
  Writer(spec).rows(r);
  return exit_ok;
}

int cmd_validate(const std::string& level, std::uint64_t seed, OutputSpec spec, bool format_given) {
  const SuiteLevel lv = level == "full" ? SuiteLevel::full : SuiteLevel::fast;
  const auto checks = run_checks(lv, seed);
  const json report = report_json(lv, seed, checks);
  if (!format_given) spec.format = "json";
  Writer w(spec);
  if (spec.format == "json") {
    w.document(report);
  } else {
    Rows r{{"id", "criterion", "passed", "message"}, {}};
    for (const auto& c : checks) r.rows.push_back({c.id, static_cast<long long>(c.criterion), c.passed, c.message});
    w.rows(r);
  }
  for (const auto& c : checks)
    if (!c.passed) std::cerr << "FAIL criterion " << c.criterion << " (" << c.id << "): " << c.message << '\n';
  return report["passed"].get<bool>() ? exit_ok : exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zonal polynomials of quaternion matrix argument, pFq, and quaternion Wishart eigenvalue distributions"};
  app.require_subcommand(1);
  OutputSpec spec;
  std::uint64_t seed = default_seed;
  app.add_option("--format", spec.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--output,-o", spec.path, "Write to this file instead of standard output");
  app.add_option("--precision", spec.precision, "Significant digits for floating output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.fallthrough();

  int k = 0;
  std::optional<int> part_cap;
  auto* table_cmd = app.add_subcommand("zonal-table", "Exact coefficients c(kappa, lambda) for degree k");
  table_cmd->add_option("--k", k, "Degree")->required();
  table_cmd->add_option("--part-cap", part_cap, "Largest number of parts");

  std::string kappa_text, eigs_text;
  bool exact = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate C_kappa at an eigenvalue tuple");
  eval_cmd->add_option("--kappa", kappa_text, "Partition, e.g. 2,1")->required();
  eval_cmd->add_option("--eigs", eigs_text, "Eigenvalues, e.g. 1,2")->required();
  eval_cmd->add_flag("--exact", exact, "Exact rational evaluation (values like 1/3 or 0.25)");
  eval_cmd->add_option("--part-cap", part_cap, "Restrict the table to this many parts");

  std::string a_text, b_text, eigs_y_text;
  int max_degree = 60;
  double tol = 1e-12;
  bool hard_fail = false;
  auto add_policy = [&](CLI::App* c) {
    c->add_option("--max-degree", max_degree, "Degree cap K")->capture_default_str();
    c->add_option("--tol", tol, "Layer tolerance")->capture_default_str();
    c->add_flag("--hard-fail", hard_fail, "Exit 4 instead of warning when the degree cap is hit");
  };
  auto* pfq_cmd = app.add_subcommand("pfq", "Hypergeometric function of matrix argument");
  pfq_cmd->add_option("--a", a_text, "Upper parameters, comma separated (may be empty)");
  pfq_cmd->add_option("--b", b_text, "Lower parameters, comma separated (may be empty)");
  pfq_cmd->add_option("--eigs", eigs_text, "Eigenvalues of X")->required();
  pfq_cmd->add_option("--eigs-y", eigs_y_text, "Eigenvalues of Y for the two-matrix series");
  add_policy(pfq_cmd);

  std::string kind, grid;
  int m = 1, n = 1;
  double sigma2 = 1.0;
  auto* wishart_cmd = app.add_subcommand("wishart", "Extreme eigenvalue distributions of QW_m(n, sigma2 I)");
  wishart_cmd->add_option("kind", kind, "lmax-cdf, lmin-sf, lmax-pdf or lmin-pdf")
      ->required()
      ->check(CLI::IsMember({"lmax-cdf", "lmin-sf", "lmax-pdf", "lmin-pdf"}));
  wishart_cmd->add_option("--m", m, "Dimension")->required();
  wishart_cmd->add_option("--n", n, "Degrees of freedom")->required();
  wishart_cmd->add_option("--sigma2,--sigma-scale", sigma2, "Scale sigma^2 of Sigma = sigma^2 I")->capture_default_str();
  wishart_cmd->add_option("--x", grid, "Grid points, comma separated")->required();
  add_policy(wishart_cmd);

  int samples = 10000;
  std::string statistic = "lmax";
  auto* sim_cmd = app.add_subcommand("simulate", "Sample a Wishart statistic and compare with its distribution");
  sim_cmd->add_option("--m", m, "Dimension")->required();
  sim_cmd->add_option("--n", n, "Degrees of freedom")->required();
  sim_cmd->add_option("--sigma2,--sigma-scale", sigma2, "Scale sigma^2")->capture_default_str();
  sim_cmd->add_option("--samples", samples, "Number of samples")->capture_default_str();
  sim_cmd->add_option("--statistic", statistic, "lmax, lmin or trace")
      ->check(CLI::IsMember({"lmax", "lmin", "trace"}))
      ->capture_default_str();

  std::string level = "fast";
  auto* val_cmd = app.add_subcommand("validate", "Run the acceptance suite and print a JSON report");
  val_cmd->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*table_cmd) return cmd_zonal_table(k, part_cap, spec);
    if (*eval_cmd) return cmd_eval(kappa_text, eigs_text, exact, part_cap, spec);
    if (*pfq_cmd) return cmd_pfq(a_text, b_text, eigs_text, eigs_y_text, cli_policy(max_degree, tol, hard_fail), spec);
    if (*wishart_cmd)
      return cmd_wishart(kind, m, n, sigma2, grid, cli_policy(max_degree, tol, hard_fail), spec);
    if (*sim_cmd) return cmd_simulate(m, n, sigma2, samples, seed, statistic, spec);
    if (*val_cmd) return cmd_validate(level, seed, spec, app.get_option("--format")->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_divergence;
  } catch (const TruncationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_truncation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_domain;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_domain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
