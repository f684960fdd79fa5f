#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dseries/dseries.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& s) {
  if (s.empty() || s[0] == '-') throw UsageError("expected a non-negative integer, got '" + s + "'");
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw UsageError("expected a non-negative integer, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError("expected a non-negative integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError("expected a number, got '" + s + "'");
  return v;
}

// Integer grid tokens are single values or inclusive ranges "lo..hi".
json integer_grid(const std::vector<std::string>& tokens) {
  json out = json::array();
  for (const auto& token : tokens) {
    for (const auto& part : split(token, ',')) {
      const auto dots = part.find("..");
      if (dots == std::string::npos) {
        out.push_back(parse_uint(part));
        continue;
      }
      const auto lo = parse_uint(part.substr(0, dots));
      const auto hi = parse_uint(part.substr(dots + 2));
      if (hi < lo) throw UsageError("empty range '" + part + "'");
      if (hi - lo > 100'000) throw UsageError("range '" + part + "' is too long");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

json real_grid(const std::vector<std::string>& tokens) {
  json out = json::array();
  for (const auto& token : tokens) {
    for (const auto& part : split(token, ',')) out.push_back(parse_real(part));
  }
  return out;
}

json id_list(const std::vector<std::string>& tokens) {
  json out = json::array();
  for (const auto& token : tokens) {
    for (const auto& part : split(token, ',')) out.push_back(part);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("error writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("error writing '" + path + "'");
}

ds_format format_from(const std::string& name) {
  if (name == "json") return DS_FORMAT_JSON;
  if (name == "csv") return DS_FORMAT_CSV;
  if (name == "text") return DS_FORMAT_TEXT;
  throw UsageError("unknown format '" + name + "'");
}

// Library status to exit code; the message goes to stderr.
int report_status(ds_status status) {
  std::cerr << "error: " << ds_last_error() << '\n';
  switch (status) {
    case DS_INVALID_INPUT:
    case DS_DOMAIN_ERROR:
      return kExitUsage;
    default:
      return kExitFail;
  }
}

std::uint64_t sieve_bound_from(std::optional<std::uint64_t> flag,
                               std::optional<std::uint64_t> config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("D_SERIES_SIEVE_BOUND"); env && *env) {
    try {
      return parse_uint(env);
    } catch (const UsageError&) {
      throw UsageError(std::string("D_SERIES_SIEVE_BOUND must be a positive integer, got '") +
                       env + "'");
    }
  }
  return 0;
}

struct Context {
  ds_context* ctx = nullptr;
  ~Context() { ds_context_destroy(ctx); }
};

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct VerifyArgs {
  std::vector<std::string> ids;
  std::vector<std::string> expected;
  std::vector<std::string> tolerances;
  std::vector<std::string> n, beta, gamma, m, a, b, c, x;
  std::optional<std::uint64_t> max_k, gauss_max_k, divergence_max_k, prime_bound,
      transform_check_bound, forms_max_k, convolution_max_k, closed_form_max_k,
      coefficient_max_k;
  std::string config_path;
  std::string format;
  std::string output;
  bool timing = false;
};

int run_verify(const VerifyArgs& args, std::optional<std::uint64_t> sieve_flag) {
  json config = json::object();
  if (!args.config_path.empty()) {
    const std::string text = read_file(args.config_path);
    try {
      config = json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
  }

  std::string format = "json";
  std::string output;
  if (config.contains("format")) {
    if (!config["format"].is_string()) throw UsageError("config key 'format' must be a string");
    format = config["format"].get<std::string>();
    config.erase("format");
  }
  if (config.contains("output")) {
    if (!config["output"].is_string()) throw UsageError("config key 'output' must be a string");
    output = config["output"].get<std::string>();
    config.erase("output");
  }
  std::optional<std::uint64_t> config_sieve;
  if (config.contains("sieve_bound")) {
    if (!config["sieve_bound"].is_number_unsigned()) {
      throw UsageError("config key 'sieve_bound' must be a positive integer");
    }
    config_sieve = config["sieve_bound"].get<std::uint64_t>();
  }
  if (!args.format.empty()) format = args.format;
  if (!args.output.empty()) output = args.output;

  if (!args.ids.empty()) config["ids"] = id_list(args.ids);
  if (!args.expected.empty()) config["expected"] = id_list(args.expected);
  if (!args.tolerances.empty()) {
    json tol = config.contains("tolerances") ? config["tolerances"] : json::object();
    for (const auto& token : args.tolerances) {
      for (const auto& part : split(token, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw UsageError("tolerance must be ID=value, got '" + part + "'");
        tol[part.substr(0, eq)] = parse_real(part.substr(eq + 1));
      }
    }
    config["tolerances"] = tol;
  }
  const std::pair<const char*, const std::vector<std::string>*> int_grids[] = {
      {"n", &args.n}, {"m", &args.m}, {"a", &args.a}, {"b", &args.b}, {"c", &args.c}, {"x", &args.x}};
  for (const auto& [key, tokens] : int_grids) {
    if (!tokens->empty()) config[key] = integer_grid(*tokens);
  }
  if (!args.beta.empty()) config["beta"] = real_grid(args.beta);
  if (!args.gamma.empty()) config["gamma"] = real_grid(args.gamma);
  const std::pair<const char*, const std::optional<std::uint64_t>*> bounds[] = {
      {"max_k", &args.max_k},
      {"gauss_max_k", &args.gauss_max_k},
      {"divergence_max_k", &args.divergence_max_k},
      {"prime_bound", &args.prime_bound},
      {"transform_check_bound", &args.transform_check_bound},
      {"forms_max_k", &args.forms_max_k},
      {"convolution_max_k", &args.convolution_max_k},
      {"closed_form_max_k", &args.closed_form_max_k},
      {"coefficient_max_k", &args.coefficient_max_k},
  };
  for (const auto& [key, value] : bounds) {
    if (*value) config[key] = **value;
  }
  if (args.timing) config["record_timing"] = true;

  const ds_format fmt = format_from(format);
  const std::uint64_t sieve = sieve_bound_from(sieve_flag, config_sieve);
  if (sieve != 0) config["sieve_bound"] = sieve;

  Context context;
  if (const auto st = ds_context_create(sieve, &context.ctx); st != DS_OK) return report_status(st);
  ds_report_set* set = nullptr;
  if (const auto st = ds_verify_run(context.ctx, config.dump().c_str(), &set); st != DS_OK) {
    return report_status(st);
  }
  char* rendered = nullptr;
  const auto st = ds_report_set_render(set, fmt, &rendered);
  const std::size_t unexpected = ds_report_set_unexpected_failures(set);
  ds_report_set_destroy(set);
  if (st != DS_OK) return report_status(st);
  const std::string text = rendered;
  ds_string_free(rendered);
  write_output(output, text);
  return unexpected == 0 ? kExitOk : kExitFail;
}

struct EvalArgs {
  std::string target;
  double gamma = 1.0;
  std::optional<std::uint64_t> k;
  std::optional<std::uint32_t> a;
  bool positive = false;
  std::string spec;
  std::optional<double> z;
  std::uint64_t max_k = 1'000'000;
  double tolerance = 1e-10;
  bool euler = false;
  std::uint64_t prime_bound = 100'000;
  std::optional<std::uint64_t> m;
  std::vector<std::string> shifts;
  std::string n = "inf";
};

template <typename T>
T require(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

std::int64_t length_from(const std::string& n) {
  if (n == "inf") return -1;
  const auto v = parse_uint(n);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw UsageError("--n is too large");
  }
  return static_cast<std::int64_t>(v);
}

int run_eval(const EvalArgs& args, std::optional<std::uint64_t> sieve_flag) {
  Context context;
  if (const auto st = ds_context_create(sieve_bound_from(sieve_flag, std::nullopt), &context.ctx);
      st != DS_OK) {
    return report_status(st);
  }
  double value = 0.0;
  ds_status st = DS_OK;
  if (args.target == "sigma") {
    st = ds_sigma(context.ctx, args.gamma, require(args.k, "--k"), args.positive ? 1 : 0, &value);
  } else if (args.target == "d-factorial") {
    st = ds_d_factorial(context.ctx, require(args.a, "--a"), args.gamma, require(args.k, "--k"),
                        &value);
  } else if (args.target == "zeta-shifted") {
    st = ds_zeta_shifted(require(args.a, "--a"), args.gamma, length_from(args.n), &value);
  } else if (args.target == "jordan") {
    std::vector<std::uint32_t> shifts;
    for (const auto& v : integer_grid(args.shifts)) {
      const auto u = v.get<std::uint64_t>();
      if (u > std::numeric_limits<std::uint32_t>::max()) throw UsageError("shift too large");
      shifts.push_back(static_cast<std::uint32_t>(u));
    }
    if (shifts.empty()) throw UsageError("missing required option --shifts");
    st = ds_jordan_shifted(context.ctx, require(args.m, "--m"), shifts.data(), shifts.size(),
                           args.gamma, length_from(args.n), &value);
  } else {
    if (args.spec.empty()) throw UsageError("missing required option --spec");
    ds_partial_sum sum{};
    st = args.euler ? ds_theta_euler_product(context.ctx, args.spec.c_str(), args.gamma,
                                             require(args.z, "--z"), args.prime_bound,
                                             args.tolerance, &sum)
                    : ds_theta_sum(context.ctx, args.spec.c_str(), args.gamma,
                                   require(args.z, "--z"), args.max_k, args.tolerance, &sum);
    if (st != DS_OK) return report_status(st);
    std::string out = "value=" + format_value(sum.value) + '\n';
    out += "terms_used=" + std::to_string(sum.terms_used) + '\n';
    out += "tail_bound=" + (sum.has_tail_bound ? format_value(sum.tail_bound) : "none") + '\n';
    out += std::string("status=") + ds_series_status_name(sum.status) + '\n';
    if (sum.offending_prime) out += "offending_prime=" + std::to_string(sum.offending_prime) + '\n';
    write_output("", out);
    return kExitOk;
  }
  if (st != DS_OK) return report_status(st);
  write_output("", format_value(value) + '\n');
  return kExitOk;
}

struct TableArgs {
  std::string pairs = "2:1,4:2,4:3,6:1,6:2";
  std::vector<std::string> k;
  std::uint64_t max_k = 30;
  double gamma = 1.0;
  std::string format = "text";
  std::string output;
};

bool squarefree(std::uint64_t k) {
  for (std::uint64_t d = 2; d * d <= k; ++d) {
    if (k % (d * d) == 0) return false;
  }
  return true;
}

int run_table(const TableArgs& args, std::optional<std::uint64_t> sieve_flag) {
  std::vector<std::uint32_t> as;
  std::vector<std::uint32_t> bs;
  for (const auto& pair : split(args.pairs, ',')) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) throw UsageError("pairs must be a:b, got '" + pair + "'");
    const auto a = parse_uint(pair.substr(0, colon));
    const auto b = parse_uint(pair.substr(colon + 1));
    if (a > 1000 || b > 1000) throw UsageError("pair '" + pair + "' is out of range");
    as.push_back(static_cast<std::uint32_t>(a));
    bs.push_back(static_cast<std::uint32_t>(b));
  }
  std::vector<std::uint64_t> ks;
  if (!args.k.empty()) {
    for (const auto& v : integer_grid(args.k)) ks.push_back(v.get<std::uint64_t>());
  } else {
    for (std::uint64_t k = 1; k <= args.max_k; ++k) {
      if (squarefree(k)) ks.push_back(k);
    }
  }
  const ds_format fmt = format_from(args.format);
  if (fmt == DS_FORMAT_JSON) throw UsageError("table output is csv or text");

  Context context;
  if (const auto st = ds_context_create(sieve_bound_from(sieve_flag, std::nullopt), &context.ctx);
      st != DS_OK) {
    return report_status(st);
  }
  char* rendered = nullptr;
  if (const auto st = ds_kummer_table(context.ctx, as.data(), bs.data(), as.size(), ks.data(),
                                      ks.size(), args.gamma, fmt, &rendered);
      st != DS_OK) {
    return report_status(st);
  }
  const std::string text = rendered;
  ds_string_free(rendered);
  write_output(args.output, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-series analogues of q-series identities: verify, evaluate, tabulate"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> sieve_bound;
  app.add_option("--sieve-bound", sieve_bound,
                 "Prime sieve size (default: D_SERIES_SIEVE_BOUND or 10000000)")
      ->check(CLI::PositiveNumber);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run identity checks and emit reports");
  verify->add_option("--ids", va.ids, "Identity IDs to run (comma separated)");
  verify->add_option("--expected", va.expected,
                     "IDs whose divergent or documented-discrepancy results are expected");
  verify->add_option("--tol", va.tolerances, "Tolerance override ID=value (repeatable)");
  verify->add_option("--n", va.n, "n grid, values or lo..hi ranges");
  verify->add_option("--beta", va.beta, "beta grid");
  verify->add_option("--gamma", va.gamma, "gamma grid");
  verify->add_option("--m", va.m, "m grid");
  verify->add_option("--a", va.a, "a grid");
  verify->add_option("--b", va.b, "b grid");
  verify->add_option("--c", va.c, "c grid");
  verify->add_option("--x", va.x, "x grid for average orders");
  verify->add_option("--max-k", va.max_k, "Series truncation point");
  verify->add_option("--gauss-max-k", va.gauss_max_k, "Truncation point for the Gauss sums");
  verify->add_option("--divergence-max-k", va.divergence_max_k, "Terms for divergence diagnosis");
  verify->add_option("--prime-bound", va.prime_bound, "Largest prime used by Euler products");
  verify->add_option("--transform-check-bound", va.transform_check_bound,
                     "Largest prime at which q-identities are checked");
  verify->add_option("--forms-max-k", va.forms_max_k, "k range for the factorial forms");
  verify->add_option("--convolution-max-k", va.convolution_max_k, "k range for the convolution form");
  verify->add_option("--closed-form-max-k", va.closed_form_max_k, "k range for closed forms");
  verify->add_option("--coefficient-max-k", va.coefficient_max_k, "k range for Kummer coefficients");
  verify->add_option("--config", va.config_path, "JSON config file; flags take precedence");
  verify->add_option("--format", va.format, "json, csv or text (default json)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  verify->add_option("-o,--output", va.output, "Output file (default stdout)");
  verify->add_flag("--timing", va.timing, "Record runtime_ms per report");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate one function or series");
  eval->add_option("target", ea.target, "sigma, d-factorial, theta, zeta-shifted or jordan")
      ->required()
      ->check(CLI::IsMember({"sigma", "d-factorial", "theta", "zeta-shifted", "jordan"}));
  eval->add_option("--gamma", ea.gamma, "gamma (default 1)");
  eval->add_option("--k", ea.k, "Argument k")->check(CLI::PositiveNumber);
  eval->add_option("--a", ea.a, "Shift a")->check(CLI::PositiveNumber);
  eval->add_flag("--positive", ea.positive, "sigma_{+gamma} instead of sigma_{-gamma}");
  eval->add_option("--spec", ea.spec, "Theta spec a_list;b_list;c_list;d_list;flags");
  eval->add_option("--z", ea.z, "Series exponent z");
  eval->add_option("--max-k", ea.max_k, "Truncation point (default 1000000)");
  eval->add_option("--tolerance", ea.tolerance, "Target tail bound (default 1e-10)");
  eval->add_flag("--euler", ea.euler, "Evaluate theta as an Euler product");
  eval->add_option("--prime-bound", ea.prime_bound, "Primes used by --euler (default 100000)");
  eval->add_option("--m", ea.m, "Modulus m for jordan")->check(CLI::PositiveNumber);
  eval->add_option("--shifts", ea.shifts, "Shifts for jordan (comma separated)");
  eval->add_option("--n", ea.n, "Product length or inf (default inf)");

  TableArgs ta;
  auto* table = app.add_subcommand("table", "Kummer coefficient table over squarefree k");
  table->add_option("--pairs", ta.pairs, "a:b pairs, comma separated (default 2:1,4:2,4:3,6:1,6:2)");
  table->add_option("--k", ta.k, "k values or lo..hi ranges (default: squarefree k <= --max-k)");
  table->add_option("--max-k", ta.max_k, "Largest squarefree k when --k is absent (default 30)");
  table->add_option("--gamma", ta.gamma, "gamma (default 1)");
  table->add_option("--format", ta.format, "csv or text (default text)")
      ->check(CLI::IsMember({"csv", "text"}));
  table->add_option("-o,--output", ta.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return run_verify(va, sieve_bound);
    if (*eval) return run_eval(ea, sieve_bound);
    return run_table(ta, sieve_bound);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
