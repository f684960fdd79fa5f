#include "dseries/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include <json.hpp>

#include "dseries/errors.hpp"

namespace dseries::io {

using json = nlohmann::ordered_json;
using verify::Input;
using verify::InputValue;
using verify::Status;
using verify::VerificationReport;

namespace {

std::string printf_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string nonfinite_name(double v) {
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string input_value_json(const InputValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return quoted(std::get<std::string>(v));
}

std::string input_value_text(const InputValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    return std::isfinite(*d) ? printf_double("%.15g", *d) : nonfinite_name(*d);
  }
  return std::get<std::string>(v);
}

std::string text_double(double v) {
  return std::isfinite(v) ? printf_double("%.15g", v) : nonfinite_name(v);
}

std::string csv_double(double v) {
  return std::isfinite(v) ? printf_double("%.17g", v) : nonfinite_name(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double read_double(const json& j, std::string_view field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InvalidInput("report field '" + std::string(field) + "' is not a number");
}

VerificationReport report_from(const json& j) {
  if (!j.is_object()) throw InvalidInput("report must be a JSON object");
  VerificationReport r;
  try {
    r.id = j.at("id").get<std::string>();
    for (const auto& [name, value] : j.at("inputs").items()) {
      if (value.is_number_integer()) {
        r.inputs.push_back({name, value.get<std::int64_t>()});
      } else if (value.is_number_float()) {
        r.inputs.push_back({name, value.get<double>()});
      } else if (value.is_string()) {
        const auto s = value.get<std::string>();
        r.inputs.push_back({name, s});
      } else {
        throw InvalidInput("input '" + name + "' has an unsupported type");
      }
    }
    r.lhs = read_double(j.at("lhs"), "lhs");
    r.rhs = read_double(j.at("rhs"), "rhs");
    r.abs_error = read_double(j.at("abs_error"), "abs_error");
    r.rel_error = read_double(j.at("rel_error"), "rel_error");
    r.tolerance = read_double(j.at("tolerance"), "tolerance");
    r.status = verify::status_from_string(j.at("status").get<std::string>());
    if (!j.at("terms_used").is_null()) r.terms_used = j.at("terms_used").get<std::uint64_t>();
    if (!j.at("tail_bound").is_null()) r.tail_bound = read_double(j.at("tail_bound"), "tail_bound");
    if (!j.at("runtime_ms").is_null()) r.runtime_ms = read_double(j.at("runtime_ms"), "runtime_ms");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
  return r;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
std::vector<T> read_list(const json& j, const std::string& key) {
  if (!j.is_array()) throw InvalidInput("config key '" + key + "' must be an array");
  std::vector<T> out;
  for (const auto& v : j) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw InvalidInput("config key '" + key + "' must hold strings");
      out.push_back(v.get<std::string>());
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw InvalidInput("config key '" + key + "' must hold numbers");
      out.push_back(v.get<T>());
    } else {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw InvalidInput("config key '" + key + "' must hold non-negative integers");
      }
      const auto u = v.get<std::uint64_t>();
      if (u > std::numeric_limits<T>::max()) {
        throw InvalidInput("config key '" + key + "' holds a value out of range");
      }
      out.push_back(static_cast<T>(u));
    }
  }
  return out;
}

std::uint64_t read_bound(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw InvalidInput("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "json") return Format::kJson;
  if (text == "csv") return Format::kCsv;
  if (text == "text") return Format::kText;
  throw InvalidInput("unknown output format '" + std::string(text) + "'");
}

Summary summarize(const std::vector<VerificationReport>& reports,
                  const std::vector<std::string>& expected) {
  Summary s;
  s.total = reports.size();
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::kPass:
        ++s.pass;
        break;
      case Status::kFail:
        ++s.fail;
        break;
      case Status::kDivergentLhs:
        ++s.divergent_lhs;
        break;
      case Status::kDiscrepancyDocumented:
        ++s.discrepancy_documented;
        break;
      case Status::kQIdentityFailed:
        ++s.q_identity_failed;
        break;
    }
  }
  s.unexpected_failures = verify::unexpected_failures(reports, expected);
  return s;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return quoted(nonfinite_name(v));
  std::string s = printf_double("%.17g", v);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string report_to_json(const VerificationReport& r) {
  std::string out = "{\"id\":" + quoted(r.id) + ",\"inputs\":{";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    if (i) out += ',';
    out += quoted(r.inputs[i].name) + ':' + input_value_json(r.inputs[i].value);
  }
  out += "},\"lhs\":" + format_double(r.lhs);
  out += ",\"rhs\":" + format_double(r.rhs);
  out += ",\"abs_error\":" + format_double(r.abs_error);
  out += ",\"rel_error\":" + format_double(r.rel_error);
  out += ",\"tolerance\":" + format_double(r.tolerance);
  out += ",\"status\":" + quoted(std::string(verify::to_string(r.status)));
  out += ",\"terms_used\":" + (r.terms_used ? std::to_string(*r.terms_used) : "null");
  out += ",\"tail_bound\":" + (r.tail_bound ? format_double(*r.tail_bound) : "null");
  out += ",\"runtime_ms\":" + (r.runtime_ms ? format_double(*r.runtime_ms) : "null");
  return out + "}";
}

std::string render_json(const std::vector<VerificationReport>& reports, const Summary& summary) {
  std::string out = "{\"reports\":[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += i ? ",\n" : "\n";
    out += report_to_json(reports[i]);
  }
  out += "\n],\"summary\":{";
  out += "\"total\":" + std::to_string(summary.total);
  out += ",\"pass\":" + std::to_string(summary.pass);
  out += ",\"fail\":" + std::to_string(summary.fail);
  out += ",\"divergent_lhs\":" + std::to_string(summary.divergent_lhs);
  out += ",\"discrepancy_documented\":" + std::to_string(summary.discrepancy_documented);
  out += ",\"q_identity_failed\":" + std::to_string(summary.q_identity_failed);
  out += ",\"unexpected_failures\":" + std::to_string(summary.unexpected_failures);
  return out + "}}\n";
}

std::string render_csv(const std::vector<VerificationReport>& reports) {
  std::string out =
      "id,status,lhs,rhs,abs_error,rel_error,tolerance,terms_used,tail_bound,runtime_ms,inputs\n";
  for (const auto& r : reports) {
    std::string inputs;
    for (std::size_t i = 0; i < r.inputs.size(); ++i) {
      if (i) inputs += ';';
      inputs += r.inputs[i].name + '=' + input_value_text(r.inputs[i].value);
    }
    out += csv_field(r.id) + ',' + std::string(verify::to_string(r.status)) + ',' +
           csv_double(r.lhs) + ',' + csv_double(r.rhs) + ',' + csv_double(r.abs_error) + ',' +
           csv_double(r.rel_error) + ',' + csv_double(r.tolerance) + ',' +
           (r.terms_used ? std::to_string(*r.terms_used) : "") + ',' +
           (r.tail_bound ? csv_double(*r.tail_bound) : "") + ',' +
           (r.runtime_ms ? csv_double(*r.runtime_ms) : "") + ',' + csv_field(inputs) + '\n';
  }
  return out;
}

std::string render_text(const std::vector<VerificationReport>& reports, const Summary& summary) {
  std::string out;
  for (const auto& r : reports) {
    char head[64];
    std::snprintf(head, sizeof head, "%-14s %-22s", r.id.c_str(),
                  std::string(verify::to_string(r.status)).c_str());
    out += head;
    out += " lhs=" + text_double(r.lhs) + " rhs=" + text_double(r.rhs) +
           " abs_error=" + text_double(r.abs_error) + " rel_error=" + text_double(r.rel_error) +
           " tolerance=" + text_double(r.tolerance);
    if (r.terms_used) out += " terms_used=" + std::to_string(*r.terms_used);
    if (r.tail_bound) out += " tail_bound=" + text_double(*r.tail_bound);
    if (r.runtime_ms) out += " runtime_ms=" + text_double(*r.runtime_ms);
    out += " |";
    for (const auto& in : r.inputs) out += ' ' + in.name + '=' + input_value_text(in.value);
    out += '\n';
  }
  out += "total=" + std::to_string(summary.total) + " pass=" + std::to_string(summary.pass) +
         " fail=" + std::to_string(summary.fail) +
         " divergent-lhs=" + std::to_string(summary.divergent_lhs) +
         " discrepancy-documented=" + std::to_string(summary.discrepancy_documented) +
         " q-identity-failed=" + std::to_string(summary.q_identity_failed) +
         " unexpected=" + std::to_string(summary.unexpected_failures) + '\n';
  return out;
}

std::string render(Format format, const std::vector<VerificationReport>& reports,
                   const Summary& summary) {
  switch (format) {
    case Format::kJson:
      return render_json(reports, summary);
    case Format::kCsv:
      return render_csv(reports);
    case Format::kText:
      return render_text(reports, summary);
  }
  return {};
}

VerificationReport report_from_json(std::string_view text) { return report_from(parse_json(text)); }

std::vector<VerificationReport> reports_from_json(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("reports") || !doc["reports"].is_array()) {
    throw InvalidInput("report document needs a \"reports\" array");
  }
  std::vector<VerificationReport> out;
  for (const auto& r : doc["reports"]) out.push_back(report_from(r));
  return out;
}

verify::RunConfig run_config_from_json(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  verify::RunConfig c;
  c.expected = verify::default_expected();
  const std::pair<const char*, std::uint64_t verify::RunConfig::*> bounds[] = {
      {"sieve_bound", &verify::RunConfig::sieve_bound},
      {"max_k", &verify::RunConfig::max_k},
      {"gauss_max_k", &verify::RunConfig::gauss_max_k},
      {"divergence_max_k", &verify::RunConfig::divergence_max_k},
      {"prime_bound", &verify::RunConfig::prime_bound},
      {"transform_check_bound", &verify::RunConfig::transform_check_bound},
      {"forms_max_k", &verify::RunConfig::forms_max_k},
      {"convolution_max_k", &verify::RunConfig::convolution_max_k},
      {"closed_form_max_k", &verify::RunConfig::closed_form_max_k},
      {"coefficient_max_k", &verify::RunConfig::coefficient_max_k},
  };
  for (const auto& [key, value] : doc.items()) {
    bool handled = false;
    for (const auto& [name, member] : bounds) {
      if (key == name) {
        c.*member = read_bound(value, key);
        handled = true;
      }
    }
    if (handled) continue;
    if (key == "ids") {
      c.ids = read_list<std::string>(value, key);
    } else if (key == "expected") {
      c.expected = read_list<std::string>(value, key);
    } else if (key == "record_timing") {
      if (!value.is_boolean()) throw InvalidInput("config key 'record_timing' must be boolean");
      c.record_timing = value.get<bool>();
    } else if (key == "tolerances") {
      if (!value.is_object()) throw InvalidInput("config key 'tolerances' must be an object");
      for (const auto& [id, tol] : value.items()) {
        if (!tol.is_number()) throw InvalidInput("tolerance for '" + id + "' must be a number");
        c.tolerances[id] = tol.get<double>();
      }
    } else if (key == "n") {
      c.n_grid = read_list<std::uint32_t>(value, key);
    } else if (key == "beta") {
      c.beta_grid = read_list<double>(value, key);
    } else if (key == "gamma") {
      c.gamma_grid = read_list<double>(value, key);
    } else if (key == "m") {
      c.m_grid = read_list<std::uint64_t>(value, key);
    } else if (key == "a") {
      c.a_grid = read_list<std::uint32_t>(value, key);
    } else if (key == "b") {
      c.b_grid = read_list<std::uint32_t>(value, key);
    } else if (key == "c") {
      c.c_grid = read_list<std::uint32_t>(value, key);
    } else if (key == "x") {
      c.x_grid = read_list<std::uint64_t>(value, key);
    } else {
      throw InvalidInput("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

std::string render_kummer_table(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                                const std::vector<std::uint64_t>& ks, double gamma, Format format,
                                const arith::PrimeTable& table) {
  if (format == Format::kJson) throw InvalidInput("the coefficient table is CSV or text only");
  const bool csv = format == Format::kCsv;
  auto row = [&](const std::string& a, const std::string& b, const std::string& g,
                 const std::string& k, const std::string& v) {
    if (csv) return a + ',' + b + ',' + g + ',' + k + ',' + v + '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%4s %4s %8s %12s %22s\n", a.c_str(), b.c_str(), g.c_str(),
                  k.c_str(), v.c_str());
    return std::string(buf);
  };
  std::string out = row("a", "b", "gamma", "k", "coefficient");
  for (const auto& [a, b] : pairs) {
    for (const auto k : ks) {
      const double v = verify::kummer_coefficient(a, b, gamma, k, table);
      out += row(std::to_string(a), std::to_string(b), printf_double("%.15g", gamma),
                 std::to_string(k), csv ? csv_double(v) : text_double(v));
    }
  }
  return out;
}

}  // namespace dseries::io
