#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dseries/verify.hpp"

namespace dseries::io {

enum class Format { kJson, kCsv, kText };

/// Accepts "json", "csv" or "text"; throws InvalidInput otherwise.
Format parse_format(std::string_view text);

struct Summary {
  std::size_t total = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t divergent_lhs = 0;
  std::size_t discrepancy_documented = 0;
  std::size_t q_identity_failed = 0;
  std::size_t unexpected_failures = 0;
};

Summary summarize(const std::vector<verify::VerificationReport>& reports,
                  const std::vector<std::string>& expected);

/// 17 significant digits, ".0" appended to integral values so the type
/// survives a round trip; non-finite values are quoted strings.
std::string format_double(double v);

/// One report as a JSON object with fixed field order.
std::string report_to_json(const verify::VerificationReport& report);

/// {"reports": [...], "summary": {...}}, newline terminated.
std::string render_json(const std::vector<verify::VerificationReport>& reports,
                        const Summary& summary);
std::string render_csv(const std::vector<verify::VerificationReport>& reports);
/// One line per report, values at 15 significant digits, then a summary line.
std::string render_text(const std::vector<verify::VerificationReport>& reports,
                        const Summary& summary);
std::string render(Format format, const std::vector<verify::VerificationReport>& reports,
                   const Summary& summary);

/// Inverse of report_to_json; throws InvalidInput on malformed input.
verify::VerificationReport report_from_json(std::string_view text);
/// Reads the "reports" array of a render_json document.
std::vector<verify::VerificationReport> reports_from_json(std::string_view text);

/// Parses a suite configuration. Keys mirror RunConfig fields; grids use the
/// short names n, beta, gamma, m, a, b, c, x. A missing "expected" key selects
/// the default allowlist. Unknown keys throw InvalidInput.
verify::RunConfig run_config_from_json(std::string_view text);

/// Kummer coefficients for every (a, b) pair and k, one row per pair and k:
/// a,b,gamma,k,coefficient. An empty pair list gives the header alone.
std::string render_kummer_table(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                                const std::vector<std::uint64_t>& ks, double gamma, Format format,
                                const arith::PrimeTable& table);

}  // namespace dseries::io
