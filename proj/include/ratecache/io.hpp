#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ratecache/problem.hpp"
#include "ratecache/two_user.hpp"

namespace ratecache {

enum class ParseCode {
  io_error,        // file missing or unreadable
  missing_field,
  shape_mismatch,
  normalization,
  bad_value,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ParseCode code() const { return code_; }

 private:
  ParseCode code_;
};

// Problem documents are JSON with fields:
//   x, y      symbol lists
//   p_xy      |X| x |Y| matrix, or p_x and p_y for independent sources
//   f         |X| x |Y| matrix of output symbols
//   f2        optional second function
//   s, s2     optional declared output alphabets
CachingProblem parse_problem_text(const std::string& text);
CachingProblem parse_problem_file(const std::string& path);
std::string emit_problem_text(const CachingProblem& problem);

// Single-user certificates: { "v": [...], "p_v_given_x": matrix }.
TestChannel parse_channel_text(const std::string& text);
TestChannel parse_channel_file(const std::string& path);
std::string emit_channel_text(const TestChannel& channel,
                              std::vector<std::string> v_symbols = {});

// Two-user certificates are distinguished by their table fields:
//   p_v1_given_vc_x / p_v2_given_vc_x   private-update Gray-Wyner
//   p_vu_given_vc_x_y                   common-cache Gray-Wyner
//   p_vc_v2_given_x                     sequential successive refinement
enum class CertificateKind {
  single_user,
  gray_wyner_private,
  gray_wyner_common,
  successive_refinement,
};
CertificateKind certificate_kind_text(const std::string& text);
CertificateKind certificate_kind_file(const std::string& path);
GwAuxiliary parse_gw_certificate_file(const std::string& path);
CcAuxiliary parse_cc_certificate_file(const std::string& path);
SsrAuxiliary parse_ssr_certificate_file(const std::string& path);

// Shortest exact decimal form of a double; output files are byte-stable.
std::string format_double(double value);

struct BoundaryRow {
  std::string curve_id;
  double cache_rate = 0.0;
  double update_rate = 0.0;
  double gamma = 0.0;  // 0 marks analytic and closed-form rows
  bool converged = true;
  std::string witness_id;
};

// CSV with the fixed header curve_id,r_c,r_u,gamma,converged,witness_id.
void write_boundary_csv(const std::string& path, const std::vector<BoundaryRow>& rows);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ratecache
