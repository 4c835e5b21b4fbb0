#include "ratecache/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ratecache {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(ParseCode::bad_value, "not valid JSON");
  if (!j.is_object()) throw ParseError(ParseCode::bad_value, "expected a JSON object");
  return j;
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ParseError(ParseCode::missing_field, "missing field '" + field + "'");
  }
  return *it;
}

std::vector<std::string> symbol_list(const json& j, const std::string& field) {
  const json& arr = require(j, field);
  if (!arr.is_array() || arr.empty()) {
    throw ParseError(ParseCode::shape_mismatch, "field '" + field +
                                                    "' must be a non-empty array of symbols");
  }
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      throw ParseError(ParseCode::bad_value, "field '" + field + "' has a non-symbol entry");
    }
  }
  return out;
}

double number_at(const json& e, const std::string& field, std::size_t i, std::size_t k) {
  if (!e.is_number()) {
    throw ParseError(ParseCode::bad_value, "field '" + field + "' entry (" +
                                               std::to_string(i) + ", " + std::to_string(k) +
                                               ") is not a number");
  }
  return e.get<double>();
}

std::vector<double> number_row(const json& row, const std::string& field, std::size_t i,
                               std::size_t want) {
  if (!row.is_array() || (want != 0 && row.size() != want)) {
    throw ParseError(ParseCode::shape_mismatch,
                     "field '" + field + "' row " + std::to_string(i) + " has " +
                         std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                         std::to_string(want));
  }
  std::vector<double> out;
  out.reserve(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) out.push_back(number_at(row[k], field, i, k));
  return out;
}

std::vector<std::vector<double>> number_matrix(const json& j, const std::string& field,
                                               std::size_t want_rows, std::size_t want_cols) {
  const json& m = require(j, field);
  if (!m.is_array() || (want_rows != 0 && m.size() != want_rows)) {
    throw ParseError(ParseCode::shape_mismatch,
                     "field '" + field + "' has " +
                         std::to_string(m.is_array() ? m.size() : 0) + " rows, expected " +
                         std::to_string(want_rows));
  }
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(number_row(m[i], field, i, want_cols));
  return out;
}

void check_rows_normalized(const std::vector<std::vector<double>>& rows,
                           const std::string& field) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double sum = 0.0;
    for (double p : rows[i]) {
      if (!(p >= 0.0)) {
        throw ParseError(ParseCode::bad_value,
                         "field '" + field + "' row " + std::to_string(i) + " has a negative entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kMassTol) {
      throw ParseError(ParseCode::normalization, "field '" + field + "' row " +
                                                      std::to_string(i) + " sums to " +
                                                      format_double(sum));
    }
  }
}

SymbolTable symbol_matrix(const json& j, const std::string& field, std::size_t rows,
                          std::size_t cols) {
  const json& m = require(j, field);
  if (!m.is_array() || m.size() != rows) {
    throw ParseError(ParseCode::shape_mismatch,
                     "field '" + field + "' has " +
                         std::to_string(m.is_array() ? m.size() : 0) + " rows, expected " +
                         std::to_string(rows));
  }
  SymbolTable out;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = m[i];
    if (!row.is_array() || row.size() != cols) {
      throw ParseError(ParseCode::shape_mismatch,
                       "field '" + field + "' row " + std::to_string(i) + " has " +
                           std::to_string(row.is_array() ? row.size() : 0) +
                           " entries, expected " + std::to_string(cols));
    }
    std::vector<std::string> syms;
    for (const auto& e : row) {
      if (e.is_string()) {
        syms.push_back(e.get<std::string>());
      } else if (e.is_number_integer()) {
        syms.push_back(std::to_string(e.get<long long>()));
      } else {
        throw ParseError(ParseCode::bad_value,
                         "field '" + field + "' row " + std::to_string(i) + " has a non-symbol entry");
      }
    }
    out.push_back(std::move(syms));
  }
  return out;
}

json symbols_to_json(const std::vector<std::string>& symbols) {
  json arr = json::array();
  for (const auto& s : symbols) arr.push_back(s);
  return arr;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseCode::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(ParseCode::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out) throw ParseError(ParseCode::io_error, "write failed for '" + path + "'");
}

CachingProblem parse_problem_text(const std::string& text) {
  json j = parse_json(text);
  std::vector<std::string> x = symbol_list(j, "x");
  std::vector<std::string> y = symbol_list(j, "y");
  const std::size_t nx = x.size(), ny = y.size();

  std::vector<double> table(nx * ny);
  if (j.contains("p_xy")) {
    auto m = number_matrix(j, "p_xy", nx, ny);
    double sum = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t k = 0; k < ny; ++k) {
        if (!(m[i][k] >= 0.0)) {
          throw ParseError(ParseCode::bad_value, "field 'p_xy' entry (" + std::to_string(i) +
                                                     ", " + std::to_string(k) + ") is negative");
        }
        table[i * ny + k] = m[i][k];
        sum += m[i][k];
      }
    }
    if (std::abs(sum - 1.0) > kMassTol) {
      throw ParseError(ParseCode::normalization, "field 'p_xy' sums to " + format_double(sum));
    }
  } else if (j.contains("p_x") && j.contains("p_y")) {
    auto px = number_row(require(j, "p_x"), "p_x", 0, nx);
    auto py = number_row(require(j, "p_y"), "p_y", 0, ny);
    for (const auto& [name, v] : {std::pair{"p_x", &px}, std::pair{"p_y", &py}}) {
      double sum = 0.0;
      for (double p : *v) {
        if (!(p >= 0.0)) {
          throw ParseError(ParseCode::bad_value, std::string("field '") + name +
                                                     "' has a negative entry");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kMassTol) {
        throw ParseError(ParseCode::normalization,
                         std::string("field '") + name + "' sums to " + format_double(sum));
      }
    }
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t k = 0; k < ny; ++k) table[i * ny + k] = px[i] * py[k];
    }
  } else {
    throw ParseError(ParseCode::missing_field, "missing field 'p_xy' (or 'p_x' and 'p_y')");
  }

  std::vector<SymbolTable> f_tables;
  f_tables.push_back(symbol_matrix(j, "f", nx, ny));
  if (j.contains("f2")) f_tables.push_back(symbol_matrix(j, "f2", nx, ny));

  std::vector<std::vector<std::string>> declared;
  if (j.contains("s")) {
    declared.push_back(symbol_list(j, "s"));
    if (f_tables.size() == 2) {
      if (!j.contains("s2")) {
        throw ParseError(ParseCode::missing_field, "missing field 's2' (declared with 's')");
      }
      declared.push_back(symbol_list(j, "s2"));
    }
  }

  try {
    return CachingProblem(std::move(x), std::move(y), JointPmf({nx, ny}, std::move(table)),
                          std::move(f_tables), std::move(declared));
  } catch (const std::invalid_argument& e) {
    throw ParseError(ParseCode::bad_value, e.what());
  }
}

CachingProblem parse_problem_file(const std::string& path) {
  return parse_problem_text(read_file(path));
}

std::string emit_problem_text(const CachingProblem& problem) {
  json j;
  j["x"] = symbols_to_json(problem.x_alphabet());
  j["y"] = symbols_to_json(problem.y_alphabet());
  json rows = json::array();
  for (std::size_t x = 0; x < problem.x_size(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < problem.y_size(); ++y) row.push_back(problem.p_xy(x, y));
    rows.push_back(std::move(row));
  }
  j["p_xy"] = std::move(rows);
  auto table_json = [](const SymbolTable& t) {
    json m = json::array();
    for (const auto& row : t) m.push_back(symbols_to_json(row));
    return m;
  };
  j["f"] = table_json(problem.f_tables()[0]);
  j["s"] = symbols_to_json(problem.s_alphabet(0));
  if (problem.num_functions() == 2) {
    j["f2"] = table_json(problem.f_tables()[1]);
    j["s2"] = symbols_to_json(problem.s_alphabet(1));
  }
  return j.dump(2) + "\n";
}

TestChannel parse_channel_text(const std::string& text) {
  json j = parse_json(text);
  std::vector<std::string> v = symbol_list(j, "v");
  auto rows = number_matrix(j, "p_v_given_x", 0, v.size());
  check_rows_normalized(rows, "p_v_given_x");
  try {
    return TestChannel(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseError(ParseCode::bad_value, e.what());
  }
}

TestChannel parse_channel_file(const std::string& path) {
  return parse_channel_text(read_file(path));
}

std::string emit_channel_text(const TestChannel& channel, std::vector<std::string> v_symbols) {
  if (v_symbols.empty()) {
    for (std::size_t v = 0; v < channel.v_card(); ++v) v_symbols.push_back("v" + std::to_string(v));
  }
  if (v_symbols.size() != channel.v_card()) {
    throw std::invalid_argument("emit_channel_text: symbol count mismatch");
  }
  json j;
  j["v"] = symbols_to_json(v_symbols);
  json rows = json::array();
  for (std::size_t x = 0; x < channel.x_size(); ++x) {
    json row = json::array();
    for (std::size_t v = 0; v < channel.v_card(); ++v) row.push_back(channel.p(x, v));
    rows.push_back(std::move(row));
  }
  j["p_v_given_x"] = std::move(rows);
  return j.dump(2) + "\n";
}

CertificateKind certificate_kind_text(const std::string& text) {
  json j = parse_json(text);
  if (j.contains("p_v1_given_vc_x") || j.contains("p_v2_given_vc_x")) {
    return CertificateKind::gray_wyner_private;
  }
  if (j.contains("p_vu_given_vc_x_y")) return CertificateKind::gray_wyner_common;
  if (j.contains("p_vc_v2_given_x")) return CertificateKind::successive_refinement;
  if (j.contains("p_v_given_x")) return CertificateKind::single_user;
  throw ParseError(ParseCode::missing_field,
                   "certificate has none of the recognized table fields");
}

CertificateKind certificate_kind_file(const std::string& path) {
  return certificate_kind_text(read_file(path));
}

namespace {

CondTable3 cond_table3(const json& j, const std::string& field, std::size_t d0,
                       std::size_t d1) {
  const json& t = require(j, field);
  if (!t.is_array() || t.size() != d0) {
    throw ParseError(ParseCode::shape_mismatch,
                     "field '" + field + "' has " + std::to_string(t.is_array() ? t.size() : 0) +
                         " slices, expected " + std::to_string(d0));
  }
  CondTable3 out(d0);
  std::size_t inner = 0;
  for (std::size_t a = 0; a < d0; ++a) {
    const json& slice = t[a];
    if (!slice.is_array() || slice.size() != d1) {
      throw ParseError(ParseCode::shape_mismatch, "field '" + field + "' slice " +
                                                      std::to_string(a) + " has wrong size");
    }
    out[a].resize(d1);
    for (std::size_t b = 0; b < d1; ++b) {
      out[a][b] = number_row(slice[b], field, a * d1 + b, inner);
      if (inner == 0) inner = out[a][b].size();
    }
  }
  return out;
}

}  // namespace

GwAuxiliary parse_gw_certificate_file(const std::string& path) {
  json j = parse_json(read_file(path));
  std::vector<std::string> vc = symbol_list(j, "v_c");
  auto common_rows = number_matrix(j, "p_vc_given_x", 0, vc.size());
  check_rows_normalized(common_rows, "p_vc_given_x");
  std::size_t nx = common_rows.size();
  CondTable3 p1 = cond_table3(j, "p_v1_given_vc_x", vc.size(), nx);
  CondTable3 p2 = cond_table3(j, "p_v2_given_vc_x", vc.size(), nx);
  for (std::size_t vc_i = 0; vc_i < vc.size(); ++vc_i) {
    check_rows_normalized(p1[vc_i], "p_v1_given_vc_x");
    check_rows_normalized(p2[vc_i], "p_v2_given_vc_x");
  }
  return {TestChannel(std::move(common_rows)), std::move(p1), std::move(p2)};
}

CcAuxiliary parse_cc_certificate_file(const std::string& path) {
  json j = parse_json(read_file(path));
  std::vector<std::string> vc = symbol_list(j, "v_c");
  auto common_rows = number_matrix(j, "p_vc_given_x", 0, vc.size());
  check_rows_normalized(common_rows, "p_vc_given_x");
  std::size_t nx = common_rows.size();

  const json& t = require(j, "p_vu_given_vc_x_y");
  if (!t.is_array() || t.size() != vc.size()) {
    throw ParseError(ParseCode::shape_mismatch, "field 'p_vu_given_vc_x_y' has wrong size");
  }
  CondTable4 update(vc.size());
  for (std::size_t a = 0; a < vc.size(); ++a) {
    if (!t[a].is_array() || t[a].size() != nx) {
      throw ParseError(ParseCode::shape_mismatch, "field 'p_vu_given_vc_x_y' has wrong size");
    }
    update[a].resize(nx);
    for (std::size_t b = 0; b < nx; ++b) {
      const json& per_y = t[a][b];
      if (!per_y.is_array() || per_y.empty()) {
        throw ParseError(ParseCode::shape_mismatch, "field 'p_vu_given_vc_x_y' has wrong size");
      }
      update[a][b].resize(per_y.size());
      for (std::size_t y = 0; y < per_y.size(); ++y) {
        update[a][b][y] = number_row(per_y[y], "p_vu_given_vc_x_y", y, 0);
      }
      check_rows_normalized(update[a][b], "p_vu_given_vc_x_y");
    }
  }
  return {TestChannel(std::move(common_rows)), std::move(update)};
}

SsrAuxiliary parse_ssr_certificate_file(const std::string& path) {
  json j = parse_json(read_file(path));
  std::vector<std::string> vc = symbol_list(j, "v_c");
  std::vector<std::string> v2 = symbol_list(j, "v2");
  const json& t = require(j, "p_vc_v2_given_x");
  if (!t.is_array() || t.empty()) {
    throw ParseError(ParseCode::shape_mismatch, "field 'p_vc_v2_given_x' has wrong size");
  }
  CondTable3 joint(t.size());
  for (std::size_t x = 0; x < t.size(); ++x) {
    const json& slice = t[x];
    if (!slice.is_array() || slice.size() != vc.size()) {
      throw ParseError(ParseCode::shape_mismatch, "field 'p_vc_v2_given_x' slice " +
                                                      std::to_string(x) + " has wrong size");
    }
    joint[x].resize(vc.size());
    double sum = 0.0;
    for (std::size_t a = 0; a < vc.size(); ++a) {
      joint[x][a] = number_row(slice[a], "p_vc_v2_given_x", x, v2.size());
      for (double p : joint[x][a]) {
        if (!(p >= 0.0)) {
          throw ParseError(ParseCode::bad_value, "field 'p_vc_v2_given_x' slice " +
                                                     std::to_string(x) + " has a negative entry");
        }
        sum += p;
      }
    }
    if (std::abs(sum - 1.0) > kMassTol) {
      throw ParseError(ParseCode::normalization, "field 'p_vc_v2_given_x' slice " +
                                                     std::to_string(x) + " sums to " +
                                                     format_double(sum));
    }
  }
  return {std::move(joint)};
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  write_file(path, out.str());
}

void write_boundary_csv(const std::string& path, const std::vector<BoundaryRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({r.curve_id, format_double(r.cache_rate), format_double(r.update_rate),
                     format_double(r.gamma), r.converged ? "1" : "0", r.witness_id});
  }
  write_csv(path, {"curve_id", "r_c", "r_u", "gamma", "converged", "witness_id"}, cells);
}

}  // namespace ratecache
