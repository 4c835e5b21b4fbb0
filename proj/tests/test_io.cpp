#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ratecache/io.hpp"
#include "ratecache/closed_form.hpp"
#include "test_util.hpp"

using namespace ratecache;

namespace {

std::string temp_path(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "ratecache_io_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("fixtures parse to the expected shapes") {
  CachingProblem dsbs = parse_problem_file(testutil::fixture("dsbs_q01.json"));
  CHECK(dsbs.x_size() == 4);
  CHECK(dsbs.y_size() == 2);
  CHECK(dsbs.num_functions() == 1);
  CHECK(dsbs.s_size(0) == 2);
  CHECK(dsbs == dsbs_selector_problem(0.1));

  CachingProblem masked = parse_problem_file(testutil::fixture("masked_bit.json"));
  CHECK(masked.num_functions() == 2);
}

TEST_CASE("problem round trip is bit exact") {
  for (const char* name : {"dsbs_q01.json", "fair_bits_uniform.json", "fair_bits_skewed.json",
                           "nested_bits.json", "xor_bits.json", "masked_bit.json"}) {
    CachingProblem original = parse_problem_file(testutil::fixture(name));
    CachingProblem reparsed = parse_problem_text(emit_problem_text(original));
    CHECK(original == reparsed);
    // A second emit must produce the same bytes.
    CHECK(emit_problem_text(original) == emit_problem_text(reparsed));
  }
}

TEST_CASE("parse diagnostics") {
  // Missing alphabet.
  try {
    parse_problem_text(R"({"y": ["1"], "p_xy": [[1.0]], "f": [["0"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::missing_field);
    CHECK(std::string(e.what()).find("x") != std::string::npos);
  }

  // Joint mass off by too much; the message names the sum.
  try {
    parse_problem_text(
        R"({"x": ["0", "1"], "y": ["a"], "p_xy": [[0.5], [0.4]], "f": [["0"], ["1"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::normalization);
    CHECK(std::string(e.what()).find("0.9") != std::string::npos);
  }

  // Shape mismatch.
  try {
    parse_problem_text(
        R"({"x": ["0", "1"], "y": ["a"], "p_xy": [[1.0]], "f": [["0"], ["1"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::shape_mismatch);
  }

  // Function entry outside the declared output alphabet names the cell.
  try {
    parse_problem_text(
        R"({"x": ["0", "1"], "y": ["a"], "p_xy": [[0.5], [0.5]],
            "f": [["0"], ["2"]], "s": ["0", "1"]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::bad_value);
    CHECK(std::string(e.what()).find("x=1") != std::string::npos);
    CHECK(std::string(e.what()).find("y=0") != std::string::npos);
  }

  // Unreadable path.
  CHECK_THROWS_AS(parse_problem_file("/nonexistent/nope.json"), ParseError);
}

TEST_CASE("channel certificates") {
  TestChannel channel = dsbs_binary_channel(0.2);
  std::string text = emit_channel_text(channel);
  TestChannel reparsed = parse_channel_text(text);
  CHECK(channel == reparsed);
  CHECK(certificate_kind_text(text) == CertificateKind::single_user);

  try {
    parse_channel_text(R"({"v": ["0", "1"], "p_v_given_x": [[0.9, 0.2]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::normalization);
  }
}

TEST_CASE("two-user certificates parse and evaluate") {
  std::string gw_path = temp_path("gw.json");
  write_file(gw_path, R"({
    "v_c": ["0", "1"],
    "p_vc_given_x": [[1.0, 0.0], [0.0, 1.0]],
    "v1": ["*"],
    "p_v1_given_vc_x": [[[1.0], [1.0]], [[1.0], [1.0]]],
    "v2": ["*"],
    "p_v2_given_vc_x": [[[1.0], [1.0]], [[1.0], [1.0]]]
  })");
  CHECK(certificate_kind_file(gw_path) == CertificateKind::gray_wyner_private);
  GwAuxiliary gw = parse_gw_certificate_file(gw_path);
  CHECK(gw.common.v_card() == 2);

  std::string cc_path = temp_path("cc.json");
  write_file(cc_path, R"({
    "v_c": ["0"],
    "p_vc_given_x": [[1.0], [1.0]],
    "v_u": ["0", "1"],
    "p_vu_given_vc_x_y": [[[[1.0, 0.0], [1.0, 0.0]], [[0.0, 1.0], [1.0, 0.0]]]]
  })");
  CHECK(certificate_kind_file(cc_path) == CertificateKind::gray_wyner_common);
  CcAuxiliary cc = parse_cc_certificate_file(cc_path);
  CHECK(cc.update.size() == 1);

  std::string ssr_path = temp_path("ssr.json");
  write_file(ssr_path, R"({
    "v_c": ["0"],
    "v2": ["00", "01", "11"],
    "p_vc_v2_given_x": [[[0.5, 0.5, 0.0]], [[0.5, 0.0, 0.5]]]
  })");
  CHECK(certificate_kind_file(ssr_path) == CertificateKind::successive_refinement);
  SsrAuxiliary ssr = parse_ssr_certificate_file(ssr_path);
  CHECK(ssr.joint.size() == 2);

  try {
    parse_ssr_certificate_file(gw_path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::missing_field);
  }
}

TEST_CASE("alphabet and table size mismatches are rejected") {
  // p_y shorter than y.
  try {
    parse_problem_text(
        R"({"x": ["0"], "y": ["a", "b"], "p_x": [1.0], "p_y": [1.0], "f": [["0", "0"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::shape_mismatch);
  }
  // Non-numeric probability entry.
  try {
    parse_problem_text(
        R"({"x": ["0", "1"], "y": ["a"], "p_xy": [["x"], [0.5]], "f": [["0"], ["1"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::bad_value);
  }
  // Channel with the wrong row count surfaces as a library error.
  CachingProblem dsbs = parse_problem_file(testutil::fixture("dsbs_q01.json"));
  TestChannel two_rows = parse_channel_text(
      R"({"v": ["0", "1"], "p_v_given_x": [[0.5, 0.5], [0.5, 0.5]]})");
  CHECK_THROWS_AS(achievable_point(dsbs, two_rows), std::invalid_argument);
}

TEST_CASE("csv output") {
  std::string path = temp_path("rows.csv");
  write_boundary_csv(path, {{"hull", 0.0, 1.0, 0.0, true, "w0.json"},
                            {"hull", 0.25, 0.75, 1.5, false, ""}});
  std::string text = read_file(path);
  CHECK(text == "curve_id,r_c,r_u,gamma,converged,witness_id\n"
                "hull,0,1,0,1,w0.json\n"
                "hull,0.25,0.75,1.5,0,\n");

  CHECK_THROWS_AS(write_csv("/nonexistent_dir_xyz/out.csv", {"a"}, {}), ParseError);
}

TEST_CASE("doubles format to shortest exact decimals") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  double value = 0.8726063797571529;
  CHECK(std::stod(format_double(value)) == value);
}
