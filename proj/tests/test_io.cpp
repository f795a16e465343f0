#include <sstream>

#include <catch_amalgamated.hpp>

#include "pncert/io.hpp"
#include "support.hpp"

using namespace pncert;

TEST_CASE("matrix JSON round trip") {
  Rng rng(301);
  Matrix m = rng.ginibre(3, 4);
  json j = matrix_to_json(m);
  Matrix back = matrix_from_json(j);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  REQUIRE(max_abs(m - back) == 0.0);
}

TEST_CASE("matrix JSON rejects malformed input") {
  REQUIRE_THROWS_AS(matrix_from_json(json::array()), ParseError);
  REQUIRE_THROWS_AS(matrix_from_json({{"rows", 2}, {"cols", 2}}), ParseError);
  REQUIRE_THROWS_AS(matrix_from_json({{"rows", 2.5}, {"cols", 2}, {"data", json::array()}}),
                    ParseError);
  REQUIRE_THROWS_AS(matrix_from_json({{"rows", 0}, {"cols", 2}, {"data", json::array()}}),
                    ParseError);
  // wrong-length data
  json short_data{{"rows", 2}, {"cols", 2}, {"data", {{1.0, 0.0}, {0.0, 0.0}}}};
  REQUIRE_THROWS_AS(matrix_from_json(short_data), ParseError);
  // malformed cell
  json bad_cell{{"rows", 1}, {"cols", 1}, {"data", {{1.0}}}};
  REQUIRE_THROWS_AS(matrix_from_json(bad_cell), ParseError);
  json str_cell{{"rows", 1}, {"cols", 1}, {"data", {{"1", "0"}}}};
  REQUIRE_THROWS_AS(matrix_from_json(str_cell), ParseError);
}

TEST_CASE("matrix JSON rejects non-finite entries") {
  json j{{"rows", 1}, {"cols", 2}, {"data", json::array()}};
  j["data"].push_back({1.0, 0.0});
  j["data"].push_back({std::numeric_limits<double>::infinity(), 0.0});
  REQUIRE_THROWS_AS(matrix_from_json(j), ParseError);
  j["data"][1] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  REQUIRE_THROWS_AS(matrix_from_json(j), ParseError);
}

TEST_CASE("read_matrix_file error paths") {
  REQUIRE_THROWS_AS(read_matrix_file("/nonexistent/matrix.json"), ParseError);
  const std::string path = "/tmp/pncert_bad_matrix.json";
  {
    std::ofstream out(path);
    out << "{not json";
  }
  REQUIRE_THROWS_AS(read_matrix_file(path), ParseError);
}

TEST_CASE("PnrResult JSON schema") {
  Rng rng(302);
  Matrix u = haar_unitary(4, rng).matrix();
  Rng seesaw = rng.substream(1);
  PnrResult r = z_distance(u, {2, 2}, seesaw);
  json j = pnr_result_to_json(r);
  REQUIRE(j["distance"].get<double>() == Catch::Approx(r.distance));
  REQUIRE(j["value"].size() == 2);
  REQUIRE(j["achiever"]["a"].size() == 2);
  REQUIRE(j["achiever"]["b"].size() == 2);
  REQUIRE(j["converged"].is_boolean());
  REQUIRE(j["restarts_used"].get<int>() == r.restarts_used);
}

TEST_CASE("CertificationPlan JSON schema") {
  Rng rng(303);
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0.0, 1.0);
  d(2, 2) = Complex(0.0, 1.0);
  d(3, 3) = -1.0;
  CertificationProblem p(UnitaryMatrix(d, Split{2, 2}),
                         UnitaryMatrix(Matrix::Identity(4, 4), Split{2, 2}), 0.0);
  CertificationPlan local = certify_local(p, rng);
  json jl = plan_to_json(local);
  REQUIRE(jl["mode"] == "local");
  REQUIRE(jl.contains("z"));
  REQUIRE_FALSE(jl.contains("v"));
  REQUIRE(jl.contains("input_a"));
  REQUIRE(jl.contains("input_b"));
  REQUIRE(jl["omega"].size() == 4);
  REQUIRE(jl["p2_predicted"].get<double>() == Catch::Approx(0.25).margin(1e-6));

  CertificationPlan global = certify_global(p);
  json jg = plan_to_json(global);
  REQUIRE(jg["mode"] == "global");
  REQUIRE(jg.contains("v"));
  REQUIRE_FALSE(jg.contains("input_a"));
}

TEST_CASE("Wilson interval properties") {
  auto [lo0, hi0] = wilson_interval(0, 100);
  REQUIRE(lo0 <= 1e-12);
  REQUIRE(hi0 > 0.0);
  REQUIRE(hi0 < 0.06);
  auto [lon, hin] = wilson_interval(100, 100);
  REQUIRE(hin >= 1.0 - 1e-12);
  REQUIRE(lon > 0.94);
  auto [lo, hi] = wilson_interval(50, 100);
  REQUIRE(lo < 0.5);
  REQUIRE(hi > 0.5);
  REQUIRE(hi - lo < 0.25);
  auto [loe, hie] = wilson_interval(0, 0);
  REQUIRE(loe == 0.0);
  REQUIRE(hie == 1.0);
}

TEST_CASE("transcript JSON carries counts and intervals") {
  ProtocolTranscript t;
  t.shots = 1000;
  t.counts = {{{950, 50}, {100, 900}}};
  t.p1_hat = 0.05;
  t.p2_hat = 0.1;
  json j = transcript_to_json(t);
  REQUIRE(j["shots"].get<std::size_t>() == 1000);
  REQUIRE(j["counts"]["U"]["reject"].get<std::size_t>() == 50);
  REQUIRE(j["counts"]["V"]["accept"].get<std::size_t>() == 100);
  REQUIRE(j["p1_wilson95"][0].get<double>() <= 0.05);
  REQUIRE(j["p1_wilson95"][1].get<double>() >= 0.05);
  REQUIRE(j["p2_wilson95"][0].get<double>() <= 0.1);
  REQUIRE(j["p2_wilson95"][1].get<double>() >= 0.1);
}

TEST_CASE("shadow CSV format") {
  Rng rng(304);
  Matrix x = rng.ginibre(4, 4);
  Rng srng = rng.substream(1);
  ShadowSampleSet s = shadow_sample(x, {2, 2}, 10, srng);
  std::ostringstream out;
  write_shadow_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "re,im");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double re, im;
    char comma;
    std::istringstream cell(line);
    REQUIRE((cell >> re >> comma >> im));
    REQUIRE(comma == ',');
    REQUIRE(std::abs(Complex(re, im) - s.samples[rows]) <= 1e-15);
    ++rows;
  }
  REQUIRE(rows == 10);

  // n = 0: header only
  ShadowSampleSet empty;
  std::ostringstream out2;
  write_shadow_csv(out2, empty);
  REQUIRE(out2.str() == "re,im\n");
}
