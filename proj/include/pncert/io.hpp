#ifndef PNCERT_IO_HPP
#define PNCERT_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pncert/certification.hpp"

namespace pncert {

using nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix JSON format: {"rows": n, "cols": n, "data": [[re, im], ...]}
/// row-major. Rejects wrong-length data and non-finite entries.
inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ParseError("matrix: expected object with fields rows, cols, data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw ParseError("matrix: rows/cols must be integers");
  Eigen::Index rows = j["rows"].get<Eigen::Index>();
  Eigen::Index cols = j["cols"].get<Eigen::Index>();
  if (rows < 1 || cols < 1) throw ParseError("matrix: rows/cols must be positive");
  const json& data = j["data"];
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ParseError("matrix: data length must equal rows*cols");
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const json& cell = data[k];
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
      throw ParseError("matrix: data entries must be [re, im] pairs");
    double re = cell[0].get<double>();
    double im = cell[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw ParseError("matrix: non-finite entry in data");
    m(k / cols, k % cols) = Complex(re, im);
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

inline json complex_to_json(const Complex& c) { return {c.real(), c.imag()}; }

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline json polygon_to_json(const NumRangePolygon& poly) {
  json verts = json::array();
  for (const Complex& p : poly.vertices) verts.push_back({p.real(), p.imag()});
  return verts;
}

inline json pnr_result_to_json(const PnrResult& r) {
  return {{"distance", r.distance},
          {"value", complex_to_json(r.value)},
          {"achiever",
           {{"a", vector_to_json(r.achiever.a().amplitudes())},
            {"b", vector_to_json(r.achiever.b().amplitudes())}}},
          {"converged", r.converged},
          {"restarts_used", r.restarts_used}};
}

inline json plan_to_json(const CertificationPlan& plan) {
  json out{{"mode", plan.mode == CertMode::local ? "local" : "global"},
           {"branch", plan.branch == CertBranch::orthogonal ? "orthogonal" : "tilted"},
           {plan.mode == CertMode::local ? "z" : "v", plan.z_or_v},
           {"p2_predicted", plan.p2_predicted},
           {"input", vector_to_json(plan.input.amplitudes())},
           {"h0", vector_to_json(plan.h0.amplitudes())},
           {"h1", vector_to_json(plan.h1.amplitudes())},
           {"omega", vector_to_json(plan.omega.amplitudes())},
           {"converged", plan.converged}};
  if (plan.input_product) {
    out["input_a"] = vector_to_json(plan.input_product->a().amplitudes());
    out["input_b"] = vector_to_json(plan.input_product->b().amplitudes());
  }
  if (plan.omega_perp)
    out["omega_perp"] = vector_to_json(plan.omega_perp->amplitudes());
  return out;
}

/// Wilson 95% score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  double p = static_cast<double>(successes) / static_cast<double>(n);
  double z2n = z * z / static_cast<double>(n);
  double center = (p + z2n / 2.0) / (1.0 + z2n);
  double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2n / (4.0 * n)) /
                (1.0 + z2n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline json transcript_to_json(const ProtocolTranscript& t) {
  auto [p1_lo, p1_hi] = wilson_interval(t.counts[0][1], t.shots);
  auto [p2_lo, p2_hi] = wilson_interval(t.counts[1][0], t.shots);
  return {{"shots", t.shots},
          {"counts",
           {{"U", {{"accept", t.counts[0][0]}, {"reject", t.counts[0][1]}}},
            {"V", {{"accept", t.counts[1][0]}, {"reject", t.counts[1][1]}}}}},
          {"p1_hat", t.p1_hat},
          {"p2_hat", t.p2_hat},
          {"p1_wilson95", {p1_lo, p1_hi}},
          {"p2_wilson95", {p2_lo, p2_hi}}};
}

/// Shadow CSV: header `re,im`, one sample per line.
inline void write_shadow_csv(std::ostream& out, const ShadowSampleSet& s) {
  out << "re,im\n";
  out.precision(17);
  for (const Complex& c : s.samples) out << c.real() << "," << c.imag() << "\n";
}

}  // namespace pncert

#endif  // PNCERT_IO_HPP
