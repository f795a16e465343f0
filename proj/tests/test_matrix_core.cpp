#include <catch_amalgamated.hpp>

#include "pncert/matrix_core.hpp"
#include "support.hpp"

using namespace pncert;
using pncert::testing::ks_statistic;
using pncert::testing::naive_multiply;
using pncert::testing::random_hermitian;

namespace {
const Complex I(0.0, 1.0);

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
}  // namespace

TEST_CASE("multiply basics") {
  Matrix id = Matrix::Identity(2, 2);
  REQUIRE(max_abs(multiply(id, id) - id) == 0.0);

  Matrix d = diag2(1.0, I);
  REQUIRE(max_abs(multiply(d, d) - diag2(1.0, -1.0)) < 1e-15);

  REQUIRE_THROWS_AS(multiply(Matrix::Zero(2, 3), Matrix::Zero(2, 3)),
                    std::invalid_argument);
}

TEST_CASE("multiply matches the naive triple loop") {
  Rng rng(11);
  Matrix a = rng.ginibre(3, 3);
  Matrix b = rng.ginibre(3, 3);
  REQUIRE(max_abs(multiply(a, b) - naive_multiply(a, b)) <= 1e-13);
}

TEST_CASE("kron basics and index convention") {
  Matrix id2 = Matrix::Identity(2, 2);
  REQUIRE(max_abs(kron(id2, id2) - Matrix::Identity(4, 4)) == 0.0);

  Matrix d = diag2(1.0, I);
  Matrix dd = kron(d, d);
  Vector expect(4);
  expect << 1.0, I, I, Complex(-1.0, 0.0);
  REQUIRE(max_abs(dd - Matrix(expect.asDiagonal())) < 1e-15);

  // (A (x) B)(|a> (x) |b>) = (A|a>) (x) (B|b>)
  Rng rng(5);
  Matrix a = rng.ginibre(2, 2);
  Matrix b = rng.ginibre(3, 3);
  Vector va = rng.complex_normal_vector(2);
  Vector vb = rng.complex_normal_vector(3);
  Vector lhs = kron(a, b) * kron(va, vb);
  Vector rhs = kron(Vector(a * va), Vector(b * vb));
  REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("kron mixed-product property") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a = rng.ginibre(2, 2), b = rng.ginibre(3, 3);
    Matrix c = rng.ginibre(2, 2), d = rng.ginibre(3, 3);
    Matrix lhs = kron(a, b) * kron(c, d);
    Matrix rhs = kron(Matrix(a * c), Matrix(b * d));
    REQUIRE(max_abs(lhs - rhs) <= 1e-12);
    Matrix assoc1 = kron(kron(a, b), c);
    Matrix assoc2 = kron(a, kron(b, c));
    REQUIRE(max_abs(assoc1 - assoc2) <= 1e-12);
  }
}

TEST_CASE("eig_hermitian on simple spectra") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  HermitianEig eig = eig_hermitian(d);
  REQUIRE(eig.values(0) == Catch::Approx(1.0));
  REQUIRE(eig.values(1) == Catch::Approx(2.0));
  REQUIRE(eig.values(2) == Catch::Approx(3.0));

  Matrix pauli_x(2, 2);
  pauli_x << 0.0, 1.0, 1.0, 0.0;
  HermitianEig px = eig_hermitian(pauli_x);
  REQUIRE(px.values(0) == Catch::Approx(-1.0));
  REQUIRE(px.values(1) == Catch::Approx(1.0));

  REQUIRE_THROWS_AS(eig_hermitian(diag2(1.0, I)), std::invalid_argument);
}

TEST_CASE("eig_hermitian reconstruction and trace") {
  Rng rng(21);
  Matrix h = random_hermitian(6, rng);
  HermitianEig eig = eig_hermitian(h);
  Matrix rebuilt = eig.vectors *
                   eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  REQUIRE(max_abs(h - rebuilt) <= 1e-10);
  REQUIRE(std::abs(eig.values.sum() - h.trace().real()) <= 1e-10 * 6);
  Matrix gram = eig.vectors.adjoint() * eig.vectors;
  REQUIRE(max_abs(gram - Matrix::Identity(6, 6)) <= 1e-10);
}

TEST_CASE("eig_unitary on the reflection matrix") {
  UnitaryMatrix u = reflection_example(2);
  UnitaryEig eig = eig_unitary(u);
  std::vector<double> phases(eig.phases.data(), eig.phases.data() + 4);
  std::sort(phases.begin(), phases.end());
  REQUIRE(phases[0] == Catch::Approx(0.0).margin(1e-10));
  REQUIRE(phases[1] == Catch::Approx(0.0).margin(1e-10));
  REQUIRE(phases[2] == Catch::Approx(0.0).margin(1e-10));
  REQUIRE(phases[3] == Catch::Approx(std::numbers::pi).margin(1e-10));
}

TEST_CASE("eig_unitary on diag(1, i)") {
  UnitaryMatrix u{diag2(1.0, I)};
  UnitaryEig eig = eig_unitary(u);
  REQUIRE(eig.phases(0) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(eig.phases(1) == Catch::Approx(std::numbers::pi / 2).margin(1e-12));
}

TEST_CASE("eig_unitary reconstructs a Haar sample") {
  Rng rng(33);
  UnitaryMatrix u = haar_unitary(5, rng);
  UnitaryEig eig = eig_unitary(u);
  for (Eigen::Index k = 0; k < 5; ++k) {
    Vector v = eig.vectors.col(k);
    Complex lambda = std::polar(1.0, eig.phases(k));
    REQUIRE((u.matrix() * v - lambda * v).norm() <= 1e-9);
    REQUIRE(std::abs(std::abs(lambda) - 1.0) <= 1e-12);
  }
  Matrix rebuilt = Matrix::Zero(5, 5);
  for (Eigen::Index k = 0; k < 5; ++k)
    rebuilt += std::polar(1.0, eig.phases(k)) *
               (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
  REQUIRE(max_abs(rebuilt - u.matrix()) <= 1e-9);
}

TEST_CASE("unitary_power endpoints and square root") {
  Rng rng(44);
  UnitaryMatrix u = haar_unitary(4, rng);
  REQUIRE(max_abs(unitary_power(u, 0.0).matrix() - Matrix::Identity(4, 4)) <= 1e-10);
  REQUIRE(max_abs(unitary_power(u, 1.0).matrix() - u.matrix()) <= 1e-10);
  Matrix root = unitary_power(u, 0.5).matrix();
  REQUIRE(max_abs(root * root - u.matrix()) <= 1e-9);
  REQUIRE_THROWS_AS(unitary_power(u, 1.5), std::invalid_argument);
}

TEST_CASE("haar_unitary dim=1 phase is circular-uniform") {
  Rng rng(55);
  Complex mean(0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Rng sub = rng.substream(i);
    mean += haar_unitary(1, sub).matrix()(0, 0);
  }
  mean /= static_cast<double>(n);
  REQUIRE(std::abs(mean) <= 0.02);
}

TEST_CASE("haar_unitary first-entry moment at dim=4") {
  Rng rng(66);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Rng sub = rng.substream(i);
    double m = std::norm(haar_unitary(4, sub).matrix()(0, 0));
    sum += m;
    sumsq += m * m;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  double stderr_ = std::sqrt(var / n);
  REQUIRE(std::abs(mean - 0.25) <= 3.0 * stderr_);
}

TEST_CASE("haar_unitary is deterministic per seed") {
  Rng r1(77), r2(77);
  Matrix a = haar_unitary(4, r1).matrix();
  Matrix b = haar_unitary(4, r2).matrix();
  REQUIRE(max_abs(a - b) == 0.0);
}

TEST_CASE("haar_unitary invariance: |tr(WU)| distributed like |tr(U)|") {
  Rng rng(88);
  Rng wrng = rng.substream(0);
  Matrix w = haar_unitary(3, wrng).matrix();
  const int n = 10000;
  std::vector<double> plain, rotated;
  for (int i = 0; i < n; ++i) {
    Rng s1 = rng.substream(2 * i + 1);
    Rng s2 = rng.substream(2 * i + 2);
    plain.push_back(std::abs(Complex(haar_unitary(3, s1).matrix().trace())));
    rotated.push_back(std::abs(Complex((w * haar_unitary(3, s2).matrix()).trace())));
  }
  // 1% two-sample KS critical value: 1.628 * sqrt(2/n)
  double critical = 1.628 * std::sqrt(2.0 / n);
  REQUIRE(ks_statistic(plain, rotated) < critical);
}

TEST_CASE("reflection_example structure") {
  for (Eigen::Index d = 2; d <= 4; ++d) {
    UnitaryMatrix u = reflection_example(d);
    REQUIRE(u.dim() == d * d);
    REQUIRE(is_hermitian(u.matrix()));
    REQUIRE(is_unitary(u.matrix()));
    // <1,1|U|1,1> = 1 - 2/d
    REQUIRE(u.matrix()(0, 0).real() ==
            Catch::Approx(1.0 - 2.0 / static_cast<double>(d)));
  }
  UnitaryEig eig = eig_unitary(reflection_example(2));
  int minus_ones = 0;
  for (Eigen::Index k = 0; k < 4; ++k)
    if (std::abs(eig.phases(k) - std::numbers::pi) < 1e-9) ++minus_ones;
  REQUIRE(minus_ones == 1);
}

TEST_CASE("t_alpha_family endpoints") {
  Rng rng(99);
  UnitaryMatrix u = haar_unitary(2, rng);
  Rng rng2 = rng.substream(1);
  UnitaryMatrix v = haar_unitary(2, rng2);
  Matrix at0 = t_alpha_family(u, v, 0.0).matrix();
  REQUIRE(max_abs(at0 - kron(u.matrix(), v.matrix())) <= 1e-9);
  Matrix at1 = t_alpha_family(u, v, 1.0).matrix();
  REQUIRE(max_abs(at1 - reflection_example(2).matrix()) <= 1e-9);
  for (double alpha : {0.25, 0.5, 0.9}) {
    UnitaryMatrix t = t_alpha_family(u, v, alpha);  // constructor checks unitarity
    REQUIRE(t.split() == Split{2, 2});
  }
}

TEST_CASE("constructed unitaries satisfy the unitarity invariant") {
  Rng rng(123);
  for (int i = 0; i < 10; ++i) {
    Rng sub = rng.substream(i);
    UnitaryMatrix u = haar_unitary(2 + i % 5, sub);
    Matrix gram = u.matrix().adjoint() * u.matrix();
    REQUIRE(max_abs(gram - Matrix::Identity(u.dim(), u.dim())) <= 1e-10);
  }
  REQUIRE_THROWS_AS(UnitaryMatrix(Matrix::Ones(2, 2)), std::invalid_argument);
}
