#include "disclocus/numcore.hpp"
#include "disclocus/parallel.hpp"
#include "disclocus/rng.hpp"

#include <doctest.h>

#include <atomic>
#include <set>
#include <stdexcept>

using namespace disclocus;

TEST_CASE("lu_solve identity") {
  const CMat a = CMat::Identity(2, 2);
  CVec b(2);
  b << Complex(1, 1), 2.0;
  const CVec y = lu_solve(a, b);
  CHECK(y(0) == Complex(1, 1));
  CHECK(y(1) == Complex(2, 0));
}

TEST_CASE("lu_solve diagonal") {
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  CVec b(2);
  b << 2.0, 8.0;
  const CVec y = lu_solve(a, b);
  CHECK(std::abs(y(0) - 1.0) < 1e-15);
  CHECK(std::abs(y(1) - 2.0) < 1e-15);
}

TEST_CASE("lu_solve rejects rank-deficient and mis-sized input") {
  CMat a = CMat::Zero(2, 2);
  a(1, 1) = 1.0;
  CVec b = CVec::Ones(2);
  try {
    lu_solve(a, b);
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
  CHECK_THROWS_AS(lu_solve(CMat(CMat::Zero(2, 2)), b), Error);
  try {
    lu_solve(CMat(CMat::Identity(3, 3)), b);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    lu_solve(CMat(CMat::Identity(2, 3)), b);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("lu_solve residual and recovery on well-conditioned matrices") {
  Rng rng = make_rng(2024);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 100; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(trial % 8);
    CMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = complex_gaussian(rng);
    const Eigen::JacobiSVD<CMat> svd(a);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) == 0.0 || sv(0) / sv(n - 1) >= 1e6) continue;
    ++tested;
    const CVec y_true = complex_gaussian_vector(rng, n);
    const CVec b = a * y_true;
    const CVec y = lu_solve(a, b);
    CHECK(inf_norm(a * y - b) / inf_norm(b) < 1e-10);
    CHECK(inf_norm(y - y_true) / inf_norm(y_true) < 1e-8);
    CHECK(inf_norm(a * y - b) <= 1e-12 * std::max(1.0, matrix_inf_norm(a) * inf_norm(y)));
  }
  CHECK(tested == 100);
}

TEST_CASE("lu_solve works for real scalars") {
  RMat a(2, 2);
  a << 4, 1, 2, 3;
  RVec b(2);
  b << 1, 2;
  const RVec y = lu_solve(a, b);
  CHECK((a * y - b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("inf_norm") {
  CVec v(2);
  v << Complex(3, 4), 1.0;
  CHECK(inf_norm(v) == 5.0);
  CHECK(inf_norm(CVec(0)) == 0.0);
  CVec w(2);
  w << -2.0, Complex(0, 2);
  CHECK(inf_norm(w) == 2.0);
}

TEST_CASE("derived seeds separate streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t a = 0; a < 16; ++a) {
      seen.insert(derive_seed(s, a));
      seen.insert(derive_seed(s, static_cast<std::uint64_t>(Stream::Line), a));
      seen.insert(derive_seed(s, static_cast<std::uint64_t>(Stream::Uniform), a));
    }
  CHECK(seen.size() == 4 * 16 * 3);
  Rng r1 = make_rng(9, Stream::Label, 3);
  Rng r2 = make_rng(9, Stream::Label, 3);
  CHECK(r1() == r2());
}

TEST_CASE("random_gamma lies on the unit circle away from +-1") {
  Rng rng = make_rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Complex g = random_gamma(rng);
    CHECK(std::abs(std::abs(g) - 1.0) < 1e-14);
    CHECK(std::abs(g - 1.0) >= 1e-3);
    CHECK(std::abs(g + 1.0) >= 1e-3);
  }
}

TEST_CASE("parallel_for fills every slot once and rethrows") {
  for (int jobs : {1, 3}) {
    std::vector<int> out(100, 0);
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] += static_cast<int>(i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i));
    CHECK_THROWS_AS(parallel_for(10, jobs,
                                 [](std::size_t i) {
                                   if (i == 4) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }
}
