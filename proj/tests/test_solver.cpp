#include "disclocus/sampler.hpp"
#include "disclocus/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace disclocus;

namespace {

RVec rv(std::initializer_list<double> v) {
  RVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) out(i++) = c;
  return out;
}

PathResult success(std::initializer_list<Complex> x) {
  PathResult r;
  r.status = PathStatus::Success;
  r.t_reached = 0.0;
  r.endpoint.resize(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (auto c : x) r.endpoint(i++) = c;
  return r;
}

// Generic starts are reused across test cases.
const GenericStart& start_for(const std::string& name) {
  static std::map<std::string, GenericStart> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, solve_generic(build_model(ModelId::parse(name)), 1)).first;
  return it->second;
}

}  // namespace

TEST_CASE("tau identities") {
  Rng rng = make_rng(31);
  for (int i = 0; i < 50; ++i) {
    const Complex g = random_gamma(rng);
    CHECK(tau(0.0, g) == Complex(0.0));
    CHECK(std::abs(tau(1.0, g) - 1.0) < 1e-15);
    const double t = uniform01(rng);
    CHECK(std::abs(tau(t, Complex(1.0)) - t) < 1e-15);
    const double h = 1e-6;
    const double tc = std::clamp(t, 2 * h, 1 - 2 * h);
    const Complex fd = (tau(tc + h, g) - tau(tc - h, g)) / (2 * h);
    CHECK(std::abs(fd - tau_derivative(tc, g)) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
  CHECK(std::abs(tau(0.5, Complex(2.0)) - 2.0 / 3.0) < 1e-15);
  try {
    tau(0.5, Complex(-1.0));
    FAIL("expected DegenerateGamma");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGamma);
  }
}

TEST_CASE("generic root counts and start invariants") {
  const std::map<std::string, int> expected{{"quadratic", 2}, {"cubic", 3}, {"conjsquare", 4}, {"kuramoto3", 6}};
  for (const auto& [name, d] : expected) {
    CAPTURE(name);
    const auto sys = build_model(ModelId::parse(name));
    const GenericStart& gs = start_for(name);
    CHECK(gs.d == d);
    REQUIRE(static_cast<int>(gs.solutions.size()) == d);
    for (std::size_t i = 0; i < gs.solutions.size(); ++i) {
      CHECK(inf_norm(sys.evaluate(gs.solutions[i], gs.p0)) <= 1e-10);
      CHECK_NOTHROW(lu_solve(sys.jacobian_x(gs.solutions[i], gs.p0), CVec(CVec::Ones(sys.n()))));
      for (std::size_t j = 0; j < i; ++j) CHECK(inf_norm(gs.solutions[i] - gs.solutions[j]) > 1e-8);
    }
  }
}

TEST_CASE("solve_generic is reproducible for a fixed seed") {
  const auto sys = build_model(ModelId::parse("conjsquare"));
  const GenericStart a = solve_generic(sys, 77);
  const GenericStart b = solve_generic(sys, 77);
  CHECK(a.p0 == b.p0);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) CHECK(a.solutions[i] == b.solutions[i]);
}

TEST_CASE("total-degree start points") {
  const auto pts = total_degree_start_points(kuramoto_system(3));
  CHECK(pts.size() == 16);
  std::set<std::pair<long, long>> seen;
  for (const auto& x : pts)
    for (Eigen::Index i = 0; i < x.size(); ++i) CHECK(std::abs(x(i) * x(i) - 1.0) < 1e-14);
  const auto cubic = total_degree_start_points(cubic_system());
  CHECK(cubic.size() == 3);
  for (const auto& x : cubic) CHECK(std::abs(std::pow(x(0), 3) - 1.0) < 1e-14);
}

TEST_CASE("parameter homotopy examples") {
  Rng rng = make_rng(32);
  {
    const auto sys = quadratic_system();
    const auto res = parameter_homotopy(sys, start_for("quadratic"), to_complex(rv({0.0, -1.0})), random_gamma(rng));
    REQUIRE(res.size() == 2);
    std::vector<double> roots;
    for (const auto& r : res) {
      REQUIRE(r.ok());
      CHECK(std::abs(r.endpoint(0).imag()) < 1e-12);
      roots.push_back(r.endpoint(0).real());
    }
    std::sort(roots.begin(), roots.end());
    CHECK(std::abs(roots[0] + 1.0) < 1e-12);
    CHECK(std::abs(roots[1] - 1.0) < 1e-12);
  }
  {
    // The origin is the real discriminant of the conjugate-square system.
    const auto sys = conj_square_system();
    const auto res = parameter_homotopy(sys, start_for("conjsquare"), to_complex(rv({0.0, 0.0})), random_gamma(rng));
    CHECK(std::any_of(res.begin(), res.end(), [](const PathResult& r) { return !r.ok(); }));
    try {
      count_real(res);
      FAIL("expected CountUnreliable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CountUnreliable);
    }
  }
  {
    const auto sys = kuramoto_system(3);
    const Box box = Box::cube(2, -1, 1);
    for (int i = 0; i < 10; ++i) {
      const RVec p = box.sample(rng);
      const auto res = parameter_homotopy(sys, start_for("kuramoto3"), to_complex(p), random_gamma(rng));
      CHECK(res.size() == 6);
      for (const auto& r : res) {
        CHECK(r.ok());
        CHECK(inf_norm(sys.evaluate(r.endpoint, to_complex(p))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("count_real examples") {
  CHECK(count_real({success({1.0}), success({-1.0})}) == 2);
  CHECK(count_real({success({Complex(0, 1)}), success({Complex(0, -1)})}) == 0);
  CHECK(count_real({success({0.0}), success({1.0}), success({-1.0})}) == 3);
  CHECK(count_real({success({Complex(1, 1e-9)})}) == 1);
  CHECK(count_real({success({Complex(1, 1e-3)})}, 1e-2) == 1);
  PathResult bad;
  bad.status = PathStatus::StepSizeUnderflow;
  for (const auto& results : {std::vector<PathResult>{success({1.0}), bad},
                              std::vector<PathResult>{success({1.0}), success({1.0 + 1e-12})}}) {
    try {
      count_real(results);
      FAIL("expected CountUnreliable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CountUnreliable);
    }
  }
}

TEST_CASE("label_point examples") {
  Rng rng = make_rng(33);
  CHECK(label_point(quadratic_system(), start_for("quadratic"), rv({0.0, -1.0}), rng) == 2);
  CHECK(label_point(cubic_system(), start_for("cubic"), rv({1.0, 0.0}), rng) == 1);
  CHECK(label_point(kuramoto_system(3), start_for("kuramoto3"), rv({0.9, 0.0}), rng) == 0);
  const LabelResult lr = label_point_full(cubic_system(), start_for("cubic"), rv({-1.0, 0.0}), rng);
  CHECK(lr.label == 3);
  REQUIRE(lr.real_solutions.size() == 3);
  for (const auto& x : lr.real_solutions) CHECK(std::abs(x(0) * x(0) * x(0) - x(0)) < 1e-10);
}

TEST_CASE("label_point fails on the discriminant") {
  Rng rng = make_rng(34);
  try {
    label_point(conj_square_system(), start_for("conjsquare"), rv({0.0, 0.0}), rng);
    FAIL("expected LabelFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelFailed);
  }
}

TEST_CASE("labels are independent of gamma and have the parity of d") {
  Rng rng = make_rng(35);
  for (const char* name : {"quadratic", "cubic", "conjsquare", "kuramoto3"}) {
    CAPTURE(name);
    const auto id = ModelId::parse(name);
    const auto sys = build_model(id);
    const GenericStart& gs = start_for(name);
    const Box box = default_box(id);
    int points = 0;
    while (points < 20) {
      const RVec p = box.sample(rng);
      if (id.kind == ModelKind::Quadratic && std::abs(oracle::quadratic_discriminant(p(0), p(1))) < 1e-3) continue;
      if (id.kind == ModelKind::Cubic && std::abs(oracle::cubic_discriminant(p(0), p(1))) < 1e-3) continue;
      ++points;
      std::set<int> labels;
      for (int g = 0; g < 10; ++g) {
        const auto res = parameter_homotopy(sys, gs, to_complex(p), random_gamma(rng));
        labels.insert(count_real(res));
      }
      CHECK(labels.size() == 1);
      CHECK((gs.d - *labels.begin()) % 2 == 0);
      CHECK(*labels.begin() <= gs.d);
    }
  }
}

TEST_CASE("quadratic and cubic labels match Sturm counts") {
  Rng rng = make_rng(36);
  for (const char* name : {"quadratic", "cubic"}) {
    CAPTURE(name);
    const auto id = ModelId::parse(name);
    const auto sys = build_model(id);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      const double b = 2 * uniform01(rng) - 1, c = 2 * uniform01(rng) - 1;
      const bool quad = id.kind == ModelKind::Quadratic;
      const double disc = quad ? oracle::quadratic_discriminant(b, c) : oracle::cubic_discriminant(b, c);
      if (std::abs(disc) < 1e-8) continue;
      ++checked;
      const int expect = quad ? oracle::quadratic_real_roots(b, c) : oracle::cubic_real_roots(b, c);
      CHECK(label_point(sys, start_for(name), rv({b, c}), rng) == expect);
    }
    CHECK(checked > 290);
  }
}

TEST_CASE("sturm oracle sanity") {
  CHECK(oracle::sturm_real_roots({-1, 0, 1}) == 2);
  CHECK(oracle::sturm_real_roots({1, 0, 1}) == 0);
  CHECK(oracle::sturm_real_roots({0, -1, 0, 1}) == 3);
  CHECK(oracle::sturm_real_roots({0, 1, 0, 1}) == 1);
  CHECK(oracle::sturm_real_roots({1, -2, 1}) == 1);  // double root counted once
}

TEST_CASE("kuramoto labels are symmetric under swapping the frequencies") {
  Rng rng = make_rng(37);
  const auto sys = kuramoto_system(3);
  const Box box = Box::cube(2, -1, 1);
  for (int i = 0; i < 100; ++i) {
    const RVec p = box.sample(rng);
    const int a = label_point(sys, start_for("kuramoto3"), p, rng);
    const int b = label_point(sys, start_for("kuramoto3"), rv({p(1), p(0)}), rng);
    CHECK(a == b);
  }
}

TEST_CASE("real solutions returned with a label satisfy the system") {
  Rng rng = make_rng(38);
  const auto sys = kuramoto_system(3);
  const Box box = Box::cube(2, -1, 1);
  for (int i = 0; i < 30; ++i) {
    const RVec p = box.sample(rng);
    const LabelResult lr = label_point_full(sys, start_for("kuramoto3"), p, rng);
    CHECK(static_cast<int>(lr.real_solutions.size()) == lr.label);
    for (const auto& x : lr.real_solutions) CHECK(inf_norm(sys.evaluate(to_complex(x), to_complex(p))) <= 1e-8);
  }
}
