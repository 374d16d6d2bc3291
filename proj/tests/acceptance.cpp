// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,4,7]
#include "disclocus/io.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace disclocus;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
    pass = pass && ok;
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Critical starts are expensive for kuramoto4; computed once per seed.
const GenericStart& critical_start(const std::string& model, std::uint64_t seed) {
  static std::map<std::pair<std::string, std::uint64_t>, GenericStart> cache;
  const auto key = std::make_pair(model, seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto crit = make_critical_system(build_model(ModelId::parse(model)));
    it = cache.emplace(key, critical_generic_start(crit, seed)).first;
  }
  return it->second;
}

Dataset make_dataset(const std::string& model, int n_uniform, int n_lines, std::uint64_t seed, bool store = false) {
  const auto id = ModelId::parse(model);
  const auto sys = build_model(id);
  SamplerConfig cfg;
  cfg.omega = default_box(id);
  cfg.n_uniform = n_uniform;
  cfg.n_lines = n_lines;
  cfg.seed = seed;
  cfg.store_solutions = store;
  Starts starts;
  starts.start = solve_generic(sys, seed);
  if (n_lines > 0) {
    starts.crit = make_critical_system(sys);
    starts.crit_start = critical_start(model, seed);
  }
  return generate_dataset(sys, starts, cfg);
}

LabeledPoints pick(const Dataset& ds, std::vector<Category> cats) {
  return LabeledPoints::from_samples(filter(ds.samples, cats));
}

std::string label_set(const std::vector<LabeledSample>& samples) {
  std::set<int> labels;
  for (const auto& s : samples) labels.insert(s.label);
  std::string out = "{";
  for (int l : labels) out += (out.size() > 1 ? "," : "") + std::to_string(l);
  return out + "}";
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const std::map<std::string, int> expected{{"quadratic", 2}, {"cubic", 3},     {"conjsquare", 4},
                                            {"kuramoto3", 6}, {"kuramoto4", 14}};
  for (const auto& [name, d] : expected) {
    const auto t0 = std::chrono::steady_clock::now();
    const int got = solve_generic(build_model(ModelId::parse(name)), 1).d;
    o.require(got == d, name + " d=" + std::to_string(got) + " (" + fmt(seconds_since(t0), 2) + "s)");
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::map<std::string, int> expected{{"quadratic", 2}, {"cubic", 3}, {"kuramoto3", 12}, {"kuramoto4", 48}};
  for (const auto& [name, degree] : expected) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string got;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const int d = critical_start(name, seed).d;
      got += (got.empty() ? "" : ",") + std::to_string(d);
      ok = ok && d == degree;
    }
    o.require(ok, name + " degree " + got + " (" + fmt(seconds_since(t0), 1) + "s)");
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  Rng rng = make_rng(303);
  for (const char* name : {"quadratic", "cubic"}) {
    const bool quad = std::string(name) == "quadratic";
    const auto sys = build_model(ModelId::parse(name));
    const auto start = solve_generic(sys, 1);
    int mismatches = 0, checked = 0, excluded = 0;
    while (checked < 1000) {
      const double b = 2 * uniform01(rng) - 1, c = 2 * uniform01(rng) - 1;
      const double disc = quad ? oracle::quadratic_discriminant(b, c) : oracle::cubic_discriminant(b, c);
      if (std::abs(disc) < 1e-8) {
        ++excluded;
        continue;
      }
      ++checked;
      RVec p(2);
      p << b, c;
      const int expect = quad ? oracle::quadratic_real_roots(b, c) : oracle::cubic_real_roots(b, c);
      try {
        mismatches += label_point(sys, start, p, rng) != expect;
      } catch (const Error&) {
        ++mismatches;
      }
    }
    o.require(mismatches == 0, std::string(name) + " mismatches " + std::to_string(mismatches) + "/" +
                                   std::to_string(checked) + " (excluded " + std::to_string(excluded) + ")");
  }
  return o;
}

// Quadratic data shared by criteria 4 and 5. Line anchors count as uniform draws,
// so this gives roughly 2000 uniform and 2500 near-boundary points.
const Dataset& quad_train() {
  static const Dataset ds = make_dataset("quadratic", 200, 1870, 41);
  return ds;
}
const Dataset& quad_test() {
  static const Dataset ds = make_dataset("quadratic", 200, 1870, 42);
  return ds;
}

Outcome criterion4() {
  Outcome o;
  const Dataset& tr = quad_train();
  const Dataset& te = quad_test();
  o.require(true, "train uniform " + std::to_string(filter(tr.samples, {Category::Uniform}).size()) +
                      ", near_boundary " + std::to_string(filter(tr.samples, {Category::NearBoundary}).size()));
  const LabeledPoints test_uniform = pick(te, {Category::Uniform});
  const LabeledPoints test_nb = pick(te, {Category::NearBoundary});
  const double nb_uni = evaluate_accuracy(knn_fit(pick(tr, {Category::NearBoundary}), 1), test_uniform);
  const double nbnc_uni =
      evaluate_accuracy(knn_fit(pick(tr, {Category::NearBoundary, Category::NearCenter}), 1), test_uniform);
  const double uni_nb = evaluate_accuracy(knn_fit(pick(tr, {Category::Uniform}), 1), test_nb);
  o.require(nb_uni >= 0.995, "NB->Uniform " + fmt(nb_uni));
  o.require(nbnc_uni >= 0.995, "NB+NC->Uniform " + fmt(nbnc_uni));
  o.require(uni_nb <= 0.75, "Uniform->NB " + fmt(uni_nb));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  TrainConfig cfg;
  cfg.seed = 5;
  const MlpModel m = mlp_train(pick(quad_train(), {Category::NearBoundary}), MlpSpec{{20, 20, 20}, Activation::Tanh}, cfg);
  o.require(m.train_accuracy == 1.0, "train accuracy " + fmt(m.train_accuracy) + " after " + std::to_string(m.epochs) +
                                          " epochs (" + fmt(seconds_since(t0), 1) + "s)");
  const double uni = evaluate_accuracy(m, pick(quad_test(), {Category::Uniform}));
  o.require(uni >= 0.99, "tested Uniform " + fmt(uni));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = make_dataset("cubic", 0, 1600, 61);
  TrainConfig cfg;
  cfg.seed = 6;
  const MlpModel m = mlp_train(pick(ds, {Category::NearBoundary}), MlpSpec{{20, 20, 20}, Activation::Tanh}, cfg);
  GridSpec spec;
  spec.box = Box::cube(2, -1, 1);
  spec.resolution = 512;
  const Grid g = decision_grid(m, spec);
  int wrong = 0, counted = 0;
  for (int r = 0; r < g.resolution; ++r)
    for (int c = 0; c < g.resolution; ++c) {
      const double disc = oracle::cubic_discriminant(g.x_center(c), g.y_center(r));
      if (std::abs(disc) <= 0.05) continue;
      ++counted;
      wrong += g.at(r, c) != (disc > 0 ? 1 : 3);
    }
  const double rate = static_cast<double>(wrong) / counted;
  o.require(rate < 0.02, "grid disagreement " + fmt(100 * rate, 3) + "% of " + std::to_string(counted) +
                             " cells (train accuracy " + fmt(m.train_accuracy) + ", " + fmt(seconds_since(t0), 1) +
                             "s)");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset tr = make_dataset("kuramoto3", 2000, 1500, 71);
  const Dataset te = make_dataset("kuramoto3", 2000, 1500, 72);
  const std::string labels = label_set(tr.samples);
  o.require(labels == "{0,2,4,6}", "labels " + labels);
  const double nbnc_uni = evaluate_accuracy(knn_fit(pick(tr, {Category::NearBoundary, Category::NearCenter}), 1),
                                            pick(te, {Category::Uniform}));
  const double uni_nb = evaluate_accuracy(knn_fit(pick(tr, {Category::Uniform}), 1), pick(te, {Category::NearBoundary}));
  o.require(nbnc_uni >= 0.99, "NB+NC->Uniform " + fmt(nbnc_uni));
  o.require(uni_nb <= 0.75, "Uniform->NB " + fmt(uni_nb) + " (" + fmt(seconds_since(t0), 1) + "s)");
  return o;
}

Outcome benchmark_outcome(const std::string& model, const Dataset& ds, int queries, double bucket_min,
                          double overall_min, const std::set<int>& allowed, double max_mean) {
  Outcome o;
  const auto id = ModelId::parse(model);
  const auto sys = build_model(id);
  // The benchmark bank is the near-boundary plus near-center data with stored solutions.
  const SeedBank bank = build_seed_bank(ds.samples, {Category::NearCenter, Category::NearBoundary});
  const GenericStart start = solve_generic(sys, ds.config.seed);
  Rng rng = make_rng(ds.config.seed, Stream::Query);
  std::vector<RVec> qs;
  for (int i = 0; i < queries; ++i) qs.push_back(ds.config.omega.sample(rng));
  const BenchmarkSummary b = benchmark_real(sys, start, bank, qs, 1, ds.config.seed);
  o.require(true, "bank " + std::to_string(bank.samples.size()));
  std::string table;
  bool buckets_ok = true, inside = true;
  double success = 0;
  int bucketed = 0;
  for (const auto& row : b.rows) {
    table += " " + std::to_string(row.tracked_paths) + ":" + std::to_string(row.count) + "@" + fmt(row.success_rate, 3);
    buckets_ok = buckets_ok && row.success_rate >= bucket_min;
    inside = inside && allowed.count(row.tracked_paths) == 1;
    success += row.success_rate * row.count;
    bucketed += row.count;
  }
  const double overall = bucketed ? success / bucketed : 0.0;
  o.require(inside, "buckets" + table + " (zero-seed " + std::to_string(b.zero_seed_queries) + ")");
  if (bucket_min > 0) o.require(buckets_ok, "per-bucket success >= " + fmt(bucket_min, 2));
  o.require(overall >= overall_min, "overall success " + fmt(overall));
  o.require(b.mean_tracked < max_mean, "mean tracked " + fmt(b.mean_tracked, 3));
  o.require(b.real_avg_seconds < b.full_avg_seconds, "real " + fmt(b.real_avg_seconds, 6) + "s vs full " +
                                                         fmt(b.full_avg_seconds, 6) + "s, speedup " +
                                                         fmt(b.full_avg_seconds / b.real_avg_seconds, 1) + "x");
  return o;
}

Outcome criterion8() {
  const Dataset ds = make_dataset("kuramoto3", 500, 1000, 7, true);
  return benchmark_outcome("kuramoto3", ds, 200, 0.99, 0.99, {2, 4, 6}, 6.0);
}

Outcome criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = make_dataset("kuramoto4", 0, 800, 1, true);
  Outcome o = benchmark_outcome("kuramoto4", ds, 100, 0.0, 0.95, {2, 4, 6, 8, 10}, 14.0);
  o.require(true, fmt(seconds_since(t0), 1) + "s");
  return o;
}

// Compact re-check of the property suites.
Outcome criterion10() {
  Outcome o;
  Rng rng = make_rng(1010);

  bool tau_ok = true;
  for (int i = 0; i < 200; ++i) {
    const Complex g = random_gamma(rng);
    const double t = uniform01(rng);
    tau_ok = tau_ok && tau(0.0, g) == Complex(0.0) && std::abs(tau(1.0, g) - 1.0) < 1e-15 &&
             std::abs(tau(t, Complex(1.0)) - t) < 1e-15;
  }
  o.require(tau_ok, "tau identities");

  bool jac_ok = true;
  for (const char* name : {"quadratic", "cubic", "conjsquare", "kuramoto3", "kuramoto4"}) {
    const auto sys = build_model(ModelId::parse(name));
    for (int i = 0; i < 20; ++i) {
      const CVec x = complex_gaussian_vector(rng, sys.n()), p = complex_gaussian_vector(rng, sys.k());
      CMat jx, jp;
      oracle::fd_jacobians(sys, x, p, 1e-6, jx, jp);
      const Jacobians j = sys.jacobians(x, p);
      jac_ok = jac_ok && (j.jx - jx).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, matrix_inf_norm(j.jx)) &&
               (j.jp - jp).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, matrix_inf_norm(j.jp));
    }
  }
  o.require(jac_ok, "jacobians vs finite differences");

  const auto k3 = kuramoto_system(3);
  const auto k3_start = solve_generic(k3, 1);
  const Box box = Box::cube(2, -1, 1);
  bool gamma_ok = true, parity_ok = true, perm_ok = true;
  for (int i = 0; i < 40; ++i) {
    const RVec p = box.sample(rng);
    std::set<int> labels;
    for (int g = 0; g < 5; ++g) labels.insert(count_real(parameter_homotopy(k3, k3_start, to_complex(p), random_gamma(rng))));
    gamma_ok = gamma_ok && labels.size() == 1;
    parity_ok = parity_ok && (k3_start.d - *labels.begin()) % 2 == 0;
    RVec swapped(2);
    swapped << p(1), p(0);
    perm_ok = perm_ok && label_point(k3, k3_start, swapped, rng) == *labels.begin();
  }
  o.require(gamma_ok, "gamma independence");
  o.require(parity_ok, "parity");
  o.require(perm_ok, "permutation symmetry");

  const Dataset ds = make_dataset("kuramoto3", 100, 100, 1001, true);
  bool offsets_ok = true;
  int mismatches = 0, relabeled = 0;
  for (std::size_t id = 0; id < ds.lines.size(); ++id) {
    const WitnessLine& line = ds.lines[id];
    const auto off = offsets(line.lambdas, line.lambda_enter, line.lambda_exit, ds.config.alpha);
    std::vector<RVec> expect;
    for (std::size_t i = 0; i < line.lambdas.size(); ++i) {
      expect.push_back(line.p_star + off.backward[i] * line.v);
      expect.push_back(line.p_star + off.forward[i] * line.v);
    }
    for (const auto& s : ds.samples) {
      if (s.line_id != static_cast<int>(id) || s.category != Category::NearBoundary) continue;
      offsets_ok = offsets_ok && std::any_of(expect.begin(), expect.end(), [&](const RVec& e) { return e == s.p; });
      if (relabeled < 100) {
        ++relabeled;
        try {
          mismatches += label_point(k3, k3_start, s.p, rng) != s.label;
        } catch (const Error&) {
          ++mismatches;
        }
      }
    }
  }
  o.require(offsets_ok, "offsets bit-exact");
  o.require(mismatches * 100 < relabeled,
            "relabel mismatches " + std::to_string(mismatches) + "/" + std::to_string(relabeled));

  // Byte determinism of the written files across worker counts.
  const fs::path dir = fs::temp_directory_path() / ("disclocus-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  SamplerConfig cfg = ds.config;
  cfg.jobs = 2;
  Starts starts;
  starts.start = solve_generic(k3, cfg.seed);
  starts.crit = make_critical_system(k3);
  starts.crit_start = critical_start("kuramoto3", cfg.seed);
  const Dataset again = generate_dataset(k3, starts, cfg);
  write_dataset_csv(dir / "a.csv", ds.samples);
  write_solutions(dir / "a.sol", ds.samples);
  write_dataset_csv(dir / "b.csv", again.samples);
  write_solutions(dir / "b.sol", again.samples);
  const bool same = bytes(dir / "a.csv") == bytes(dir / "b.csv") && bytes(dir / "a.sol") == bytes(dir / "b.sol");
  fs::remove_all(dir);
  o.require(same, "byte determinism (jobs 1 vs 2)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--only 1,2,...]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && only.count(n) == 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt(seconds_since(t0), 1)
              << "s) " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
