#include "disclocus/realpath.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

namespace disclocus {

std::string to_string(RealStatus s) {
  switch (s) {
    case RealStatus::Verified: return "verified";
    case RealStatus::Unverified: return "unverified";
    case RealStatus::Fallback: return "fallback";
    case RealStatus::Failed: return "failed";
  }
  return "unknown";
}

SeedBank build_seed_bank(const std::vector<LabeledSample>& samples, const std::vector<Category>& categories) {
  SeedBank bank;
  for (const auto& s : samples) {
    if (!s.real_solutions) continue;
    if (std::find(categories.begin(), categories.end(), s.category) == categories.end()) continue;
    bank.samples.push_back(s);
  }
  if (!bank.samples.empty()) {
    bank.points.resize(bank.samples.front().p.size(), static_cast<Eigen::Index>(bank.samples.size()));
    for (std::size_t i = 0; i < bank.samples.size(); ++i)
      bank.points.col(static_cast<Eigen::Index>(i)) = bank.samples[i].p;
  }
  return bank;
}

bool same_solution_set(const std::vector<RVec>& a, const std::vector<RVec>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == a.size()) return true;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || (a[i] - b[j]).lpNorm<Eigen::Infinity>() > tol) continue;
      used[j] = true;
      if (match(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return match(0);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Real-only tracking along the segment; empty optional on any anomaly.
std::optional<std::vector<RVec>> track_real_segment(const ParameterizedSystem& sys, const RVec& p_star,
                                                    const std::vector<RVec>& seeds, const RVec& p,
                                                    const SolverSettings& s) {
  const HomotopySpec h = parameter_homotopy_spec(sys, to_complex(p_star), to_complex(p), Complex(1.0));
  std::vector<CVec> starts;
  starts.reserve(seeds.size());
  for (const auto& x : seeds) starts.push_back(to_complex(x));
  auto paths = track_paths(h, starts, s.track, s.jobs);
  std::vector<RVec> out;
  for (auto& r : paths) {
    if (!r.ok()) return std::nullopt;
    try {
      r.endpoint = newton_polish(h, r.endpoint, 0.0, s.polish_iters);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      return std::nullopt;
    }
    if (inf_norm(sys.evaluate(r.endpoint, to_complex(p))) > s.endpoint_residual) return std::nullopt;
    if (!is_real(r.endpoint, s.tol_im)) return std::nullopt;
    const RVec x = real_part(r.endpoint);
    for (const auto& y : out)
      if ((x - y).lpNorm<Eigen::Infinity>() <= s.dedup_tol) return std::nullopt;
    out.push_back(x);
  }
  return out;
}

}  // namespace

RealSolveReport solve_real(const ParameterizedSystem& sys, const GenericStart& start, const SeedBank& bank,
                           const RVec& p, bool verify, Rng& rng, const SolverSettings& s) {
  if (bank.empty()) throw Error(ErrorCode::EmptyBank, "seed bank has no samples with stored solutions");
  RealSolveReport report;
  report.p = p;
  const auto& seed = bank.samples[static_cast<std::size_t>(knn_nearest(bank.points, p))];
  report.p_star = seed.p;
  report.tracked = static_cast<int>(seed.real_solutions->size());

  const auto t0 = Clock::now();
  std::optional<std::vector<RVec>> real;
  if (seed.p == p)
    real = *seed.real_solutions;  // identity homotopy
  else
    real = track_real_segment(sys, seed.p, *seed.real_solutions, p, s);
  report.elapsed = seconds_since(t0);

  auto run_full = [&]() -> std::optional<LabelResult> {
    const auto t1 = Clock::now();
    std::optional<LabelResult> full;
    try {
      full = label_point_full(sys, start, p, rng, s);
      report.full_count = full->label;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LabelFailed) throw;
    }
    report.full_elapsed = seconds_since(t1);
    return full;
  };

  if (!real) {
    const auto full = run_full();
    report.status = full ? RealStatus::Fallback : RealStatus::Failed;
    if (full) report.solutions = full->real_solutions;
    return report;
  }
  report.solutions = std::move(*real);
  if (!verify) {
    report.status = RealStatus::Unverified;
    return report;
  }
  const auto full = run_full();
  report.status = full && same_solution_set(report.solutions, full->real_solutions, 1e-6) ? RealStatus::Verified
                                                                                            : RealStatus::Failed;
  return report;
}

BenchmarkSummary benchmark_real(const ParameterizedSystem& sys, const GenericStart& start, const SeedBank& bank,
                                const std::vector<RVec>& queries, int trials, std::uint64_t seed,
                                const SolverSettings& s) {
  BenchmarkSummary out;
  struct Acc {
    int count = 0;
    int success = 0;
    double seconds = 0.0;
  };
  std::map<int, Acc> buckets;
  double real_total = 0.0;
  double full_total = 0.0;
  int full_runs = 0;
  long tracked_total = 0;
  trials = std::max(1, trials);

  for (std::size_t i = 0; i < queries.size(); ++i) {
    Rng rng = make_rng(seed, Stream::Query, i);
    RealSolveReport first;
    double elapsed = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      RealSolveReport r = solve_real(sys, start, bank, queries[i], true, rng, s);
      elapsed += r.elapsed;
      if (r.full_count >= 0) {
        full_total += r.full_elapsed;
        ++full_runs;
      }
      if (trial == 0) first = std::move(r);
    }
    elapsed /= trials;
    first.elapsed = elapsed;
    ++out.queries;
    tracked_total += first.tracked;
    real_total += elapsed;
    if (first.status == RealStatus::Fallback) ++out.fallbacks;
    if (first.tracked == 0) {
      ++out.zero_seed_queries;
    } else {
      Acc& a = buckets[first.tracked];
      ++a.count;
      a.seconds += elapsed;
      a.success += first.status == RealStatus::Verified;
    }
    out.reports.push_back(std::move(first));
  }
  for (const auto& [tracked, a] : buckets)
    out.rows.push_back({tracked, a.count, a.seconds / a.count, static_cast<double>(a.success) / a.count});
  if (out.queries > 0) {
    out.mean_tracked = static_cast<double>(tracked_total) / out.queries;
    out.real_avg_seconds = real_total / out.queries;
  }
  if (full_runs > 0) out.full_avg_seconds = full_total / full_runs;
  return out;
}

}  // namespace disclocus
