#ifndef DISCLOCUS_REALPATH_HPP
#define DISCLOCUS_REALPATH_HPP

#include "disclocus/classify.hpp"
#include "disclocus/sampler.hpp"

#include <string>
#include <vector>

namespace disclocus {

/// Labeled samples with stored real solutions, indexed for nearest-seed
/// lookup.
struct SeedBank {
  std::vector<LabeledSample> samples;
  RMat points;  // k x N, column i = samples[i].p

  bool empty() const { return samples.empty(); }
};

/// Keeps samples of the given categories that carry real solutions.
SeedBank build_seed_bank(const std::vector<LabeledSample>& samples,
                         const std::vector<Category>& categories = {Category::Uniform, Category::NearCenter});

enum class RealStatus { Verified, Unverified, Fallback, Failed };
std::string to_string(RealStatus s);

struct RealSolveReport {
  RVec p;
  RVec p_star;
  int tracked = 0;
  RealStatus status = RealStatus::Unverified;
  std::vector<RVec> solutions;
  double elapsed = 0.0;       // seconds in the real-path homotopy
  double full_elapsed = 0.0;  // seconds in the complex homotopy, when run
  int full_count = -1;        // real count from the complex homotopy, when run
};

/// Tracks the nearest seed's real solutions along the straight segment
/// H(x, t) = f(x; t p* + (1 - t) p). Any failed, nonreal or merged path
/// triggers the complex parameter homotopy instead (status Fallback). With
/// verify set the complex homotopy always runs and the real counts and
/// solution sets are compared (Verified or Failed).
RealSolveReport solve_real(const ParameterizedSystem& sys, const GenericStart& start, const SeedBank& bank,
                           const RVec& p, bool verify, Rng& rng, const SolverSettings& s = {});

struct BenchmarkRow {
  int tracked_paths = 0;
  int count = 0;
  double avg_seconds = 0.0;
  double success_rate = 0.0;
};

struct BenchmarkSummary {
  std::vector<BenchmarkRow> rows;  // ascending tracked_paths, tracked > 0 only
  int queries = 0;
  int zero_seed_queries = 0;  // nearest seed had no real solutions
  int fallbacks = 0;
  double mean_tracked = 0.0;
  double real_avg_seconds = 0.0;
  double full_avg_seconds = 0.0;
  std::vector<RealSolveReport> reports;
};

/// Solves every query `trials` times with verification on; success means the
/// real-path answer matched the complex homotopy (status Verified).
BenchmarkSummary benchmark_real(const ParameterizedSystem& sys, const GenericStart& start, const SeedBank& bank,
                                const std::vector<RVec>& queries, int trials, std::uint64_t seed,
                                const SolverSettings& s = {});

/// Matches two real solution sets pairwise within tol (sizes must agree).
bool same_solution_set(const std::vector<RVec>& a, const std::vector<RVec>& b, double tol);

}  // namespace disclocus

#endif  // DISCLOCUS_REALPATH_HPP
