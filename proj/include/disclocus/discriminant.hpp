#ifndef DISCLOCUS_DISCRIMINANT_HPP
#define DISCLOCUS_DISCRIMINANT_HPP

#include "disclocus/solver.hpp"

#include <utility>
#include <vector>

namespace disclocus {

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_k, hi_k].
struct Box {
  RVec lo;
  RVec hi;

  Eigen::Index dim() const { return lo.size(); }
  bool contains(const RVec& p, double slack = 0.0) const;
  RVec sample(Rng& rng) const;
  static Box cube(int k, double lo, double hi);
};

enum class Formulation { Det, NullSpace };

/// Critical system of f restricted to the line p = q + lambda u.
///   NullSpace: unknowns (x, w, lambda), parameters (q, u, a);
///              equations f = 0, J_x f w = 0, <a, w> - 1 = 0.
///   Det (n = 1): unknowns (x, lambda), parameters (q, u);
///              equations f = 0, df/dx = 0.
struct CriticalSystem {
  ParameterizedSystem system;
  Formulation formulation = Formulation::NullSpace;
  int base_n = 0;
  int base_k = 0;

  int lambda_index() const { return system.n() - 1; }
  CVec pack_parameters(const CVec& q, const CVec& u, const CVec& a = CVec()) const;
};

Formulation default_formulation(const ParameterizedSystem& base);
CriticalSystem make_critical_system(const ParameterizedSystem& base, Formulation formulation);
inline CriticalSystem make_critical_system(const ParameterizedSystem& base) {
  return make_critical_system(base, default_formulation(base));
}

/// Solves the critical system on a random complex line. |S| is the number of
/// finite witness points (the discriminant degree for simple loci).
GenericStart critical_generic_start(const CriticalSystem& crit, std::uint64_t seed, const SolverSettings& s = {});

/// Maximal [enter, exit] with p_star + lambda v inside the box.
std::pair<double, double> line_box_intersection(const RVec& p_star, const RVec& v, const Box& omega);

struct WitnessLine {
  RVec p_star;
  RVec v;
  std::vector<double> lambdas;  // sorted, real, strictly inside (enter, exit)
  double lambda_enter = 0.0;
  double lambda_exit = 0.0;
  int degree_observed = 0;
};

/// Moves the generic critical line to the real line p_star + lambda v (with a
/// fresh real patch drawn from rng) and keeps the real lambdas inside omega.
/// Throws WitnessFailed when more than 20% of the paths fail.
WitnessLine witness_on_line(const CriticalSystem& crit, const GenericStart& crit_start, const RVec& p_star,
                            const RVec& v, const Box& omega, Rng& rng, const SolverSettings& s = {});

}  // namespace disclocus

#endif  // DISCLOCUS_DISCRIMINANT_HPP
