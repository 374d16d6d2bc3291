#ifndef DISCLOCUS_POLYSYS_HPP
#define DISCLOCUS_POLYSYS_HPP

#include "disclocus/numcore.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace disclocus {

/// One monomial: coeff * x^xexp * p^pexp.
struct Term {
  Complex coeff;
  std::vector<int> xexp;
  std::vector<int> pexp;
};

using Polynomial = std::vector<Term>;

struct Jacobians {
  CMat jx;  // n x n
  CMat jp;  // n x k
};

/// Sparse polynomial over an arbitrary number of variables, used while
/// assembling systems. Exponent vectors index the combined variable list.
class PolyBuilder {
 public:
  explicit PolyBuilder(int nvars) : nvars_(nvars) {}

  static PolyBuilder constant(int nvars, Complex c);
  static PolyBuilder variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::map<std::vector<int>, Complex>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exps, Complex c);
  PolyBuilder& operator+=(const PolyBuilder& other);
  PolyBuilder& operator-=(const PolyBuilder& other);
  PolyBuilder& operator*=(Complex c);
  friend PolyBuilder operator+(PolyBuilder a, const PolyBuilder& b) { return a += b; }
  friend PolyBuilder operator-(PolyBuilder a, const PolyBuilder& b) { return a -= b; }
  friend PolyBuilder operator*(PolyBuilder a, Complex c) { return a *= c; }
  friend PolyBuilder operator*(const PolyBuilder& a, const PolyBuilder& b);
  PolyBuilder pow(int e) const;

  /// Splits the first nx variables off as x, the rest as parameters.
  Polynomial split(int nx) const;

 private:
  int nvars_;
  std::map<std::vector<int>, Complex> terms_;
};

/// Well-constrained family f(x; p): n equations in n unknowns, k parameters.
/// Immutable after construction; evaluation is reentrant.
class ParameterizedSystem {
 public:
  ParameterizedSystem() = default;
  ParameterizedSystem(int n, int k, std::vector<Polynomial> equations, std::string name = "");

  int n() const { return n_; }
  int k() const { return k_; }
  const std::string& name() const { return name_; }
  const std::vector<Polynomial>& equations() const { return equations_; }
  const std::vector<int>& degrees() const { return degrees_; }
  bool has_real_coefficients() const { return real_coefficients_; }

  CVec evaluate(const CVec& x, const CVec& p) const;
  Jacobians jacobians(const CVec& x, const CVec& p) const;
  CMat jacobian_x(const CVec& x, const CVec& p) const;
  CMat jacobian_p(const CVec& x, const CVec& p) const;

 private:
  struct Factor {
    int var;  // index into [x; p]
    int exp;
  };
  struct Compiled {
    Complex coeff;
    int row;
    int col;
    int begin;  // into factors_
    int end;
  };
  struct Block {
    std::vector<Compiled> terms;
  };

  void check_dims(const CVec& x, const CVec& p) const;
  void compile();
  void append(Block& block, const Term& t, int row, int col);
  std::vector<Complex> power_table(const CVec& x, const CVec& p) const;
  void accumulate(const Block& block, const std::vector<Complex>& powers, Complex* out, Eigen::Index ld) const;

  int n_ = 0;
  int k_ = 0;
  std::string name_;
  std::vector<Polynomial> equations_;
  std::vector<int> degrees_;
  bool real_coefficients_ = true;

  std::vector<int> max_exp_;
  std::vector<int> pow_offset_;
  std::vector<Factor> factors_;
  Block value_;
  Block dx_;
  Block dp_;
};

enum class ModelKind { Quadratic, Cubic, ConjSquare, Kuramoto, Custom };

struct ModelId {
  ModelKind kind = ModelKind::Quadratic;
  int oscillators = 0;  // Kuramoto only

  std::string name() const;
  static ModelId parse(std::string_view text);
  friend bool operator==(const ModelId&, const ModelId&) = default;
};

ParameterizedSystem quadratic_system();
ParameterizedSystem cubic_system();
ParameterizedSystem conj_square_system();
ParameterizedSystem kuramoto_system(int oscillators);
ParameterizedSystem build_model(const ModelId& id);

/// Parses the plain-text format: one equation per line, `+`/`-` separated
/// terms of the form `coeff * x1^a * p2^b`, `#` comments. A coefficient may
/// carry a trailing `i` for imaginary values.
ParameterizedSystem parse_system(std::string_view text, std::string name = "custom");

}  // namespace disclocus

#endif  // DISCLOCUS_POLYSYS_HPP
