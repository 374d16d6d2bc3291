#include "disclocus/polysys.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace disclocus {

// ---------------------------------------------------------------------------
// PolyBuilder

PolyBuilder PolyBuilder::constant(int nvars, Complex c) {
  PolyBuilder p(nvars);
  p.add_term(std::vector<int>(nvars, 0), c);
  return p;
}

PolyBuilder PolyBuilder::variable(int nvars, int index) {
  PolyBuilder p(nvars);
  std::vector<int> e(nvars, 0);
  e.at(index) = 1;
  p.add_term(e, 1.0);
  return p;
}

void PolyBuilder::add_term(const std::vector<int>& exps, Complex c) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw Error(ErrorCode::DimensionMismatch, "exponent vector length");
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

PolyBuilder& PolyBuilder::operator+=(const PolyBuilder& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

PolyBuilder& PolyBuilder::operator-=(const PolyBuilder& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

PolyBuilder& PolyBuilder::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PolyBuilder operator*(const PolyBuilder& a, const PolyBuilder& b) {
  if (a.nvars_ != b.nvars_) throw Error(ErrorCode::DimensionMismatch, "polynomial variable count");
  PolyBuilder out(a.nvars_);
  std::vector<int> e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

PolyBuilder PolyBuilder::pow(int e) const {
  PolyBuilder out = constant(nvars_, 1.0);
  for (int i = 0; i < e; ++i) out = out * *this;
  return out;
}

Polynomial PolyBuilder::split(int nx) const {
  Polynomial poly;
  poly.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    Term t;
    t.coeff = c;
    t.xexp.assign(e.begin(), e.begin() + nx);
    t.pexp.assign(e.begin() + nx, e.end());
    poly.push_back(std::move(t));
  }
  return poly;
}

// ---------------------------------------------------------------------------
// ParameterizedSystem

ParameterizedSystem::ParameterizedSystem(int n, int k, std::vector<Polynomial> equations, std::string name)
    : n_(n), k_(k), name_(std::move(name)), equations_(std::move(equations)) {
  if (n_ <= 0 || k_ < 0) throw Error(ErrorCode::DimensionMismatch, "system needs n >= 1 and k >= 0");
  if (static_cast<int>(equations_.size()) != n_)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(n_) + " equations, got " + std::to_string(equations_.size()));
  degrees_.assign(n_, 0);
  for (int i = 0; i < n_; ++i) {
    for (const Term& t : equations_[i]) {
      if (static_cast<int>(t.xexp.size()) != n_ || static_cast<int>(t.pexp.size()) != k_)
        throw Error(ErrorCode::DimensionMismatch, "term exponent vector length");
      int deg = 0;
      for (int e : t.xexp) {
        if (e < 0) throw Error(ErrorCode::DimensionMismatch, "negative exponent");
        deg += e;
      }
      for (int e : t.pexp)
        if (e < 0) throw Error(ErrorCode::DimensionMismatch, "negative exponent");
      degrees_[i] = std::max(degrees_[i], deg);
      if (t.coeff.imag() != 0.0) real_coefficients_ = false;
    }
  }
  compile();
}

void ParameterizedSystem::append(Block& block, const Term& t, int row, int col) {
  Compiled c;
  c.coeff = t.coeff;
  c.row = row;
  c.col = col;
  c.begin = static_cast<int>(factors_.size());
  for (int j = 0; j < n_; ++j)
    if (t.xexp[j] > 0) factors_.push_back({j, t.xexp[j]});
  for (int j = 0; j < k_; ++j)
    if (t.pexp[j] > 0) factors_.push_back({n_ + j, t.pexp[j]});
  c.end = static_cast<int>(factors_.size());
  block.terms.push_back(c);
}

void ParameterizedSystem::compile() {
  max_exp_.assign(n_ + k_, 0);
  for (const auto& eq : equations_) {
    for (const Term& t : eq) {
      for (int j = 0; j < n_; ++j) max_exp_[j] = std::max(max_exp_[j], t.xexp[j]);
      for (int j = 0; j < k_; ++j) max_exp_[n_ + j] = std::max(max_exp_[n_ + j], t.pexp[j]);
    }
  }
  pow_offset_.assign(n_ + k_ + 1, 0);
  for (int v = 0; v < n_ + k_; ++v) pow_offset_[v + 1] = pow_offset_[v] + max_exp_[v] + 1;

  for (int i = 0; i < n_; ++i) {
    for (const Term& t : equations_[i]) {
      append(value_, t, i, 0);
      for (int j = 0; j < n_; ++j) {
        if (t.xexp[j] == 0) continue;
        Term d = t;
        d.coeff *= static_cast<double>(t.xexp[j]);
        d.xexp[j] -= 1;
        append(dx_, d, i, j);
      }
      for (int j = 0; j < k_; ++j) {
        if (t.pexp[j] == 0) continue;
        Term d = t;
        d.coeff *= static_cast<double>(t.pexp[j]);
        d.pexp[j] -= 1;
        append(dp_, d, i, j);
      }
    }
  }
}

void ParameterizedSystem::check_dims(const CVec& x, const CVec& p) const {
  if (x.size() != n_ || p.size() != k_)
    throw Error(ErrorCode::DimensionMismatch, "expected |x| = " + std::to_string(n_) + ", |p| = " +
                                                  std::to_string(k_) + "; got " + std::to_string(x.size()) +
                                                  ", " + std::to_string(p.size()));
}

std::vector<Complex> ParameterizedSystem::power_table(const CVec& x, const CVec& p) const {
  std::vector<Complex> powers(pow_offset_.back());
  for (int v = 0; v < n_ + k_; ++v) {
    const Complex base = v < n_ ? x(v) : p(v - n_);
    Complex* row = powers.data() + pow_offset_[v];
    row[0] = 1.0;
    for (int e = 1; e <= max_exp_[v]; ++e) row[e] = row[e - 1] * base;
  }
  return powers;
}

void ParameterizedSystem::accumulate(const Block& block, const std::vector<Complex>& powers, Complex* out,
                                     Eigen::Index ld) const {
  for (const Compiled& t : block.terms) {
    Complex m = t.coeff;
    for (int f = t.begin; f < t.end; ++f) m *= powers[pow_offset_[factors_[f].var] + factors_[f].exp];
    out[t.row + t.col * ld] += m;
  }
}

CVec ParameterizedSystem::evaluate(const CVec& x, const CVec& p) const {
  check_dims(x, p);
  const auto powers = power_table(x, p);
  CVec out = CVec::Zero(n_);
  accumulate(value_, powers, out.data(), n_);
  return out;
}

CMat ParameterizedSystem::jacobian_x(const CVec& x, const CVec& p) const {
  check_dims(x, p);
  const auto powers = power_table(x, p);
  CMat jx = CMat::Zero(n_, n_);
  accumulate(dx_, powers, jx.data(), n_);
  return jx;
}

CMat ParameterizedSystem::jacobian_p(const CVec& x, const CVec& p) const {
  check_dims(x, p);
  const auto powers = power_table(x, p);
  CMat jp = CMat::Zero(n_, k_);
  accumulate(dp_, powers, jp.data(), n_);
  return jp;
}

Jacobians ParameterizedSystem::jacobians(const CVec& x, const CVec& p) const {
  check_dims(x, p);
  const auto powers = power_table(x, p);
  Jacobians j{CMat::Zero(n_, n_), CMat::Zero(n_, k_)};
  accumulate(dx_, powers, j.jx.data(), n_);
  accumulate(dp_, powers, j.jp.data(), n_);
  return j;
}

// ---------------------------------------------------------------------------
// Built-in models

std::string ModelId::name() const {
  switch (kind) {
    case ModelKind::Quadratic: return "quadratic";
    case ModelKind::Cubic: return "cubic";
    case ModelKind::ConjSquare: return "conjsquare";
    case ModelKind::Kuramoto: return "kuramoto" + std::to_string(oscillators);
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

ModelId ModelId::parse(std::string_view text) {
  if (text == "quadratic") return {ModelKind::Quadratic, 0};
  if (text == "cubic") return {ModelKind::Cubic, 0};
  if (text == "conjsquare") return {ModelKind::ConjSquare, 0};
  if (text == "custom") return {ModelKind::Custom, 0};
  constexpr std::string_view prefix = "kuramoto";
  if (text.substr(0, prefix.size()) == prefix) {
    int n = 0;
    const auto digits = text.substr(prefix.size());
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) {
      if (n < 2) throw Error(ErrorCode::InvalidN, "Kuramoto model needs N >= 2");
      return {ModelKind::Kuramoto, n};
    }
  }
  throw Error(ErrorCode::ParseError, "unknown model '" + std::string(text) + "'");
}

namespace {

Term make_term(Complex c, std::vector<int> xe, std::vector<int> pe) { return Term{c, std::move(xe), std::move(pe)}; }

}  // namespace

ParameterizedSystem quadratic_system() {
  // x^2 + b x + c
  std::vector<Polynomial> eqs{{
      make_term(1.0, {2}, {0, 0}),
      make_term(1.0, {1}, {1, 0}),
      make_term(1.0, {0}, {0, 1}),
  }};
  return ParameterizedSystem(1, 2, std::move(eqs), "quadratic");
}

ParameterizedSystem cubic_system() {
  // x^3 + b x + c
  std::vector<Polynomial> eqs{{
      make_term(1.0, {3}, {0, 0}),
      make_term(1.0, {1}, {1, 0}),
      make_term(1.0, {0}, {0, 1}),
  }};
  return ParameterizedSystem(1, 2, std::move(eqs), "cubic");
}

ParameterizedSystem conj_square_system() {
  // [x1^2 - x2^2 - p1, 2 x1 x2 - p2]
  std::vector<Polynomial> eqs{
      {make_term(1.0, {2, 0}, {0, 0}), make_term(-1.0, {0, 2}, {0, 0}), make_term(-1.0, {0, 0}, {1, 0})},
      {make_term(2.0, {1, 1}, {0, 0}), make_term(-1.0, {0, 0}, {0, 1})},
  };
  return ParameterizedSystem(2, 2, std::move(eqs), "conjsquare");
}

ParameterizedSystem kuramoto_system(int oscillators) {
  if (oscillators < 2) throw Error(ErrorCode::InvalidN, "Kuramoto model needs N >= 2");
  const int m = oscillators - 1;
  const int n = 2 * m;
  const int k = m;
  const int nv = n + k;
  const double inv_n = 1.0 / oscillators;
  auto c = [&](int i) { return PolyBuilder::variable(nv, 2 * i); };
  auto s = [&](int i) { return PolyBuilder::variable(nv, 2 * i + 1); };
  auto w = [&](int i) { return PolyBuilder::variable(nv, n + i); };

  std::vector<Polynomial> eqs;
  // omega_i - (1/N) sum_j (s_i c_j - s_j c_i), with c_N = 1, s_N = 0
  for (int i = 0; i < m; ++i) {
    PolyBuilder coupling(nv);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      coupling += s(i) * c(j) - s(j) * c(i);
    }
    coupling += s(i);
    eqs.push_back((w(i) - coupling * inv_n).split(n));
  }
  for (int i = 0; i < m; ++i) {
    eqs.push_back((c(i) * c(i) + s(i) * s(i) - PolyBuilder::constant(nv, 1.0)).split(n));
  }
  return ParameterizedSystem(n, k, std::move(eqs), "kuramoto" + std::to_string(oscillators));
}

ParameterizedSystem build_model(const ModelId& id) {
  switch (id.kind) {
    case ModelKind::Quadratic: return quadratic_system();
    case ModelKind::Cubic: return cubic_system();
    case ModelKind::ConjSquare: return conj_square_system();
    case ModelKind::Kuramoto: return kuramoto_system(id.oscillators);
    case ModelKind::Custom: break;
  }
  throw Error(ErrorCode::ParseError, "custom models must be loaded from a system file");
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct RawFactor {
  bool is_x;
  int index;  // 1-based
  int exp;
};

struct RawTerm {
  Complex coeff;
  std::vector<RawFactor> factors;
};

class LineParser {
 public:
  LineParser(std::string_view s, int line) : s_(s), line_(line) {}

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_ws();
    if (at_end()) fail("empty equation");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    for (;;) {
      terms.push_back(parse_term(sign));
      skip_ws();
      if (at_end()) break;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else {
        fail(std::string("unexpected character '") + peek() + "'");
      }
    }
    return terms;
  }

 private:
  RawTerm parse_term(double sign) {
    RawTerm t{Complex(sign), {}};
    for (;;) {
      parse_factor(t);
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return t;
  }

  void parse_factor(RawTerm& t) {
    skip_ws();
    if (at_end()) fail("expected a factor");
    const char ch = peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const std::string rest(s_.substr(pos_));
      char* endp = nullptr;
      const double v = std::strtod(rest.c_str(), &endp);
      if (endp == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(endp - rest.c_str());
      if (!at_end() && peek() == 'i' && !ident_follows(pos_ + 1)) {
        ++pos_;
        t.coeff *= Complex(0.0, v);
      } else {
        t.coeff *= v;
      }
      return;
    }
    if (ch == 'i' && !ident_follows(pos_ + 1)) {
      ++pos_;
      t.coeff *= Complex(0.0, 1.0);
      return;
    }
    if (ch == 'x' || ch == 'p') {
      ++pos_;
      const int index = parse_int("variable index");
      if (index < 1) fail("variable indices start at 1");
      int exp = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        exp = parse_int("exponent");
      }
      t.factors.push_back({ch == 'x', index, exp});
      return;
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  int parse_int(const char* what) {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  bool ident_follows(std::size_t at) const {
    return at < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[at])) || s_[at] == '_');
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

ParameterizedSystem parse_system(std::string_view text, std::string name) {
  std::vector<std::vector<RawTerm>> raw;
  std::vector<int> lines;
  int max_x = 0;
  int max_x_line = 0;
  int max_p = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    raw.push_back(LineParser(line, lineno).parse());
    lines.push_back(lineno);
    for (const auto& t : raw.back())
      for (const auto& f : t.factors) {
        if (f.is_x && f.index > max_x) max_x_line = lineno;
        (f.is_x ? max_x : max_p) = std::max(f.is_x ? max_x : max_p, f.index);
      }
  }
  const int n = static_cast<int>(raw.size());
  if (n == 0) throw Error(ErrorCode::ParseError, "no equations found");
  if (max_x > n)
    throw Error(ErrorCode::ParseError, "line " + std::to_string(max_x_line) + ": variable x" + std::to_string(max_x) +
                                           " exceeds equation count " +
                                           std::to_string(n) + " (system must be well-constrained)");
  const int k = max_p;
  std::vector<Polynomial> eqs;
  for (std::size_t e = 0; e < raw.size(); ++e) {
    PolyBuilder b(n + k);
    for (const auto& t : raw[e]) {
      std::vector<int> exps(n + k, 0);
      for (const auto& f : t.factors) exps[(f.is_x ? 0 : n) + f.index - 1] += f.exp;
      b.add_term(exps, t.coeff);
    }
    if (b.terms().empty())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lines[e]) + ": equation is identically zero");
    eqs.push_back(b.split(n));
  }
  return ParameterizedSystem(n, k, std::move(eqs), std::move(name));
}

}  // namespace disclocus
