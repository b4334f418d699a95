#include "tattr/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace tattr {

Polynomial::Polynomial(int n_vars) : n_(n_vars) {
  if (n_vars < 1 || n_vars > kMaxVars)
    throw ParameterError("polynomial variable count must be in [1, " + std::to_string(kMaxVars) + "], got " +
                         std::to_string(n_vars));
}

Polynomial::Polynomial(int n_vars, std::map<MultiIndex, double> terms) : Polynomial(n_vars) {
  for (const auto& [kappa, coeff] : terms) add_term(kappa, coeff);
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [kappa, coeff] : terms_) d = std::max(d, kappa.order());
  return d;
}

void Polynomial::add_term(const MultiIndex& kappa, double coeff) {
  if (kappa.size() != n_) throw ShapeError("multi-index length does not match variable count");
  if (kappa.order() > kMaxDegree)
    throw ParameterError("polynomial degree capped at " + std::to_string(kMaxDegree) + ", term has degree " +
                         std::to_string(kappa.order()));
  auto it = terms_.find(kappa);
  if (it == terms_.end()) {
    if (coeff != 0.0) terms_.emplace(kappa, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0.0) terms_.erase(it);
}

Polynomial Polynomial::partial(const MultiIndex& kappa) const {
  if (kappa.size() != n_) throw ShapeError("multi-index length does not match variable count");
  Polynomial out(n_);
  for (const auto& [term, coeff] : terms_) {
    double c = coeff;
    MultiIndex reduced = term;
    bool vanishes = false;
    for (int i = 0; i < n_ && !vanishes; ++i) {
      for (int r = 0; r < kappa[i]; ++r) {
        if (reduced[i] == 0) {
          vanishes = true;
          break;
        }
        c *= reduced[i];
        reduced[i] -= 1;
      }
    }
    if (!vanishes) out.add_term(reduced, c);
  }
  return out;
}

Polynomial Polynomial::partial(int var) const { return partial(MultiIndex::unit(n_, var)); }

namespace {

// Pascal-triangle binomials up to the degree cap.
double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

Polynomial Polynomial::expand_about(const FeatureVector& anchor) const {
  if (anchor.size() != n_) throw ShapeError("anchor length does not match variable count");
  Polynomial out(n_);
  for (const auto& [kappa, coeff] : terms_) {
    // prod_i (a_i + d_i)^{k_i}: accumulate the binomial expansion variable by
    // variable as a list of (exponent vector, coefficient) partial products.
    std::map<MultiIndex, double> acc;
    acc.emplace(MultiIndex::zeros(n_), coeff);
    for (int i = 0; i < n_; ++i) {
      if (kappa[i] == 0) continue;
      std::map<MultiIndex, double> next;
      for (const auto& [e, c] : acc) {
        for (int j = 0; j <= kappa[i]; ++j) {
          MultiIndex e2 = e;
          e2[i] += j;
          const double c2 = c * binomial(kappa[i], j) * std::pow(anchor[i], kappa[i] - j);
          auto [it, inserted] = next.emplace(e2, c2);
          if (!inserted) it->second += c2;
        }
      }
      acc = std::move(next);
    }
    for (const auto& [e, c] : acc) out.add_term(e, c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);  // full double round-trip
  bool first = true;
  for (const auto& [kappa, coeff] : terms_) {
    const double mag = std::abs(coeff);
    if (first) {
      if (coeff < 0.0) os << "-";
      first = false;
    } else {
      os << (coeff < 0.0 ? " - " : " + ");
    }
    const bool constant_term = kappa.is_zero();
    if (mag != 1.0 || constant_term) os << mag;
    bool star = (mag != 1.0 || constant_term);
    for (int i = 0; i < n_; ++i) {
      if (kappa[i] == 0) continue;
      if (star) os << "*";
      os << "x" << (i + 1);
      if (kappa[i] > 1) os << "^" << kappa[i];
      star = true;
    }
  }
  return os.str();
}

namespace {

struct PolyParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit PolyParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial literal: " + what + " at position " + std::to_string(pos) + " in \"" + text + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  double parse_number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' || text[pos] == 'e' ||
            text[pos] == 'E' || ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    if (pos == start) fail("expected a number");
    try {
      return std::stod(text.substr(start, pos - start));
    } catch (const std::exception&) {
      pos = start;
      fail("malformed number");
    }
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stoi(text.substr(start, pos - start));
  }

  // factor := number | x<digits> ['^' <digits>]
  void parse_factor(double& coeff, std::vector<int>& exponents, int& max_var) {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (c == 'x' || c == 'X') {
      ++pos;
      const int var = parse_int();
      if (var < 1) fail("variable index must be >= 1");
      int power = 1;
      if (eat('^')) {
        power = parse_int();
        if (power < 1) fail("exponent must be >= 1");
      }
      if (var > static_cast<int>(exponents.size())) exponents.resize(var, 0);
      exponents[var - 1] += power;
      max_var = std::max(max_var, var);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      coeff *= parse_number();
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  // term := factor ('*' factor)*
  void parse_term(double sign, std::vector<std::pair<std::vector<int>, double>>& terms, int& max_var) {
    double coeff = sign;
    std::vector<int> exponents;
    parse_factor(coeff, exponents, max_var);
    while (eat('*')) parse_factor(coeff, exponents, max_var);
    terms.emplace_back(std::move(exponents), coeff);
  }

  void parse(std::vector<std::pair<std::vector<int>, double>>& terms, int& max_var) {
    double sign = 1.0;
    if (eat('-'))
      sign = -1.0;
    else
      eat('+');
    parse_term(sign, terms, max_var);
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      if (eat('+'))
        parse_term(1.0, terms, max_var);
      else if (eat('-'))
        parse_term(-1.0, terms, max_var);
      else
        fail("expected '+' or '-' between terms");
    }
  }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, int n_vars) {
  PolyParser parser(text);
  std::vector<std::pair<std::vector<int>, double>> raw;
  int max_var = 0;
  parser.parse(raw, max_var);
  const int n = n_vars >= 1 ? n_vars : std::max(max_var, 1);
  if (max_var > n)
    throw ParseError("polynomial literal uses x" + std::to_string(max_var) + " but only " + std::to_string(n) +
                     " variables were declared");
  Polynomial p(n);
  for (auto& [exps, coeff] : raw) {
    exps.resize(n, 0);
    p.add_term(MultiIndex(exps), coeff);
  }
  return p;
}

}  // namespace tattr
