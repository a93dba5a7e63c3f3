#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bergman/fft.hpp"

namespace bergman {

// Test functions on the disc. Holomorphic ones are kept as sparse Maclaurin
// terms; monomial_mod is zeta^(m-n) |zeta|^(2n), which is not holomorphic for n > 0.
class AnalyticFunction {
 public:
  enum class Kind { coeffs, monomial_mod, lacunary };
  using Term = std::pair<long long, cplx>;

  AnalyticFunction() = default;

  static AnalyticFunction from_coeffs(std::vector<cplx> coeffs);
  static AnalyticFunction monomial(long long n, cplx c = cplx(1.0, 0.0));
  // sparse terms, exponents strictly increasing
  static AnalyticFunction from_terms(std::vector<Term> terms);
  static AnalyticFunction monomial_mod(double m, double n);
  // exponents must be strictly increasing powers of two
  static AnalyticFunction lacunary(std::vector<Term> terms);

  Kind kind() const { return kind_; }
  bool holomorphic() const { return kind_ != Kind::monomial_mod; }
  long long degree_bound() const;

  // Nonzero terms in increasing exponent order (holomorphic kinds only).
  const std::vector<Term>& terms() const { return terms_; }
  // Dense coefficients 0..degree (holomorphic kinds only).
  std::vector<cplx> dense() const;
  cplx coeff(long long k) const;
  double m() const { return m_; }
  double n() const { return n_; }

  cplx eval(cplx z) const;
  // f(r e^{2 pi i j / L}), j = 0..L-1, exact for polynomials.
  std::vector<cplx> circle(double r, std::size_t L) const;
  // k-th derivative, exact on the coefficients.
  AnalyticFunction derivative(int k) const;

 private:
  Kind kind_ = Kind::coeffs;
  std::vector<Term> terms_;
  double m_ = 0.0, n_ = 0.0;
};

// Samples f(r, theta) of a function that is only known pointwise.
using GriddedFunction = std::function<cplx(double r, double theta)>;

// Normal(0,1) real and imaginary parts; fixed seed gives a fixed polynomial.
AnalyticFunction random_polynomial(int degree, std::uint64_t seed);

// Function SPEC grammar used by the command line:
//   coeffs:c0,c1,...     each c is RE or RE:IM
//   zpow:n               z^n
//   mono:m,n             z^(m-n)|z|^(2n)
//   lac:e1=c1,e2=c2,...  lacunary, exponents powers of two
//   random:deg,seed      random_polynomial
AnalyticFunction parse_function(const std::string& spec);

}  // namespace bergman
