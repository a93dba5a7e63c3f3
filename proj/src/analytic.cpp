#include "bergman/analytic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

bool is_pow2(long long e) { return e > 0 && (e & (e - 1)) == 0; }

double falling(long long n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= static_cast<double>(n - j);
  return f;
}

double to_double(const std::string& s, std::size_t pos) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'", pos);
  return v;
}

long long to_int(const std::string& s, std::size_t pos) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ParseError("bad integer '" + s + "'", pos);
  return v;
}

std::vector<std::pair<std::string, std::size_t>> split(const std::string& s, std::size_t offset, char sep) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = offset;
  for (std::size_t i = offset; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start), start);
      start = i + 1;
    }
  }
  return out;
}

cplx to_complex(const std::string& s, std::size_t pos) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {to_double(s, pos), 0.0};
  return {to_double(s.substr(0, colon), pos), to_double(s.substr(colon + 1), pos + colon + 1)};
}

}  // namespace

AnalyticFunction AnalyticFunction::from_coeffs(std::vector<cplx> coeffs) {
  AnalyticFunction f;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!std::isfinite(coeffs[k].real()) || !std::isfinite(coeffs[k].imag())) {
      throw DomainError("coefficients must be finite");
    }
    if (coeffs[k] != cplx(0.0, 0.0)) f.terms_.emplace_back(static_cast<long long>(k), coeffs[k]);
  }
  return f;
}

AnalyticFunction AnalyticFunction::monomial(long long n, cplx c) {
  if (n < 0) throw DomainError("monomial exponent must be >= 0");
  AnalyticFunction f;
  if (c != cplx(0.0, 0.0)) f.terms_.emplace_back(n, c);
  return f;
}

AnalyticFunction AnalyticFunction::from_terms(std::vector<Term> terms) {
  AnalyticFunction f;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].first < 0 || (i > 0 && terms[i].first <= terms[i - 1].first)) {
      throw DomainError("term exponents must be nonnegative and increasing");
    }
    if (terms[i].second != cplx(0.0, 0.0)) f.terms_.push_back(terms[i]);
  }
  return f;
}

AnalyticFunction AnalyticFunction::monomial_mod(double m, double n) {
  const double d = m - n;
  if (!(d >= 0.0) || d != std::floor(d) || !(n >= 0.0)) {
    throw DomainError("monomial_mod needs n >= 0 and m - n a nonnegative integer");
  }
  AnalyticFunction f;
  f.kind_ = Kind::monomial_mod;
  f.m_ = m;
  f.n_ = n;
  return f;
}

AnalyticFunction AnalyticFunction::lacunary(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!is_pow2(terms[i].first)) throw DomainError("lacunary exponents must be powers of 2");
    if (i > 0 && terms[i].first <= terms[i - 1].first) throw DomainError("lacunary exponents must increase");
  }
  AnalyticFunction f;
  f.kind_ = Kind::lacunary;
  for (auto& t : terms) {
    if (t.second != cplx(0.0, 0.0)) f.terms_.push_back(t);
  }
  return f;
}

long long AnalyticFunction::degree_bound() const {
  if (kind_ == Kind::monomial_mod) return static_cast<long long>(m_ - n_);
  return terms_.empty() ? 0 : terms_.back().first;
}

std::vector<cplx> AnalyticFunction::dense() const {
  if (!holomorphic()) throw DomainError("dense coefficients need a holomorphic function");
  std::vector<cplx> c(static_cast<std::size_t>(degree_bound()) + 1, cplx(0.0, 0.0));
  for (const auto& [k, a] : terms_) c[static_cast<std::size_t>(k)] = a;
  return c;
}

cplx AnalyticFunction::coeff(long long k) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, long long e) { return t.first < e; });
  return it != terms_.end() && it->first == k ? it->second : cplx(0.0, 0.0);
}

cplx AnalyticFunction::eval(cplx z) const {
  if (kind_ == Kind::monomial_mod) {
    const double a = std::abs(z);
    return std::pow(z, static_cast<int>(m_ - n_)) * std::pow(a, 2.0 * n_);
  }
  if (kind_ == Kind::coeffs) {
    cplx acc(0.0, 0.0);
    long long prev = degree_bound();
    // Horner over the sparse terms from the top
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      acc = acc * std::pow(z, static_cast<int>(prev - it->first)) + it->second;
      prev = it->first;
    }
    return acc * std::pow(z, static_cast<int>(prev));
  }
  // lacunary: z^(2^j) by repeated squaring
  cplx acc(0.0, 0.0), zp = z;
  long long e = 1;
  for (const auto& [k, a] : terms_) {
    while (e < k) {
      zp *= zp;
      e *= 2;
    }
    acc += a * zp;
  }
  return acc;
}

std::vector<cplx> AnalyticFunction::circle(double r, std::size_t L) const {
  if (kind_ == Kind::monomial_mod) {
    const long long d = static_cast<long long>(m_ - n_);
    const double mag = std::pow(r, m_ + n_);
    std::vector<cplx> out(L);
    for (std::size_t j = 0; j < L; ++j) {
      const long long e = (d * static_cast<long long>(j)) % static_cast<long long>(L);
      out[j] = std::polar(mag, 2.0 * M_PI * static_cast<double>(e) / static_cast<double>(L));
    }
    return out;
  }
  std::vector<cplx> c(std::min<std::size_t>(L, static_cast<std::size_t>(degree_bound()) + 1), cplx(0.0, 0.0));
  const double lr = r > 0.0 ? std::log(r) : 0.0;
  for (const auto& [k, a] : terms_) {
    const double s = k == 0 ? 1.0 : (r > 0.0 ? std::exp(static_cast<double>(k) * lr) : 0.0);
    c[static_cast<std::size_t>(k) % L] += a * s;
  }
  return circle_samples(c, L);
}

AnalyticFunction AnalyticFunction::derivative(int k) const {
  if (!holomorphic()) throw DomainError("derivative needs a holomorphic function");
  if (k < 0) throw DomainError("derivative order must be >= 0");
  AnalyticFunction f;
  for (const auto& [e, a] : terms_) {
    if (e >= k) f.terms_.emplace_back(e - k, a * falling(e, k));
  }
  // differentiated lacunary series are no longer lacunary in exponent
  return f;
}

AnalyticFunction random_polynomial(int degree, std::uint64_t seed) {
  if (degree < 0) throw DomainError("degree must be >= 0");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& a : c) {
    const double re = nd(gen);
    a = cplx(re, nd(gen));
  }
  return AnalyticFunction::from_coeffs(std::move(c));
}

AnalyticFunction parse_function(const std::string& spec) {
  auto head = [&](const std::string& h) { return spec.rfind(h, 0) == 0; };
  if (head("coeffs:")) {
    std::vector<cplx> c;
    for (const auto& [s, pos] : split(spec, 7, ',')) c.push_back(to_complex(s, pos));
    return AnalyticFunction::from_coeffs(std::move(c));
  }
  if (head("zpow:")) {
    const long long n = to_int(spec.substr(5), 5);
    if (n < 0) throw DomainError("zpow needs n >= 0");
    return AnalyticFunction::monomial(n);
  }
  if (head("mono:")) {
    const auto parts = split(spec, 5, ',');
    if (parts.size() != 2) throw ParseError("mono needs m,n", 5);
    return AnalyticFunction::monomial_mod(to_double(parts[0].first, parts[0].second),
                                          to_double(parts[1].first, parts[1].second));
  }
  if (head("lac:")) {
    std::vector<AnalyticFunction::Term> t;
    for (const auto& [s, pos] : split(spec, 4, ',')) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("lac term needs exponent=coefficient", pos);
      t.emplace_back(to_int(s.substr(0, eq), pos), to_complex(s.substr(eq + 1), pos + eq + 1));
    }
    return AnalyticFunction::lacunary(std::move(t));
  }
  if (head("random:")) {
    const auto parts = split(spec, 7, ',');
    if (parts.size() != 2) throw ParseError("random needs deg,seed", 7);
    const long long d = to_int(parts[0].first, parts[0].second);
    const long long s = to_int(parts[1].first, parts[1].second);
    if (d < 0 || d > 1000000) throw DomainError("random degree out of range");
    return random_polynomial(static_cast<int>(d), static_cast<std::uint64_t>(s));
  }
  throw ParseError("unknown function spec '" + spec + "'", 0);
}

}  // namespace bergman
