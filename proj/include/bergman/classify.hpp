#pragma once

#include <map>
#include <string>
#include <vector>

#include "bergman/radius.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class ClassName { Dhat, Dcheck, Dboth, M, Dostanic, Cond10, DdIntegral, Muck7, Ldiag, Mchar };
enum class Verdict { holds, diverges, inconclusive };

std::string to_string(ClassName c);
std::string to_string(Verdict v);

struct GridPoint {
  double scale;      // r, x or n depending on the test
  double ratio;      // may overflow to inf; log_ratio stays finite longer
  double log_ratio;
  double gap = 0.0;  // 1 - r for radial grids, 0 otherwise
};

struct Profile {
  std::string name;
  std::vector<GridPoint> points;
  Verdict verdict = Verdict::inconclusive;
  double est_constant = 0.0;
};

struct ClassReport {
  ClassName cls = ClassName::Dhat;
  std::map<std::string, double> params;
  std::vector<GridPoint> grid;
  double est_constant = 0.0;  // max of the measured ratios
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> flags;
  std::vector<Profile> aux;
  std::map<std::string, std::string> notes;
};

// Verdict rules over the last min(8, n) grid points (at least 4 needed).
// Upper-bound tests: the ratio itself must stay bounded.
Verdict upper_bound_verdict(const std::vector<double>& log_ratios);
// Lower-bound tests (ratio >= C > 1): any ratio <= 1 fails outright, otherwise
// the degeneracy 1/(ratio - 1) must stay bounded.
Verdict lower_bound_verdict(const std::vector<double>& log_ratios);

// r_j = 1 - 2^-j for j in [j_min, j_max].
std::vector<Radius> dyadic_grid(int j_max, int j_min = 0);
// x = 2^k for k in [0, k_max].
std::vector<double> dyadic_xs(int k_max = 30);

ClassReport doubling_profile(const RadialWeight& w, int j_max = 40, double tol = kDefaultTol);
ClassReport doubling_profile(const RadialWeight& w, const std::vector<Radius>& grid, double tol = kDefaultTol);

ClassReport reverse_doubling_profile(const RadialWeight& w, double K = 2.0, int j_max = 40, double tol = kDefaultTol);
ClassReport reverse_doubling_profile(const RadialWeight& w, double K, const std::vector<Radius>& grid,
                                     double tol = kDefaultTol);

// Ratio tail(t) / int_0^t s^(1/(M(1-t))) w(s) ds.
ClassReport cond10_profile(const RadialWeight& w, double M, const std::vector<Radius>& grid, double tol = kDefaultTol);

ClassReport m_class_profile(const RadialWeight& w, double K = 2.0, const std::vector<double>& xs = {},
                            double tol = kDefaultTol);

enum class Side { M_side, Dhat_side };
ClassReport moment_characterization(const RadialWeight& w, double beta, const std::vector<double>& xs, Side side,
                                    double tol = kDefaultTol);

ClassReport dd_integral_test(const RadialWeight& w, double gamma, const std::vector<Radius>& grid,
                             double tol = kDefaultTol);

ClassReport dostanic_profile(const RadialWeight& w, double p, const std::vector<double>& ns, double tol = kDefaultTol);
// ns where a construction's failure shows; plain geometric ns otherwise.
std::vector<double> default_dostanic_ns(const RadialWeight& w, double p);

ClassReport l_diagnostics(const RadialWeight& w, const std::vector<double>& xs, double tol = kDefaultTol);

// J(r) = int_0^r dt / (tail(t)(1-t)).
double pplus_J(const RadialWeight& w, double r, double tol = 1e-9);
ClassReport pplus_necessity(const RadialWeight& w, double p, const std::vector<Radius>& grid, double tol = 1e-9);

// Least-squares slope of log tail against log(1-r) over the last `last` points.
double fit_tail_exponent(const RadialWeight& w, const std::vector<Radius>& grid, int last = 10,
                         double tol = kDefaultTol);

// Grid defaults per test: witness scales for the constructions, dyadic otherwise.
std::vector<Radius> default_radial_grid(const RadialWeight& w, ClassName c);

}  // namespace bergman
