// Command line front end. One subcommand per run; the report goes to --out
// (stdout by default) as JSON, or CSV when --out ends in .csv or --format csv.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bergman/classify.hpp"
#include "bergman/constructs.hpp"
#include "bergman/decompose.hpp"
#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/lp.hpp"
#include "bergman/parallel.hpp"
#include "bergman/project.hpp"
#include "bergman/report.hpp"

using namespace bergman;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitUsage = 64;

struct Globals {
  double tol = kDefaultTol;
  int jobs = 0;
  std::string out;
  std::string format;  // empty: pick from the --out extension

  bool csv() const {
    if (!format.empty()) return format == "csv";
    return out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0;
  }
};

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(s, &used);
      if (used != s.size()) throw ParseError("bad complex number '" + s + "'", used);
      return {re, 0.0};
    }
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw ParseError("bad real part '" + a + "'", used);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw ParseError("bad imaginary part '" + b + "'", comma + 1 + used);
    return {re, im};
  } catch (const std::logic_error&) {
    throw ParseError("bad complex number '" + s + "'", 0);
  }
}

ClassName class_of(const std::string& s) {
  if (s == "dhat") return ClassName::Dhat;
  if (s == "dcheck") return ClassName::Dcheck;
  if (s == "m") return ClassName::M;
  if (s == "dostanic") return ClassName::Dostanic;
  if (s == "cond10") return ClassName::Cond10;
  if (s == "ddint") return ClassName::DdIntegral;
  if (s == "muck7") return ClassName::Muck7;
  if (s == "ldiag") return ClassName::Ldiag;
  return ClassName::Mchar;
}

std::vector<double> grid_radii(const std::vector<Radius>& g) {
  std::vector<double> r;
  for (const auto& x : g) r.push_back(x.r());
  return r;
}

void emit_class(const Globals& g, const ClassReport& r) {
  write_output(g.out, g.csv() ? class_report_csv(r) : emit_json(to_json(r)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial weights on the unit disc: moments, classes, kernels, projections"};
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Target tolerance")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Report path (stdout if absent)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // classify
  auto* cl = app.add_subcommand("classify", "Weight class profile and verdict");
  std::string weight, cls, side = "m";
  double K = 0.0, p = 2.0, beta = 1.0, gamma = 1.0;
  cl->add_option("--weight", weight)->required();
  cl->add_option("--class", cls)
      ->required()
      ->check(CLI::IsMember({"dhat", "dcheck", "m", "dostanic", "cond10", "ddint", "muck7", "ldiag", "mchar"}));
  cl->add_option("--K", K, "K (Dcheck, M) or M (cond10)");
  cl->add_option("--p", p);
  cl->add_option("--beta", beta);
  cl->add_option("--gamma", gamma);
  cl->add_option("--side", side)->check(CLI::IsMember({"m", "dhat"}));

  // moments
  auto* mo = app.add_subcommand("moments", "Log moments and log tails");
  std::vector<double> xs{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0};
  std::vector<double> rs{0.0, 0.5, 0.75, 0.875, 0.9375};
  mo->add_option("--weight", weight)->required();
  mo->add_option("--x", xs)->delimiter(',');
  mo->add_option("--r", rs)->delimiter(',');

  // kernel
  auto* ke = app.add_subcommand("kernel", "Reproducing kernel by its moment series");
  std::string xs_str, z_str, zeta_str;
  int deriv = 0;
  ke->add_option("--weight", weight)->required();
  ke->add_option("--x", xs_str, "x = conj(z) zeta as RE,IM");
  ke->add_option("--z", z_str);
  ke->add_option("--zeta", zeta_str);
  ke->add_option("--deriv", deriv)->check(CLI::NonNegativeNumber);

  // project
  auto* pr = app.add_subcommand("project", "Bergman projection at a point");
  std::string fspec;
  bool plus = false, quadrature = false;
  pr->add_option("--weight", weight)->required();
  pr->add_option("--f", fspec)->required();
  pr->add_option("--z", z_str)->required();
  pr->add_flag("--plus", plus, "Maximal projection");
  pr->add_flag("--quadrature", quadrature, "Skip the coefficient identity for holomorphic f");

  // lp-check
  auto* lc = app.add_subcommand("lp-check", "Littlewood-Paley ratio profile");
  std::string family = "monomials:1..200";
  int k = 1;
  lc->add_option("--weight", weight)->required();
  lc->add_option("--p", p);
  lc->add_option("--k", k)->check(CLI::PositiveNumber);
  lc->add_option("--family", family);

  // decompose
  auto* de = app.add_subcommand("decompose", "Block decomposition norm");
  double Kd = 2.0;
  de->add_option("--weight", weight)->required();
  de->add_option("--K", Kd);
  de->add_option("--f", fspec)->required();
  de->add_option("--p", p);

  // two-weight
  auto* tw = app.add_subcommand("two-weight", "A_p and M_p constants");
  std::string omega, nu;
  tw->add_option("--omega", omega)->required();
  tw->add_option("--nu", nu)->required();
  tw->add_option("--p", p)->required();

  // construct
  auto* co = app.add_subcommand("construct", "Explicit counterexample weights");
  std::string which, params, emit_path;
  co->add_option("--which", which)->required()->check(CLI::IsMember({"prop9", "thm10", "prop12"}));
  co->add_option("--params", params);
  co->add_option("--emit", emit_path, "CSV table r,omega,log_tail");

  // dostanic
  auto* ds = app.add_subcommand("dostanic", "Dostanic moment profile");
  std::vector<double> ns;
  ds->add_option("--weight", weight)->required();
  ds->add_option("--p", p)->required();
  ds->add_option("--ns", ns)->delimiter(',');

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty()) {
      std::cerr << e.what() << "\n" << app.help();
      return kExitUsage;
    }
    std::cerr << e.what() << "\n";
    return kExitDomain;
  }

  set_default_jobs(g.jobs);

  try {
    if (cl->parsed()) {
      const RadialWeight w = parse_weight(weight);
      const ClassName c = class_of(cls);
      const bool is_construct = w.construct() != nullptr;
      const double k_used = K > 0.0 ? K : (c == ClassName::M && is_construct ? w.construct()->m_K : 2.0);
      ClassReport r;
      switch (c) {
        case ClassName::Dhat:
          r = doubling_profile(w, default_radial_grid(w, c), g.tol);
          break;
        case ClassName::Dcheck:
          r = reverse_doubling_profile(w, k_used, default_radial_grid(w, c), g.tol);
          break;
        case ClassName::M:
          r = m_class_profile(w, k_used, {}, g.tol);
          break;
        case ClassName::Dostanic:
          r = dostanic_profile(w, p, default_dostanic_ns(w, p), g.tol);
          break;
        case ClassName::Cond10:
          r = cond10_profile(w, k_used, default_radial_grid(w, c), g.tol);
          break;
        case ClassName::DdIntegral:
          r = dd_integral_test(w, gamma, default_radial_grid(w, c), g.tol);
          break;
        case ClassName::Muck7:
          r = pplus_necessity(w, p, default_radial_grid(w, c), std::max(g.tol, 1e-9));
          break;
        case ClassName::Ldiag:
          r = l_diagnostics(w, {}, g.tol);
          break;
        default:
          r = moment_characterization(w, beta, {}, side == "m" ? Side::M_side : Side::Dhat_side, g.tol);
          break;
      }
      emit_class(g, r);
    } else if (mo->parsed()) {
      const RadialWeight w = parse_weight(weight);
      Json j;
      j["weight"] = w.descriptor();
      j["moments"] = Json::array();
      for (double x : xs) {
        if (!(x >= 0.0)) throw DomainError("moments need x >= 0");
        const double lm = moment(w, x, g.tol);
        j["moments"].push_back({{"x", x}, {"log_moment", lm}, {"moment", std::exp(lm)}});
      }
      j["tails"] = Json::array();
      for (double r : rs) {
        const double lt = tail(w, r, g.tol);
        j["tails"].push_back({{"r", r}, {"log_tail", lt}, {"tail", std::exp(lt)}});
      }
      write_output(g.out, emit_json(j));
    } else if (ke->parsed()) {
      const RadialWeight w = parse_weight(weight);
      KernelValue v;
      if (!z_str.empty() || !zeta_str.empty()) {
        if (z_str.empty() || zeta_str.empty() || !xs_str.empty()) {
          throw DomainError("give either --x, or both --z and --zeta");
        }
        v = kernel_derivative(w, parse_complex(z_str), parse_complex(zeta_str), deriv, g.tol);
      } else {
        if (xs_str.empty()) throw DomainError("--x is required");
        v = kernel_eval_derivative(w, parse_complex(xs_str), deriv, g.tol);
      }
      write_output(g.out, emit_json(to_json(v)));
    } else if (pr->parsed()) {
      const RadialWeight w = parse_weight(weight);
      const AnalyticFunction f = parse_function(fspec);
      const cplx z = parse_complex(z_str);
      if (!(std::abs(z) < 1.0)) throw DomainError("projection needs |z| < 1");
      const QuadratureSpec q = QuadratureSpec::for_weight(w, f.degree_bound(), g.tol);
      Json j;
      if (plus) {
        const PlusValue v = project_plus(w, f, z, q);
        j = {{"value", v.value}, {"flags", v.flags}};
      } else {
        ProjectOptions opt;
        opt.fast_path = !quadrature;
        j["value"] = complex_json(project(w, f, z, q, opt));
        j["method"] = opt.fast_path && f.holomorphic() ? "coefficient_identity" : "quadrature";
      }
      write_output(g.out, emit_json(j));
    } else if (lc->parsed()) {
      const RadialWeight w = parse_weight(weight);
      const LpReport r = lp_ratio(w, p, k, parse_family(family), 0, g.tol);
      write_output(g.out, g.csv() ? lp_csv(r) : emit_json(to_json(r)));
    } else if (de->parsed()) {
      const RadialWeight w = parse_weight(weight);
      const AnalyticFunction f = parse_function(fspec);
      const DecompositionNorm d = decomposition_norm(w, p, f, Kd);
      Json j = to_json(d);
      const double bn = std::pow(bergman_norm(w, f, p, 0, g.tol), p);
      j["bergman_norm_p"] = bn;
      j["ratio"] = d.value / bn;
      write_output(g.out, emit_json(j));
    } else if (tw->parsed()) {
      const RadialWeight w = parse_weight(omega);
      const RadialWeight v = parse_weight(nu);
      const TwoWeightResult t = two_weight_constants(w, v, p, grid_radii(dyadic_grid(40)), std::max(g.tol, 1e-9));
      write_output(g.out, g.csv() ? two_weight_csv(t) : emit_json(to_json(t)));
    } else if (co->parsed()) {
      if (which == "prop9" && !params.empty()) throw DomainError("prop9 takes no parameters");
      const std::string dsl = "construct:" + which + (params.empty() ? "" : ":" + params);
      const RadialWeight w = parse_weight(dsl);
      const auto table = construct_table(w);
      if (!emit_path.empty()) write_output(emit_path, table_csv(table));
      Json j;
      j["descriptor"] = w.descriptor();
      j["rows"] = table.size();
      if (const ConstructInfo* info = w.construct()) {
        j["params"] = Json::object();
        for (const auto& [key, val] : info->params) j["params"][key] = val;
        j["range"] = info->range;
        j["m_K"] = info->m_K;
      }
      j["flags"] = w.model().flags();
      if (emit_path.empty() || !g.out.empty()) write_output(g.out, emit_json(j));
    } else if (ds->parsed()) {
      const RadialWeight w = parse_weight(weight);
      emit_class(g, dostanic_profile(w, p, ns.empty() ? default_dostanic_ns(w, p) : ns, g.tol));
    }
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy: " << e.what() << "\n";
    try {
      write_output(g.out, emit_json({{"flagged", true},
                                     {"error", e.what()},
                                     {"best_estimate", e.best_estimate()},
                                     {"achieved_error", e.achieved_error()}}));
    } catch (const std::exception& io) {
      std::cerr << io.what() << "\n";
    }
    return kExitAccuracy;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
