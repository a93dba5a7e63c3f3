#include "bergman/report.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "bergman/format.hpp"

namespace bergman {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "\"" + format_double17(v) + "\"";
  return format_double17(v);
}

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string end_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + end_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        emit(j[i], out, depth + 1);
      }
      out += "\n" + end_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

Json grid_json(const std::vector<GridPoint>& g) {
  Json a = Json::array();
  for (const auto& p : g) {
    a.push_back({{"scale", p.scale}, {"ratio", p.ratio}, {"log_ratio", p.log_ratio}, {"gap", p.gap}});
  }
  return a;
}

}  // namespace

std::string emit_json(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

std::string emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double17(row[i]);
    out += "\n";
  }
  return out;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ClassReport& r) {
  Json j;
  j["class"] = to_string(r.cls);
  j["params"] = Json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  j["grid"] = grid_json(r.grid);
  j["est_constant"] = r.est_constant;
  j["verdict"] = to_string(r.verdict);
  j["flags"] = r.flags;
  j["notes"] = Json::object();
  for (const auto& [k, v] : r.notes) j["notes"][k] = v;
  Json aux = Json::array();
  for (const auto& a : r.aux) {
    aux.push_back({{"name", a.name}, {"verdict", to_string(a.verdict)}, {"est_constant", a.est_constant},
                   {"grid", grid_json(a.points)}});
  }
  j["aux"] = aux;
  return j;
}

Json to_json(const KernelValue& k) {
  return {{"value", complex_json(k.value)}, {"trunc_bound", k.trunc_bound}, {"terms", k.terms_used}};
}

Json to_json(const TwoWeightResult& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"r", r.r}, {"sigma_hat", r.sigma_hat}, {"Ap_integrand", r.ap}, {"Mp_integrand", r.mp}});
  }
  return {{"Ap", t.Ap}, {"Mp", t.Mp}, {"sigma_integrable", t.sigma_integrable}, {"flags", t.flags}, {"rows", rows}};
}

Json to_json(const LpReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) rows.push_back({{"index", x.index}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"ratio", x.ratio}});
  return {{"rows", rows}, {"min_ratio", r.min_ratio}, {"max_ratio", r.max_ratio}, {"band", r.band}};
}

Json to_json(const DecompositionNorm& d) {
  Json rho = Json::array(), ranges = Json::array();
  for (const auto& r : d.blocks.rho) rho.push_back({{"r", r.r()}, {"gap", r.gap()}});
  for (const auto& [lo, hi] : d.blocks.ranges) ranges.push_back(Json::array({lo, hi}));
  return {{"K", d.blocks.K}, {"rho", rho}, {"Mn", d.blocks.Mn}, {"ranges", ranges}, {"block_hp", d.block_hp},
          {"value", d.value}};
}

std::string class_report_csv(const ClassReport& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& g : r.grid) rows.push_back({g.scale, g.ratio});
  return emit_csv({"scale", "ratio"}, rows);
}

std::string two_weight_csv(const TwoWeightResult& t) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) rows.push_back({r.r, r.sigma_hat, r.ap, r.mp});
  return emit_csv({"r", "sigma_hat", "Ap_integrand", "Mp_integrand"}, rows);
}

std::string lp_csv(const LpReport& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& x : r.rows) rows.push_back({static_cast<double>(x.index), x.lhs, x.rhs, x.ratio});
  return emit_csv({"index", "lhs", "rhs", "ratio"}, rows);
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) out.push_back({r.r, r.omega, r.log_tail});
  return emit_csv({"r", "omega", "log_tail"}, out);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write to stdout failed");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": " + std::strerror(errno));
  f << content;
  f.close();
  if (!f) throw std::runtime_error(path + ": " + std::strerror(errno));
}

}  // namespace bergman
