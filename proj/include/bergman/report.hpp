#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bergman/classify.hpp"
#include "bergman/constructs.hpp"
#include "bergman/decompose.hpp"
#include "bergman/kernel.hpp"
#include "bergman/lp.hpp"
#include "bergman/project.hpp"

namespace bergman {

using Json = nlohmann::json;

// Keys sorted, floats as %.17g, non-finite floats as the strings "inf", "-inf", "nan".
std::string emit_json(const Json& j);

// Header line, then one line per row, floats as %.17g.
std::string emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

Json to_json(const ClassReport& r);
Json to_json(const KernelValue& k);
Json to_json(const TwoWeightResult& t);
Json to_json(const LpReport& r);
Json to_json(const DecompositionNorm& d);
Json complex_json(cplx z);

// "scale,ratio"
std::string class_report_csv(const ClassReport& r);
// "r,sigma_hat,Ap_integrand,Mp_integrand"
std::string two_weight_csv(const TwoWeightResult& t);
// "index,lhs,rhs,ratio"
std::string lp_csv(const LpReport& r);
// "r,omega,log_tail"
std::string table_csv(const std::vector<TableRow>& rows);

// Writes to `path`, or stdout when path is empty or "-". Throws std::runtime_error on I/O failure.
void write_output(const std::string& path, const std::string& content);

}  // namespace bergman
