#pragma once

// Serialization: CSV at 17 significant digits with LF line endings, JSON records.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kzwork/luttinger.hpp"
#include "kzwork/workstats.hpp"
#include "kzwork/xxz_ed.hpp"

namespace kzwork::io {

std::string format_double(double x);  // "%.17g"; inf and nan spelled out

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
void write_cfw_csv(std::ostream& os, const CfwCurve& c);
void write_work_csv(std::ostream& os, const WorkDistribution& w);

nlohmann::json to_json(const ModeSolution& m);
nlohmann::json to_json(const QuenchProtocol& p);
nlohmann::json to_json(const CumulantSet& c);

// Regression record for ED runs.
struct GoldenRecord {
  int n_sites = 0;
  double delta_f = 0.0, tau_q = 0.0, beta = 0.0;
  std::vector<double> kappas;
  std::vector<double> u;
  std::vector<cplx> g;
};
nlohmann::json to_json(const GoldenRecord& r);
GoldenRecord golden_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kzwork::io
