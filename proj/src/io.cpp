#include "kzwork/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kzwork/errors.hpp"

namespace kzwork::io {
namespace {

// JSON has no inf; beta = inf is written as the string "inf".
nlohmann::json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DomainError("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

void write_cfw_csv(std::ostream& os, const CfwCurve& c) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < c.u.size(); ++i) rows.push_back({c.u[i], c.g[i].real(), c.g[i].imag()});
  write_csv(os, {"u", "re_g", "im_g"}, rows);
}

void write_work_csv(std::ostream& os, const WorkDistribution& w) {
  std::vector<std::vector<double>> rows;
  for (const auto& [x, p] : w.entries) rows.push_back({x, p});
  write_csv(os, {"w", "prob"}, rows);
}

nlohmann::json to_json(const ModeSolution& m) {
  return {{"q", m.q},
          {"x1", {m.x1.real(), m.x1.imag()}},
          {"x2", {m.x2.real(), m.x2.imag()}},
          {"y1", {m.y1.real(), m.y1.imag()}},
          {"y2", {m.y2.real(), m.y2.imag()}},
          {"p_q", m.p},
          {"Q_q", m.Q},
          {"max_constraint_drift", m.max_constraint_drift}};
}

nlohmann::json to_json(const QuenchProtocol& p) {
  return {{"J", p.J}, {"delta_f", p.delta_f}, {"tau_q", p.tau_q}, {"beta", number(p.beta)}};
}

nlohmann::json to_json(const CumulantSet& c) {
  return {{"method", to_string(c.method)}, {"alpha", c.alpha}, {"kappas", c.kappa},
          {"max_imag_residue", c.max_imag_residue}};
}

nlohmann::json to_json(const GoldenRecord& r) {
  nlohmann::json g = nlohmann::json::array();
  for (std::size_t i = 0; i < r.u.size(); ++i) g.push_back({r.u[i], r.g[i].real(), r.g[i].imag()});
  return {{"N", r.n_sites}, {"delta_f", r.delta_f}, {"tau_q", r.tau_q}, {"beta", number(r.beta)},
          {"kappas", r.kappas}, {"G_samples", g}};
}

GoldenRecord golden_from_json(const nlohmann::json& j) {
  GoldenRecord r;
  r.n_sites = j.at("N").get<int>();
  r.delta_f = j.at("delta_f").get<double>();
  r.tau_q = j.at("tau_q").get<double>();
  r.beta = number_from(j.at("beta"));
  r.kappas = j.at("kappas").get<std::vector<double>>();
  for (const auto& s : j.at("G_samples")) {
    r.u.push_back(s.at(0).get<double>());
    r.g.emplace_back(s.at(1).get<double>(), s.at(2).get<double>());
  }
  return r;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace kzwork::io
