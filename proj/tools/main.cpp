// kzwork: work statistics of a finite-rate XXZ / Luttinger-liquid quench.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "kzwork/io.hpp"

namespace {

using nlohmann::json;

// Flags shared by every subcommand; set ones override the config document.
struct Common {
  std::string config, out, source;
  std::optional<int> workers, n;
  std::optional<double> alpha;
  std::string beta;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON run configuration");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--source", c.source, "analytic | ed")->check(CLI::IsMember({"analytic", "ed"}));
  sub->add_option("--workers", c.workers, "concurrent sweep points")->check(CLI::PositiveNumber);
  sub->add_option("--alpha", c.alpha, "UV cutoff");
  sub->add_option("--n", c.n, "chain length");
  sub->add_option("--beta", c.beta, "inverse temperature, number or inf");
}

json merged(const Common& c, const json& extra) {
  json cfg = c.config.empty() ? json::object() : kzwork::io::read_json_file(c.config);
  if (!cfg.is_object()) throw kzwork::DomainError("config must be a JSON object");
  if (!c.source.empty()) cfg["source"] = c.source;
  if (c.workers) cfg["workers"] = *c.workers;
  if (c.n) cfg["n"] = *c.n;
  if (c.alpha) cfg["alpha"] = *c.alpha;
  if (!c.beta.empty()) {
    if (c.beta == "inf")
      cfg["beta"] = "inf";
    else
      try {
        std::size_t end = 0;
        cfg["beta"] = std::stod(c.beta, &end);
        if (end != c.beta.size()) throw std::invalid_argument(c.beta);
      } catch (const std::exception&) {
        throw kzwork::DomainError("--beta: expected a number or inf");
      }
  }
  cfg.update(extra);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work statistics of a finite-rate quench in the XXZ chain"};
  app.require_subcommand(1);
  Common c;
  json extra = json::object();

  std::optional<double> delta, delta_f, tau_q;
  auto protocol_flags = [&](CLI::App* s) {
    s->add_option("--delta-f", delta_f, "final anisotropy");
    s->add_option("--tau-q", tau_q, "ramp duration");
  };

  auto* params = app.add_subcommand("params", "print v/J and K for an anisotropy");
  params->add_option("--delta", delta, "anisotropy")->required();
  auto* modes = app.add_subcommand("modes", "solve the mode equation, JSON per momentum");
  auto* cfw = app.add_subcommand("cfw", "characteristic function of work, CSV");
  auto* cum = app.add_subcommand("cumulants", "work cumulants, JSON");
  auto* sweep = app.add_subcommand("sweep", "cumulants across tau_q with exponent fits");
  auto* ed = app.add_subcommand("ed", "exact-diagonalization work distribution");
  auto* oracle = app.add_subcommand("oracle", "truncated Fock-space check of the pair factor");
  std::optional<int> n_max;
  oracle->add_option("--n-max", n_max, "per-mode occupation cutoff");
  for (auto* s : {params, modes, cfw, cum, sweep, ed, oracle}) add_common(s, c);
  for (auto* s : {modes, cfw, cum, sweep, ed, oracle}) protocol_flags(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kzwork::cli::usage;
  }
  if (delta) extra["delta"] = *delta;
  if (delta_f) extra["delta_f"] = *delta_f;
  if (tau_q) extra["tau_q"] = *tau_q;
  if (n_max) extra["n_max"] = *n_max;

  return kzwork::cli::run_guarded(
      [&]() -> int {
        const json cfg = merged(c, extra);
        std::ostringstream body, side;
        int rc = kzwork::cli::ok;
        if (*params) rc = kzwork::cli::cmd_params(cfg, body);
        if (*modes) rc = kzwork::cli::cmd_modes(cfg, body);
        if (*cfw) rc = kzwork::cli::cmd_cfw(cfg, body);
        if (*cum) rc = kzwork::cli::cmd_cumulants(cfg, body);
        if (*sweep) rc = kzwork::cli::cmd_sweep(cfg, body, side);
        if (*ed) rc = kzwork::cli::cmd_ed(cfg, body);
        if (*oracle) rc = kzwork::cli::cmd_oracle(cfg, body, side);
        if (c.out.empty()) {
          std::cout << body.str() << side.str();
        } else {
          kzwork::io::write_text_file(c.out, body.str());
          if (*sweep) kzwork::io::write_text_file(c.out + ".fit.json", side.str());
          if (*oracle) std::cout << side.str();
        }
        return rc;
      },
      std::cerr);
}
