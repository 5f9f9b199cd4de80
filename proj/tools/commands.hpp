#pragma once

// Subcommand bodies, kept apart from argument parsing so tests can call them.

#include <iosfwd>

#include "json.hpp"
#include "kzwork/errors.hpp"

namespace kzwork::cli {

// Exit-code contract.
enum Exit : int { ok = 0, usage = 2, numerical = 3 };

// Parameters come from `cfg` (config file with flags merged in). Module
// exceptions propagate; run_guarded maps them to exit codes.
int cmd_params(const nlohmann::json& cfg, std::ostream& out);
int cmd_modes(const nlohmann::json& cfg, std::ostream& out);
int cmd_cfw(const nlohmann::json& cfg, std::ostream& out);
int cmd_cumulants(const nlohmann::json& cfg, std::ostream& out);
// Rows go to `out`, the exponent fits to `fit_out`.
int cmd_sweep(const nlohmann::json& cfg, std::ostream& out, std::ostream& fit_out);
int cmd_ed(const nlohmann::json& cfg, std::ostream& out);
// Rows go to `out`, the summary line to `report`.
int cmd_oracle(const nlohmann::json& cfg, std::ostream& out, std::ostream& report);

template <class F>
int run_guarded(F&& f, std::ostream& err) {
  try {
    return f();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << '\n';
    return usage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
}

}  // namespace kzwork::cli
