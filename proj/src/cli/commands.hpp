// SPDX-License-Identifier: MIT
/**
    \file
    \brief the lwkit subcommands; each takes a resolved scenario and returns a process exit code

    Exit codes: 0 ok, 1 validation error (bad configuration or module precondition), 2 verification failure (the run
    completed and a checked property does not hold), 3 internal error.
*/

#pragma once

#include "cli/config.hpp"

#include <iosfwd>

namespace lw::cli {

enum exit_code : int
{
    exit_ok = 0,
    exit_validation = 1,
    exit_verification = 2,
    exit_internal = 3,
};

//! exit code an error kind maps onto
auto exit_code_for(error_kind kind) noexcept -> int;

//! structured error object {"error": {"kind": ..., "message": ...}} on one line
auto error_json(std::string_view kind, std::string const& message) -> std::string;

auto run_models(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_model_eval(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_verify(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_sing_analyze(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_wrinkle_converge(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_knot_validate(scenario_config_t const& cfg, std::ostream& out) -> int;
auto run_obstruct(scenario_config_t const& cfg, std::ostream& out) -> int;

} // namespace lw::cli
