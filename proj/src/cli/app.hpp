// SPDX-License-Identifier: MIT
/**
    \file
    \brief the lwkit command line: argument parsing, configuration layering and error reporting

    The configuration file (--config) is read first; every flag given on the command line then overrides the
    corresponding field. Errors are printed to the error stream as one JSON object and mapped onto exit codes.
*/

#pragma once

#include <iosfwd>

namespace lw::cli {

auto run_app(int argc, char const* const* argv, std::ostream& out, std::ostream& err) -> int;

} // namespace lw::cli
