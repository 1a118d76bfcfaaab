// SPDX-License-Identifier: MIT
/**
    \file
    \brief lwkit entry point
*/

#include "cli/app.hpp"

#include <iostream>

auto main(int argc, char** argv) -> int
{
    return lw::cli::run_app(argc, argv, std::cout, std::cerr);
}
