// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "facells/cli/dispatch.hpp"

int main(int argc, char** argv) { return facells::cli::run(argc, argv, std::cout, std::cerr); }
