#include <iostream>

#include "mltm_cli/commands.hpp"

int main(int argc, char** argv) { return mltm::cli::run(argc, argv, std::cout, std::cerr); }
