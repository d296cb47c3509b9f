#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "scdl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    scdl::CliOptions options;
    options.color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
    return static_cast<int>(scdl::run_cli(args, std::cout, std::cerr, options));
}
