#include <iostream>
#include <string>
#include <vector>

#include "gibbs_tree_cli/commands.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return gibbs_tree::cli::run_cli(args, std::cout, std::cerr);
}
