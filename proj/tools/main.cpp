#include <string>
#include <vector>

#include "rbmo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rbmo::run_cli(args);
}
