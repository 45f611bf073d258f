#include <vector>
#include <string>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    return qtdlab::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
