#include <vector>

#include "crossrisk/cli.hpp"

int main(int argc, char** argv) {
    return crossrisk::cli_dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
