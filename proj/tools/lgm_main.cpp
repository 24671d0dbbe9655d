#include <string>
#include <vector>

#include "lgm/cli.hpp"

int main(int argc, char** argv) {
    return lgm::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
