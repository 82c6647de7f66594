#include "modfold/cli.hpp"

int main(int argc, char** argv) {
    return modfold::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
