#include "greedy_colloc/cli.hpp"

int main(int argc, char** argv) { return gcol::cli_main(std::vector<std::string>(argv + 1, argv + argc)); }
