#include "cli.hpp"

int main(int argc, char** argv) { return weakwhittle::cli::run(argc, argv); }
