#include "hardlattice/cli.hpp"

int main(int argc, char** argv) { return hardlattice::cli::run(argc, argv); }
