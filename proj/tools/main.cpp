#include "cli.hpp"

int main(int argc, char** argv) { return expcycles::cli::run(argc, argv); }
