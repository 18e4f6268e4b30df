#include "nogo/cli.hpp"

int main(int argc, char** argv) { return nogo::cli::run(argc, argv); }
