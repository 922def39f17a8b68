#include "structvec/cli.hpp"

int main(int argc, char** argv) { return structvec::cli::run_cli(argc, argv); }
