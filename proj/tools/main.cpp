#include "aplab/cli.hpp"

int main(int argc, char** argv) { return aplab::cli_main(argc, argv); }
