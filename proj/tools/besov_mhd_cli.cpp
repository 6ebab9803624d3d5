#include "besov_mhd/cli.hpp"

int main(int argc, char** argv) { return besov_mhd::cli_main(argc, argv); }
