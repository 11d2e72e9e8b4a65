#include "ringsim/cli.hpp"

int main(int argc, char** argv) { return ringsim::cli_main(argc, argv); }
