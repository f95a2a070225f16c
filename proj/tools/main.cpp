#include "convring/cli.hpp"

int main(int argc, char** argv) { return convring::cli_main(argc, argv); }
