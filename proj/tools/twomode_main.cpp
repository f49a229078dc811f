#include "twomode/cli.hpp"

int main(int argc, char** argv) { return twomode::cli::main_entry(argc, argv); }
