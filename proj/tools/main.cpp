#include "cli.hpp"

int main(int argc, char** argv) { return bdc::cli::main_entry(argc, argv); }
