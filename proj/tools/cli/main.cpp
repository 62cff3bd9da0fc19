#include "cli.hpp"

int main(int argc, char** argv) { return holomorse::cli::main_entry(argc, argv); }
