#include "cylcover/cli.hpp"

int main(int argc, char** argv) { return cylcover::cli::main_entry(argc, argv); }
