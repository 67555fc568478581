#include "levmem/cli.hpp"

int main(int argc, char** argv) { return levmem::cli_main(argc, argv); }
