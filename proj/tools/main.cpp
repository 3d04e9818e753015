#include "ziegler/cli.hpp"

int main(int argc, char** argv) { return ziegler::cli::run(argc, argv); }
