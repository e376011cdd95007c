#include "pcgrasp/cli.hpp"

int main(int argc, char** argv) { return pcgrasp::run_cli(argc, argv); }
