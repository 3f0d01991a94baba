#include "radial/cli.hpp"

int main(int argc, char** argv) { return radial::run_cli(argc, argv); }
