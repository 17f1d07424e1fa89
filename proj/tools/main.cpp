#include "linagg/cli.hpp"

int main(int argc, char** argv) { return linagg::run_cli(argc, argv); }
