#include "scalekit/cli.hpp"

int main(int argc, char** argv) { return scalekit::run_command(argc, argv); }
