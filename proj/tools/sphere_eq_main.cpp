#include "sphere_eq/cli.hpp"

int main(int argc, char** argv) { return sphere_eq::cli_main(argc, argv); }
