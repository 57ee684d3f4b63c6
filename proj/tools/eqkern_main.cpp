#include "eqk/experiments.hpp"

int main(int argc, char** argv) { return eqk::run_cli(argc, argv); }
