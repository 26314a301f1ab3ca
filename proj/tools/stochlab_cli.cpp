#include "stochlab/experiment.hpp"

int main(int argc, char** argv) { return stochlab::experiment::run_cli(argc, argv); }
