#include "balancer/cli.hpp"

int main(int argc, char **argv) { return balancer::run_cli(argc, argv); }
