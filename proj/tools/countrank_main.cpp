#include "countrank/cli.hpp"

int main(int argc, char** argv) { return countrank::cli::run(argc, argv); }
