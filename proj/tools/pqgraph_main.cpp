#include "pqgraph/cli.hpp"

int main(int argc, char** argv) { return pqgraph::cli::run(argc, argv); }
