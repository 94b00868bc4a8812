#include "zk/harness.hpp"

int main(int argc, char** argv) { return zk::harness::cli_main(argc, argv); }
