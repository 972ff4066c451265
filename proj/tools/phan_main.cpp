#include "phan/cli.hpp"

int main(int argc, char** argv) { return phan::run_cli(argc, argv); }
