#include "pfspec/cli.hpp"

int main(int argc, char** argv) { return pfspec::run_cli(argc, argv); }
