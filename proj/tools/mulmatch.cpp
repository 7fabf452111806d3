#include "mulmatch/cli.hpp"

int main(int argc, char** argv) { return mulmatch::cli_run(argc, argv); }
