#include "cyclo/cli.hpp"

int main(int argc, char** argv) { return cyclo::cli_run(argc, argv); }
