#include "icorr/cli.hpp"

int main(int argc, char** argv) { return icorr::cli::run(argc, argv); }
