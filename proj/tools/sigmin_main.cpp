#include "sigmin/cli.hpp"

int main(int argc, char** argv) { return sigmin::cli::run(argc, argv); }
