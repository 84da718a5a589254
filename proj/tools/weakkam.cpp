#include "weakkam/cli/cli.hpp"

int main(int argc, char** argv) { return weakkam::cli::run(argc, argv); }
