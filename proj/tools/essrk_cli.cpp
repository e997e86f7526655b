#include "essrk/cli.hpp"

int main(int argc, char** argv) { return essrk::cli::run(argc, argv); }
