#include "airshower/cli.hpp"

int main(int argc, char** argv) { return airshower::cli::run(argc, argv); }
