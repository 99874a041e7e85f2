#include "splap/cli.hpp"

int main(int argc, char** argv) { return splap::cli::run(argc, argv); }
