#include "meedav/cli.hpp"

int main(int argc, char** argv) { return meedav::cli::run(argc, argv); }
