#include "commands.hpp"

int main(int argc, char** argv) { return recurconnect::cli::run(argc, argv); }
