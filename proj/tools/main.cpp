#include "cli.hpp"

int main(int argc, char** argv) { return unidisc::cli::run(argc, argv); }
