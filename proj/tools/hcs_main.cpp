#include "commands.hpp"

int main(int argc, char** argv) { return hcs::cli::run(argc, argv); }
