#include "fracsing_cli/commands.hpp"

int main(int argc, char** argv) { return fracsing::cli::run(argc, argv); }
