#include "cli_commands.hpp"

int main(int argc, char** argv) { return tcprio::cli::run_cli(argc, argv); }
