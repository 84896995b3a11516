#include "chainplan/cli.hpp"

int main(int argc, char** argv) { return chainplan::cli_main(argc, argv); }
