#include "mngu/cli.hpp"

int main(int argc, char** argv) { return mngu::run_cli(argc, argv); }
