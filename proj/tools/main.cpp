#include "tattr/cli.hpp"

int main(int argc, char** argv) { return tattr::cli_main(argc, argv); }
