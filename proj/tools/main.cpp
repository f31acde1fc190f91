#include "takeover/cli.hpp"

int main(int argc, char** argv) { return takeover::cli_main(argc, argv); }
