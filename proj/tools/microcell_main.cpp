#include "microcell/cli_app.hpp"

int main(int argc, char** argv) { return microcell::run_cli(argc, argv); }
