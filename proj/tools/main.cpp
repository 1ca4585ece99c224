#include "hurwitz/cli.hpp"

int main(int argc, char** argv) { return hurwitz::run_cli(argc, argv); }
