#include "wgsum/harness.hpp"

int main(int argc, char** argv) { return wgsum::run_cli(argc, argv); }
