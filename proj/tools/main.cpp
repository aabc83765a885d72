#include "commands.hpp"

int main(int argc, char** argv) { return spinet::cli::run(argc, argv); }
