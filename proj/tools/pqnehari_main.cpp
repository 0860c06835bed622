#include "pqnehari/cli.hpp"

int main(int argc, char** argv) { return pqnehari::main_entry(argc, argv); }
