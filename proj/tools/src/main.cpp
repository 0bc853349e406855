#include <qbound/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return qbound::cli::run(argc, argv, std::cout, std::cerr); }
