#include <iostream>

#include "waveuio/commands.hpp"

int main(int argc, char** argv) { return waveuio::cli::run(argc, argv, std::cout, std::cerr); }
