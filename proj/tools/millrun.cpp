#include <iostream>

#include "millrun/cli.hpp"

int main(int argc, char** argv) {
	return millrun::cli::main(argc, argv, std::cout, std::cerr);
}
