#include <iostream>

#include "ttm/cli.hpp"

int main(int argc, char** argv) {
  return ttm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
