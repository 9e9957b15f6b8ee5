#include <iostream>

#include "mtmod/cli.hpp"

int main(int argc, char** argv) {
  return mtmod::cli_dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
