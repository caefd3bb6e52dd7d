#include <iostream>

#include "fcmac_tools/cli.hpp"

int main(int argc, char** argv) {
  return fcmac::tools::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
