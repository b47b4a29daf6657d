#include "tga/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const tga::CliResult result = tga::run_command(args);
  if (!result.output.empty()) std::cout << result.output;
  if (!result.error.empty()) std::cerr << result.error << "\n";
  return result.code;
}
