#include <string>
#include <vector>

#include "swr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return swr::run_cli(args);
}
