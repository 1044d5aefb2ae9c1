#include <string>
#include <vector>

#include "icviart/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return icviart::cli::run_cli(std::move(args));
}
