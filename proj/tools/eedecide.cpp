#include <string>
#include <vector>

#include "eedecide/cli.hpp"

int main(int argc, char** argv) {
  return eedecide::cli::main(std::vector<std::string>(argv + 1, argv + argc));
}
