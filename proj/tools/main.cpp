#include <string>
#include <vector>

#include "lamqed/cli.hpp"

int main(int argc, char** argv) {
  return lamqed::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
