#include <string>
#include <vector>

#include "ccnkit/cli.hpp"

int main(int argc, char** argv) {
  return ccn::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
