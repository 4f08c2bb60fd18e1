#include "mgfwa/cli.hpp"

int main(int argc, char** argv) {
  return mgfwa::bench::cli_main(argc, argv);
}
