#include <iostream>

#include "cli.hpp"
#include "wclt/parallel.hpp"

int main(int argc, char** argv) {
  wclt::configure_threads_from_env();
  return wclt::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
