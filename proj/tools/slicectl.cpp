#include <iostream>
#include <string>
#include <vector>

#include "slicer/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const auto result = slicer::cli::run(args);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return slicer::cli::kExitInternal;
  }
}
