#include <iostream>
#include <vector>

#include "evs/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    evs::CommandOutcome out = evs::run_command(std::move(args));
    if (out.format == "machine")
      std::cout << out.machine.dump(2) << "\n";
    else
      std::cout << out.human;
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 1;
  }
}
