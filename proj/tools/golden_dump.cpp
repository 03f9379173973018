#include <fstream>
#include <iostream>
#include <sstream>

#include "../tests/golden_cases.hpp"
#include "ade/cli.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: golden_dump <golden dir>\n";
    return 1;
  }
  std::string dir = argv[1];
  for (const auto& c : golden_cases()) {
    std::vector<std::string> args;
    for (auto a : c.args) {
      if (auto at = a.find("@DIR@"); at != std::string::npos) a.replace(at, 5, dir);
      args.push_back(a);
    }
    std::ostringstream out;
    int code = ade::run_cli(args, out);
    std::ofstream(dir + "/" + c.name + ".out") << out.str();
    std::cout << c.name << ": exit " << code << (code == c.exit_code ? "" : "  (table says " + std::to_string(c.exit_code) + ")") << "\n";
  }
}
