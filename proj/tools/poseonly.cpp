#include <iostream>

#include "poseonly/cli.hpp"

int main(int argc, char** argv) { return poseonly::run_cli(argc, argv, std::cout, std::cerr); }
