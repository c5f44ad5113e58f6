#include <iostream>

#include "topiclandscape/cli.hpp"

int main(int argc, char** argv) {
  return topiclandscape::cli::run(argc, argv, std::cout, std::cerr);
}
