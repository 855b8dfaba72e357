#include "slapknn/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return slapknn::run_cli(argc, argv, std::cout, std::cerr);
}
