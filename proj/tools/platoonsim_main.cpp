#include <iostream>

#include "platoonsim/cli.hpp"

int
main (int argc, char **argv)
{
  return platoonsim::cli_main (argc, argv, std::cout, std::cerr);
}
