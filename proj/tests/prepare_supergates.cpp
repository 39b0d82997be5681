/*!
  \file prepare_supergates.cpp
  \brief Builds the supergate cache shared by the tests
*/

#include <iostream>

#include "test_support.hpp"

int main()
{
  auto const& lib = qals::test::mcnc_library();
  std::cout << lib.supergates.supergates().size() << " supergates in " << lib.supergates.num_keys() << " functions\n";
  return lib.supergates.supergates().empty() ? 1 : 0;
}
