/*!
  \file gen_benchmarks.cpp
  \brief Writes the built-in benchmark suite as ASCII AIGER files
*/

#include <filesystem>
#include <iostream>

#include <qals/aiger.hpp>
#include <qals/benchmarks.hpp>
#include <qals/cli.hpp>

int main( int argc, char** argv )
{
  std::filesystem::path const dir = argc > 1 ? argv[1] : "benchmarks";
  try
  {
    for ( auto const& b : qals::benchmark_suite() )
    {
      auto const net = b.build();
      qals::write_file( dir / ( b.name + ".aag" ), qals::write_aiger( net ) );
      std::cout << b.name << ": " << net.num_pis() << " inputs, " << net.num_pos() << " outputs, " << net.and_nodes().size() << " nodes\n";
    }
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
