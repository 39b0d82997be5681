#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace qals;

namespace
{

/* function realized by a match: result(x) = sg(y) with y_j = x_{placement[j]} */
truth_table match_function( supergate_match const& m, uint32_t num_vars )
{
  truth_table r( num_vars, 0u );
  for ( uint32_t x = 0u; x < ( 1u << num_vars ); ++x )
  {
    uint32_t y = 0u;
    for ( uint32_t j = 0u; j < num_vars; ++j )
      y |= ( ( x >> m.placement[j] ) & 1u ) << j;
    r.set_bit( x, m.gate->function.get_bit( y ) );
  }
  return r;
}

} // namespace

TEST( supergate, single_gates_are_matched_under_every_permutation )
{
  auto const& lib = test::small_library();
  auto const a = truth_table::nth_var( 5u, 0u ), b = truth_table::nth_var( 5u, 3u );
  for ( auto const& f : { a & b, a | b, ~( a & b ), a & ~b } )
  {
    auto const matches = lib.lookup( f );
    ASSERT_FALSE( matches.empty() );
    for ( auto const& m : matches )
      EXPECT_EQ( match_function( m, 5u ), f );
  }
}

TEST( supergate, structures_evaluate_to_their_function )
{
  auto const& lib = test::mcnc_library().supergates;
  for ( auto const& sg : lib.supergates() )
  {
    ASSERT_EQ( evaluate_structure( sg.elements, sg.root, lib.gates(), lib.num_vars() ), sg.function );
  }
}

TEST( supergate, costs_add_up_over_elements )
{
  auto const& lib = test::mcnc_library().supergates;
  for ( auto const& sg : lib.supergates() )
  {
    double area = 0.0;
    for ( auto const& e : sg.elements )
      area += lib.gates()[e.gate].area;
    ASSERT_NEAR( sg.area, area, 1e-9 );
    if ( !sg.is_wire() && !sg.is_constant() )
    {
      double worst = 0.0;
      for ( uint32_t j = 0u; j < lib.num_vars(); ++j )
        worst = std::max( worst, sg.pin_delay[j] );
      ASSERT_NEAR( sg.max_delay, worst, 1e-9 );
    }
  }
}

TEST( supergate, matches_realize_requested_functions )
{
  auto const& lib = test::mcnc_library().supergates;
  std::mt19937 rng( 2 );
  uint32_t found = 0u;
  for ( int it = 0; it < 300; ++it )
  {
    uint32_t const k = 1u + rng() % 4u;
    truth_table const f( k, rng() );
    for ( auto const& m : lib.lookup( f ) )
    {
      ++found;
      ASSERT_EQ( match_function( m, 5u ), f.extend_to( 5u ) );
    }
  }
  EXPECT_GT( found, 0u );
}

TEST( supergate, mcnc_library_covers_all_two_input_functions )
{
  auto const& lib = test::mcnc_library().supergates;
  for ( uint32_t bits = 0u; bits < 16u; ++bits )
    EXPECT_FALSE( lib.lookup( truth_table( 2u, bits ) ).empty() ) << bits;
}

TEST( supergate, entries_are_pareto_optimal_and_bounded )
{
  auto const& lib = test::mcnc_library().supergates;
  for ( auto const& [key, list] : lib.index() )
  {
    ASSERT_LE( list.size(), lib.bounds().max_per_key );
    for ( size_t i = 0u; i < list.size(); ++i )
      for ( size_t j = 0u; j < list.size(); ++j )
      {
        if ( i == j )
          continue;
        auto const& a = lib.supergates()[list[i].supergate];
        auto const& b = lib.supergates()[list[j].supergate];
        ASSERT_FALSE( a.max_delay <= b.max_delay && a.area <= b.area ) << "dominated entry for key " << key;
      }
  }
}

TEST( supergate, cache_round_trip_is_identical )
{
  auto const& lib = test::mcnc_library();
  auto const text = write_supergate_cache( lib.supergates, lib.hash );
  auto const back = read_supergate_cache( text, lib.supergates.gates(), lib.hash );
  EXPECT_EQ( write_supergate_cache( back, lib.hash ), text );
  EXPECT_EQ( back.num_keys(), lib.supergates.num_keys() );
  EXPECT_THROW( read_supergate_cache( text, lib.supergates.gates(), lib.hash + 1u ), library_error );
  EXPECT_THROW( read_supergate_cache( "garbage", lib.supergates.gates(), lib.hash ), parse_error );
}

TEST( supergate, deterministic_generation )
{
  auto const gates = parse_genlib( test::small_genlib );
  auto const a = build_supergates( gates ), b = build_supergates( gates );
  EXPECT_EQ( write_supergate_cache( a, 1u ), write_supergate_cache( b, 1u ) );
}

TEST( supergate, special_gates )
{
  auto const& lib = test::small_library();
  ASSERT_TRUE( lib.inverter().has_value() );
  EXPECT_EQ( lib.gates()[*lib.inverter()].name, "inv" );
  ASSERT_TRUE( lib.constant_gate( false ).has_value() );
  EXPECT_EQ( lib.gates()[*lib.constant_gate( true )].name, "one" );
  EXPECT_THROW( build_supergates( {} ), library_error );
}
