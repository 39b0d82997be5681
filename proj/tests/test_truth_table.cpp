#include <gtest/gtest.h>

#include <random>
#include <set>

#include <qals/truth_table.hpp>

using namespace qals;

TEST( truth_table, projections_and_operators )
{
  auto const a = truth_table::nth_var( 2u, 0u ), b = truth_table::nth_var( 2u, 1u );
  EXPECT_EQ( a.bits(), 0xau );
  EXPECT_EQ( b.bits(), 0xcu );
  EXPECT_EQ( ( a & b ).bits(), 0x8u );
  EXPECT_EQ( ( a | b ).bits(), 0xeu );
  EXPECT_EQ( ( a ^ b ).bits(), 0x6u );
  EXPECT_EQ( ( ~a ).bits(), 0x5u );
  EXPECT_TRUE( truth_table::const1( 3u ).is_const1() );
  EXPECT_TRUE( truth_table::const0( 3u ).is_const0() );
  EXPECT_EQ( truth_table::const1( 5u ).bits(), 0xffffffffu );
}

TEST( truth_table, support_and_resizing )
{
  auto const f = truth_table::nth_var( 4u, 1u ) & truth_table::nth_var( 4u, 3u );
  EXPECT_EQ( f.support(), 0b1010u );
  EXPECT_TRUE( f.has_var( 3u ) );
  EXPECT_FALSE( f.has_var( 0u ) );
  auto const g = truth_table::nth_var( 2u, 0u ) & truth_table::nth_var( 2u, 1u );
  auto const e = g.extend_to( 4u );
  EXPECT_EQ( e.num_vars(), 4u );
  EXPECT_EQ( e, truth_table::nth_var( 4u, 0u ) & truth_table::nth_var( 4u, 1u ) );
  EXPECT_EQ( e.shrink_to( 2u ), g );
}

TEST( truth_table, hamming_distance_counts_differing_minterms )
{
  auto const f = truth_table( 4u, 0xe000u ), g = truth_table( 4u, 0xf0f0u );
  /* independent count */
  uint32_t d = 0u;
  for ( uint32_t m = 0u; m < 16u; ++m )
    d += f.get_bit( m ) != g.get_bit( m );
  EXPECT_EQ( hamming_distance( f, g ), d );
  EXPECT_THROW( hamming_distance( f, truth_table( 3u, 0u ) ), std::invalid_argument );
}

TEST( truth_table, compose_matches_pointwise_evaluation )
{
  std::mt19937 rng( 3 );
  for ( int it = 0; it < 50; ++it )
  {
    truth_table const f( 3u, rng() );
    std::vector<truth_table> ins{ truth_table( 4u, rng() ), truth_table( 4u, rng() ), truth_table( 4u, rng() ) };
    auto const r = compose( f, ins, 4u );
    for ( uint32_t m = 0u; m < 16u; ++m )
    {
      uint32_t idx = ins[0].get_bit( m ) | ( ins[1].get_bit( m ) << 1 ) | ( ins[2].get_bit( m ) << 2 );
      EXPECT_EQ( r.get_bit( m ), f.get_bit( idx ) );
    }
  }
}

TEST( truth_table, permute_renames_variables )
{
  /* f = x0 & !x2 over 3 variables; swapping x0 and x2 gives x2 & !x0 */
  auto const x0 = truth_table::nth_var( 3u, 0u ), x2 = truth_table::nth_var( 3u, 2u );
  EXPECT_EQ( permute( x0 & ~x2, { 2, 1, 0, 3, 4 } ), x2 & ~x0 );
  EXPECT_EQ( permute( x0, { 1, 2, 0, 3, 4 } ), truth_table::nth_var( 3u, 1u ) );
}

TEST( truth_table, permutation_tables )
{
  EXPECT_EQ( permutations( 0u ).size(), 1u );
  EXPECT_EQ( permutations( 3u ).size(), 6u );
  EXPECT_EQ( permutations( 5u ).size(), 120u );
  std::set<std::array<uint8_t, max_cut_size>> distinct( permutations( 4u ).begin(), permutations( 4u ).end() );
  EXPECT_EQ( distinct.size(), 24u );
}

TEST( truth_table, p_canonization_is_permutation_invariant )
{
  std::mt19937 rng( 11 );
  for ( int it = 0; it < 100; ++it )
  {
    truth_table const f( 4u, rng() );
    auto const cf = p_canonize( f );
    EXPECT_EQ( permute( f, cf.perm ), cf.canonical );
    auto const& perms = permutations( 4u );
    auto const g = permute( f, perms[rng() % perms.size()] );
    EXPECT_EQ( p_canonize( g ).canonical, cf.canonical );
    /* minimality against every permutation */
    for ( auto const& p : perms )
      EXPECT_LE( cf.canonical.bits(), permute( f, p ).bits() );
  }
}

TEST( truth_table, hex_formatting )
{
  EXPECT_EQ( to_hex( truth_table( 2u, 0x8u ) ), "8" );
  EXPECT_EQ( to_hex( truth_table( 4u, 0xe000u ) ), "e000" );
  EXPECT_EQ( to_hex( truth_table( 5u, 0x0000ffffu ) ), "0000ffff" );
}
