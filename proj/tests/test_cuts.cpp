#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

using namespace qals;

TEST( cuts, uncapped_enumeration_equals_brute_force )
{
  std::mt19937_64 rng( 21 );
  for ( int it = 0; it < 25; ++it )
  {
    auto const net = test::random_aig( rng, 3u + it % 4u, 12u, 2u );
    auto const cuts = enumerate_cuts( net, { 5u, 0u } );
    for ( auto n : net.and_nodes() )
    {
      std::set<std::vector<uint32_t>> got;
      for ( auto const& c : cuts[n] )
        got.insert( std::vector<uint32_t>( c.leaves().begin(), c.leaves().end() ) );
      ASSERT_EQ( got.size(), cuts[n].size() ) << "duplicate cuts at node " << n;
      ASSERT_EQ( got, test::brute_force_cuts( net, n, 5u ) ) << "node " << n;
    }
  }
}

TEST( cuts, functions_match_cone_simulation )
{
  std::mt19937_64 rng( 22 );
  for ( int it = 0; it < 20; ++it )
  {
    auto const net = test::random_aig( rng, 6u, 40u, 3u );
    auto const cuts = enumerate_cuts( net );
    for ( auto n : net.and_nodes() )
      for ( auto const& c : cuts[n] )
      {
        ASSERT_EQ( c.function(), test::cone_function( net, n, c.leaves() ) );
        ASSERT_EQ( cut_truth_table( net, c ), c.function() );
      }
  }
}

TEST( cuts, priority_limit_keeps_trivial_cut_last )
{
  std::mt19937_64 rng( 23 );
  auto const net = test::random_aig( rng, 8u, 60u, 4u );
  auto const cuts = enumerate_cuts( net, { 4u, 3u } );
  for ( auto n : net.and_nodes() )
  {
    ASSERT_LE( cuts[n].size(), 4u );
    ASSERT_TRUE( cuts[n].back().is_trivial() );
    for ( auto const& c : cuts[n] )
      ASSERT_LE( c.size(), 4u );
  }
}

TEST( cuts, small_example )
{
  aig_network net;
  auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi();
  auto const ab = net.create_and( a, b );
  auto const r = net.create_and( ab, !c );
  net.create_po( r );
  auto const cuts = enumerate_cuts( net );
  auto const& rc = cuts[r.node()];
  ASSERT_EQ( rc.size(), 3u );
  EXPECT_EQ( rc[0].size(), 2u );
  EXPECT_EQ( rc[1].size(), 3u );
  /* f(a, b, c) = a & b & !c */
  EXPECT_EQ( rc[1].function().bits(), 0x08u );
  EXPECT_TRUE( rc[2].is_trivial() );
}

TEST( cuts, truth_table_rejects_non_cuts )
{
  aig_network net;
  auto const a = net.create_pi(), b = net.create_pi();
  auto const r = net.create_and( a, b );
  std::array<uint32_t, 1> leaf{ a.node() };
  EXPECT_THROW( cut_truth_table( net, cut::make( r.node(), leaf ) ), std::invalid_argument );
  EXPECT_THROW( enumerate_cuts( net, { 6u, 8u } ), std::invalid_argument );
}
