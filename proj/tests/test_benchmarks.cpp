#include <gtest/gtest.h>

#include <bit>

#include "test_support.hpp"

using namespace qals;

namespace
{

uint64_t output_word( std::vector<bool> const& outs )
{
  uint64_t v = 0u;
  for ( size_t i = 0u; i < outs.size(); ++i )
    v |= uint64_t{ outs[i] } << i;
  return v;
}

} // namespace

TEST( benchmarks, parity )
{
  auto const net = make_parity( 7u );
  for ( uint64_t m = 0u; m < 128u; ++m )
    ASSERT_EQ( test::evaluate( net, m )[0], std::popcount( m ) % 2 == 1 );
}

TEST( benchmarks, ones_counters )
{
  auto const net = make_ones_counter( 7u, 3u );
  for ( uint64_t m = 0u; m < 128u; ++m )
    ASSERT_EQ( output_word( test::evaluate( net, m ) ), static_cast<uint64_t>( std::popcount( m ) ) );
}

TEST( benchmarks, adder )
{
  auto const net = make_adder( 3u );
  ASSERT_EQ( net.num_pis(), 7u );
  for ( uint64_t m = 0u; m < 128u; ++m )
  {
    uint64_t const a = m & 7u, b = ( m >> 3 ) & 7u, c = ( m >> 6 ) & 1u;
    ASSERT_EQ( output_word( test::evaluate( net, m ) ), a + b + c );
  }
}

TEST( benchmarks, symmetric_and_majority )
{
  auto const sym = make_symmetric( 9u, 3u, 6u );
  auto const maj = make_majority( 5u );
  for ( uint64_t m = 0u; m < 512u; ++m )
  {
    int const k = std::popcount( m );
    ASSERT_EQ( test::evaluate( sym, m )[0], k >= 3 && k <= 6 );
  }
  for ( uint64_t m = 0u; m < 32u; ++m )
    ASSERT_EQ( test::evaluate( maj, m )[0], std::popcount( m ) >= 3 );
  EXPECT_THROW( make_majority( 4u ), std::invalid_argument );
}

TEST( benchmarks, mux_comparator_decoder )
{
  auto const mux = make_mux( 2u );
  for ( uint64_t m = 0u; m < 64u; ++m )
    ASSERT_EQ( test::evaluate( mux, m )[0], ( ( m >> ( ( m >> 4 ) & 3u ) ) & 1u ) != 0u );
  auto const cmp = make_comparator( 3u );
  for ( uint64_t m = 0u; m < 64u; ++m )
    ASSERT_EQ( test::evaluate( cmp, m )[0], ( m & 7u ) > ( ( m >> 3 ) & 7u ) );
  auto const dec = make_decoder( 3u );
  for ( uint64_t m = 0u; m < 8u; ++m )
    ASSERT_EQ( output_word( test::evaluate( dec, m ) ), uint64_t{ 1 } << m );
}

TEST( benchmarks, suite_round_trips_through_aiger )
{
  for ( auto const& b : benchmark_suite() )
  {
    auto const net = b.build();
    EXPECT_EQ( net.name(), b.name );
    auto const back = read_aiger( write_aiger( net ) );
    EXPECT_EQ( back.num_ands(), net.num_ands() );
    EXPECT_EQ( back.num_pos(), net.num_pos() );
  }
}
