/*!
  \file simulation.hpp
  \brief Bit-parallel simulation of AIGs
*/

#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "aig.hpp"

namespace qals
{

/*! \brief Packed bit-string, one bit per simulated pattern. */
class sim_vector
{
public:
  sim_vector() = default;
  explicit sim_vector( uint64_t num_bits, bool value = false )
      : _words( ( num_bits + 63u ) / 64u, value ? ~uint64_t{ 0 } : uint64_t{ 0 } ), _num_bits( num_bits )
  {
    clear_tail();
  }

  uint64_t num_bits() const { return _num_bits; }
  std::vector<uint64_t> const& words() const { return _words; }
  std::vector<uint64_t>& words() { return _words; }

  bool get( uint64_t i ) const { return ( _words[i >> 6] >> ( i & 63u ) ) & 1u; }
  void set( uint64_t i, bool value )
  {
    if ( value )
      _words[i >> 6] |= uint64_t{ 1 } << ( i & 63u );
    else
      _words[i >> 6] &= ~( uint64_t{ 1 } << ( i & 63u ) );
  }

  uint64_t count_ones() const
  {
    uint64_t c = 0u;
    for ( auto w : _words )
      c += static_cast<uint64_t>( std::popcount( w ) );
    return c;
  }

  void clear_tail()
  {
    if ( _num_bits % 64u != 0u )
      _words.back() &= ( uint64_t{ 1 } << ( _num_bits % 64u ) ) - 1u;
  }

  /*! \brief Appends the bits of `other` after the bits of this vector. */
  void append( sim_vector const& other )
  {
    for ( uint64_t i = 0u; i < other.num_bits(); ++i )
    {
      if ( _num_bits % 64u == 0u )
        _words.push_back( 0u );
      ++_num_bits;
      set( _num_bits - 1u, other.get( i ) );
    }
  }

  friend bool operator==( sim_vector const&, sim_vector const& ) = default;

private:
  std::vector<uint64_t> _words;
  uint64_t _num_bits{ 0u };
};

inline sim_vector operator^( sim_vector const& a, sim_vector const& b )
{
  assert( a.num_bits() == b.num_bits() );
  sim_vector r = a;
  for ( size_t i = 0u; i < r.words().size(); ++i )
    r.words()[i] ^= b.words()[i];
  return r;
}

/*! \brief Simulates every node. `pi_values[i]` holds the values of the i-th primary input. */
inline std::vector<sim_vector> simulate( aig_network const& net, std::span<sim_vector const> pi_values )
{
  if ( pi_values.size() != net.num_pis() )
    throw std::invalid_argument( "simulate: expected one value vector per primary input" );
  uint64_t const num_bits = pi_values.empty() ? 0u : pi_values.front().num_bits();
  std::vector<sim_vector> values( net.size() );
  values[0] = sim_vector( num_bits, false );
  for ( uint32_t i = 0u; i < net.num_pis(); ++i )
  {
    if ( pi_values[i].num_bits() != num_bits )
      throw std::invalid_argument( "simulate: pattern vectors differ in length" );
    values[net.pi_at( i )] = pi_values[i];
  }

  size_t const num_words = ( num_bits + 63u ) / 64u;
  for ( uint32_t id = 0u; id < net.size(); ++id )
  {
    auto const& n = net.node( id );
    if ( n.kind != node_kind::and2 )
      continue;
    auto const& a = values[n.fanin0.node()].words();
    auto const& b = values[n.fanin1.node()].words();
    uint64_t const ma = n.fanin0.complemented() ? ~uint64_t{ 0 } : 0u;
    uint64_t const mb = n.fanin1.complemented() ? ~uint64_t{ 0 } : 0u;
    sim_vector out( num_bits );
    auto& w = out.words();
    for ( size_t j = 0u; j < num_words; ++j )
      w[j] = ( a[j] ^ ma ) & ( b[j] ^ mb );
    out.clear_tail();
    values[id] = std::move( out );
  }
  return values;
}

/*! \brief Simulates a list of patterns; `patterns[p][i]` is the value of PI i in pattern p. */
inline std::vector<sim_vector> simulate( aig_network const& net, std::vector<std::vector<bool>> const& patterns )
{
  std::vector<sim_vector> pis( net.num_pis(), sim_vector( patterns.size() ) );
  for ( size_t p = 0u; p < patterns.size(); ++p )
  {
    if ( patterns[p].size() != net.num_pis() )
      throw std::invalid_argument( "simulate: pattern does not assign every primary input" );
    for ( uint32_t i = 0u; i < net.num_pis(); ++i )
      pis[i].set( p, patterns[p][i] );
  }
  return simulate( net, std::span<sim_vector const>( pis ) );
}

/*! \brief Value of a signal given node simulation values. */
inline sim_vector signal_value( std::vector<sim_vector> const& values, signal s )
{
  sim_vector v = values[s.node()];
  if ( s.complemented() )
  {
    for ( auto& w : v.words() )
      w = ~w;
    v.clear_tail();
  }
  return v;
}

inline std::vector<sim_vector> simulate_outputs( aig_network const& net, std::span<sim_vector const> pi_values )
{
  auto const values = simulate( net, pi_values );
  std::vector<sim_vector> outs;
  outs.reserve( net.num_pos() );
  for ( auto const& po : net.pos() )
    outs.push_back( signal_value( values, po.driver ) );
  return outs;
}

/*! \brief All 2^n assignments; pattern p assigns bit i of p to input i. */
inline std::vector<sim_vector> exhaustive_patterns( uint32_t num_inputs )
{
  if ( num_inputs > 30u )
    throw std::invalid_argument( "exhaustive_patterns: too many inputs" );
  uint64_t const n = uint64_t{ 1 } << num_inputs;
  std::vector<sim_vector> pis( num_inputs, sim_vector( n ) );
  for ( uint32_t i = 0u; i < num_inputs; ++i )
  {
    auto& words = pis[i].words();
    if ( i < 6u )
    {
      constexpr uint64_t projections[] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                           0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
      for ( auto& w : words )
        w = projections[i];
    }
    else
    {
      uint64_t const period = uint64_t{ 1 } << ( i - 6u );
      for ( size_t j = 0u; j < words.size(); ++j )
        words[j] = ( ( j / period ) & 1u ) ? ~uint64_t{ 0 } : 0u;
    }
    pis[i].clear_tail();
  }
  return pis;
}

/*! \brief Uniformly random patterns from a seeded generator. */
inline std::vector<sim_vector> random_patterns( uint32_t num_inputs, uint64_t num_patterns, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::vector<sim_vector> pis( num_inputs, sim_vector( num_patterns ) );
  for ( auto& v : pis )
  {
    for ( auto& w : v.words() )
      w = rng();
    v.clear_tail();
  }
  return pis;
}

} // namespace qals
