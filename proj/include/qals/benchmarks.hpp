/*!
  \file benchmarks.hpp
  \brief Generators for small arithmetic and symmetric benchmark circuits

  The generated networks follow the functions of well-known MCNC circuits
  (parity, rd53, rd73, rd84, 9sym, z4ml, ...), built structurally.
*/

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aig.hpp"

namespace qals
{

namespace detail
{

inline std::vector<signal> create_pis( aig_network& net, std::string const& prefix, uint32_t n )
{
  std::vector<signal> s;
  for ( uint32_t i = 0u; i < n; ++i )
    s.push_back( net.create_pi( prefix + std::to_string( i ) ) );
  return s;
}

inline std::pair<signal, signal> full_adder( aig_network& net, signal a, signal b, signal c )
{
  auto const ab = net.create_xor( a, b );
  return { net.create_xor( ab, c ), net.create_maj( a, b, c ) };
}

/* ripple-carry sum of two little-endian words (the shorter one zero-extended) */
inline std::vector<signal> add_words( aig_network& net, std::vector<signal> a, std::vector<signal> b )
{
  if ( a.size() < b.size() )
    std::swap( a, b );
  std::vector<signal> sum;
  signal carry = net.get_constant( false );
  for ( size_t i = 0u; i < a.size(); ++i )
  {
    auto const bi = i < b.size() ? b[i] : net.get_constant( false );
    auto [s, c] = full_adder( net, a[i], bi, carry );
    sum.push_back( s );
    carry = c;
  }
  sum.push_back( carry );
  return sum;
}

/* number of ones among the signals, as a little-endian word of `width` bits */
inline std::vector<signal> count_ones( aig_network& net, std::vector<signal> const& xs, uint32_t width )
{
  std::vector<signal> acc{ net.get_constant( false ) };
  for ( auto x : xs )
  {
    acc = add_words( net, acc, { x } );
    if ( acc.size() > width )
      acc.resize( width );
  }
  while ( acc.size() < width )
    acc.push_back( net.get_constant( false ) );
  return acc;
}

inline signal equals_constant( aig_network& net, std::vector<signal> const& word, uint32_t value )
{
  signal r = net.get_constant( true );
  for ( size_t i = 0u; i < word.size(); ++i )
    r = net.create_and( r, ( ( value >> i ) & 1u ) ? word[i] : !word[i] );
  return r;
}

} // namespace detail

/*! \brief XOR of n inputs as a balanced tree. */
inline aig_network make_parity( uint32_t n, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "parity" + std::to_string( n ) : name );
  auto level = detail::create_pis( net, "x", n );
  while ( level.size() > 1u )
  {
    std::vector<signal> next;
    for ( size_t i = 0u; i + 1u < level.size(); i += 2u )
      next.push_back( net.create_xor( level[i], level[i + 1u] ) );
    if ( level.size() % 2u == 1u )
      next.push_back( level.back() );
    level = std::move( next );
  }
  net.create_po( level.front(), "parity" );
  return net;
}

/*! \brief n-bit ripple-carry adder with carry in; n + 1 outputs. */
inline aig_network make_adder( uint32_t n, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "adder" + std::to_string( n ) : name );
  auto const a = detail::create_pis( net, "a", n );
  auto const b = detail::create_pis( net, "b", n );
  auto carry = net.create_pi( "cin" );
  for ( uint32_t i = 0u; i < n; ++i )
  {
    auto [s, c] = detail::full_adder( net, a[i], b[i], carry );
    net.create_po( s, "s" + std::to_string( i ) );
    carry = c;
  }
  net.create_po( carry, "cout" );
  return net;
}

/*! \brief Binary count of ones among n inputs (rdNM family). */
inline aig_network make_ones_counter( uint32_t n, uint32_t width, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "rd" + std::to_string( n ) + std::to_string( width ) : name );
  auto const x = detail::create_pis( net, "x", n );
  auto const count = detail::count_ones( net, x, width );
  for ( uint32_t i = 0u; i < width; ++i )
    net.create_po( count[i], "c" + std::to_string( i ) );
  return net;
}

/*! \brief Symmetric function: 1 iff the number of ones lies in [lo, hi] (9sym uses 9 inputs, [3, 6]). */
inline aig_network make_symmetric( uint32_t n, uint32_t lo, uint32_t hi, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "sym" + std::to_string( n ) : name );
  auto const x = detail::create_pis( net, "x", n );
  uint32_t width = 1u;
  while ( ( 1u << width ) <= n )
    ++width;
  auto const count = detail::count_ones( net, x, width );
  signal r = net.get_constant( false );
  for ( uint32_t v = lo; v <= hi; ++v )
    r = net.create_or( r, detail::equals_constant( net, count, v ) );
  net.create_po( r, "f" );
  return net;
}

/*! \brief Majority of n (odd) inputs. */
inline aig_network make_majority( uint32_t n, std::string name = {} )
{
  if ( n % 2u == 0u )
    throw std::invalid_argument( "make_majority: odd input count expected" );
  aig_network net;
  net.set_name( name.empty() ? "maj" + std::to_string( n ) : name );
  auto const x = detail::create_pis( net, "x", n );
  uint32_t width = 1u;
  while ( ( 1u << width ) <= n )
    ++width;
  auto const count = detail::count_ones( net, x, width );
  signal r = net.get_constant( false );
  for ( uint32_t v = n / 2u + 1u; v <= n; ++v )
    r = net.create_or( r, detail::equals_constant( net, count, v ) );
  net.create_po( r, "maj" );
  return net;
}

/*! \brief 2^s-to-1 multiplexer with s select lines. */
inline aig_network make_mux( uint32_t s, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "mux" + std::to_string( 1u << s ) : name );
  auto level = detail::create_pis( net, "d", 1u << s );
  auto const sel = detail::create_pis( net, "s", s );
  for ( uint32_t i = 0u; i < s; ++i )
  {
    std::vector<signal> next;
    for ( size_t j = 0u; j < level.size(); j += 2u )
      next.push_back( net.create_mux( sel[i], level[j + 1u], level[j] ) );
    level = std::move( next );
  }
  net.create_po( level.front(), "y" );
  return net;
}

/*! \brief Unsigned comparator a > b on n-bit words. */
inline aig_network make_comparator( uint32_t n, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "comp" + std::to_string( n ) : name );
  auto const a = detail::create_pis( net, "a", n );
  auto const b = detail::create_pis( net, "b", n );
  signal gt = net.get_constant( false );
  for ( uint32_t i = 0u; i < n; ++i )
  {
    /* from LSB to MSB: gt = a_i > b_i or (a_i == b_i and gt) */
    auto const bit_gt = net.create_and( a[i], !b[i] );
    auto const bit_eq = net.create_xnor( a[i], b[i] );
    gt = net.create_or( bit_gt, net.create_and( bit_eq, gt ) );
  }
  net.create_po( gt, "gt" );
  return net;
}

/*! \brief s-to-2^s decoder. */
inline aig_network make_decoder( uint32_t s, std::string name = {} )
{
  aig_network net;
  net.set_name( name.empty() ? "dec" + std::to_string( s ) : name );
  auto const x = detail::create_pis( net, "x", s );
  for ( uint32_t v = 0u; v < ( 1u << s ); ++v )
    net.create_po( detail::equals_constant( net, x, v ), "y" + std::to_string( v ) );
  return net;
}

struct benchmark_entry
{
  std::string name;
  std::function<aig_network()> generate;

  /*! \brief The generated network without dangling nodes. */
  aig_network build() const { return cleanup_dangling( generate() ); }
};

/*! \brief The small benchmark suite shipped with the tools. */
inline std::vector<benchmark_entry> benchmark_suite()
{
  return {
      { "parity", [] { return make_parity( 16u, "parity" ); } },
      { "rd53", [] { return make_ones_counter( 5u, 3u, "rd53" ); } },
      { "rd73", [] { return make_ones_counter( 7u, 3u, "rd73" ); } },
      { "rd84", [] { return make_ones_counter( 8u, 4u, "rd84" ); } },
      { "9sym", [] { return make_symmetric( 9u, 3u, 6u, "9sym" ); } },
      { "z4ml", [] { return make_adder( 3u, "z4ml" ); } },
      { "adder8", [] { return make_adder( 8u, "adder8" ); } },
      { "maj5", [] { return make_majority( 5u, "maj5" ); } },
      { "mux16", [] { return make_mux( 4u, "mux16" ); } },
      { "comp4", [] { return make_comparator( 4u, "comp4" ); } },
      { "decod", [] { return make_decoder( 4u, "decod" ); } },
  };
}

} // namespace qals
