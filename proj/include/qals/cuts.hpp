/*!
  \file cuts.hpp
  \brief Priority k-feasible cut enumeration with cut truth tables

  Leaves are kept in ascending node-id order and cut functions are expressed
  over that order (leaf i is variable i).
*/

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aig.hpp"
#include "truth_table.hpp"

namespace qals
{

class cut
{
public:
  cut() = default;

  uint32_t root() const { return _root; }
  uint32_t size() const { return _size; }
  std::span<uint32_t const> leaves() const { return { _leaves.data(), _size }; }
  uint32_t leaf( uint32_t i ) const { return _leaves[i]; }
  truth_table const& function() const { return _function; }
  bool is_trivial() const { return _size == 1u && _leaves[0] == _root; }

  /*! \brief Cut with the given leaves; leaves are sorted and deduplicated. */
  static cut make( uint32_t root, std::span<uint32_t const> leaves, truth_table function = {} )
  {
    if ( leaves.size() > max_cut_size )
      throw std::invalid_argument( "cut has more than 5 leaves" );
    cut c;
    c._root = root;
    std::copy( leaves.begin(), leaves.end(), c._leaves.begin() );
    std::sort( c._leaves.begin(), c._leaves.begin() + leaves.size() );
    c._size = static_cast<uint32_t>( std::unique( c._leaves.begin(), c._leaves.begin() + leaves.size() ) - c._leaves.begin() );
    c._function = function;
    return c;
  }

  static cut trivial( uint32_t node )
  {
    std::array<uint32_t, 1> leaf{ node };
    return make( node, leaf, truth_table::nth_var( 1u, 0u ) );
  }

  void set_function( truth_table const& tt ) { _function = tt; }

  /*! \brief True if every leaf of this cut is a leaf of `other`. */
  bool dominates( cut const& other ) const
  {
    if ( _size > other._size )
      return false;
    return std::includes( other._leaves.begin(), other._leaves.begin() + other._size, _leaves.begin(), _leaves.begin() + _size );
  }

  friend bool operator==( cut const& a, cut const& b )
  {
    return a._root == b._root && std::equal( a.leaves().begin(), a.leaves().end(), b.leaves().begin(), b.leaves().end() );
  }

private:
  uint32_t _root{ 0u };
  std::array<uint32_t, max_cut_size> _leaves{};
  uint32_t _size{ 0u };
  truth_table _function;
};

struct cut_enumeration_params
{
  /*! maximum number of leaves (2..5) */
  uint32_t cut_size{ 5u };
  /*! non-trivial cuts kept per node; 0 keeps all */
  uint32_t cut_limit{ 8u };
};

/*! \brief Cuts per node id; the trivial cut is always the last entry. */
using cut_sets = std::vector<std::vector<cut>>;

/*! \brief Function of a cut by simulating the cone between its leaves and its root. */
inline truth_table cut_truth_table( aig_network const& net, cut const& c, uint32_t max_cone = 256u )
{
  uint32_t const k = c.size();
  std::vector<uint32_t> cone;
  std::vector<uint8_t> visited( net.size(), 0u );
  std::vector<truth_table> value( net.size() );
  for ( uint32_t i = 0u; i < k; ++i )
  {
    visited[c.leaf( i )] = 1u;
    value[c.leaf( i )] = truth_table::nth_var( k, i );
  }
  /* collect the cone in topological order by iterative DFS */
  std::vector<std::pair<uint32_t, bool>> stack{ { c.root(), false } };
  while ( !stack.empty() )
  {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if ( expanded )
    {
      cone.push_back( n );
      continue;
    }
    if ( visited[n] )
      continue;
    visited[n] = 1u;
    if ( net.is_constant( n ) )
    {
      value[n] = truth_table::const0( k );
      continue;
    }
    if ( !net.is_and( n ) )
      throw std::invalid_argument( "cut_truth_table: leaves do not separate the root from input " + std::to_string( n ) );
    if ( cone.size() + stack.size() > max_cone )
      throw std::invalid_argument( "cut_truth_table: cone exceeds bound" );
    stack.push_back( { n, true } );
    stack.push_back( { net.node( n ).fanin0.node(), false } );
    stack.push_back( { net.node( n ).fanin1.node(), false } );
  }
  for ( auto n : cone )
  {
    auto const& nd = net.node( n );
    auto a = value[nd.fanin0.node()];
    auto b = value[nd.fanin1.node()];
    if ( nd.fanin0.complemented() )
      a = ~a;
    if ( nd.fanin1.complemented() )
      b = ~b;
    value[n] = a & b;
  }
  return value[c.root()];
}

namespace detail
{

/* re-express `tt` over `from` leaves as a function over the superset `to` */
inline truth_table expand_function( truth_table const& tt, std::span<uint32_t const> from, std::span<uint32_t const> to )
{
  std::array<uint32_t, max_cut_size> pos{};
  for ( uint32_t i = 0u; i < from.size(); ++i )
    pos[i] = static_cast<uint32_t>( std::lower_bound( to.begin(), to.end(), from[i] ) - to.begin() );
  uint32_t const k = static_cast<uint32_t>( to.size() );
  uint32_t bits = 0u;
  for ( uint32_t m = 0u; m < ( 1u << k ); ++m )
  {
    uint32_t sub = 0u;
    for ( uint32_t i = 0u; i < from.size(); ++i )
      sub |= ( ( m >> pos[i] ) & 1u ) << i;
    bits |= static_cast<uint32_t>( tt.get_bit( sub ) ) << m;
  }
  return truth_table( k, bits );
}

} // namespace detail

/*! \brief Enumerates priority cuts for every node. */
inline cut_sets enumerate_cuts( aig_network const& net, cut_enumeration_params const& ps = {} )
{
  if ( ps.cut_size < 2u || ps.cut_size > max_cut_size )
    throw std::invalid_argument( "enumerate_cuts: cut size must be between 2 and 5" );
  cut_sets cuts( net.size() );
  for ( uint32_t n = 0u; n < net.size(); ++n )
  {
    if ( !net.is_and( n ) )
    {
      cuts[n].push_back( cut::trivial( n ) );
      continue;
    }
    auto const& nd = net.node( n );
    auto const& ca = cuts[nd.fanin0.node()];
    auto const& cb = cuts[nd.fanin1.node()];
    std::vector<cut> merged;
    for ( auto const& a : ca )
    {
      for ( auto const& b : cb )
      {
        std::array<uint32_t, 2 * max_cut_size> u{};
        auto end = std::set_union( a.leaves().begin(), a.leaves().end(), b.leaves().begin(), b.leaves().end(), u.begin() );
        auto const size = static_cast<uint32_t>( end - u.begin() );
        if ( size > ps.cut_size )
          continue;
        auto c = cut::make( n, std::span<uint32_t const>( u.data(), size ) );
        if ( std::find( merged.begin(), merged.end(), c ) != merged.end() )
          continue;
        auto fa = detail::expand_function( a.function(), a.leaves(), c.leaves() );
        auto fb = detail::expand_function( b.function(), b.leaves(), c.leaves() );
        if ( nd.fanin0.complemented() )
          fa = ~fa;
        if ( nd.fanin1.complemented() )
          fb = ~fb;
        c.set_function( fa & fb );
        merged.push_back( c );
      }
    }
    /* remove dominated cuts */
    std::vector<cut> kept;
    for ( size_t i = 0u; i < merged.size(); ++i )
    {
      bool dominated = false;
      for ( size_t j = 0u; j < merged.size() && !dominated; ++j )
        dominated = j != i && merged[j].size() < merged[i].size() && merged[j].dominates( merged[i] );
      if ( !dominated )
        kept.push_back( merged[i] );
    }
    auto max_level = [&]( cut const& c ) {
      uint32_t l = 0u;
      for ( auto leaf : c.leaves() )
        l = std::max( l, net.node( leaf ).level );
      return l;
    };
    std::stable_sort( kept.begin(), kept.end(), [&]( cut const& a, cut const& b ) {
      if ( a.size() != b.size() )
        return a.size() < b.size();
      auto const la = max_level( a ), lb = max_level( b );
      if ( la != lb )
        return la < lb;
      return std::lexicographical_compare( a.leaves().begin(), a.leaves().end(), b.leaves().begin(), b.leaves().end() );
    } );
    if ( ps.cut_limit != 0u && kept.size() > ps.cut_limit )
      kept.resize( ps.cut_limit );
    kept.push_back( cut::trivial( n ) );
    cuts[n] = std::move( kept );
  }
  return cuts;
}

/*! \brief Text dump, one line per cut: `node k leaves... tt_hex`. */
inline std::string dump_cuts( cut_sets const& cuts )
{
  std::ostringstream os;
  for ( uint32_t n = 0u; n < cuts.size(); ++n )
  {
    for ( auto const& c : cuts[n] )
    {
      os << n << ' ' << c.size();
      for ( auto l : c.leaves() )
        os << ' ' << l;
      os << ' ' << to_hex( c.function() ) << '\n';
    }
  }
  return os.str();
}

} // namespace qals
