/*!
  \file aig.hpp
  \brief Structurally hashed and-inverter graphs

  Node ids are dense and topologically ordered. Node 0 is the constant-false
  node; every AND node's fanins have smaller ids than the node itself.
*/

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qals
{

/*! \brief Edge into a node, optionally complemented. Encoded as 2 * node + complement. */
class signal
{
public:
  constexpr signal() = default;
  constexpr signal( uint32_t node, bool complemented ) : _literal( 2u * node + ( complemented ? 1u : 0u ) ) {}

  static constexpr signal from_literal( uint32_t literal )
  {
    signal s;
    s._literal = literal;
    return s;
  }

  constexpr uint32_t node() const { return _literal >> 1; }
  constexpr bool complemented() const { return _literal & 1u; }
  constexpr uint32_t literal() const { return _literal; }

  constexpr signal operator!() const { return from_literal( _literal ^ 1u ); }
  constexpr signal operator^( bool complement ) const { return from_literal( _literal ^ ( complement ? 1u : 0u ) ); }

  friend constexpr bool operator==( signal, signal ) = default;
  friend constexpr auto operator<=>( signal, signal ) = default;

private:
  uint32_t _literal{ 0u };
};

enum class node_kind : uint8_t
{
  const0,
  primary_input,
  and2
};

struct aig_node
{
  node_kind kind{ node_kind::const0 };
  signal fanin0{};
  signal fanin1{};
  uint32_t level{ 0u };
};

struct primary_output
{
  signal driver;
  std::string name;
};

class aig_network
{
public:
  aig_network()
  {
    _nodes.push_back( aig_node{} );
  }

  signal get_constant( bool value ) const { return signal( 0u, value ); }

  signal create_pi( std::string name = {} )
  {
    uint32_t const id = static_cast<uint32_t>( _nodes.size() );
    _nodes.push_back( aig_node{ node_kind::primary_input, {}, {}, 0u } );
    _pis.push_back( id );
    _pi_names.push_back( name.empty() ? "pi" + std::to_string( _pis.size() - 1u ) : std::move( name ) );
    return signal( id, false );
  }

  /*! \brief AND of two signals with constant propagation and structural hashing. */
  signal create_and( signal a, signal b )
  {
    if ( a.literal() > b.literal() )
      std::swap( a, b );
    if ( a.node() == 0u )
      return a.complemented() ? b : get_constant( false );
    if ( a == b )
      return a;
    if ( a == !b )
      return get_constant( false );

    uint64_t const key = ( static_cast<uint64_t>( a.literal() ) << 32 ) | b.literal();
    if ( auto it = _strash.find( key ); it != _strash.end() )
      return signal( it->second, false );

    uint32_t const id = static_cast<uint32_t>( _nodes.size() );
    uint32_t const level = 1u + std::max( _nodes[a.node()].level, _nodes[b.node()].level );
    _nodes.push_back( aig_node{ node_kind::and2, a, b, level } );
    _strash.emplace( key, id );
    ++_num_ands;
    return signal( id, false );
  }

  signal create_nand( signal a, signal b ) { return !create_and( a, b ); }
  signal create_or( signal a, signal b ) { return !create_and( !a, !b ); }
  signal create_nor( signal a, signal b ) { return create_and( !a, !b ); }

  signal create_xor( signal a, signal b )
  {
    return create_or( create_and( a, !b ), create_and( !a, b ) );
  }

  signal create_xnor( signal a, signal b ) { return !create_xor( a, b ); }

  signal create_mux( signal select, signal then_value, signal else_value )
  {
    return create_or( create_and( select, then_value ), create_and( !select, else_value ) );
  }

  signal create_maj( signal a, signal b, signal c )
  {
    return create_or( create_and( a, b ), create_and( c, create_or( a, b ) ) );
  }

  uint32_t create_po( signal driver, std::string name = {} )
  {
    uint32_t const index = static_cast<uint32_t>( _pos.size() );
    _pos.push_back( primary_output{ driver, name.empty() ? "po" + std::to_string( index ) : std::move( name ) } );
    return index;
  }

  uint32_t size() const { return static_cast<uint32_t>( _nodes.size() ); }
  uint32_t num_pis() const { return static_cast<uint32_t>( _pis.size() ); }
  uint32_t num_pos() const { return static_cast<uint32_t>( _pos.size() ); }
  uint32_t num_ands() const { return _num_ands; }

  aig_node const& node( uint32_t id ) const { return _nodes[id]; }
  std::vector<aig_node> const& nodes() const { return _nodes; }

  bool is_constant( uint32_t id ) const { return _nodes[id].kind == node_kind::const0; }
  bool is_pi( uint32_t id ) const { return _nodes[id].kind == node_kind::primary_input; }
  bool is_and( uint32_t id ) const { return _nodes[id].kind == node_kind::and2; }

  std::vector<uint32_t> const& pis() const { return _pis; }
  uint32_t pi_at( uint32_t index ) const { return _pis[index]; }
  std::string const& pi_name( uint32_t index ) const { return _pi_names[index]; }

  std::vector<primary_output> const& pos() const { return _pos; }
  primary_output const& po_at( uint32_t index ) const { return _pos[index]; }

  /*! \brief Position of a node among the primary inputs, if it is one. */
  std::optional<uint32_t> pi_index( uint32_t id ) const
  {
    auto it = std::lower_bound( _pis.begin(), _pis.end(), id );
    if ( it != _pis.end() && *it == id )
      return static_cast<uint32_t>( it - _pis.begin() );
    return std::nullopt;
  }

  /*! \brief AND node ids in topological order. */
  std::vector<uint32_t> and_nodes() const
  {
    std::vector<uint32_t> ids;
    ids.reserve( _num_ands );
    for ( uint32_t i = 0u; i < size(); ++i )
    {
      if ( is_and( i ) )
        ids.push_back( i );
    }
    return ids;
  }

  /*! \brief Number of references to each node from AND fanins and outputs. */
  std::vector<uint32_t> fanout_counts() const
  {
    std::vector<uint32_t> counts( size(), 0u );
    for ( auto const& n : _nodes )
    {
      if ( n.kind == node_kind::and2 )
      {
        ++counts[n.fanin0.node()];
        ++counts[n.fanin1.node()];
      }
    }
    for ( auto const& po : _pos )
      ++counts[po.driver.node()];
    return counts;
  }

  uint32_t depth() const
  {
    uint32_t d = 0u;
    for ( auto const& po : _pos )
      d = std::max( d, _nodes[po.driver.node()].level );
    return d;
  }

  std::string const& name() const { return _name; }
  void set_name( std::string name ) { _name = std::move( name ); }

private:
  std::vector<aig_node> _nodes;
  std::vector<uint32_t> _pis;
  std::vector<std::string> _pi_names;
  std::vector<primary_output> _pos;
  std::unordered_map<uint64_t, uint32_t> _strash;
  uint32_t _num_ands{ 0u };
  std::string _name;
};

/*! \brief Copy without AND nodes that no output depends on (inputs and outputs are kept). */
inline aig_network cleanup_dangling( aig_network const& net )
{
  std::vector<uint8_t> used( net.size(), 0u );
  for ( auto const& po : net.pos() )
    used[po.driver.node()] = 1u;
  for ( uint32_t n = net.size(); n-- > 0u; )
  {
    if ( used[n] && net.is_and( n ) )
    {
      used[net.node( n ).fanin0.node()] = 1u;
      used[net.node( n ).fanin1.node()] = 1u;
    }
  }
  aig_network res;
  res.set_name( net.name() );
  std::vector<signal> map( net.size(), res.get_constant( false ) );
  for ( uint32_t i = 0u; i < net.num_pis(); ++i )
    map[net.pi_at( i )] = res.create_pi( net.pi_name( i ) );
  auto const translate = [&]( signal s ) { return s.complemented() ? !map[s.node()] : map[s.node()]; };
  for ( uint32_t n = 0u; n < net.size(); ++n )
  {
    if ( used[n] && net.is_and( n ) )
      map[n] = res.create_and( translate( net.node( n ).fanin0 ), translate( net.node( n ).fanin1 ) );
  }
  for ( auto const& po : net.pos() )
    res.create_po( translate( po.driver ), po.name );
  return res;
}

} // namespace qals
