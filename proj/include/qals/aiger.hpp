/*!
  \file aiger.hpp
  \brief ASCII AIGER ("aag") reader and writer

  Latches are cut: each latch output becomes a primary input and each latch
  next-state function becomes a primary output, appended after the regular
  outputs. Bad-state and invariant-constraint properties are read as extra
  outputs; justice and fairness sections are rejected.
*/

#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aig.hpp"
#include "errors.hpp"

namespace qals
{

namespace detail
{

inline std::vector<std::string_view> split_lines( std::string_view text )
{
  std::vector<std::string_view> lines;
  size_t start = 0u;
  while ( start <= text.size() )
  {
    size_t end = text.find( '\n', start );
    if ( end == std::string_view::npos )
      end = text.size();
    auto line = text.substr( start, end - start );
    if ( !line.empty() && line.back() == '\r' )
      line.remove_suffix( 1 );
    lines.push_back( line );
    start = end + 1u;
  }
  while ( !lines.empty() && lines.back().empty() )
    lines.pop_back();
  return lines;
}

inline std::vector<uint64_t> parse_unsigned_fields( std::string_view line, uint32_t line_no )
{
  std::vector<uint64_t> values;
  size_t i = 0u;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' ) )
      ++i;
    if ( i == line.size() )
      break;
    if ( line[i] < '0' || line[i] > '9' )
      throw parse_error( line_no, "expected unsigned integer in '" + std::string( line ) + "'" );
    uint64_t v = 0u;
    while ( i < line.size() && line[i] >= '0' && line[i] <= '9' )
    {
      v = v * 10u + static_cast<uint64_t>( line[i] - '0' );
      if ( v > 0xffffffffull )
        throw parse_error( line_no, "integer out of range" );
      ++i;
    }
    if ( i < line.size() && line[i] != ' ' && line[i] != '\t' )
      throw parse_error( line_no, "unexpected character in '" + std::string( line ) + "'" );
    values.push_back( v );
  }
  return values;
}

} // namespace detail

inline aig_network read_aiger( std::string_view text )
{
  auto const lines = detail::split_lines( text );
  if ( lines.empty() )
    throw parse_error( 1u, "empty document" );

  auto const& header = lines[0];
  if ( header.substr( 0, 4 ) != "aag " )
    throw parse_error( 1u, "header must start with 'aag' (binary AIGER is not supported)" );
  auto const h = detail::parse_unsigned_fields( header.substr( 4 ), 1u );
  if ( h.size() < 5u || h.size() > 9u )
    throw parse_error( 1u, "malformed header: expected 'aag M I L O A [B C J F]'" );
  uint64_t const max_var = h[0], num_inputs = h[1], num_latches = h[2], num_outputs = h[3], num_ands = h[4];
  uint64_t const num_bad = h.size() > 5u ? h[5] : 0u;
  uint64_t const num_constraints = h.size() > 6u ? h[6] : 0u;
  if ( ( h.size() > 7u && h[7] != 0u ) || ( h.size() > 8u && h[8] != 0u ) )
    throw parse_error( 1u, "justice and fairness properties are not supported" );
  if ( num_inputs + num_latches + num_ands > max_var )
    throw parse_error( 1u, "malformed header: M is smaller than I + L + A" );

  uint64_t const body = num_inputs + num_latches + num_outputs + num_bad + num_constraints + num_ands;
  if ( lines.size() < body + 1u )
    throw parse_error( static_cast<uint32_t>( lines.size() ), "unexpected end of document" );

  enum class var_kind : uint8_t { undefined, input, latch, gate };
  struct var_info
  {
    var_kind kind{ var_kind::undefined };
    uint32_t line{ 0u };
    uint32_t index{ 0u };
  };
  std::vector<var_info> vars( max_var + 1u );
  std::vector<std::array<uint32_t, 2>> gate_fanins;

  auto check_literal = [&]( uint64_t lit, uint32_t line_no ) {
    if ( ( lit >> 1 ) > max_var )
      throw parse_error( line_no, "literal " + std::to_string( lit ) + " exceeds maximum variable index" );
    return static_cast<uint32_t>( lit );
  };
  auto define = [&]( uint64_t lit, var_kind kind, uint32_t index, uint32_t line_no ) {
    check_literal( lit, line_no );
    if ( lit & 1u || lit < 2u )
      throw parse_error( line_no, "defined literal must be even and non-constant" );
    auto& v = vars[lit >> 1];
    if ( v.kind != var_kind::undefined )
      throw parse_error( line_no, "variable " + std::to_string( lit >> 1 ) + " defined twice" );
    v = var_info{ kind, line_no, index };
  };

  uint32_t line_no = 1u;
  std::vector<uint32_t> input_lits, latch_lits, latch_next, output_lits;
  std::vector<uint32_t> output_lines, latch_lines;
  for ( uint64_t i = 0u; i < num_inputs; ++i )
  {
    ++line_no;
    auto const f = detail::parse_unsigned_fields( lines[line_no - 1u], line_no );
    if ( f.size() != 1u )
      throw parse_error( line_no, "input line must contain one literal" );
    define( f[0], var_kind::input, static_cast<uint32_t>( i ), line_no );
    input_lits.push_back( static_cast<uint32_t>( f[0] ) );
  }
  for ( uint64_t i = 0u; i < num_latches; ++i )
  {
    ++line_no;
    auto const f = detail::parse_unsigned_fields( lines[line_no - 1u], line_no );
    if ( f.size() != 2u && f.size() != 3u )
      throw parse_error( line_no, "latch line must contain 'lit next [init]'" );
    define( f[0], var_kind::latch, static_cast<uint32_t>( i ), line_no );
    latch_lits.push_back( static_cast<uint32_t>( f[0] ) );
    latch_next.push_back( check_literal( f[1], line_no ) );
    latch_lines.push_back( line_no );
  }
  for ( uint64_t i = 0u; i < num_outputs + num_bad + num_constraints; ++i )
  {
    ++line_no;
    auto const f = detail::parse_unsigned_fields( lines[line_no - 1u], line_no );
    if ( f.size() != 1u )
      throw parse_error( line_no, "output line must contain one literal" );
    output_lits.push_back( check_literal( f[0], line_no ) );
    output_lines.push_back( line_no );
  }
  for ( uint64_t i = 0u; i < num_ands; ++i )
  {
    ++line_no;
    auto const f = detail::parse_unsigned_fields( lines[line_no - 1u], line_no );
    if ( f.size() != 3u )
      throw parse_error( line_no, "AND line must contain 'lhs rhs0 rhs1'" );
    define( f[0], var_kind::gate, static_cast<uint32_t>( i ), line_no );
    gate_fanins.push_back( { check_literal( f[1], line_no ), check_literal( f[2], line_no ) } );
  }

  std::vector<std::string> input_names( num_inputs ), latch_names( num_latches ), output_names( output_lits.size() );
  std::string model_name;
  for ( size_t l = line_no; l < lines.size(); ++l )
  {
    auto const& line = lines[l];
    uint32_t const this_line = static_cast<uint32_t>( l + 1u );
    if ( line.empty() )
      continue;
    if ( line[0] == 'c' )
    {
      if ( l + 1u < lines.size() && line == "c" )
        model_name = std::string( lines[l + 1u] );
      break;
    }
    auto const space = line.find( ' ' );
    if ( space == std::string_view::npos || space < 2u || ( line[0] != 'i' && line[0] != 'l' && line[0] != 'o' && line[0] != 'b' && line[0] != 'c' ) )
      throw parse_error( this_line, "malformed symbol table entry" );
    auto const idx = detail::parse_unsigned_fields( line.substr( 1, space - 1u ), this_line );
    if ( idx.size() != 1u )
      throw parse_error( this_line, "malformed symbol index" );
    std::string name( line.substr( space + 1u ) );
    auto assign = [&]( std::vector<std::string>& names, uint64_t index ) {
      if ( index >= names.size() )
        throw parse_error( this_line, "symbol index out of range" );
      names[index] = name;
    };
    switch ( line[0] )
    {
    case 'i': assign( input_names, idx[0] ); break;
    case 'l': assign( latch_names, idx[0] ); break;
    case 'o': assign( output_names, idx[0] ); break;
    case 'b': assign( output_names, num_outputs + idx[0] ); break;
    default: break;
    }
  }

  aig_network net;
  std::vector<signal> var_signal( max_var + 1u );
  std::vector<uint8_t> state( max_var + 1u, 0u ); /* 0 = unresolved, 1 = on stack, 2 = done */
  state[0] = 2u;
  for ( uint64_t i = 0u; i < num_inputs; ++i )
  {
    var_signal[input_lits[i] >> 1] = net.create_pi( input_names[i] );
    state[input_lits[i] >> 1] = 2u;
  }
  for ( uint64_t i = 0u; i < num_latches; ++i )
  {
    var_signal[latch_lits[i] >> 1] = net.create_pi( latch_names[i].empty() ? "latch" + std::to_string( i ) : latch_names[i] );
    state[latch_lits[i] >> 1] = 2u;
  }

  auto resolve = [&]( uint32_t root_lit, uint32_t ref_line ) -> signal {
    std::vector<uint32_t> stack{ root_lit >> 1 };
    while ( !stack.empty() )
    {
      uint32_t const v = stack.back();
      if ( state[v] == 2u )
      {
        stack.pop_back();
        continue;
      }
      auto const& info = vars[v];
      if ( info.kind != var_kind::gate )
        throw parse_error( ref_line, "dangling literal: variable " + std::to_string( v ) + " is never defined" );
      auto const& fi = gate_fanins[info.index];
      if ( state[v] == 0u )
      {
        state[v] = 1u;
        for ( auto lit : fi )
        {
          uint32_t const u = lit >> 1;
          if ( state[u] == 1u )
            throw parse_error( info.line, "combinational cycle through variable " + std::to_string( u ) );
          if ( state[u] == 0u )
          {
            if ( vars[u].kind != var_kind::gate )
              throw parse_error( info.line, "dangling literal " + std::to_string( lit ) );
            stack.push_back( u );
          }
        }
        continue;
      }
      auto const a = var_signal[fi[0] >> 1] ^ static_cast<bool>( fi[0] & 1u );
      auto const b = var_signal[fi[1] >> 1] ^ static_cast<bool>( fi[1] & 1u );
      var_signal[v] = net.create_and( a, b );
      state[v] = 2u;
      stack.pop_back();
    }
    return var_signal[root_lit >> 1] ^ static_cast<bool>( root_lit & 1u );
  };

  /* resolve every AND so that unreferenced logic is still checked for consistency */
  for ( uint64_t i = 0u; i < num_ands; ++i )
  {
    auto const& fi = gate_fanins[i];
    for ( auto lit : fi )
    {
      if ( vars[lit >> 1].kind == var_kind::undefined && ( lit >> 1 ) != 0u )
        throw parse_error( static_cast<uint32_t>( 2u + num_inputs + num_latches + num_outputs + num_bad + num_constraints + i ),
                           "dangling literal " + std::to_string( lit ) );
    }
  }
  std::vector<signal> outputs;
  for ( size_t i = 0u; i < output_lits.size(); ++i )
  {
    if ( ( output_lits[i] >> 1 ) != 0u && vars[output_lits[i] >> 1].kind == var_kind::undefined )
      throw parse_error( output_lines[i], "dangling literal " + std::to_string( output_lits[i] ) );
    outputs.push_back( resolve( output_lits[i], output_lines[i] ) );
  }
  std::vector<signal> nexts;
  for ( size_t i = 0u; i < latch_next.size(); ++i )
  {
    if ( ( latch_next[i] >> 1 ) != 0u && vars[latch_next[i] >> 1].kind == var_kind::undefined )
      throw parse_error( latch_lines[i], "dangling literal " + std::to_string( latch_next[i] ) );
    nexts.push_back( resolve( latch_next[i], latch_lines[i] ) );
  }
  for ( size_t i = 0u; i < outputs.size(); ++i )
    net.create_po( outputs[i], output_names[i] );
  for ( size_t i = 0u; i < nexts.size(); ++i )
    net.create_po( nexts[i], ( latch_names[i].empty() ? "latch" + std::to_string( i ) : latch_names[i] ) + "_next" );
  net.set_name( model_name );
  return net;
}

/*! \brief Writes the network as ASCII AIGER with a symbol table. */
inline std::string write_aiger( aig_network const& net )
{
  /* AIGER variables: inputs first, then ANDs, both in node order */
  std::vector<uint32_t> var_of( net.size(), 0u );
  uint32_t next_var = 1u;
  for ( auto pi : net.pis() )
    var_of[pi] = next_var++;
  for ( uint32_t id = 0u; id < net.size(); ++id )
  {
    if ( net.is_and( id ) )
      var_of[id] = next_var++;
  }
  auto lit = [&]( signal s ) { return 2u * var_of[s.node()] + ( s.complemented() ? 1u : 0u ); };

  std::ostringstream os;
  os << "aag " << ( next_var - 1u ) << ' ' << net.num_pis() << " 0 " << net.num_pos() << ' ' << net.num_ands() << '\n';
  for ( auto pi : net.pis() )
    os << 2u * var_of[pi] << '\n';
  for ( auto const& po : net.pos() )
    os << lit( po.driver ) << '\n';
  for ( uint32_t id = 0u; id < net.size(); ++id )
  {
    if ( !net.is_and( id ) )
      continue;
    auto const& n = net.node( id );
    uint32_t a = lit( n.fanin0 ), b = lit( n.fanin1 );
    if ( a < b )
      std::swap( a, b );
    os << 2u * var_of[id] << ' ' << a << ' ' << b << '\n';
  }
  for ( uint32_t i = 0u; i < net.num_pis(); ++i )
    os << 'i' << i << ' ' << net.pi_name( i ) << '\n';
  for ( uint32_t i = 0u; i < net.num_pos(); ++i )
    os << 'o' << i << ' ' << net.po_at( i ).name << '\n';
  if ( !net.name().empty() )
    os << "c\n" << net.name() << '\n';
  return os.str();
}

} // namespace qals
