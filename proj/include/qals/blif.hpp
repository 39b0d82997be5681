/*!
  \file blif.hpp
  \brief Structural BLIF reader and writer for mapped netlists

  Library cells are written as `.gate` lines, table cells (wires, constant
  tie-offs) as `.names` covers.
*/

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "genlib.hpp"
#include "mapped_netlist.hpp"

namespace qals
{

inline std::string write_blif( mapped_netlist const& mapped )
{
  auto const& gates = mapped.gates();
  std::ostringstream os;
  os << ".model " << ( mapped.name().empty() ? "top" : mapped.name() ) << '\n';
  os << ".inputs";
  for ( auto pi : mapped.pis() )
    os << ' ' << mapped.net_name( pi );
  os << "\n.outputs";
  for ( auto const& po : mapped.pos() )
    os << ' ' << po.name;
  os << '\n';

  auto write_cover = [&]( truth_table const& f, std::vector<std::string> const& ins, std::string const& out ) {
    os << ".names";
    for ( auto const& i : ins )
      os << ' ' << i;
    os << ' ' << out << '\n';
    for ( uint32_t m = 0u; m < f.num_bits(); ++m )
    {
      if ( !f.get_bit( m ) )
        continue;
      for ( uint32_t i = 0u; i < ins.size(); ++i )
        os << ( ( ( m >> i ) & 1u ) ? '1' : '0' );
      os << ( ins.empty() ? "1\n" : " 1\n" );
    }
  };

  for ( auto const& c : mapped.cells() )
  {
    if ( c.is_table() )
    {
      std::vector<std::string> ins;
      for ( auto i : c.inputs )
        ins.push_back( mapped.net_name( i ) );
      write_cover( c.function, ins, mapped.net_name( c.output ) );
      continue;
    }
    auto const& g = gates[c.gate];
    if ( g.name.empty() )
      throw std::invalid_argument( "write_blif: cell without a library name" );
    os << ".gate " << g.name;
    for ( size_t i = 0u; i < c.inputs.size(); ++i )
      os << ' ' << g.pins[i] << '=' << mapped.net_name( c.inputs[i] );
    os << ' ' << g.output << '=' << mapped.net_name( c.output ) << '\n';
  }

  std::unordered_set<std::string> pi_names;
  for ( auto pi : mapped.pis() )
    pi_names.insert( mapped.net_name( pi ) );
  for ( auto const& po : mapped.pos() )
  {
    if ( mapped.net_name( po.net ) == po.name )
      continue;
    if ( pi_names.count( po.name ) )
      throw std::invalid_argument( "write_blif: output " + po.name + " collides with an input name" );
    write_cover( truth_table::nth_var( 1u, 0u ), { mapped.net_name( po.net ) }, po.name );
  }
  os << ".end\n";
  return os.str();
}

namespace detail
{

struct blif_definition
{
  uint32_t line;
  std::optional<uint32_t> gate;
  truth_table function;
  std::vector<std::string> inputs;
};

/* logical lines with continuations joined and comments stripped */
inline std::vector<std::pair<uint32_t, std::vector<std::string>>> blif_lines( std::string_view text )
{
  std::vector<std::pair<uint32_t, std::vector<std::string>>> lines;
  std::istringstream is{ std::string( text ) };
  std::string raw, pending;
  uint32_t line_no = 0u, start = 0u;
  while ( std::getline( is, raw ) )
  {
    ++line_no;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    if ( pending.empty() )
      start = line_no;
    bool const continued = !raw.empty() && raw.back() == '\\';
    if ( continued )
      raw.pop_back();
    pending += raw + ' ';
    if ( continued )
      continue;
    std::istringstream ls( pending );
    std::vector<std::string> tokens;
    for ( std::string t; ls >> t; )
      tokens.push_back( t );
    if ( !tokens.empty() )
      lines.emplace_back( start, std::move( tokens ) );
    pending.clear();
  }
  return lines;
}

} // namespace detail

/*! \brief Reads a structural BLIF netlist whose `.gate` cells come from `gates`. */
inline mapped_netlist read_blif( std::string_view text, std::vector<library_gate> const& gates )
{
  std::unordered_map<std::string, uint32_t> gate_index;
  for ( uint32_t g = 0u; g < gates.size(); ++g )
    gate_index.emplace( gates[g].name, g );

  auto const lines = detail::blif_lines( text );
  std::string model;
  std::vector<std::string> inputs, outputs;
  std::unordered_map<std::string, detail::blif_definition> defs;
  std::vector<std::string> def_order;

  auto define = [&]( std::string const& net, detail::blif_definition d ) {
    if ( defs.count( net ) )
      throw parse_error( d.line, "net " + net + " is driven twice" );
    def_order.push_back( net );
    defs.emplace( net, std::move( d ) );
  };

  for ( size_t i = 0u; i < lines.size(); ++i )
  {
    auto const& [line, tok] = lines[i];
    auto const& kw = tok[0];
    if ( kw == ".model" )
      model = tok.size() > 1u ? tok[1] : "";
    else if ( kw == ".inputs" )
      inputs.insert( inputs.end(), tok.begin() + 1, tok.end() );
    else if ( kw == ".outputs" )
      outputs.insert( outputs.end(), tok.begin() + 1, tok.end() );
    else if ( kw == ".gate" )
    {
      if ( tok.size() < 3u )
        throw parse_error( line, ".gate needs a cell name and an output" );
      auto it = gate_index.find( tok[1] );
      if ( it == gate_index.end() )
        throw parse_error( line, "unknown cell " + tok[1] );
      auto const& g = gates[it->second];
      detail::blif_definition d{ line, it->second, {}, std::vector<std::string>( g.num_inputs() ) };
      std::vector<uint8_t> seen( g.num_inputs(), 0u );
      std::string out;
      for ( size_t t = 2u; t < tok.size(); ++t )
      {
        auto const eq = tok[t].find( '=' );
        if ( eq == std::string::npos )
          throw parse_error( line, "expected formal=actual, found " + tok[t] );
        auto const formal = tok[t].substr( 0, eq );
        auto const actual = tok[t].substr( eq + 1 );
        if ( formal == g.output )
        {
          out = actual;
          continue;
        }
        auto p = std::find( g.pins.begin(), g.pins.end(), formal );
        if ( p == g.pins.end() )
          throw parse_error( line, "cell " + g.name + " has no pin " + formal );
        auto const idx = static_cast<size_t>( p - g.pins.begin() );
        if ( seen[idx] )
          throw parse_error( line, "pin " + formal + " connected twice" );
        seen[idx] = 1u;
        d.inputs[idx] = actual;
      }
      if ( out.empty() || std::count( seen.begin(), seen.end(), 0u ) != 0 )
        throw parse_error( line, "cell " + g.name + " is not fully connected" );
      define( out, std::move( d ) );
    }
    else if ( kw == ".names" )
    {
      if ( tok.size() < 2u )
        throw parse_error( line, ".names needs an output" );
      uint32_t const k = static_cast<uint32_t>( tok.size() - 2u );
      if ( k > max_cut_size )
        throw parse_error( line, ".names covers with more than 5 inputs are not supported" );
      uint32_t cover = 0u;
      std::optional<char> polarity;
      while ( i + 1u < lines.size() && lines[i + 1u].second[0][0] != '.' )
      {
        auto const& [row_line, row] = lines[++i];
        std::string pattern = k == 0u ? "" : row[0];
        std::string value = k == 0u ? row[0] : ( row.size() > 1u ? row[1] : "" );
        if ( pattern.size() != k || ( value != "0" && value != "1" ) || row.size() != ( k == 0u ? 1u : 2u ) )
          throw parse_error( row_line, "malformed cover row" );
        if ( polarity && *polarity != value[0] )
          throw parse_error( row_line, "cover mixes on-set and off-set rows" );
        polarity = value[0];
        for ( uint32_t m = 0u; m < ( 1u << k ); ++m )
        {
          bool match = true;
          for ( uint32_t b = 0u; b < k && match; ++b )
          {
            char const c = pattern[b];
            if ( c != '-' && c != '0' && c != '1' )
              throw parse_error( row_line, "bad cover character" );
            match = c == '-' || ( c == '1' ) == static_cast<bool>( ( m >> b ) & 1u );
          }
          if ( match )
            cover |= 1u << m;
        }
      }
      truth_table f( k, cover );
      if ( polarity == '0' )
        f = ~f;
      define( tok.back(), detail::blif_definition{ line, std::nullopt, f, std::vector<std::string>( tok.begin() + 1, tok.end() - 1 ) } );
    }
    else if ( kw == ".end" )
      break;
    else
      throw parse_error( line, "unsupported construct " + kw );
  }

  mapped_netlist mapped( gates );
  mapped.set_name( model );
  std::unordered_map<std::string, uint32_t> net_of;
  for ( auto const& name : inputs )
  {
    if ( net_of.count( name ) || defs.count( name ) )
      throw parse_error( 1u, "input " + name + " is declared twice or also driven" );
    net_of[name] = mapped.create_pi( name );
  }

  /* create cells in topological order */
  std::unordered_map<std::string, uint8_t> state; /* 1 = on stack, 2 = done */
  std::function<uint32_t( std::string const&, uint32_t )> build = [&]( std::string const& name, uint32_t ref_line ) -> uint32_t {
    if ( auto it = net_of.find( name ); it != net_of.end() )
      return it->second;
    auto d = defs.find( name );
    if ( d == defs.end() )
      throw parse_error( ref_line, "net " + name + " is never driven" );
    if ( state[name] == 1u )
      throw parse_error( d->second.line, "combinational cycle through " + name );
    state[name] = 1u;
    std::vector<uint32_t> ins;
    for ( auto const& in : d->second.inputs )
      ins.push_back( build( in, d->second.line ) );
    uint32_t const out = d->second.gate ? mapped.create_cell( *d->second.gate, ins, name )
                                        : mapped.create_table( d->second.function, ins, name );
    state[name] = 2u;
    net_of[name] = out;
    return out;
  };
  for ( auto const& name : def_order )
    build( name, defs[name].line );

  for ( auto const& name : outputs )
  {
    auto const net = build( name, 1u );
    mapped.create_po( net, name );
  }
  return mapped;
}

} // namespace qals
