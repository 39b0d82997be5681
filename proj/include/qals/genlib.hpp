/*!
  \file genlib.hpp
  \brief Reader for genlib standard-cell libraries

  Supports `GATE <name> <area> <out>=<expr>;` statements followed by `PIN`
  lines. Expressions use `!` and postfix `'` for negation, `*`, `&` or
  juxtaposition for AND, `+` or `|` for OR, parentheses, and the constants
  CONST0/CONST1. Pin delays are load-independent: max(rise block, fall
  block). Fanout and load fields are read and ignored. LATCH statements are
  skipped.
*/

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "truth_table.hpp"

namespace qals
{

struct expression
{
  enum class kind : uint8_t
  {
    variable,
    const0,
    const1,
    negation,
    conjunction,
    disjunction
  };

  kind type{ kind::const0 };
  uint32_t variable{ 0u };
  std::vector<expression> operands;

  truth_table evaluate( uint32_t num_vars ) const
  {
    switch ( type )
    {
    case kind::variable: return truth_table::nth_var( num_vars, variable );
    case kind::const0: return truth_table::const0( num_vars );
    case kind::const1: return truth_table::const1( num_vars );
    case kind::negation: return ~operands[0].evaluate( num_vars );
    case kind::conjunction:
    {
      auto r = truth_table::const1( num_vars );
      for ( auto const& op : operands )
        r = r & op.evaluate( num_vars );
      return r;
    }
    case kind::disjunction:
    {
      auto r = truth_table::const0( num_vars );
      for ( auto const& op : operands )
        r = r | op.evaluate( num_vars );
      return r;
    }
    }
    return truth_table::const0( num_vars );
  }
};

struct library_gate
{
  std::string name;
  double area{ 0.0 };
  std::string output;
  expression expr;
  std::vector<std::string> pins;
  /*! load-independent pin-to-output delay, indexed like `pins` */
  std::vector<double> pin_delay;
  /*! function over the pins, pin i is variable i */
  truth_table function;

  uint32_t num_inputs() const { return static_cast<uint32_t>( pins.size() ); }
  double max_delay() const { return pin_delay.empty() ? 0.0 : *std::max_element( pin_delay.begin(), pin_delay.end() ); }

  bool is_inverter() const { return num_inputs() == 1u && function == ~truth_table::nth_var( 1, 0 ); }
  bool is_buffer() const { return num_inputs() == 1u && function == truth_table::nth_var( 1, 0 ); }
  bool is_constant() const { return num_inputs() == 0u; }
};

namespace detail
{

class expression_parser
{
public:
  expression_parser( std::string_view text, uint32_t line ) : _text( text ), _line( line ) {}

  expression parse()
  {
    auto e = parse_or();
    skip_spaces();
    if ( _pos != _text.size() )
      throw parse_error( _line, "unexpected '" + std::string( 1, _text[_pos] ) + "' in expression" );
    return e;
  }

  std::vector<std::string> const& variables() const { return _vars; }

private:
  void skip_spaces()
  {
    while ( _pos < _text.size() && std::isspace( static_cast<unsigned char>( _text[_pos] ) ) )
      ++_pos;
  }

  bool starts_factor()
  {
    skip_spaces();
    if ( _pos >= _text.size() )
      return false;
    char const c = _text[_pos];
    return c == '(' || c == '!' || is_name_char( c );
  }

  static bool is_name_char( char c )
  {
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '[' || c == ']' || c == '.' || c == '$';
  }

  expression parse_or()
  {
    expression e;
    e.type = expression::kind::disjunction;
    e.operands.push_back( parse_and() );
    for ( ;; )
    {
      skip_spaces();
      if ( _pos < _text.size() && ( _text[_pos] == '+' || _text[_pos] == '|' ) )
      {
        ++_pos;
        e.operands.push_back( parse_and() );
      }
      else
        break;
    }
    return e.operands.size() == 1u ? std::move( e.operands[0] ) : e;
  }

  expression parse_and()
  {
    expression e;
    e.type = expression::kind::conjunction;
    e.operands.push_back( parse_factor() );
    for ( ;; )
    {
      skip_spaces();
      if ( _pos < _text.size() && ( _text[_pos] == '*' || _text[_pos] == '&' ) )
      {
        ++_pos;
        e.operands.push_back( parse_factor() );
      }
      else if ( starts_factor() )
        e.operands.push_back( parse_factor() );
      else
        break;
    }
    return e.operands.size() == 1u ? std::move( e.operands[0] ) : e;
  }

  expression parse_factor()
  {
    skip_spaces();
    if ( _pos >= _text.size() )
      throw parse_error( _line, "unexpected end of expression" );
    expression e;
    if ( _text[_pos] == '!' )
    {
      ++_pos;
      e.type = expression::kind::negation;
      e.operands.push_back( parse_factor() );
      return e;
    }
    if ( _text[_pos] == '(' )
    {
      ++_pos;
      e = parse_or();
      skip_spaces();
      if ( _pos >= _text.size() || _text[_pos] != ')' )
        throw parse_error( _line, "missing ')' in expression" );
      ++_pos;
    }
    else if ( is_name_char( _text[_pos] ) )
    {
      size_t const start = _pos;
      while ( _pos < _text.size() && is_name_char( _text[_pos] ) )
        ++_pos;
      std::string const name( _text.substr( start, _pos - start ) );
      if ( name == "CONST0" || name == "0" )
        e.type = expression::kind::const0;
      else if ( name == "CONST1" || name == "1" )
        e.type = expression::kind::const1;
      else
      {
        e.type = expression::kind::variable;
        auto it = std::find( _vars.begin(), _vars.end(), name );
        e.variable = static_cast<uint32_t>( it - _vars.begin() );
        if ( it == _vars.end() )
          _vars.push_back( name );
      }
    }
    else
      throw parse_error( _line, "unexpected '" + std::string( 1, _text[_pos] ) + "' in expression" );

    for ( ;; )
    {
      skip_spaces();
      if ( _pos < _text.size() && _text[_pos] == '\'' )
      {
        ++_pos;
        expression n;
        n.type = expression::kind::negation;
        n.operands.push_back( std::move( e ) );
        e = std::move( n );
      }
      else
        break;
    }
    return e;
  }

  std::string_view _text;
  uint32_t _line;
  size_t _pos{ 0u };
  std::vector<std::string> _vars;
};

inline void rename_variables( expression& e, std::vector<uint32_t> const& map )
{
  if ( e.type == expression::kind::variable )
    e.variable = map[e.variable];
  for ( auto& op : e.operands )
    rename_variables( op, map );
}

struct genlib_token
{
  std::string text;
  uint32_t line;
};

inline std::vector<genlib_token> tokenize_genlib( std::string_view text )
{
  std::vector<genlib_token> tokens;
  uint32_t line = 1u;
  size_t i = 0u;
  while ( i < text.size() )
  {
    char const c = text[i];
    if ( c == '\n' )
    {
      ++line;
      ++i;
    }
    else if ( std::isspace( static_cast<unsigned char>( c ) ) )
      ++i;
    else if ( c == '#' )
    {
      while ( i < text.size() && text[i] != '\n' )
        ++i;
    }
    else
    {
      size_t const start = i;
      while ( i < text.size() && !std::isspace( static_cast<unsigned char>( text[i] ) ) && text[i] != '#' )
        ++i;
      tokens.push_back( { std::string( text.substr( start, i - start ) ), line } );
    }
  }
  return tokens;
}

inline double parse_number( genlib_token const& t )
{
  try
  {
    size_t used = 0u;
    double const v = std::stod( t.text, &used );
    if ( used != t.text.size() )
      throw parse_error( t.line, "malformed number '" + t.text + "'" );
    return v;
  }
  catch ( std::logic_error const& )
  {
    throw parse_error( t.line, "malformed number '" + t.text + "'" );
  }
}

} // namespace detail

/*! \brief Parses a genlib document into its combinational gates. */
inline std::vector<library_gate> parse_genlib( std::string_view text, std::ostream* warnings = nullptr )
{
  auto const tokens = detail::tokenize_genlib( text );
  std::vector<library_gate> gates;
  size_t i = 0u;

  auto expect = [&]( char const* what ) -> detail::genlib_token const& {
    if ( i >= tokens.size() )
      throw parse_error( tokens.empty() ? 1u : tokens.back().line, std::string( "unexpected end of library, expected " ) + what );
    return tokens[i++];
  };

  while ( i < tokens.size() )
  {
    auto const& keyword = tokens[i];
    if ( keyword.text == "LATCH" )
    {
      if ( warnings )
        *warnings << "warning: line " << keyword.line << ": skipping sequential cell\n";
      ++i;
      while ( i < tokens.size() && tokens[i].text != "GATE" && tokens[i].text != "LATCH" )
        ++i;
      continue;
    }
    if ( keyword.text != "GATE" )
      throw parse_error( keyword.line, "expected GATE or LATCH, found '" + keyword.text + "'" );
    ++i;

    library_gate gate;
    uint32_t const gate_line = keyword.line;
    gate.name = expect( "gate name" ).text;
    gate.area = detail::parse_number( expect( "gate area" ) );
    if ( gate.area < 0.0 )
      throw parse_error( gate_line, "gate " + gate.name + " has negative area" );

    /* function text runs up to the terminating ';' */
    std::string function;
    uint32_t function_line = gate_line;
    for ( bool done = false; !done; )
    {
      auto const& t = expect( "';' after gate function" );
      if ( function.empty() )
        function_line = t.line;
      auto const semi = t.text.find( ';' );
      if ( semi != std::string::npos )
      {
        if ( semi + 1u != t.text.size() )
          throw parse_error( t.line, "unexpected text after ';'" );
        function += t.text.substr( 0, semi );
        done = true;
      }
      else
        function += t.text + " ";
    }
    auto const eq = function.find( '=' );
    if ( eq == std::string::npos )
      throw parse_error( function_line, "gate " + gate.name + ": expected '<output>=<expression>'" );
    gate.output = function.substr( 0, eq );
    gate.output.erase( std::remove_if( gate.output.begin(), gate.output.end(), ::isspace ), gate.output.end() );
    if ( gate.output.empty() )
      throw parse_error( function_line, "gate " + gate.name + ": missing output name" );

    detail::expression_parser parser( std::string_view( function ).substr( eq + 1u ), function_line );
    gate.expr = parser.parse();
    std::vector<std::string> expr_vars = parser.variables();

    /* PIN lines */
    struct pin_spec
    {
      std::string name;
      double delay;
      uint32_t line;
    };
    std::vector<pin_spec> specs;
    while ( i < tokens.size() && tokens[i].text == "PIN" )
    {
      uint32_t const pin_line = tokens[i].line;
      ++i;
      if ( i + 8u > tokens.size() )
        throw parse_error( pin_line, "PIN line needs 8 fields" );
      std::string const pin_name = tokens[i].text;
      std::string const& phase = tokens[i + 1u].text;
      if ( phase != "INV" && phase != "NONINV" && phase != "UNKNOWN" )
        throw parse_error( pin_line, "unknown pin phase '" + phase + "'" );
      for ( uint32_t f = 2u; f < 8u; ++f )
        detail::parse_number( tokens[i + f] );
      double const rise = detail::parse_number( tokens[i + 4u] );
      double const fall = detail::parse_number( tokens[i + 6u] );
      if ( rise < 0.0 || fall < 0.0 )
        throw parse_error( pin_line, "negative pin delay" );
      specs.push_back( { pin_name, std::max( rise, fall ), pin_line } );
      i += 8u;
    }

    if ( expr_vars.size() > max_cut_size )
      throw library_error( "gate " + gate.name + " has " + std::to_string( expr_vars.size() ) + " inputs; at most " +
                           std::to_string( max_cut_size ) + " are supported" );

    bool const wildcard = specs.size() == 1u && specs[0].name == "*";
    if ( wildcard || specs.empty() )
    {
      gate.pins = expr_vars;
      gate.pin_delay.assign( expr_vars.size(), specs.empty() ? 0.0 : specs[0].delay );
      if ( specs.empty() && !expr_vars.empty() )
        throw parse_error( gate_line, "gate " + gate.name + " has inputs but no PIN lines" );
    }
    else
    {
      std::vector<uint32_t> map( expr_vars.size(), ~0u );
      for ( auto const& s : specs )
      {
        if ( s.name == "*" )
          throw parse_error( s.line, "wildcard PIN mixed with named pins" );
        if ( std::find( gate.pins.begin(), gate.pins.end(), s.name ) != gate.pins.end() )
          throw parse_error( s.line, "pin " + s.name + " declared twice" );
        auto it = std::find( expr_vars.begin(), expr_vars.end(), s.name );
        if ( it == expr_vars.end() )
          throw parse_error( s.line, "pin " + s.name + " does not appear in the function of " + gate.name );
        map[it - expr_vars.begin()] = static_cast<uint32_t>( gate.pins.size() );
        gate.pins.push_back( s.name );
        gate.pin_delay.push_back( s.delay );
      }
      for ( size_t v = 0u; v < expr_vars.size(); ++v )
      {
        if ( map[v] == ~0u )
          throw parse_error( gate_line, "function of " + gate.name + " references undeclared pin " + expr_vars[v] );
      }
      detail::rename_variables( gate.expr, map );
    }

    gate.function = gate.expr.evaluate( gate.num_inputs() );
    gates.push_back( std::move( gate ) );
  }
  return gates;
}

/*! \brief FNV-1a hash of the library text, used to tie trained models to a library. */
inline uint64_t library_fingerprint( std::string_view text )
{
  uint64_t h = 0xcbf29ce484222325ull;
  for ( char c : text )
  {
    if ( c == '\r' )
      continue;
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

} // namespace qals
