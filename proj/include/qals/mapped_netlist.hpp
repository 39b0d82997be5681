/*!
  \file mapped_netlist.hpp
  \brief Netlists of library cells produced by technology mapping

  Nets are numbered in creation order; a cell may only read nets created
  before its output, so cell order is topological. Besides library cells, a
  netlist may hold table cells (`.names` covers) used for wires and constant
  tie-offs.

  Matches group the cells that implement one mapped AIG node. They carry the
  exact cut function and the implemented function over the match leaves and
  drive error estimation.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "aig.hpp"
#include "error_model.hpp"
#include "errors.hpp"
#include "genlib.hpp"
#include "simulation.hpp"
#include "truth_table.hpp"

namespace qals
{

enum class net_kind : uint8_t
{
  primary_input,
  cell
};

struct mapped_cell
{
  static constexpr uint32_t table_cell = std::numeric_limits<uint32_t>::max();

  /*! library gate index, or `table_cell` for a `.names` cover */
  uint32_t gate{ table_cell };
  /*! function of a table cell over its inputs */
  truth_table function;
  std::vector<uint32_t> inputs;
  uint32_t output{ 0u };

  bool is_table() const { return gate == table_cell; }
};

struct mapped_match
{
  /*! AIG node implemented by the match, if any */
  uint32_t node{ std::numeric_limits<uint32_t>::max() };
  std::vector<uint32_t> leaves;
  uint32_t output{ 0u };
  /*! cut function over `leaves` */
  truth_table exact;
  /*! function realized by the cells over `leaves` */
  truth_table implemented;

  double local_error() const { return hamming_error_rate( exact, implemented ).rate; }
};

struct mapped_output
{
  uint32_t net;
  std::string name;
};

class mapped_netlist
{
public:
  explicit mapped_netlist( std::vector<library_gate> const& gates ) : _gates( &gates ) {}

  std::vector<library_gate> const& gates() const { return *_gates; }

  uint32_t create_pi( std::string name )
  {
    auto const n = new_net( net_kind::primary_input, std::move( name ) );
    _pis.push_back( n );
    return n;
  }

  /*! \brief Output net of a new library cell. */
  uint32_t create_cell( uint32_t gate, std::vector<uint32_t> inputs, std::string name = {} )
  {
    if ( gate >= _gates->size() )
      throw std::invalid_argument( "create_cell: unknown gate" );
    if ( inputs.size() != ( *_gates )[gate].num_inputs() )
      throw std::invalid_argument( "create_cell: wrong number of inputs for " + ( *_gates )[gate].name );
    check_inputs( inputs );
    auto const out = new_net( net_kind::cell, std::move( name ) );
    _cells.push_back( mapped_cell{ gate, {}, std::move( inputs ), out } );
    _driver[out] = static_cast<uint32_t>( _cells.size() - 1u );
    return out;
  }

  /*! \brief Output net of a new table cell computing `function` over `inputs`. */
  uint32_t create_table( truth_table function, std::vector<uint32_t> inputs, std::string name = {} )
  {
    if ( function.num_vars() != inputs.size() || inputs.size() > max_cut_size )
      throw std::invalid_argument( "create_table: function width does not match inputs" );
    check_inputs( inputs );
    auto const out = new_net( net_kind::cell, std::move( name ) );
    _cells.push_back( mapped_cell{ mapped_cell::table_cell, function, std::move( inputs ), out } );
    _driver[out] = static_cast<uint32_t>( _cells.size() - 1u );
    return out;
  }

  /*! \brief Fresh constant net: the cheapest constant cell of the library, else a tie-off. */
  uint32_t create_constant( bool value )
  {
    std::optional<uint32_t> best;
    for ( uint32_t g = 0u; g < _gates->size(); ++g )
    {
      auto const& gate = ( *_gates )[g];
      if ( gate.is_constant() && gate.function.get_bit( 0u ) == value && ( !best || gate.area < ( *_gates )[*best].area ) )
        best = g;
    }
    if ( best )
      return create_cell( *best, {} );
    return create_table( value ? truth_table::const1( 0u ) : truth_table::const0( 0u ), {} );
  }

  void create_po( uint32_t net, std::string name )
  {
    if ( net >= num_nets() )
      throw std::invalid_argument( "create_po: unknown net" );
    /* give an unnamed cell output the output name to avoid an alias */
    if ( _kinds[net] == net_kind::cell && _auto_named[net] && !_used_names.count( name ) )
    {
      _used_names.erase( _names[net] );
      _names[net] = name;
      _auto_named[net] = 0u;
      _used_names.insert( name );
    }
    _pos.push_back( mapped_output{ net, std::move( name ) } );
  }

  void add_match( mapped_match m ) { _matches.push_back( std::move( m ) ); }

  uint32_t num_nets() const { return static_cast<uint32_t>( _kinds.size() ); }
  net_kind kind( uint32_t net ) const { return _kinds[net]; }
  std::string const& net_name( uint32_t net ) const { return _names[net]; }
  std::vector<uint32_t> const& pis() const { return _pis; }
  std::vector<mapped_output> const& pos() const { return _pos; }
  std::vector<mapped_cell> const& cells() const { return _cells; }
  std::vector<mapped_match> const& matches() const { return _matches; }
  uint32_t num_gates() const
  {
    return static_cast<uint32_t>( std::count_if( _cells.begin(), _cells.end(), []( auto const& c ) { return !c.is_table(); } ) );
  }
  /*! \brief Index of the cell driving a net (nets that are not primary inputs). */
  uint32_t driver( uint32_t net ) const { return _driver[net]; }

  std::string const& name() const { return _name; }
  void set_name( std::string name ) { _name = std::move( name ); }

  double area() const
  {
    double a = 0.0;
    for ( auto const& c : _cells )
    {
      if ( !c.is_table() )
        a += ( *_gates )[c.gate].area;
    }
    return a;
  }

  /*! \brief Arrival time of every net using load-independent pin delays; table cells are free. */
  std::vector<double> arrival_times() const
  {
    std::vector<double> arrival( num_nets(), 0.0 );
    for ( auto const& c : _cells )
    {
      double t = 0.0;
      for ( size_t i = 0u; i < c.inputs.size(); ++i )
        t = std::max( t, arrival[c.inputs[i]] + ( c.is_table() ? 0.0 : ( *_gates )[c.gate].pin_delay[i] ) );
      arrival[c.output] = t;
    }
    return arrival;
  }

  double delay() const
  {
    auto const arrival = arrival_times();
    double d = 0.0;
    for ( auto const& po : _pos )
      d = std::max( d, arrival[po.net] );
    return d;
  }

  /*! \brief Values of all nets; `pi_values[i]` holds the values of the i-th primary input. */
  std::vector<sim_vector> simulate( std::span<sim_vector const> pi_values ) const
  {
    if ( pi_values.size() != _pis.size() )
      throw std::invalid_argument( "simulate: expected one value vector per primary input" );
    uint64_t const num_bits = pi_values.empty() ? 0u : pi_values.front().num_bits();
    std::vector<sim_vector> values( num_nets() );
    for ( size_t i = 0u; i < _pis.size(); ++i )
      values[_pis[i]] = pi_values[i];
    for ( auto const& c : _cells )
    {
      auto const& f = c.is_table() ? c.function : ( *_gates )[c.gate].function;
      sim_vector out( num_bits );
      auto& w = out.words();
      bool const use_offset = f.count_ones() * 2u > f.num_bits();
      for ( uint32_t m = 0u; m < f.num_bits(); ++m )
      {
        if ( f.get_bit( m ) == use_offset )
          continue;
        for ( size_t j = 0u; j < w.size(); ++j )
        {
          uint64_t term = ~uint64_t{ 0 };
          for ( size_t i = 0u; i < c.inputs.size(); ++i )
          {
            auto const x = values[c.inputs[i]].words()[j];
            term &= ( ( m >> i ) & 1u ) ? x : ~x;
          }
          w[j] |= term;
        }
      }
      if ( use_offset )
      {
        for ( auto& x : w )
          x = ~x;
      }
      out.clear_tail();
      values[c.output] = std::move( out );
    }
    return values;
  }

  std::vector<sim_vector> simulate_outputs( std::span<sim_vector const> pi_values ) const
  {
    auto const values = simulate( pi_values );
    std::vector<sim_vector> outs;
    for ( auto const& po : _pos )
      outs.push_back( values[po.net] );
    return outs;
  }

private:
  uint32_t new_net( net_kind k, std::string name )
  {
    uint32_t const id = num_nets();
    bool const automatic = name.empty();
    if ( automatic )
    {
      name = "n" + std::to_string( id );
      while ( _used_names.count( name ) )
        name = "_" + name;
    }
    _used_names.insert( name );
    _kinds.push_back( k );
    _names.push_back( std::move( name ) );
    _auto_named.push_back( automatic ? 1u : 0u );
    _driver.push_back( std::numeric_limits<uint32_t>::max() );
    return id;
  }

  void check_inputs( std::vector<uint32_t> const& inputs ) const
  {
    for ( auto n : inputs )
    {
      if ( n >= num_nets() )
        throw std::invalid_argument( "cell input refers to a net that does not exist yet" );
    }
  }

  std::vector<library_gate> const* _gates;
  std::vector<net_kind> _kinds;
  std::vector<std::string> _names;
  std::vector<uint8_t> _auto_named;
  std::vector<uint32_t> _driver;
  std::unordered_set<std::string> _used_names;
  std::vector<uint32_t> _pis;
  std::vector<mapped_output> _pos;
  std::vector<mapped_cell> _cells;
  std::vector<mapped_match> _matches;
  std::string _name;
};

struct cover_cost
{
  double area;
  double delay;
};

inline cover_cost evaluate_cover( mapped_netlist const& mapped ) { return { mapped.area(), mapped.delay() }; }

/*! \brief Estimated output error rates of a mapped netlist from its matches.

  Every output net must be a primary input or the output of a match; match
  leaves must be primary inputs or outputs of earlier matches.
*/
inline error_profile estimate_po_errors( mapped_netlist const& mapped )
{
  std::vector<joint_state> state( mapped.num_nets(), exact_input_state );
  std::vector<uint8_t> known( mapped.num_nets(), 0u );
  for ( auto pi : mapped.pis() )
    known[pi] = 1u;
  for ( auto const& m : mapped.matches() )
  {
    std::array<joint_state, max_cut_size> ins{};
    for ( size_t i = 0u; i < m.leaves.size(); ++i )
    {
      if ( !known[m.leaves[i]] )
        throw std::invalid_argument( "estimate_po_errors: match leaf " + mapped.net_name( m.leaves[i] ) + " has no estimate" );
      ins[i] = state[m.leaves[i]];
    }
    state[m.output] = propagate_joint( m.exact, m.implemented, std::span<joint_state const>( ins.data(), m.leaves.size() ) );
    known[m.output] = 1u;
  }
  error_profile prof;
  prof.node_errors.resize( mapped.num_nets(), 0.0 );
  for ( uint32_t n = 0u; n < mapped.num_nets(); ++n )
    prof.node_errors[n] = std::clamp( error_probability( state[n] ), 0.0, 1.0 );
  for ( auto const& po : mapped.pos() )
  {
    if ( !known[po.net] )
      throw std::invalid_argument( "estimate_po_errors: output " + po.name + " is not driven by a match" );
    prof.po_errors.push_back( prof.node_errors[po.net] );
  }
  return prof;
}

/*! \brief Measured output error rates of a mapped netlist against the exact AIG. */
inline error_profile measure_po_errors( aig_network const& exact, mapped_netlist const& approx, measure_mode const& mode )
{
  if ( exact.num_pis() != approx.pis().size() || exact.num_pos() != approx.pos().size() )
    throw interface_mismatch( "network and netlist differ in their number of inputs or outputs" );
  auto const pis = measurement_patterns( exact.num_pis(), mode );
  error_profile prof;
  prof.po_errors = output_error_rates( simulate_outputs( exact, pis ), approx.simulate_outputs( pis ) );
  return prof;
}

/*! \brief Rebuilds a mapped netlist as an AIG (each cell function expanded by Shannon decomposition). */
inline aig_network to_aig( mapped_netlist const& mapped )
{
  aig_network net;
  net.set_name( mapped.name() );
  std::vector<signal> sig( mapped.num_nets() );
  for ( auto pi : mapped.pis() )
    sig[pi] = net.create_pi( mapped.net_name( pi ) );
  auto build = [&]( auto&& self, truth_table const& f, std::vector<signal> const& ins, uint32_t var ) -> signal {
    if ( f.is_const0() )
      return net.get_constant( false );
    if ( f.is_const1() )
      return net.get_constant( true );
    /* cofactors with respect to the highest remaining variable */
    uint32_t const v = var - 1u;
    uint32_t lo = 0u, hi = 0u;
    for ( uint32_t m = 0u; m < ( 1u << v ); ++m )
    {
      lo |= static_cast<uint32_t>( f.get_bit( m ) ) << m;
      hi |= static_cast<uint32_t>( f.get_bit( m | ( 1u << v ) ) ) << m;
    }
    auto const f0 = self( self, truth_table( v, lo ), ins, v );
    auto const f1 = self( self, truth_table( v, hi ), ins, v );
    return net.create_mux( ins[v], f1, f0 );
  };
  for ( auto const& c : mapped.cells() )
  {
    auto const& f = c.is_table() ? c.function : mapped.gates()[c.gate].function;
    std::vector<signal> ins;
    for ( auto i : c.inputs )
      ins.push_back( sig[i] );
    sig[c.output] = build( build, f, ins, f.num_vars() );
  }
  for ( auto const& po : mapped.pos() )
    net.create_po( sig[po.net], po.name );
  return net;
}

} // namespace qals
