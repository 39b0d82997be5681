/*!
  \file error_model.hpp
  \brief Error rates of approximate functions and their propagation to outputs

  Estimation tracks, for every signal, the joint distribution of its exact
  and approximate values under uniform independent primary inputs, assuming
  the fanins of each gate are independent. On fanout-free networks this is
  exact.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aig.hpp"
#include "errors.hpp"
#include "simulation.hpp"
#include "truth_table.hpp"

namespace qals
{

struct hamming_error
{
  uint32_t distance;
  double rate;
};

/*! \brief Hamming distance between two tables and its share of all minterms. */
inline hamming_error hamming_error_rate( truth_table const& exact, truth_table const& approx )
{
  auto const d = hamming_distance( exact, approx );
  return { d, static_cast<double>( d ) / static_cast<double>( exact.num_bits() ) };
}

/*! \brief Output error probability of a gate with independently flipped, uniform inputs.

  Sums the probability of all (input value, flip pattern) pairs that change the
  gate output, then composes the result with the gate's own flip probability.
*/
inline double propagate_gate_error( truth_table const& function, std::span<double const> input_errors, double intrinsic )
{
  uint32_t const n = function.num_vars();
  if ( input_errors.size() != n )
    throw std::invalid_argument( "propagate_gate_error: one error probability per gate input expected" );
  double propagated = 0.0;
  for ( uint32_t flips = 1u; flips < ( 1u << n ); ++flips )
  {
    double p_flip = 1.0;
    for ( uint32_t i = 0u; i < n; ++i )
      p_flip *= ( ( flips >> i ) & 1u ) ? input_errors[i] : 1.0 - input_errors[i];
    if ( p_flip == 0.0 )
      continue;
    uint32_t changed = 0u;
    for ( uint32_t x = 0u; x < ( 1u << n ); ++x )
      changed += function.get_bit( x ) != function.get_bit( x ^ flips ) ? 1u : 0u;
    propagated += p_flip * static_cast<double>( changed ) / static_cast<double>( 1u << n );
  }
  return propagated * ( 1.0 - intrinsic ) + ( 1.0 - propagated ) * intrinsic;
}

/*! \brief Joint distribution of (exact, approximate) values; index = exact + 2 * approx. */
using joint_state = std::array<double, 4>;

inline constexpr joint_state exact_input_state{ 0.5, 0.0, 0.0, 0.5 };

inline double error_probability( joint_state const& s ) { return s[1] + s[2]; }

inline joint_state complement( joint_state const& s ) { return { s[3], s[2], s[1], s[0] }; }

/*! \brief Flips the approximate value with probability p, independently of everything else. */
inline joint_state flip_approx( joint_state const& s, double p )
{
  return { s[0] * ( 1.0 - p ) + s[2] * p, s[1] * ( 1.0 - p ) + s[3] * p, s[2] * ( 1.0 - p ) + s[0] * p,
           s[3] * ( 1.0 - p ) + s[1] * p };
}

/*! \brief Output state of a gate computing `exact` on exact values and `approx` on approximate values. */
inline joint_state propagate_joint( truth_table const& exact, truth_table const& approx, std::span<joint_state const> inputs )
{
  uint32_t const n = static_cast<uint32_t>( inputs.size() );
  assert( exact.num_vars() == n && approx.num_vars() == n );
  joint_state out{ 0.0, 0.0, 0.0, 0.0 };
  /* enumerate the 4^n joint input states: two bits per input */
  for ( uint32_t code = 0u; code < ( 1u << ( 2u * n ) ); ++code )
  {
    double p = 1.0;
    uint32_t xe = 0u, xa = 0u;
    for ( uint32_t i = 0u; i < n && p != 0.0; ++i )
    {
      uint32_t const s = ( code >> ( 2u * i ) ) & 3u;
      p *= inputs[i][s];
      xe |= ( s & 1u ) << i;
      xa |= ( s >> 1 ) << i;
    }
    if ( p == 0.0 )
      continue;
    out[( exact.get_bit( xe ) ? 1u : 0u ) + ( approx.get_bit( xa ) ? 2u : 0u )] += p;
  }
  return out;
}

struct error_profile
{
  /*! error probability per node (AIG) or net (mapped netlist) */
  std::vector<double> node_errors;
  std::vector<double> po_errors;

  double max_po_error() const { return po_errors.empty() ? 0.0 : *std::max_element( po_errors.begin(), po_errors.end() ); }
};

/*! \brief Estimated output error rates of an AIG whose nodes flip with the given local probabilities. */
inline error_profile estimate_po_errors( aig_network const& net, std::vector<double> const& local_errors )
{
  if ( local_errors.size() != net.size() )
    throw std::invalid_argument( "estimate_po_errors: one local error per node expected" );
  std::vector<joint_state> state( net.size(), exact_input_state );
  state[0] = { 1.0, 0.0, 0.0, 0.0 };
  auto const and2 = truth_table( 2u, 0x8u );
  for ( uint32_t n = 0u; n < net.size(); ++n )
  {
    if ( net.is_and( n ) )
    {
      auto const& nd = net.node( n );
      std::array<joint_state, 2> ins{ state[nd.fanin0.node()], state[nd.fanin1.node()] };
      if ( nd.fanin0.complemented() )
        ins[0] = complement( ins[0] );
      if ( nd.fanin1.complemented() )
        ins[1] = complement( ins[1] );
      state[n] = propagate_joint( and2, and2, ins );
    }
    if ( local_errors[n] != 0.0 )
      state[n] = flip_approx( state[n], local_errors[n] );
  }
  error_profile prof;
  prof.node_errors.reserve( net.size() );
  for ( auto const& s : state )
    prof.node_errors.push_back( std::clamp( error_probability( s ), 0.0, 1.0 ) );
  for ( auto const& po : net.pos() )
    prof.po_errors.push_back( prof.node_errors[po.driver.node()] );
  return prof;
}

struct measure_mode
{
  enum class kind
  {
    exhaustive,
    monte_carlo
  };
  kind type{ kind::exhaustive };
  uint64_t num_patterns{ 100'000u };
  uint64_t seed{ 42u };

  static measure_mode exhaustive() { return {}; }
  static measure_mode monte_carlo( uint64_t n = 100'000u, uint64_t seed = 42u ) { return { kind::monte_carlo, n, seed }; }
  /*! exhaustive up to `max_exhaustive_inputs`, sampled beyond */
  static measure_mode automatic( uint32_t num_pis, uint64_t seed = 42u );

  std::string name() const { return type == kind::exhaustive ? "exhaustive" : "monte_carlo"; }
};

inline constexpr uint32_t max_exhaustive_inputs = 20u;

inline measure_mode measure_mode::automatic( uint32_t num_pis, uint64_t seed )
{
  return num_pis <= max_exhaustive_inputs ? exhaustive() : monte_carlo( 100'000u, seed );
}

/*! \brief Input patterns for a measurement. */
inline std::vector<sim_vector> measurement_patterns( uint32_t num_pis, measure_mode const& mode )
{
  if ( mode.type == measure_mode::kind::exhaustive )
  {
    if ( num_pis > max_exhaustive_inputs )
      throw std::invalid_argument( "exhaustive measurement limited to " + std::to_string( max_exhaustive_inputs ) + " inputs" );
    return exhaustive_patterns( num_pis );
  }
  return random_patterns( num_pis, mode.num_patterns, mode.seed );
}

/*! \brief Per-output fraction of patterns on which two output vectors differ. */
inline std::vector<double> output_error_rates( std::vector<sim_vector> const& exact, std::vector<sim_vector> const& approx )
{
  std::vector<double> rates;
  for ( size_t i = 0u; i < exact.size(); ++i )
  {
    auto const bits = exact[i].num_bits();
    rates.push_back( bits == 0u ? 0.0 : static_cast<double>( ( exact[i] ^ approx[i] ).count_ones() ) / static_cast<double>( bits ) );
  }
  return rates;
}

/*! \brief Measured output error rates of `approx` against `exact` (both AIGs). */
inline error_profile measure_po_errors( aig_network const& exact, aig_network const& approx, measure_mode const& mode )
{
  if ( exact.num_pis() != approx.num_pis() || exact.num_pos() != approx.num_pos() )
    throw interface_mismatch( "networks differ in their number of inputs or outputs" );
  auto const pis = measurement_patterns( exact.num_pis(), mode );
  error_profile prof;
  prof.po_errors = output_error_rates( simulate_outputs( exact, pis ), simulate_outputs( approx, pis ) );
  return prof;
}

} // namespace qals
