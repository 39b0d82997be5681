/*!
  \file truth_table.hpp
  \brief Small truth tables over at most five variables

  A table over k variables stores 2^k bits in a 32-bit word, minterm i at
  bit i. Variable 0 is the least significant bit of the minterm index.
*/

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qals
{

inline constexpr uint32_t max_cut_size = 5u;

class truth_table
{
public:
  constexpr truth_table() = default;

  constexpr truth_table( uint32_t num_vars, uint32_t bits )
      : _num_vars( num_vars ), _bits( bits & mask( num_vars ) )
  {
    assert( num_vars <= max_cut_size );
  }

  static constexpr uint32_t mask( uint32_t num_vars )
  {
    return num_vars >= 5u ? 0xffffffffu : ( ( 1u << ( 1u << num_vars ) ) - 1u );
  }

  static constexpr truth_table nth_var( uint32_t num_vars, uint32_t var )
  {
    constexpr std::array<uint32_t, 5> projections = { 0xaaaaaaaau, 0xccccccccu, 0xf0f0f0f0u, 0xff00ff00u, 0xffff0000u };
    assert( var < num_vars );
    return truth_table( num_vars, projections[var] );
  }

  static constexpr truth_table const0( uint32_t num_vars ) { return truth_table( num_vars, 0u ); }
  static constexpr truth_table const1( uint32_t num_vars ) { return truth_table( num_vars, 0xffffffffu ); }

  constexpr uint32_t num_vars() const { return _num_vars; }
  constexpr uint32_t num_bits() const { return 1u << _num_vars; }
  constexpr uint32_t bits() const { return _bits; }

  constexpr bool get_bit( uint32_t minterm ) const { return ( _bits >> minterm ) & 1u; }

  constexpr void set_bit( uint32_t minterm, bool value )
  {
    assert( minterm < num_bits() );
    _bits = value ? ( _bits | ( 1u << minterm ) ) : ( _bits & ~( 1u << minterm ) );
  }

  constexpr uint32_t count_ones() const { return static_cast<uint32_t>( std::popcount( _bits ) ); }

  constexpr bool is_const0() const { return _bits == 0u; }
  constexpr bool is_const1() const { return _bits == mask( _num_vars ); }

  /*! \brief True iff the function depends on variable `var`. */
  constexpr bool has_var( uint32_t var ) const
  {
    uint32_t shift = 1u << var;
    uint32_t positive = _bits & nth_var( 5, var ).bits() & mask( _num_vars );
    uint32_t negative = _bits & ~nth_var( 5, var ).bits() & mask( _num_vars );
    return ( positive >> shift ) != negative;
  }

  /*! \brief Bitmask of the variables the function depends on. */
  constexpr uint32_t support() const
  {
    uint32_t s = 0u;
    for ( uint32_t v = 0u; v < _num_vars; ++v )
    {
      if ( has_var( v ) )
        s |= 1u << v;
    }
    return s;
  }

  /*! \brief Same function over more variables (new variables are don't-cares). */
  constexpr truth_table extend_to( uint32_t num_vars ) const
  {
    assert( num_vars >= _num_vars && num_vars <= max_cut_size );
    uint32_t bits = _bits;
    for ( uint32_t v = _num_vars; v < num_vars; ++v )
      bits |= bits << ( 1u << v );
    return truth_table( num_vars, bits );
  }

  /*! \brief Restriction to the first `num_vars` variables; requires no dependence on the others. */
  constexpr truth_table shrink_to( uint32_t num_vars ) const
  {
    assert( num_vars <= _num_vars );
    return truth_table( num_vars, _bits );
  }

  constexpr truth_table operator~() const { return truth_table( _num_vars, ~_bits ); }

  friend constexpr truth_table operator&( truth_table a, truth_table b )
  {
    assert( a._num_vars == b._num_vars );
    return truth_table( a._num_vars, a._bits & b._bits );
  }
  friend constexpr truth_table operator|( truth_table a, truth_table b )
  {
    assert( a._num_vars == b._num_vars );
    return truth_table( a._num_vars, a._bits | b._bits );
  }
  friend constexpr truth_table operator^( truth_table a, truth_table b )
  {
    assert( a._num_vars == b._num_vars );
    return truth_table( a._num_vars, a._bits ^ b._bits );
  }

  friend constexpr bool operator==( truth_table const&, truth_table const& ) = default;
  friend constexpr auto operator<=>( truth_table const&, truth_table const& ) = default;

private:
  uint32_t _num_vars{ 0u };
  uint32_t _bits{ 0u };
};

/*! \brief Hamming distance between two tables of equal width. */
inline uint32_t hamming_distance( truth_table const& a, truth_table const& b )
{
  if ( a.num_vars() != b.num_vars() )
    throw std::invalid_argument( "hamming_distance: tables have different numbers of variables" );
  return ( a ^ b ).count_ones();
}

/*! \brief Applies `function` (over `inputs.size()` variables) to the given input tables.

  All input tables must have the same width; the result has that width.
*/
template<typename Range>
inline truth_table compose( truth_table const& function, Range const& inputs, uint32_t num_vars )
{
  uint32_t result = 0u;
  uint32_t const n = 1u << num_vars;
  for ( uint32_t m = 0u; m < n; ++m )
  {
    uint32_t index = 0u;
    uint32_t i = 0u;
    for ( auto const& in : inputs )
    {
      index |= static_cast<uint32_t>( in.get_bit( m ) ) << i;
      ++i;
    }
    result |= static_cast<uint32_t>( function.get_bit( index ) ) << m;
  }
  return truth_table( num_vars, result );
}

/*! \brief Renames variables: variable i of `tt` becomes variable perm[i] of the result. */
inline truth_table permute( truth_table const& tt, std::array<uint8_t, max_cut_size> const& perm )
{
  uint32_t const k = tt.num_vars();
  uint32_t result = 0u;
  for ( uint32_t m = 0u; m < tt.num_bits(); ++m )
  {
    if ( !tt.get_bit( m ) )
      continue;
    uint32_t image = 0u;
    for ( uint32_t i = 0u; i < k; ++i )
      image |= ( ( m >> i ) & 1u ) << perm[i];
    result |= 1u << image;
  }
  return truth_table( k, result );
}

/*! \brief All permutations of {0..k-1}, in lexicographic order, padded with identity. */
inline std::vector<std::array<uint8_t, max_cut_size>> const& permutations( uint32_t k )
{
  static auto const table = [] {
    std::array<std::vector<std::array<uint8_t, max_cut_size>>, max_cut_size + 1> all;
    for ( uint32_t n = 0u; n <= max_cut_size; ++n )
    {
      std::array<uint8_t, max_cut_size> p{ 0, 1, 2, 3, 4 };
      do
      {
        all[n].push_back( p );
      } while ( std::next_permutation( p.begin(), p.begin() + n ) );
    }
    return all;
  }();
  assert( k <= max_cut_size );
  return table[k];
}

struct p_canonical_form
{
  truth_table canonical;
  /*! variable i of the original table is variable perm[i] of the canonical one */
  std::array<uint8_t, max_cut_size> perm;
};

/*! \brief Permutation canonical form: the numerically smallest table reachable by input permutation. */
inline p_canonical_form p_canonize( truth_table const& tt )
{
  p_canonical_form best{ tt, { 0, 1, 2, 3, 4 } };
  for ( auto const& p : permutations( tt.num_vars() ) )
  {
    auto const candidate = permute( tt, p );
    if ( candidate.bits() < best.canonical.bits() )
      best = { candidate, p };
  }
  return best;
}

inline std::string to_hex( truth_table const& tt )
{
  static char const* digits = "0123456789abcdef";
  uint32_t const num_digits = tt.num_vars() <= 2u ? 1u : ( 1u << ( tt.num_vars() - 2u ) );
  std::string s( num_digits, '0' );
  for ( uint32_t i = 0u; i < num_digits; ++i )
    s[num_digits - 1u - i] = digits[( tt.bits() >> ( 4u * i ) ) & 0xfu];
  return s;
}

} // namespace qals

template<>
struct std::hash<qals::truth_table>
{
  size_t operator()( qals::truth_table const& tt ) const noexcept
  {
    return std::hash<uint64_t>{}( ( static_cast<uint64_t>( tt.num_vars() ) << 32 ) | tt.bits() );
  }
};
