/*!
  \file supergate.hpp
  \brief Single-output supergates composed from library gates

  A supergate is a tree of library gates over at most five leaf variables.
  The library indexes supergates by the permutation-canonical form of their
  function; complemented variants come from composing inverters.

  Depth counts gate levels, with one exception: an inverter placed on the
  output of a non-leaf child of a composed gate is free. Single gates over
  leaves form depth 1.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <bit>
#include <functional>
#include <iomanip>
#include <optional>
#include <span>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "genlib.hpp"
#include "truth_table.hpp"

namespace qals
{

/*! \brief Reference to a supergate input: a leaf variable, an element, or a constant. */
struct sg_ref
{
  enum class kind : uint8_t
  {
    leaf,
    element,
    const0,
    const1
  };
  kind type{ kind::leaf };
  uint8_t index{ 0u };

  friend bool operator==( sg_ref const&, sg_ref const& ) = default;
};

struct sg_element
{
  uint32_t gate{ 0u };
  std::array<sg_ref, max_cut_size> fanins{};
};

inline constexpr double no_path = -1.0;

struct supergate
{
  uint32_t id{ 0u };
  /*! gate instances, every element after its fanin elements */
  std::vector<sg_element> elements;
  sg_ref root{};
  truth_table function;
  double area{ 0.0 };
  /*! leaf-to-output delay per leaf variable, `no_path` when the leaf is unused */
  std::array<double, max_cut_size> pin_delay{ no_path, no_path, no_path, no_path, no_path };
  double max_delay{ 0.0 };
  uint32_t depth{ 0u };

  uint32_t num_gates() const { return static_cast<uint32_t>( elements.size() ); }
  bool is_wire() const { return elements.empty() && root.type == sg_ref::kind::leaf; }
  bool is_constant() const { return root.type == sg_ref::kind::const0 || root.type == sg_ref::kind::const1; }
};

/*! \brief Truth table of the gate tree over `num_vars` leaves. */
inline truth_table evaluate_structure( std::vector<sg_element> const& elements, sg_ref root,
                                       std::vector<library_gate> const& gates, uint32_t num_vars )
{
  std::vector<truth_table> values( elements.size() );
  auto value_of = [&]( sg_ref r ) {
    switch ( r.type )
    {
    case sg_ref::kind::leaf: return truth_table::nth_var( num_vars, r.index );
    case sg_ref::kind::element: return values[r.index];
    case sg_ref::kind::const0: return truth_table::const0( num_vars );
    default: return truth_table::const1( num_vars );
    }
  };
  for ( size_t e = 0u; e < elements.size(); ++e )
  {
    auto const& g = gates[elements[e].gate];
    std::array<truth_table, max_cut_size> ins{};
    for ( uint32_t p = 0u; p < g.num_inputs(); ++p )
      ins[p] = value_of( elements[e].fanins[p] );
    values[e] = compose( g.function, std::span<truth_table const>( ins.data(), g.num_inputs() ), num_vars );
  }
  return value_of( root );
}

/*! \brief Fills function, area, pin delays, and max delay from the structure. */
inline void recompute_costs( supergate& sg, std::vector<library_gate> const& gates, uint32_t num_vars )
{
  /* only elements reachable from the root count */
  std::vector<uint8_t> live( sg.elements.size(), 0u );
  if ( sg.root.type == sg_ref::kind::element )
    live[sg.root.index] = 1u;
  for ( size_t e = sg.elements.size(); e-- > 0u; )
  {
    if ( !live[e] )
      continue;
    auto const& g = gates[sg.elements[e].gate];
    for ( uint32_t p = 0u; p < g.num_inputs(); ++p )
    {
      if ( sg.elements[e].fanins[p].type == sg_ref::kind::element )
        live[sg.elements[e].fanins[p].index] = 1u;
    }
  }

  std::vector<std::array<double, max_cut_size>> delay( sg.elements.size() );
  sg.area = 0.0;
  for ( size_t e = 0u; e < sg.elements.size(); ++e )
  {
    delay[e].fill( no_path );
    if ( !live[e] )
      continue;
    auto const& g = gates[sg.elements[e].gate];
    sg.area += g.area;
    for ( uint32_t p = 0u; p < g.num_inputs(); ++p )
    {
      auto const r = sg.elements[e].fanins[p];
      if ( r.type == sg_ref::kind::leaf )
        delay[e][r.index] = std::max( delay[e][r.index], g.pin_delay[p] );
      else if ( r.type == sg_ref::kind::element )
      {
        for ( uint32_t v = 0u; v < max_cut_size; ++v )
        {
          if ( delay[r.index][v] >= 0.0 )
            delay[e][v] = std::max( delay[e][v], delay[r.index][v] + g.pin_delay[p] );
        }
      }
    }
  }
  sg.pin_delay.fill( no_path );
  if ( sg.root.type == sg_ref::kind::leaf )
    sg.pin_delay[sg.root.index] = 0.0;
  else if ( sg.root.type == sg_ref::kind::element )
    sg.pin_delay = delay[sg.root.index];
  sg.max_delay = 0.0;
  for ( auto d : sg.pin_delay )
    sg.max_delay = std::max( sg.max_delay, d );
  sg.function = evaluate_structure( sg.elements, sg.root, gates, num_vars );
}

/*! \brief Copy of the supergate with leaf variable j renamed to placement[j]. */
inline supergate rename_leaves( supergate const& sg, std::array<uint8_t, max_cut_size> const& placement,
                                std::vector<library_gate> const& gates, uint32_t num_vars )
{
  supergate r = sg;
  for ( auto& e : r.elements )
  {
    for ( auto& f : e.fanins )
    {
      if ( f.type == sg_ref::kind::leaf )
        f.index = placement[f.index];
    }
  }
  if ( r.root.type == sg_ref::kind::leaf )
    r.root.index = placement[r.root.index];
  recompute_costs( r, gates, num_vars );
  return r;
}

struct supergate_bounds
{
  /*! maximum gate levels */
  uint32_t max_depth{ 3u };
  /*! maximum total area of a supergate */
  double max_area{ 12.0 };
  /*! candidates kept per function */
  uint32_t max_per_key{ 8u };
  /*! leaves of the generated supergates */
  uint32_t num_vars{ max_cut_size };
  /*! fanin limit for the root gate of composed (depth >= 2) supergates */
  uint32_t max_composed_fanin{ 2u };
  /*! compositions evaluated per level before generation of that level stops */
  uint64_t max_compositions{ 6'000'000u };
};

struct supergate_match
{
  supergate const* gate;
  /*! supergate leaf j connects to cut leaf placement[j] */
  std::array<uint8_t, max_cut_size> placement;
};

class supergate_library
{
public:
  struct entry
  {
    uint32_t supergate;
    /*! supergate variable j is canonical variable to_canonical[j] */
    std::array<uint8_t, max_cut_size> to_canonical;
  };

  supergate_library() = default;

  std::vector<library_gate> const& gates() const { return _gates; }
  std::vector<supergate> const& supergates() const { return _supergates; }
  supergate_bounds const& bounds() const { return _bounds; }
  uint32_t num_vars() const { return _bounds.num_vars; }

  /*! \brief Number of distinct canonical function keys. */
  size_t num_keys() const { return _index.size(); }

  std::unordered_map<uint32_t, std::vector<entry>> const& index() const { return _index; }

  /*! \brief Exact matches for a function over at most `num_vars()` variables, sorted by (delay, area). */
  std::vector<supergate_match> lookup( truth_table const& tt ) const
  {
    std::vector<supergate_match> result;
    if ( tt.num_vars() > num_vars() )
      return result;
    auto const canon = p_canonize( tt.extend_to( num_vars() ) );
    auto it = _index.find( canon.canonical.bits() );
    if ( it == _index.end() )
      return result;
    std::array<uint8_t, max_cut_size> from_canonical{ 0, 1, 2, 3, 4 };
    for ( uint32_t v = 0u; v < num_vars(); ++v )
      from_canonical[canon.perm[v]] = static_cast<uint8_t>( v );
    for ( auto const& e : it->second )
    {
      supergate_match m{ &_supergates[e.supergate], { 0, 1, 2, 3, 4 } };
      for ( uint32_t j = 0u; j < num_vars(); ++j )
        m.placement[j] = from_canonical[e.to_canonical[j]];
      result.push_back( m );
    }
    return result;
  }

  /*! \brief Cheapest inverter gate (by delay, then area). */
  std::optional<uint32_t> inverter() const { return _inverter; }
  std::optional<uint32_t> constant_gate( bool value ) const { return value ? _const1 : _const0; }

  /*! \brief Canonical index key of a stored supergate function. */
  static uint32_t key_of( truth_table const& tt ) { return p_canonize( tt ).canonical.bits(); }

  /* construction helpers, used by build_supergates and the cache reader */
  void set_gates( std::vector<library_gate> gates )
  {
    _gates = std::move( gates );
    _inverter.reset();
    _const0.reset();
    _const1.reset();
    for ( uint32_t g = 0u; g < _gates.size(); ++g )
    {
      auto const& gate = _gates[g];
      if ( gate.is_inverter() &&
           ( !_inverter || std::pair( gate.max_delay(), gate.area ) < std::pair( _gates[*_inverter].max_delay(), _gates[*_inverter].area ) ) )
        _inverter = g;
      if ( gate.is_constant() && gate.function.is_const0() && ( !_const0 || gate.area < _gates[*_const0].area ) )
        _const0 = g;
      if ( gate.is_constant() && gate.function.is_const1() && ( !_const1 || gate.area < _gates[*_const1].area ) )
        _const1 = g;
    }
  }
  void set_bounds( supergate_bounds const& b ) { _bounds = b; }

  /*! \brief Adds a supergate to the index if it is not dominated on (delay, area). */
  bool insert( supergate sg )
  {
    auto const canon = p_canonize( sg.function );
    auto& list = _index[canon.canonical.bits()];
    for ( auto const& e : list )
    {
      auto const& other = _supergates[e.supergate];
      if ( other.max_delay <= sg.max_delay + 1e-12 && other.area <= sg.area + 1e-12 )
        return false;
    }
    std::erase_if( list, [&]( entry const& e ) {
      auto const& other = _supergates[e.supergate];
      return sg.max_delay <= other.max_delay + 1e-12 && sg.area <= other.area + 1e-12;
    } );
    sg.id = static_cast<uint32_t>( _supergates.size() );
    entry const en{ sg.id, canon.perm };
    _supergates.push_back( std::move( sg ) );
    auto pos = std::upper_bound( list.begin(), list.end(), en, [&]( entry const& a, entry const& b ) {
      auto const& x = _supergates[a.supergate];
      auto const& y = _supergates[b.supergate];
      return std::pair( x.max_delay, x.area ) < std::pair( y.max_delay, y.area );
    } );
    list.insert( pos, en );
    if ( list.size() > _bounds.max_per_key )
      list.pop_back();
    return true;
  }

  /*! \brief Drops supergates no longer referenced by the index and renumbers the rest. */
  void compact()
  {
    std::vector<uint32_t> remap( _supergates.size(), ~0u );
    std::vector<supergate> kept;
    std::vector<uint32_t> keys;
    for ( auto const& [key, list] : _index )
      keys.push_back( key );
    std::sort( keys.begin(), keys.end() );
    for ( auto key : keys )
    {
      for ( auto& e : _index[key] )
      {
        if ( remap[e.supergate] == ~0u )
        {
          remap[e.supergate] = static_cast<uint32_t>( kept.size() );
          kept.push_back( std::move( _supergates[e.supergate] ) );
          kept.back().id = remap[e.supergate];
        }
        e.supergate = remap[e.supergate];
      }
    }
    _supergates = std::move( kept );
  }

private:
  std::vector<library_gate> _gates;
  std::vector<supergate> _supergates;
  std::unordered_map<uint32_t, std::vector<entry>> _index;
  supergate_bounds _bounds;
  std::optional<uint32_t> _inverter, _const0, _const1;
};

namespace detail
{

/* generation pool: a DAG of candidate supergates over `num_vars` leaves */
struct pool_entry
{
  truth_table function;
  double area{ 0.0 };
  std::array<double, max_cut_size> delay{ no_path, no_path, no_path, no_path, no_path };
  double max_delay{ 0.0 };
  uint32_t depth{ 0u };
  uint32_t gate{ ~0u }; /* ~0u marks a leaf */
  uint32_t num_fanins{ 0u };
  std::array<uint32_t, max_cut_size> children{};
  uint32_t leaf_mask{ 0u };
};

class supergate_generator
{
public:
  supergate_generator( std::vector<library_gate> const& gates, supergate_bounds const& bounds )
      : _gates( gates ), _bounds( bounds )
  {
  }

  supergate_library run()
  {
    supergate_library lib;
    lib.set_bounds( _bounds );
    lib.set_gates( _gates );
    uint32_t const k = _bounds.num_vars;

    select_gates();

    for ( uint32_t v = 0u; v < k; ++v )
    {
      pool_entry leaf;
      leaf.function = truth_table::nth_var( k, v );
      leaf.delay[v] = 0.0;
      leaf.leaf_mask = 1u << v;
      _pool.push_back( leaf );
    }

    /* depth 1: single gates over distinct leaves */
    for ( auto g : _gate_choice )
    {
      auto const& gate = _gates[g];
      uint32_t const n = gate.num_inputs();
      std::array<uint32_t, max_cut_size> pins{};
      enumerate_injective( n, k, 0u, pins, [&]() {
        std::array<uint32_t, max_cut_size> children{};
        for ( uint32_t p = 0u; p < n; ++p )
          children[p] = pins[p];
        try_add( g, children, 1u );
      } );
    }

    for ( uint32_t level = 2u; level <= _bounds.max_depth; ++level )
      compose_level( level );

    /* index */
    for ( auto const& [key, ids] : _best )
    {
      (void)key;
      for ( auto id : ids )
        lib.insert( materialize( id ) );
    }

    /* wire and constants */
    supergate wire;
    wire.root = sg_ref{ sg_ref::kind::leaf, 0u };
    recompute_costs( wire, _gates, k );
    lib.insert( wire );
    for ( bool value : { false, true } )
    {
      if ( auto g = lib.constant_gate( value ) )
      {
        supergate c;
        c.elements.push_back( sg_element{ *g, {} } );
        c.root = sg_ref{ sg_ref::kind::element, 0u };
        c.depth = 1u;
        recompute_costs( c, _gates, k );
        lib.insert( c );
      }
    }
    lib.compact();
    if ( lib.supergates().empty() )
      throw library_error( "supergate generation produced no supergates" );
    return lib;
  }

private:
  /* one gate per distinct function, keeping the non-dominated cells */
  void select_gates()
  {
    for ( uint32_t g = 0u; g < _gates.size(); ++g )
    {
      auto const& gate = _gates[g];
      if ( gate.is_constant() || gate.is_buffer() || gate.num_inputs() > _bounds.num_vars )
        continue;
      bool dominated = false;
      for ( auto h : _gate_choice )
      {
        auto const& other = _gates[h];
        if ( other.function == gate.function && other.pin_delay == gate.pin_delay && other.area <= gate.area )
          dominated = true;
        if ( other.function == gate.function && other.area <= gate.area && other.max_delay() <= gate.max_delay() &&
             std::equal( other.pin_delay.begin(), other.pin_delay.end(), gate.pin_delay.begin(),
                         []( double a, double b ) { return a <= b; } ) )
          dominated = true;
      }
      if ( dominated )
        continue;
      std::erase_if( _gate_choice, [&]( uint32_t h ) {
        auto const& other = _gates[h];
        return other.function == gate.function && gate.area <= other.area &&
               std::equal( gate.pin_delay.begin(), gate.pin_delay.end(), other.pin_delay.begin(),
                           []( double a, double b ) { return a <= b; } );
      } );
      _gate_choice.push_back( g );
      if ( gate.is_inverter() && ( !_inverter || std::pair( gate.max_delay(), gate.area ) < std::pair( _gates[*_inverter].max_delay(), _gates[*_inverter].area ) ) )
        _inverter = g;
    }
    std::sort( _gate_choice.begin(), _gate_choice.end() );
  }

  template<typename Fn>
  static void enumerate_injective( uint32_t n, uint32_t k, uint32_t pos, std::array<uint32_t, max_cut_size>& pins, Fn&& fn )
  {
    if ( pos == n )
    {
      fn();
      return;
    }
    for ( uint32_t v = 0u; v < k; ++v )
    {
      bool used = false;
      for ( uint32_t p = 0u; p < pos; ++p )
        used |= pins[p] == v;
      if ( used )
        continue;
      pins[pos] = v;
      enumerate_injective( n, k, pos + 1u, pins, fn );
    }
  }

  /* builds the pool entry for `gate` over `children`; inserts it into the per-function front */
  std::optional<uint32_t> try_add( uint32_t g, std::array<uint32_t, max_cut_size> const& children, uint32_t depth )
  {
    auto const& gate = _gates[g];
    uint32_t const k = _bounds.num_vars;
    pool_entry e;
    e.gate = g;
    e.num_fanins = gate.num_inputs();
    e.children = children;
    e.depth = depth;
    e.area = gate.area;
    std::array<truth_table, max_cut_size> ins{};
    for ( uint32_t p = 0u; p < gate.num_inputs(); ++p )
    {
      auto const& c = _pool[children[p]];
      e.area += c.area;
      ins[p] = c.function;
      e.leaf_mask |= c.leaf_mask;
      for ( uint32_t v = 0u; v < k; ++v )
      {
        if ( c.delay[v] >= 0.0 )
          e.delay[v] = std::max( e.delay[v], c.delay[v] + gate.pin_delay[p] );
      }
    }
    if ( e.area > _bounds.max_area + 1e-9 )
      return std::nullopt;
    e.function = compose( gate.function, std::span<truth_table const>( ins.data(), gate.num_inputs() ), k );
    /* structure must not carry leaves the function ignores */
    if ( e.function.support() != e.leaf_mask )
      return std::nullopt;
    e.max_delay = 0.0;
    for ( auto d : e.delay )
      e.max_delay = std::max( e.max_delay, d );

    auto& front = _best[e.function.bits()];
    for ( auto id : front )
    {
      if ( _pool[id].max_delay <= e.max_delay + 1e-12 && _pool[id].area <= e.area + 1e-12 )
        return std::nullopt;
    }
    std::erase_if( front, [&]( uint32_t id ) {
      return e.max_delay <= _pool[id].max_delay + 1e-12 && e.area <= _pool[id].area + 1e-12;
    } );
    uint32_t const id = static_cast<uint32_t>( _pool.size() );
    _pool.push_back( e );
    auto pos = std::upper_bound( front.begin(), front.end(), id, [&]( uint32_t a, uint32_t b ) {
      return std::pair( _pool[a].max_delay, _pool[a].area ) < std::pair( _pool[b].max_delay, _pool[b].area );
    } );
    front.insert( pos, id );
    if ( front.size() > _bounds.max_per_key )
      front.pop_back();
    return id;
  }

  std::vector<uint32_t> kept_entries( uint32_t min_depth, uint32_t max_depth ) const
  {
    std::vector<uint32_t> ids;
    for ( auto const& [key, front] : _best )
    {
      (void)key;
      for ( auto id : front )
      {
        if ( _pool[id].depth >= min_depth && _pool[id].depth <= max_depth )
          ids.push_back( id );
      }
    }
    std::sort( ids.begin(), ids.end() );
    return ids;
  }

  void compose_level( uint32_t level )
  {
    uint32_t const k = _bounds.num_vars;
    /* children: leaves, kept entries of lower depth, and free inversions of non-leaf ones */
    std::vector<uint32_t> children;
    for ( uint32_t v = 0u; v < k; ++v )
      children.push_back( v );
    auto const lower = kept_entries( 1u, level - 1u );
    for ( auto id : lower )
    {
      if ( _pool[id].function.is_const0() || _pool[id].function.is_const1() )
        continue;
      children.push_back( id );
    }
    if ( _inverter )
    {
      for ( auto id : lower )
      {
        if ( _gates[_pool[id].gate].is_inverter() )
          continue;
        if ( auto inv = add_inversion( id, _pool[id].depth ) )
          children.push_back( *inv );
      }
      /* root inversion of the previous level counts as a new level */
      for ( auto id : lower )
      {
        if ( _pool[id].depth == level - 1u && !_gates[_pool[id].gate].is_inverter() )
          add_inversion( id, level, true );
      }
    }
    std::sort( children.begin(), children.end(), [&]( uint32_t a, uint32_t b ) {
      return std::pair( _pool[a].area, a ) < std::pair( _pool[b].area, b );
    } );

    uint64_t work = 0u;
    for ( auto g : _gate_choice )
    {
      auto const& gate = _gates[g];
      uint32_t const n = gate.num_inputs();
      if ( gate.is_inverter() || n < 2u || n > _bounds.max_composed_fanin )
        continue;
      std::array<uint32_t, max_cut_size> chosen{};
      enumerate_children( g, n, 0u, 0u, gate.area, false, level, children, chosen, work );
      if ( work >= _bounds.max_compositions )
        break;
    }
  }

  std::optional<uint32_t> add_inversion( uint32_t id, uint32_t depth, bool insert_front = false )
  {
    auto const g = *_inverter;
    if ( insert_front )
    {
      std::array<uint32_t, max_cut_size> ch{ id };
      return try_add( g, ch, depth );
    }
    /* a child-only entry, kept out of the per-function fronts */
    auto const& gate = _gates[g];
    pool_entry e = _pool[id];
    e.gate = g;
    e.num_fanins = 1u;
    e.children = { id };
    e.area += gate.area;
    e.function = ~e.function;
    for ( auto& d : e.delay )
    {
      if ( d >= 0.0 )
        d += gate.pin_delay[0];
    }
    e.max_delay += gate.pin_delay[0];
    if ( e.area > _bounds.max_area + 1e-9 )
      return std::nullopt;
    _pool.push_back( e );
    return static_cast<uint32_t>( _pool.size() - 1u );
  }

  bool symmetric_pins( uint32_t g, uint32_t a, uint32_t b ) const
  {
    auto const& gate = _gates[g];
    if ( gate.pin_delay[a] != gate.pin_delay[b] )
      return false;
    std::array<uint8_t, max_cut_size> swap{ 0, 1, 2, 3, 4 };
    std::swap( swap[a], swap[b] );
    return permute( gate.function, swap ) == gate.function;
  }

  void enumerate_children( uint32_t g, uint32_t n, uint32_t pos, size_t start, double area, bool has_deep,
                           uint32_t level, std::vector<uint32_t> const& children,
                           std::array<uint32_t, max_cut_size>& chosen, uint64_t& work )
  {
    if ( work >= _bounds.max_compositions )
      return;
    if ( pos == n )
    {
      if ( !has_deep )
        return;
      ++work;
      try_add( g, chosen, level );
      return;
    }
    bool const sym = pos > 0u && symmetric_pins( g, pos - 1u, pos );
    for ( size_t i = sym ? start : 0u; i < children.size(); ++i )
    {
      uint32_t const c = children[i];
      auto const& ce = _pool[c];
      if ( area + ce.area > _bounds.max_area + 1e-9 )
        break;
      bool duplicate = false;
      for ( uint32_t p = 0u; p < pos && p < chosen.size(); ++p )
        duplicate |= chosen[p] == c;
      if ( duplicate )
        continue;
      chosen[pos] = c;
      enumerate_children( g, n, pos + 1u, i + 1u, area + ce.area, has_deep || ce.depth == level - 1u, level, children,
                          chosen, work );
      if ( work >= _bounds.max_compositions )
        return;
    }
  }

  supergate materialize( uint32_t id ) const
  {
    supergate sg;
    sg.depth = _pool[id].depth;
    std::function<sg_ref( uint32_t )> build = [&]( uint32_t pid ) -> sg_ref {
      auto const& e = _pool[pid];
      if ( e.gate == ~0u )
        return sg_ref{ sg_ref::kind::leaf, static_cast<uint8_t>( std::countr_zero( e.leaf_mask ) ) };
      sg_element el;
      el.gate = e.gate;
      for ( uint32_t p = 0u; p < e.num_fanins; ++p )
        el.fanins[p] = build( e.children[p] );
      sg.elements.push_back( el );
      return sg_ref{ sg_ref::kind::element, static_cast<uint8_t>( sg.elements.size() - 1u ) };
    };
    sg.root = build( id );
    recompute_costs( sg, _gates, _bounds.num_vars );
    return sg;
  }

  std::vector<library_gate> const& _gates;
  supergate_bounds _bounds;
  std::vector<uint32_t> _gate_choice;
  std::optional<uint32_t> _inverter;
  std::vector<pool_entry> _pool;
  std::unordered_map<uint32_t, std::vector<uint32_t>> _best;
};

} // namespace detail

/*! \brief Builds the supergate library for the given gates. */
inline supergate_library build_supergates( std::vector<library_gate> const& gates, supergate_bounds const& bounds = {} )
{
  if ( gates.empty() )
    throw library_error( "empty gate list" );
  if ( bounds.num_vars == 0u || bounds.num_vars > max_cut_size )
    throw library_error( "supergate leaf count must be between 1 and 5" );
  if ( bounds.max_depth == 0u )
    throw library_error( "supergate depth bound must be positive" );
  detail::supergate_generator gen( gates, bounds );
  return gen.run();
}

/*! \brief Text serialization of a supergate library (versioned, checked against the gates on load). */
inline std::string write_supergate_cache( supergate_library const& lib, uint64_t fingerprint )
{
  std::ostringstream os;
  os << std::setprecision( 17 );
  auto const& b = lib.bounds();
  os << "qals-supergates 1\n";
  os << "fingerprint " << std::hex << fingerprint << std::dec << '\n';
  os << "bounds " << b.max_depth << ' ' << b.max_area << ' ' << b.max_per_key << ' ' << b.num_vars << ' '
     << b.max_composed_fanin << ' ' << b.max_compositions << '\n';
  os << "supergates " << lib.supergates().size() << '\n';
  auto ref = [&]( sg_ref r ) {
    switch ( r.type )
    {
    case sg_ref::kind::leaf: return "l" + std::to_string( r.index );
    case sg_ref::kind::element: return "e" + std::to_string( r.index );
    case sg_ref::kind::const0: return std::string( "c0" );
    default: return std::string( "c1" );
    }
  };
  for ( auto const& sg : lib.supergates() )
  {
    os << sg.depth << ' ' << ref( sg.root ) << ' ' << sg.elements.size();
    for ( auto const& e : sg.elements )
    {
      os << ' ' << e.gate;
      for ( uint32_t p = 0u; p < lib.gates()[e.gate].num_inputs(); ++p )
        os << ' ' << ref( e.fanins[p] );
    }
    os << '\n';
  }
  return os.str();
}

inline supergate_library read_supergate_cache( std::string_view text, std::vector<library_gate> const& gates, uint64_t fingerprint )
{
  std::istringstream is{ std::string( text ) };
  std::string word;
  uint32_t version = 0u;
  if ( !( is >> word >> version ) || word != "qals-supergates" || version != 1u )
    throw parse_error( 1u, "not a supergate cache (version 1)" );
  uint64_t fp = 0u;
  if ( !( is >> word >> std::hex >> fp >> std::dec ) || word != "fingerprint" )
    throw parse_error( 2u, "missing fingerprint" );
  if ( fp != fingerprint )
    throw library_error( "supergate cache was built for a different library" );
  supergate_bounds b;
  if ( !( is >> word >> b.max_depth >> b.max_area >> b.max_per_key >> b.num_vars >> b.max_composed_fanin >> b.max_compositions ) ||
       word != "bounds" )
    throw parse_error( 3u, "missing bounds" );
  size_t count = 0u;
  if ( !( is >> word >> count ) || word != "supergates" )
    throw parse_error( 4u, "missing supergate count" );

  supergate_library lib;
  lib.set_bounds( b );
  lib.set_gates( gates );
  auto parse_ref = [&]( std::string const& s, uint32_t line ) {
    if ( s == "c0" )
      return sg_ref{ sg_ref::kind::const0, 0u };
    if ( s == "c1" )
      return sg_ref{ sg_ref::kind::const1, 0u };
    if ( s.size() < 2u || ( s[0] != 'l' && s[0] != 'e' ) )
      throw parse_error( line, "bad reference '" + s + "'" );
    return sg_ref{ s[0] == 'l' ? sg_ref::kind::leaf : sg_ref::kind::element, static_cast<uint8_t>( std::stoul( s.substr( 1 ) ) ) };
  };
  for ( size_t i = 0u; i < count; ++i )
  {
    uint32_t const line = static_cast<uint32_t>( 5u + i );
    supergate sg;
    std::string root;
    size_t num_elements = 0u;
    if ( !( is >> sg.depth >> root >> num_elements ) )
      throw parse_error( line, "truncated supergate record" );
    sg.root = parse_ref( root, line );
    for ( size_t e = 0u; e < num_elements; ++e )
    {
      sg_element el;
      if ( !( is >> el.gate ) || el.gate >= gates.size() )
        throw parse_error( line, "bad gate index" );
      for ( uint32_t p = 0u; p < gates[el.gate].num_inputs(); ++p )
      {
        std::string r;
        if ( !( is >> r ) )
          throw parse_error( line, "truncated supergate record" );
        el.fanins[p] = parse_ref( r, line );
        if ( el.fanins[p].type == sg_ref::kind::element && el.fanins[p].index >= e )
          throw parse_error( line, "element references a later element" );
        if ( el.fanins[p].type == sg_ref::kind::leaf && el.fanins[p].index >= b.num_vars )
          throw parse_error( line, "leaf index out of range" );
      }
      sg.elements.push_back( el );
    }
    recompute_costs( sg, gates, b.num_vars );
    lib.insert( std::move( sg ) );
  }
  lib.compact();
  return lib;
}

} // namespace qals
