/*!
  \file mapper.hpp
  \brief Cut-based exact and approximate technology mapping

  Every AND node is matched against the supergate library through its cuts.
  Besides exact matches, approximate candidates come from dropping gates of
  exact supergates (replacing a gate by a wire to one of its inputs or by a
  constant) and from library supergates whose function is close to the cut
  function in Hamming distance. A per-node budget (maximum Hamming distance)
  limits which candidates may be used.

  Selection is delay first, then area flow, then Hamming distance. A
  candidate is only accepted if the estimated error at the node stays within
  the error bound given the choices already made for its fanin cone.
*/

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "aig.hpp"
#include "cuts.hpp"
#include "error_model.hpp"
#include "errors.hpp"
#include "mapped_netlist.hpp"
#include "supergate.hpp"
#include "truth_table.hpp"

namespace qals
{

inline constexpr uint32_t max_mhd = 32u;

struct match_candidate
{
  /*! index into the node's cut list */
  uint32_t cut{ 0u };
  /*! implementation; supergate leaf j is cut leaf j */
  supergate const* gate{ nullptr };
  /*! implemented function over the cut leaves */
  truth_table function;
  uint32_t hd{ 0u };
  /*! position in the node's candidate list, used for deterministic tie-breaking */
  uint32_t id{ 0u };
  double arrival{ 0.0 };
  double area_flow{ 0.0 };

  bool exact() const { return hd == 0u; }
};

struct mapper_params
{
  cut_enumeration_params cuts{};
  /*! gates dropped at most from one exact supergate */
  uint32_t max_drops{ 2u };
  /*! exact supergates per cut used as a source for gate dropping */
  uint32_t drop_sources{ 2u };
  /*! largest Hamming distance of approximate library matches */
  uint32_t approx_scan_limit{ 8u };
  /*! supergates taken per approximately matching function */
  uint32_t approx_per_key{ 1u };
  /*! remove candidates dominated in (Hamming distance, pin delays, area) */
  bool prune{ true };
};

namespace detail
{

/* removes elements unreachable from the root and renumbers the rest */
inline void compact_structure( supergate& sg, std::vector<library_gate> const& gates )
{
  std::vector<uint8_t> live( sg.elements.size(), 0u );
  if ( sg.root.type == sg_ref::kind::element )
    live[sg.root.index] = 1u;
  for ( size_t e = sg.elements.size(); e-- > 0u; )
  {
    if ( !live[e] )
      continue;
    for ( uint32_t p = 0u; p < gates[sg.elements[e].gate].num_inputs(); ++p )
    {
      if ( sg.elements[e].fanins[p].type == sg_ref::kind::element )
        live[sg.elements[e].fanins[p].index] = 1u;
    }
  }
  std::vector<uint8_t> remap( sg.elements.size(), 0u );
  std::vector<sg_element> kept;
  for ( size_t e = 0u; e < sg.elements.size(); ++e )
  {
    if ( !live[e] )
      continue;
    auto el = sg.elements[e];
    for ( uint32_t p = 0u; p < gates[el.gate].num_inputs(); ++p )
    {
      if ( el.fanins[p].type == sg_ref::kind::element )
        el.fanins[p].index = remap[el.fanins[p].index];
    }
    remap[e] = static_cast<uint8_t>( kept.size() );
    kept.push_back( el );
  }
  if ( sg.root.type == sg_ref::kind::element )
    sg.root.index = remap[sg.root.index];
  sg.elements = std::move( kept );
}

/* all structures obtained by replacing one gate with a wire to one of its inputs or a constant */
inline std::vector<supergate> drop_one_gate( supergate const& sg, std::vector<library_gate> const& gates )
{
  std::vector<supergate> variants;
  for ( size_t e = 0u; e < sg.elements.size(); ++e )
  {
    auto const& el = sg.elements[e];
    std::vector<sg_ref> options;
    for ( uint32_t p = 0u; p < gates[el.gate].num_inputs(); ++p )
    {
      if ( std::find( options.begin(), options.end(), el.fanins[p] ) == options.end() )
        options.push_back( el.fanins[p] );
    }
    options.push_back( sg_ref{ sg_ref::kind::const0, 0u } );
    options.push_back( sg_ref{ sg_ref::kind::const1, 0u } );
    sg_ref const self{ sg_ref::kind::element, static_cast<uint8_t>( e ) };
    for ( auto const& r : options )
    {
      supergate v = sg;
      for ( auto& other : v.elements )
      {
        for ( auto& f : other.fanins )
        {
          if ( f == self )
            f = r;
        }
      }
      if ( v.root == self )
        v.root = r;
      compact_structure( v, gates );
      recompute_costs( v, gates, max_cut_size );
      variants.push_back( std::move( v ) );
    }
  }
  return variants;
}

/* true if a is at least as good as b in Hamming distance, every pin delay, and area */
inline bool candidate_dominates( match_candidate const& a, match_candidate const& b )
{
  constexpr double eps = 1e-9;
  if ( a.hd > b.hd || a.gate->area > b.gate->area + eps )
    return false;
  for ( uint32_t j = 0u; j < max_cut_size; ++j )
  {
    double const da = a.gate->pin_delay[j], db = b.gate->pin_delay[j];
    if ( da < 0.0 )
      continue;
    if ( db < 0.0 || da > db + eps )
      return false;
  }
  return true;
}

} // namespace detail

/*! \brief Candidate matches per node, computed once and independent of the budget. */
class match_generator
{
public:
  match_generator( aig_network const& net, cut_sets const& cuts, supergate_library const& lib, mapper_params const& ps = {} )
      : _net( net ), _cuts( cuts ), _lib( lib ), _ps( ps ), _cache( net.size() )
  {
    for ( auto const& [key, entries] : lib.index() )
    {
      (void)entries;
      _keys.emplace_back( key, truth_table( lib.num_vars(), key ).support() );
    }
    std::sort( _keys.begin(), _keys.end() );
  }

  cut_sets const& cuts() const { return _cuts; }

  /*! \brief All candidates of a node (any Hamming distance). */
  std::vector<match_candidate> const& candidates( uint32_t node )
  {
    if ( !_cache[node] )
      _cache[node] = compute( node );
    return *_cache[node];
  }

  /*! \brief Candidates whose Hamming distance is within the budget (clamped to 2^k of the cut). */
  std::vector<match_candidate> generate_matches( uint32_t node, uint32_t mhd )
  {
    std::vector<match_candidate> result;
    for ( auto const& c : candidates( node ) )
    {
      if ( c.hd <= std::min( mhd, _cuts[node][c.cut].function().num_bits() ) )
        result.push_back( c );
    }
    return result;
  }

private:
  std::vector<match_candidate> compute( uint32_t node )
  {
    auto const& gates = _lib.gates();
    std::vector<match_candidate> all;
    bool has_exact = false;
    for ( uint32_t ci = 0u; ci < _cuts[node].size(); ++ci )
    {
      auto const& c = _cuts[node][ci];
      if ( c.is_trivial() )
        continue;
      auto const t = c.function();
      uint32_t const k = c.size();
      std::vector<match_candidate> list;
      auto add = [&]( supergate sg ) {
        auto const f = sg.function.shrink_to( k );
        /* the structure must only read cut leaves */
        for ( uint32_t j = k; j < max_cut_size; ++j )
        {
          if ( sg.pin_delay[j] >= 0.0 )
            return;
        }
        uint32_t const hd = hamming_distance( t, f );
        for ( auto const& o : list )
        {
          if ( o.function == f && o.gate->area == sg.area && o.gate->pin_delay == sg.pin_delay )
            return;
        }
        _arena.push_back( std::move( sg ) );
        list.push_back( match_candidate{ ci, &_arena.back(), f, hd, 0u, 0.0, 0.0 } );
      };

      /* exact matches */
      auto const exact = _lib.lookup( t );
      for ( auto const& m : exact )
        add( rename_leaves( *m.gate, m.placement, gates, max_cut_size ) );
      size_t const num_exact = list.size();
      has_exact |= num_exact > 0u;

      /* gate dropping */
      std::vector<supergate> frontier;
      for ( size_t i = 0u; i < std::min<size_t>( num_exact, _ps.drop_sources ); ++i )
        frontier.push_back( *list[i].gate );
      for ( uint32_t level = 0u; level < _ps.max_drops && !frontier.empty(); ++level )
      {
        std::vector<supergate> next;
        for ( auto const& sg : frontier )
        {
          for ( auto& v : detail::drop_one_gate( sg, gates ) )
          {
            size_t const before = list.size();
            add( v );
            if ( list.size() > before && !v.elements.empty() )
              next.push_back( std::move( v ) );
          }
        }
        if ( _ps.prune )
          prune( list, num_exact );
        /* only continue from variants that survived pruning */
        std::vector<supergate> survivors;
        for ( auto& v : next )
        {
          for ( auto const& o : list )
          {
            if ( o.gate->elements.size() == v.elements.size() && o.gate->function == v.function && o.gate->area == v.area &&
                 o.gate->pin_delay == v.pin_delay )
            {
              survivors.push_back( std::move( v ) );
              break;
            }
          }
        }
        frontier = std::move( survivors );
      }

      /* library supergates close to the cut function */
      scan_library( t, k, add );
      if ( _ps.prune )
        prune( list, num_exact );
      all.insert( all.end(), list.begin(), list.end() );
    }
    if ( !has_exact )
      throw library_incomplete( "no exact supergate for node " + std::to_string( node ) );
    for ( uint32_t i = 0u; i < all.size(); ++i )
      all[i].id = i;
    return all;
  }

  template<typename Add>
  void scan_library( truth_table const& t, uint32_t k, Add&& add )
  {
    uint32_t const n = _lib.num_vars();
    if ( k > n || _ps.approx_scan_limit == 0u )
      return;
    auto const ext = t.extend_to( n );
    /* best (distance, permutation) per canonical key */
    std::unordered_map<uint32_t, std::pair<uint32_t, std::array<uint8_t, max_cut_size>>> best;
    for ( auto const& p : permutations( n ) )
    {
      /* positions k.. carry no variable of t; visit one ordering of them */
      if ( !std::is_sorted( p.begin() + k, p.begin() + n ) )
        continue;
      uint32_t mask = 0u;
      for ( uint32_t i = 0u; i < k; ++i )
        mask |= 1u << p[i];
      uint32_t const tp = permute( ext, p ).bits();
      for ( auto const& [key, support] : _keys )
      {
        if ( support & ~mask )
          continue;
        uint32_t const hd = static_cast<uint32_t>( std::popcount( tp ^ key ) ) >> ( n - k );
        if ( hd == 0u || hd > _ps.approx_scan_limit )
          continue;
        auto it = best.find( key );
        if ( it == best.end() || hd < it->second.first )
          best[key] = { hd, p };
      }
    }
    std::vector<uint32_t> keys;
    for ( auto const& [key, v] : best )
      keys.push_back( key );
    std::sort( keys.begin(), keys.end() );
    for ( auto key : keys )
    {
      auto const& perm = best[key].second;
      std::array<uint8_t, max_cut_size> inverse{};
      for ( uint32_t i = 0u; i < n; ++i )
        inverse[perm[i]] = static_cast<uint8_t>( i );
      auto const& entries = _lib.index().at( key );
      for ( size_t e = 0u; e < std::min<size_t>( entries.size(), _ps.approx_per_key ); ++e )
      {
        std::array<uint8_t, max_cut_size> placement{ 0, 1, 2, 3, 4 };
        for ( uint32_t j = 0u; j < n; ++j )
          placement[j] = inverse[entries[e].to_canonical[j]];
        add( rename_leaves( _lib.supergates()[entries[e].supergate], placement, _lib.gates(), max_cut_size ) );
      }
    }
  }

  /* drops candidates dominated by another candidate of the same cut; exact ones are only compared with each other */
  static void prune( std::vector<match_candidate>& list, size_t num_exact )
  {
    std::vector<match_candidate> kept;
    for ( size_t i = 0u; i < list.size(); ++i )
    {
      bool dominated = false;
      for ( size_t j = 0u; j < list.size() && !dominated; ++j )
      {
        if ( i == j || ( i < num_exact && j >= num_exact ) )
          continue;
        if ( detail::candidate_dominates( list[j], list[i] ) && ( !detail::candidate_dominates( list[i], list[j] ) || j < i ) )
          dominated = true;
      }
      if ( !dominated || i < num_exact )
        kept.push_back( list[i] );
    }
    list = std::move( kept );
  }

  aig_network const& _net;
  cut_sets const& _cuts;
  supergate_library const& _lib;
  mapper_params _ps;
  std::vector<std::pair<uint32_t, uint32_t>> _keys;
  std::deque<supergate> _arena;
  std::vector<std::optional<std::vector<match_candidate>>> _cache;
};

/*! \brief Selection order: arrival, then area flow, then Hamming distance, then id. */
inline bool candidate_less( match_candidate const& a, match_candidate const& b )
{
  constexpr double eps = 1e-9;
  if ( std::abs( a.arrival - b.arrival ) > eps )
    return a.arrival < b.arrival;
  if ( std::abs( a.area_flow - b.area_flow ) > eps )
    return a.area_flow < b.area_flow;
  if ( a.hd != b.hd )
    return a.hd < b.hd;
  return a.id < b.id;
}

/*! \brief Best candidate by (arrival, area flow, Hamming distance, id). */
inline match_candidate const& select_best( std::span<match_candidate const> cands )
{
  if ( cands.empty() )
    throw std::invalid_argument( "select_best: no candidates" );
  return *std::min_element( cands.begin(), cands.end(), candidate_less );
}

struct error_budget
{
  double er_max{ 0.05 };
  /*! maximum Hamming distance per node id; missing entries count as 0 */
  std::vector<uint32_t> mhd;
};

struct mapping_result
{
  mapped_netlist netlist;
  error_profile estimate;
  double area{ 0.0 };
  double delay{ 0.0 };
  /*! estimated maximum output error within the bound */
  bool valid{ false };
};

/*! \brief Mapper for one network; candidate matches are cached across calls with different budgets. */
class approximate_mapper
{
public:
  approximate_mapper( aig_network const& net, supergate_library const& lib, mapper_params const& ps = {} )
      : _net( net ), _lib( lib ), _cuts( enumerate_cuts( net, ps.cuts ) ), _matches( net, _cuts, lib, ps ),
        _fanout( net.fanout_counts() )
  {
  }

  aig_network const& network() const { return _net; }
  supergate_library const& library() const { return _lib; }
  cut_sets const& cuts() const { return _cuts; }
  match_generator& matches() { return _matches; }

  /*! \brief Computes all candidate matches up front (they are otherwise built on first use). */
  void prepare()
  {
    for ( auto n : _net.and_nodes() )
      _matches.candidates( n );
  }

  mapping_result map( error_budget const& budget )
  {
    uint32_t const size = _net.size();
    std::vector<double> arrival( size, 0.0 ), flow( size, 0.0 );
    std::vector<joint_state> state( size, exact_input_state );
    state[0] = { 1.0, 0.0, 0.0, 0.0 };
    std::vector<match_candidate> chosen( size );

    std::vector<match_candidate> pool;
    std::vector<uint32_t> order;
    for ( auto n : _net.and_nodes() )
    {
      uint32_t const mhd = n < budget.mhd.size() ? std::min( budget.mhd[n], max_mhd ) : 0u;
      pool.clear();
      for ( auto const& c : _matches.candidates( n ) )
      {
        auto const& cut = _cuts[n][c.cut];
        if ( c.hd > std::min( mhd, cut.function().num_bits() ) )
          continue;
        auto e = c;
        double t = 0.0, af = e.gate->area;
        for ( uint32_t j = 0u; j < cut.size(); ++j )
        {
          if ( e.gate->pin_delay[j] < 0.0 )
            continue;
          t = std::max( t, arrival[cut.leaf( j )] + e.gate->pin_delay[j] );
          af += flow[cut.leaf( j )];
        }
        e.arrival = t;
        e.area_flow = af / std::max<uint32_t>( 1u, _fanout[n] );
        pool.push_back( e );
      }
      /* best first; accept the first candidate that keeps the node within the bound */
      std::sort( pool.begin(), pool.end(), candidate_less );
      std::optional<size_t> pick;
      double best_error = 2.0;
      size_t fallback = 0u;
      joint_state pick_state{}, fallback_state{};
      for ( size_t i = 0u; i < pool.size(); ++i )
      {
        auto const s = node_state( n, pool[i], state );
        double const err = error_probability( s );
        if ( err <= budget.er_max + 1e-12 )
        {
          pick = i;
          pick_state = s;
          break;
        }
        if ( err < best_error )
        {
          best_error = err;
          fallback = i;
          fallback_state = s;
        }
      }
      auto const idx = pick ? *pick : fallback;
      chosen[n] = pool[idx];
      state[n] = pick ? pick_state : fallback_state;
      arrival[n] = pool[idx].arrival;
      flow[n] = pool[idx].area_flow;
    }

    return extract( chosen, budget.er_max );
  }

private:
  joint_state node_state( uint32_t n, match_candidate const& c, std::vector<joint_state> const& state ) const
  {
    auto const& cut = _cuts[n][c.cut];
    std::array<joint_state, max_cut_size> ins{};
    for ( uint32_t j = 0u; j < cut.size(); ++j )
      ins[j] = state[cut.leaf( j )];
    return propagate_joint( cut.function(), c.function, std::span<joint_state const>( ins.data(), cut.size() ) );
  }

  mapping_result extract( std::vector<match_candidate> const& chosen, double er_max )
  {
    auto const& gates = _lib.gates();
    uint32_t const size = _net.size();

    /* required nodes */
    std::vector<uint8_t> required( size, 0u );
    for ( auto const& po : _net.pos() )
      required[po.driver.node()] = 1u;
    for ( uint32_t n = size; n-- > 0u; )
    {
      if ( !required[n] || !_net.is_and( n ) )
        continue;
      auto const& c = chosen[n];
      auto const& cut = _cuts[n][c.cut];
      for ( uint32_t j = 0u; j < cut.size(); ++j )
        required[cut.leaf( j )] = 1u;
    }

    mapping_result r{ mapped_netlist( gates ), {}, 0.0, 0.0, false };
    auto& mapped = r.netlist;
    mapped.set_name( _net.name() );
    std::vector<uint32_t> net_of( size, std::numeric_limits<uint32_t>::max() );
    for ( uint32_t i = 0u; i < _net.num_pis(); ++i )
      net_of[_net.pi_at( i )] = mapped.create_pi( _net.pi_name( i ) );

    for ( uint32_t n = 0u; n < size; ++n )
    {
      if ( !required[n] || !_net.is_and( n ) )
        continue;
      auto const& c = chosen[n];
      auto const& cut = _cuts[n][c.cut];
      std::vector<uint32_t> leaves;
      for ( uint32_t j = 0u; j < cut.size(); ++j )
        leaves.push_back( net_of[cut.leaf( j )] );
      net_of[n] = instantiate( mapped, *c.gate, leaves );
      mapped.add_match( mapped_match{ n, leaves, net_of[n], cut.function(), c.function } );
    }

    /* outputs */
    std::unordered_map<uint32_t, uint32_t> inverted;
    for ( auto const& po : _net.pos() )
    {
      auto const n = po.driver.node();
      uint32_t net;
      if ( _net.is_constant( n ) )
      {
        net = mapped.create_constant( po.driver.complemented() );
        auto const f = po.driver.complemented() ? truth_table::const1( 0u ) : truth_table::const0( 0u );
        mapped.add_match( mapped_match{ n, {}, net, f, f } );
      }
      else if ( !po.driver.complemented() )
        net = net_of[n];
      else if ( auto it = inverted.find( n ); it != inverted.end() )
        net = it->second;
      else
      {
        auto const inv = _lib.inverter();
        if ( !inv )
          throw library_incomplete( "library has no inverter for complemented outputs" );
        net = mapped.create_cell( *inv, { net_of[n] } );
        auto const f = ~truth_table::nth_var( 1u, 0u );
        mapped.add_match( mapped_match{ n, { net_of[n] }, net, f, f } );
        inverted[n] = net;
      }
      mapped.create_po( net, po.name );
    }

    r.estimate = estimate_po_errors( mapped );
    r.area = mapped.area();
    r.delay = mapped.delay();
    r.valid = r.estimate.max_po_error() <= er_max + 1e-12;
    return r;
  }

  /* emits the cells of a supergate whose leaf j is net leaves[j]; returns the output net */
  static uint32_t instantiate( mapped_netlist& mapped, supergate const& sg, std::vector<uint32_t> const& leaves )
  {
    auto const& gates = mapped.gates();
    std::vector<uint32_t> element_net( sg.elements.size() );
    auto net_of = [&]( sg_ref r ) -> uint32_t {
      switch ( r.type )
      {
      case sg_ref::kind::leaf: return leaves[r.index];
      case sg_ref::kind::element: return element_net[r.index];
      case sg_ref::kind::const0: return mapped.create_constant( false );
      default: return mapped.create_constant( true );
      }
    };
    for ( size_t e = 0u; e < sg.elements.size(); ++e )
    {
      std::vector<uint32_t> ins;
      for ( uint32_t p = 0u; p < gates[sg.elements[e].gate].num_inputs(); ++p )
        ins.push_back( net_of( sg.elements[e].fanins[p] ) );
      element_net[e] = mapped.create_cell( sg.elements[e].gate, ins );
    }
    if ( sg.root.type == sg_ref::kind::leaf )
      return mapped.create_table( truth_table::nth_var( 1u, 0u ), { leaves[sg.root.index] } );
    return net_of( sg.root );
  }

  aig_network const& _net;
  supergate_library const& _lib;
  cut_sets _cuts;
  match_generator _matches;
  std::vector<uint32_t> _fanout;
};

/*! \brief Maps a network under an error budget; throws `mapping_invalid` if the estimated bound is violated. */
inline mapped_netlist map_network( aig_network const& net, supergate_library const& lib, error_budget const& budget,
                                   mapper_params const& ps = {} )
{
  approximate_mapper mapper( net, lib, ps );
  auto r = mapper.map( budget );
  if ( !r.valid )
    throw mapping_invalid( r.estimate.max_po_error(), budget.er_max );
  return std::move( r.netlist );
}

/*! \brief Exact mapping (all budgets zero). */
inline mapped_netlist map_exact( aig_network const& net, supergate_library const& lib, mapper_params const& ps = {} )
{
  return map_network( net, lib, error_budget{ 0.0, {} }, ps );
}

} // namespace qals
