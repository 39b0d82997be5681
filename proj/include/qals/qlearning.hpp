/*!
  \file qlearning.hpp
  \brief Q-learning of per-node Hamming-distance budgets

  States are the AND nodes of a network in topological order, actions are
  budgets 0..32. One episode assigns a budget to every node, maps the
  network, and updates every visited (state, action) pair with the reward of
  the whole mapping. A polynomial over the normalized node position,
  fitted to the learned budgets, transfers to unseen networks.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aig.hpp"
#include "mapped_netlist.hpp"
#include "mapper.hpp"
#include "supergate.hpp"

namespace qals
{

inline constexpr uint32_t num_mhd_actions = max_mhd + 1u;

class q_matrix
{
public:
  q_matrix() = default;
  q_matrix( uint32_t rows, uint32_t cols = num_mhd_actions ) : _rows( rows ), _cols( cols ), _values( size_t{ rows } * cols, 0.0 ) {}

  uint32_t rows() const { return _rows; }
  uint32_t cols() const { return _cols; }

  double& at( uint32_t s, uint32_t a ) { return _values[size_t{ s } * _cols + a]; }
  double at( uint32_t s, uint32_t a ) const { return _values[size_t{ s } * _cols + a]; }

  double row_max( uint32_t s ) const
  {
    auto const begin = _values.begin() + static_cast<std::ptrdiff_t>( size_t{ s } * _cols );
    return *std::max_element( begin, begin + _cols );
  }

  /*! \brief Column of the row maximum, ties toward the smaller column. */
  uint32_t row_argmax( uint32_t s ) const
  {
    uint32_t best = 0u;
    for ( uint32_t a = 1u; a < _cols; ++a )
    {
      if ( at( s, a ) > at( s, best ) )
        best = a;
    }
    return best;
  }

  std::vector<double> const& values() const { return _values; }

private:
  uint32_t _rows{ 0u };
  uint32_t _cols{ num_mhd_actions };
  std::vector<double> _values;
};

struct hyperparams
{
  double alpha{ 0.1 };
  double gamma{ 0.9 };
  uint32_t episodes{ 500u };
  double epsilon_start{ 0.9 };
  double epsilon_end{ 0.05 };
  double w_delay{ 0.5 };
  double w_area{ 0.5 };
  double invalid_penalty{ -1.0 };
  /*! degree of the budget polynomial */
  uint32_t degree{ 4u };
};

/*! \brief Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')); no future term without a successor. */
inline void q_update( q_matrix& q, uint32_t s, uint32_t a, double r, std::optional<uint32_t> s_next, hyperparams const& hp )
{
  if ( s >= q.rows() || a >= q.cols() || ( s_next && *s_next >= q.rows() ) )
    throw std::out_of_range( "q_update: state or action out of range" );
  double const future = s_next ? q.row_max( *s_next ) : 0.0;
  q.at( s, a ) = ( 1.0 - hp.alpha ) * q.at( s, a ) + hp.alpha * ( r + hp.gamma * future );
}

/*! \brief Weighted relative delay and area savings; the invalid penalty for invalid mappings. */
inline double compute_reward( cover_cost const& reference, cover_cost const& approx, bool valid, hyperparams const& hp )
{
  if ( !valid )
    return hp.invalid_penalty;
  double r = 0.0;
  if ( reference.delay > 0.0 )
    r += hp.w_delay * ( reference.delay - approx.delay ) / reference.delay;
  if ( reference.area > 0.0 )
    r += hp.w_area * ( reference.area - approx.area ) / reference.area;
  return r;
}

/*! \brief Best budget per state (ties toward the smaller budget). */
inline std::vector<uint32_t> argmax_mhd( q_matrix const& q )
{
  std::vector<uint32_t> best( q.rows() );
  for ( uint32_t s = 0u; s < q.rows(); ++s )
    best[s] = q.row_argmax( s );
  return best;
}

/*! \brief Polynomial in the normalized node position t in [0, 1]. */
struct mhd_predictor
{
  uint32_t degree{ 0u };
  /*! coefficient i multiplies t^i */
  std::vector<double> coefficients;

  double evaluate( double t ) const
  {
    double r = 0.0;
    for ( size_t i = coefficients.size(); i-- > 0u; )
      r = r * t + coefficients[i];
    return r;
  }

  uint32_t predict( double t ) const
  {
    double const v = std::round( evaluate( t ) );
    if ( !( v > 0.0 ) )
      return 0u;
    return v >= static_cast<double>( max_mhd ) ? max_mhd : static_cast<uint32_t>( v );
  }
};

/*! \brief Least-squares polynomial fit (minimum-norm solution when underdetermined). */
inline mhd_predictor fit_polynomial( std::span<double const> t, std::span<double const> y, uint32_t degree )
{
  if ( t.size() != y.size() || t.empty() )
    throw std::invalid_argument( "fit_polynomial: need matching, nonempty samples" );
  Eigen::MatrixXd a( t.size(), degree + 1u );
  Eigen::VectorXd b( y.size() );
  for ( size_t i = 0u; i < t.size(); ++i )
  {
    double p = 1.0;
    for ( uint32_t d = 0u; d <= degree; ++d )
    {
      a( static_cast<Eigen::Index>( i ), d ) = p;
      p *= t[i];
    }
    b( static_cast<Eigen::Index>( i ) ) = y[i];
  }
  Eigen::VectorXd const x = a.completeOrthogonalDecomposition().solve( b );
  mhd_predictor p{ degree, std::vector<double>( x.data(), x.data() + x.size() ) };
  return p;
}

/*! \brief Normalized position of the i-th of n states. */
inline double node_position( uint32_t i, uint32_t n ) { return n <= 1u ? 0.0 : static_cast<double>( i ) / static_cast<double>( n - 1u ); }

/*! \brief Fits the predictor to per-state budgets. */
inline mhd_predictor fit_predictor( std::vector<uint32_t> const& mhds, uint32_t degree )
{
  std::vector<double> t, y;
  for ( uint32_t i = 0u; i < mhds.size(); ++i )
  {
    t.push_back( node_position( i, static_cast<uint32_t>( mhds.size() ) ) );
    y.push_back( static_cast<double>( mhds[i] ) );
  }
  return fit_polynomial( t, y, degree );
}

/*! \brief Budget per node id (AND nodes by topological rank, 0 elsewhere). */
inline std::vector<uint32_t> predict_mhd( mhd_predictor const& p, aig_network const& net )
{
  std::vector<uint32_t> mhd( net.size(), 0u );
  auto const ands = net.and_nodes();
  for ( uint32_t i = 0u; i < ands.size(); ++i )
    mhd[ands[i]] = p.predict( node_position( i, static_cast<uint32_t>( ands.size() ) ) );
  return mhd;
}

struct episode_record
{
  uint32_t episode;
  double epsilon;
  double reward;
  bool valid;
  double area;
  double delay;
  double max_error;
  double best_area;
  double best_delay;
};

struct network_training
{
  std::string name;
  uint32_t num_states{ 0u };
  cover_cost exact{ 0.0, 0.0 };
  cover_cost best{ 0.0, 0.0 };
  q_matrix q;
  std::vector<uint32_t> best_mhd;
  std::vector<episode_record> trace;
};

/*! \brief Runs the episodes on one network. */
inline network_training train_network( aig_network const& net, supergate_library const& lib, double er_max, hyperparams const& hp,
                                       uint64_t seed, mapper_params const& ps = {} )
{
  approximate_mapper mapper( net, lib, ps );
  auto const states = net.and_nodes();
  uint32_t const n = static_cast<uint32_t>( states.size() );

  network_training result;
  result.name = net.name();
  result.num_states = n;
  result.q = q_matrix( n );

  auto const exact = mapper.map( error_budget{ er_max, {} } );
  if ( !exact.valid )
    throw mapping_invalid( exact.estimate.max_po_error(), er_max );
  result.exact = { exact.area, exact.delay };
  result.best = result.exact;
  result.best_mhd.assign( n, 0u );

  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<uint32_t> random_action( 0u, max_mhd );
  std::uniform_real_distribution<double> coin( 0.0, 1.0 );
  std::vector<uint32_t> actions( n );
  error_budget budget{ er_max, std::vector<uint32_t>( net.size(), 0u ) };

  for ( uint32_t ep = 0u; ep < hp.episodes; ++ep )
  {
    double const epsilon = hp.episodes <= 1u ? hp.epsilon_start
                                              : hp.epsilon_start + ( hp.epsilon_end - hp.epsilon_start ) * ep / ( hp.episodes - 1u );
    for ( uint32_t i = 0u; i < n; ++i )
    {
      bool const explore = ep == 0u || coin( rng ) < epsilon;
      actions[i] = explore ? random_action( rng ) : result.q.row_argmax( i );
      budget.mhd[states[i]] = actions[i];
    }
    auto const r = mapper.map( budget );
    cover_cost const cost{ r.area, r.delay };
    double const reward = compute_reward( result.best, cost, r.valid, hp );
    if ( r.valid && reward > 0.0 )
    {
      if ( r.estimate.max_po_error() > er_max + 1e-12 )
        throw std::logic_error( "accepted mapping violates the error bound" );
      result.best = cost;
      result.best_mhd = actions;
    }
    for ( uint32_t i = 0u; i < n; ++i )
      q_update( result.q, i, actions[i], reward, i + 1u < n ? std::optional<uint32_t>( i + 1u ) : std::nullopt, hp );
    result.trace.push_back( episode_record{ ep, epsilon, reward, r.valid, r.area, r.delay, r.estimate.max_po_error(), result.best.area,
                                            result.best.delay } );
  }
  return result;
}

/*! \brief Seed of the i-th training network derived from the run seed. */
inline uint64_t derive_seed( uint64_t seed, uint64_t index )
{
  /* splitmix64 step */
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * ( index + 1u );
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

struct training_result
{
  mhd_predictor predictor;
  std::vector<network_training> networks;
};

/*! \brief Trains on every network (concurrently) and averages the per-network fits weighted by state count. */
inline training_result train( std::vector<aig_network> const& networks, supergate_library const& lib, double er_max, hyperparams const& hp,
                              uint64_t seed, mapper_params const& ps = {}, bool parallel = true )
{
  if ( networks.empty() )
    throw std::invalid_argument( "train: empty training set" );
  training_result result;
  std::vector<std::future<network_training>> jobs;
  for ( size_t i = 0u; i < networks.size(); ++i )
  {
    auto job = [&, i] { return train_network( networks[i], lib, er_max, hp, derive_seed( seed, i ), ps ); };
    jobs.push_back( std::async( parallel ? std::launch::async : std::launch::deferred, job ) );
  }
  for ( auto& j : jobs )
    result.networks.push_back( j.get() );

  result.predictor.degree = hp.degree;
  result.predictor.coefficients.assign( hp.degree + 1u, 0.0 );
  double total = 0.0;
  for ( auto const& t : result.networks )
  {
    if ( t.num_states == 0u )
      continue;
    auto const fit = fit_predictor( argmax_mhd( t.q ), hp.degree );
    for ( uint32_t d = 0u; d <= hp.degree; ++d )
      result.predictor.coefficients[d] += t.num_states * fit.coefficients[d];
    total += t.num_states;
  }
  if ( total > 0.0 )
  {
    for ( auto& c : result.predictor.coefficients )
      c /= total;
  }
  return result;
}

struct predicted_mapping
{
  mapping_result mapping;
  mapping_result exact;
  std::vector<uint32_t> mhd;
  /*! number of times the budgets were halved to meet the bound */
  uint32_t repairs{ 0u };
};

/*! \brief Maps with predicted budgets; halves them until the estimate meets the bound, ending with exact mapping. */
inline predicted_mapping map_with_predictor( aig_network const& net, supergate_library const& lib, mhd_predictor const& p, double er_max,
                                             mapper_params const& ps = {} )
{
  approximate_mapper mapper( net, lib, ps );
  auto mhd = predict_mhd( p, net );
  auto exact = mapper.map( error_budget{ er_max, {} } );
  uint32_t repairs = 0u;
  while ( true )
  {
    auto r = mapper.map( error_budget{ er_max, mhd } );
    if ( r.valid )
      return predicted_mapping{ std::move( r ), std::move( exact ), std::move( mhd ), repairs };
    if ( std::all_of( mhd.begin(), mhd.end(), []( uint32_t v ) { return v == 0u; } ) )
      throw mapping_invalid( r.estimate.max_po_error(), er_max );
    for ( auto& v : mhd )
      v /= 2u;
    ++repairs;
  }
}

} // namespace qals
