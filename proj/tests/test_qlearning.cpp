#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace qals;

TEST( qlearning, update_rule_arithmetic )
{
  q_matrix q( 2u );
  q.at( 0u, 3u ) = 2.0;
  q.at( 1u, 7u ) = 4.0;
  hyperparams hp;
  hp.alpha = 0.5;
  hp.gamma = 0.9;
  q_update( q, 0u, 3u, 1.0, 1u, hp );
  /* 0.5 * 2 + 0.5 * (1 + 0.9 * 4) */
  EXPECT_NEAR( q.at( 0u, 3u ), 3.3, 1e-12 );

  hp.alpha = 1.0;
  hp.gamma = 0.0;
  q_update( q, 0u, 3u, -0.25, 1u, hp );
  EXPECT_DOUBLE_EQ( q.at( 0u, 3u ), -0.25 );

  hp.alpha = 0.0;
  q_update( q, 0u, 3u, 100.0, 1u, hp );
  EXPECT_DOUBLE_EQ( q.at( 0u, 3u ), -0.25 );

  /* terminal state: no future term */
  hp.alpha = 1.0;
  hp.gamma = 0.9;
  q_update( q, 1u, 0u, 0.5, std::nullopt, hp );
  EXPECT_DOUBLE_EQ( q.at( 1u, 0u ), 0.5 );
  EXPECT_THROW( q_update( q, 2u, 0u, 0.0, std::nullopt, hp ), std::out_of_range );
  EXPECT_THROW( q_update( q, 0u, num_mhd_actions, 0.0, std::nullopt, hp ), std::out_of_range );
}

TEST( qlearning, argmax_of_hand_built_matrix )
{
  q_matrix q( 6u );
  std::vector<uint32_t> const expected{ 2u, 2u, 2u, 3u, 0u, 3u };
  for ( uint32_t s = 0u; s < 6u; ++s )
  {
    for ( uint32_t a = 0u; a < num_mhd_actions; ++a )
      q.at( s, a ) = -0.01 * ( a + s );
    q.at( s, expected[s] ) = 0.5 + s;
  }
  EXPECT_EQ( q.cols(), 33u );
  EXPECT_EQ( argmax_mhd( q ), expected );
}

TEST( qlearning, argmax_ties_prefer_smaller_budget )
{
  q_matrix q( 1u );
  q.at( 0u, 4u ) = 1.0;
  q.at( 0u, 9u ) = 1.0;
  EXPECT_EQ( q.row_argmax( 0u ), 4u );
  EXPECT_EQ( q_matrix( 1u ).row_argmax( 0u ), 0u );
}

TEST( qlearning, reward )
{
  hyperparams hp;
  cover_cost const ref{ 10.0, 4.0 };
  EXPECT_DOUBLE_EQ( compute_reward( ref, { 10.0, 4.0 }, true, hp ), 0.0 );
  EXPECT_DOUBLE_EQ( compute_reward( ref, { 5.0, 4.0 }, true, hp ), 0.25 );
  EXPECT_DOUBLE_EQ( compute_reward( ref, { 10.0, 2.0 }, true, hp ), 0.25 );
  EXPECT_DOUBLE_EQ( compute_reward( ref, { 1.0, 1.0 }, false, hp ), -1.0 );
}

TEST( qlearning, polynomial_fit_recovers_polynomials )
{
  std::vector<double> t, y;
  for ( int i = 0; i < 30; ++i )
  {
    double const x = i / 29.0;
    t.push_back( x );
    y.push_back( 3.0 - 2.0 * x + 5.0 * x * x );
  }
  auto const p = fit_polynomial( t, y, 4u );
  ASSERT_EQ( p.coefficients.size(), 5u );
  for ( double x : { 0.0, 0.3, 0.77, 1.0 } )
    EXPECT_NEAR( p.evaluate( x ), 3.0 - 2.0 * x + 5.0 * x * x, 1e-8 );
  /* fewer samples than coefficients: interpolates */
  std::vector<double> const t2{ 0.0, 1.0 }, y2{ 1.0, 3.0 };
  auto const q = fit_polynomial( t2, y2, 4u );
  EXPECT_NEAR( q.evaluate( 0.0 ), 1.0, 1e-9 );
  EXPECT_NEAR( q.evaluate( 1.0 ), 3.0, 1e-9 );
  EXPECT_THROW( fit_polynomial( std::vector<double>{}, std::vector<double>{}, 2u ), std::invalid_argument );
}

TEST( qlearning, prediction_rounds_and_clamps )
{
  mhd_predictor p{ 1u, { -3.0, 50.0 } };
  EXPECT_EQ( p.predict( 0.0 ), 0u );
  EXPECT_EQ( p.predict( 0.1 ), 2u );
  EXPECT_EQ( p.predict( 1.0 ), max_mhd );
  mhd_predictor const zero{ 4u, std::vector<double>( 5u, 0.0 ) };
  auto const net = make_parity( 6u );
  for ( auto v : predict_mhd( zero, net ) )
    EXPECT_EQ( v, 0u );
  EXPECT_DOUBLE_EQ( node_position( 0u, 1u ), 0.0 );
  EXPECT_DOUBLE_EQ( node_position( 4u, 5u ), 1.0 );
}

TEST( qlearning, seeds_are_derived_deterministically )
{
  EXPECT_EQ( derive_seed( 42u, 0u ), derive_seed( 42u, 0u ) );
  EXPECT_NE( derive_seed( 42u, 0u ), derive_seed( 42u, 1u ) );
  EXPECT_NE( derive_seed( 42u, 0u ), derive_seed( 43u, 0u ) );
}

TEST( qlearning, training_is_deterministic_and_respects_the_bound )
{
  auto const& lib = test::mcnc_library().supergates;
  std::vector<aig_network> nets{ make_ones_counter( 5u, 3u, "rd53" ), make_parity( 6u, "p6" ) };
  hyperparams hp;
  hp.episodes = 40u;
  auto const a = train( nets, lib, 0.05, hp, 7u );
  auto const b = train( nets, lib, 0.05, hp, 7u, {}, false );
  ASSERT_EQ( a.predictor.coefficients, b.predictor.coefficients );
  ASSERT_EQ( a.networks.size(), 2u );
  for ( size_t i = 0u; i < 2u; ++i )
  {
    EXPECT_EQ( a.networks[i].q.values(), b.networks[i].q.values() );
    EXPECT_EQ( a.networks[i].trace.size(), hp.episodes );
    EXPECT_LE( a.networks[i].best.area, a.networks[i].exact.area );
    for ( auto const& r : a.networks[i].trace )
    {
      if ( r.valid )
      {
        EXPECT_LE( r.max_error, 0.05 + 1e-12 );
      }
    }
  }
}

TEST( qlearning, zero_bound_learns_zero_budgets )
{
  auto const& lib = test::mcnc_library().supergates;
  std::vector<aig_network> nets{ make_ones_counter( 5u, 3u, "rd53" ) };
  hyperparams hp;
  hp.episodes = 30u;
  auto const r = train( nets, lib, 0.0, hp, 1u );
  for ( auto v : predict_mhd( r.predictor, make_adder( 4u ) ) )
    EXPECT_EQ( v, 0u );
}

TEST( qlearning, predicted_mapping_meets_the_bound )
{
  auto const& lib = test::mcnc_library().supergates;
  mhd_predictor const greedy{ 0u, { 32.0 } };
  auto const net = make_ones_counter( 7u, 3u, "rd73" );
  auto const r = map_with_predictor( net, lib, greedy, 0.05 );
  EXPECT_TRUE( r.mapping.valid );
  EXPECT_LE( r.mapping.estimate.max_po_error(), 0.05 + 1e-12 );
  EXPECT_LE( r.mapping.area, r.exact.area + 1e-9 );
}
