#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "test_support.hpp"

using namespace qals;
namespace fs = std::filesystem;

namespace
{

struct cli_fixture : ::testing::Test
{
  std::ostringstream sink;
  logger log{ sink, 0 };
  fs::path dir;

  void SetUp() override { dir = test::temp_dir( ::testing::UnitTest::GetInstance()->current_test_info()->name() ); }

  library_config library() const { return { test::mcnc_genlib_path(), QALS_SUPERGATE_CACHE, {} }; }

  std::string circuit( aig_network const& net, std::string const& name, std::string const& sub = "circuits" ) const
  {
    auto const p = dir / sub / ( name + ".aag" );
    write_file( p, write_aiger( net ) );
    return p.string();
  }

  nlohmann::json json( fs::path const& p ) const { return nlohmann::json::parse( read_file( p ) ); }

  train_config small_training( std::string const& out, uint64_t seed = 7u ) const
  {
    train_config cfg;
    cfg.library = library();
    cfg.circuits = { ( dir / "circuits" ).string() };
    cfg.out = out;
    cfg.seed = seed;
    cfg.hp.episodes = 40u;
    return cfg;
  }
};

int run_cli( std::string const& args )
{
  auto const cmd = std::string( "QALS_LOG=quiet " ) + QALS_CLI_PATH + " " + args + " > /dev/null 2>&1";
  int const status = std::system( cmd.c_str() );
  return WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
}

} // namespace

TEST_F( cli_fixture, exact_mapping_has_unit_ratios )
{
  map_config cfg;
  cfg.library = library();
  cfg.exact = true;
  cfg.circuits = { circuit( make_adder( 3u ), "z4ml" ) };
  cfg.out = ( dir / "z4ml.blif" ).string();
  cfg.stats = ( dir / "z4ml.json" ).string();
  ASSERT_EQ( cmd_map( cfg, log ), 0 );
  auto const s = json( cfg.stats );
  EXPECT_EQ( s["ratio_area"].get<double>(), 1.0 );
  EXPECT_EQ( s["ratio_delay"].get<double>(), 1.0 );
  EXPECT_EQ( s["max_est_error"].get<double>(), 0.0 );
  EXPECT_EQ( s["max_measured_error"].get<double>(), 0.0 );
  EXPECT_EQ( s["version"].get<int>(), 1 );
  EXPECT_EQ( s["po_errors"].size(), 4u );
}

TEST_F( cli_fixture, train_and_map_are_deterministic )
{
  circuit( make_ones_counter( 5u, 3u ), "rd53" );
  circuit( make_parity( 8u ), "parity8" );
  auto const m1 = ( dir / "m1.json" ).string(), m2 = ( dir / "m2.json" ).string();
  ASSERT_EQ( cmd_train( small_training( m1 ), log ), 0 );
  ASSERT_EQ( cmd_train( small_training( m2 ), log ), 0 );
  EXPECT_EQ( read_file( m1 ), read_file( m2 ) );
  EXPECT_EQ( read_file( m1 + ".log" ), read_file( m2 + ".log" ) );

  auto const model = read_model( read_file( m1 ) );
  EXPECT_EQ( model.er_max, 0.05 );
  EXPECT_EQ( model.seed, 7u );
  EXPECT_EQ( model.training_set, ( std::vector<std::string>{ "parity8", "rd53" } ) );

  map_config cfg;
  cfg.library = library();
  cfg.model = m1;
  cfg.circuits = { circuit( make_ones_counter( 7u, 3u ), "rd73", "held_out" ) };
  for ( auto const* name : { "a", "b" } )
  {
    cfg.out = ( dir / ( std::string( name ) + ".blif" ) ).string();
    cfg.stats = ( dir / ( std::string( name ) + ".json" ) ).string();
    ASSERT_EQ( cmd_map( cfg, log ), 0 );
  }
  EXPECT_EQ( read_file( dir / "a.json" ), read_file( dir / "b.json" ) );
  EXPECT_EQ( read_file( dir / "a.blif" ), read_file( dir / "b.blif" ) );
  auto const s = json( dir / "a.json" );
  EXPECT_LE( s["max_est_error"].get<double>(), 0.05 + 1e-12 );
  EXPECT_LE( s["ratio_area"].get<double>(), 1.0 + 1e-12 );
}

TEST_F( cli_fixture, zero_bound_model_predicts_zero )
{
  circuit( make_ones_counter( 5u, 3u ), "rd53" );
  auto cfg = small_training( ( dir / "m.json" ).string() );
  cfg.er_max = 0.0;
  ASSERT_EQ( cmd_train( cfg, log ), 0 );
  auto const model = read_model( read_file( cfg.out ) );
  EXPECT_EQ( model.er_max, 0.0 );
  for ( auto v : predict_mhd( model.predictor, make_adder( 8u ) ) )
    EXPECT_EQ( v, 0u );
}

TEST_F( cli_fixture, model_and_library_must_match )
{
  circuit( make_ones_counter( 5u, 3u ), "rd53" );
  auto cfg = small_training( ( dir / "m.json" ).string() );
  cfg.hp.episodes = 2u;
  ASSERT_EQ( cmd_train( cfg, log ), 0 );
  auto model = read_model( read_file( cfg.out ) );
  model.library_hash ^= 1u;
  write_file( cfg.out, write_model( model ) );
  map_config m;
  m.library = library();
  m.model = cfg.out;
  m.circuits = { ( dir / "circuits" / "rd53.aag" ).string() };
  m.out = ( dir / "x.blif" ).string();
  EXPECT_THROW( cmd_map( m, log ), library_error );
}

TEST_F( cli_fixture, verify_flags_measured_violations )
{
  aig_network ab;
  {
    auto const a = ab.create_pi( "a" ), b = ab.create_pi( "b" );
    ab.create_po( ab.create_and( a, b ), "f" );
  }
  auto const exact_path = circuit( ab, "ab" );
  write_file( dir / "same.blif", ".model ab\n.inputs a b\n.outputs f\n.gate and2 a=a b=b O=f\n.end\n" );
  write_file( dir / "wire.blif", ".model ab\n.inputs a b\n.outputs f\n.names a f\n1 1\n.end\n" );

  verify_config cfg;
  cfg.genlib = test::mcnc_genlib_path();
  cfg.exact = exact_path;
  cfg.approx = ( dir / "same.blif" ).string();
  cfg.out = ( dir / "same.json" ).string();
  EXPECT_EQ( cmd_verify( cfg, log ), 0 );
  EXPECT_EQ( json( cfg.out )["max_po_error"].get<double>(), 0.0 );
  EXPECT_TRUE( json( cfg.out )["passed"].get<bool>() );

  cfg.approx = ( dir / "wire.blif" ).string();
  cfg.out = ( dir / "wire.json" ).string();
  EXPECT_EQ( cmd_verify( cfg, log ), 1 );
  auto const r = json( cfg.out );
  EXPECT_EQ( r["po_errors"][0]["measured"].get<double>(), 0.25 );
  EXPECT_TRUE( r["po_errors"][0]["flagged"].get<bool>() );
  EXPECT_EQ( r["mode"].get<std::string>(), "exhaustive" );

  write_file( dir / "wide.blif", ".model ab\n.inputs a b c\n.outputs f\n.names a f\n1 1\n.end\n" );
  cfg.approx = ( dir / "wide.blif" ).string();
  EXPECT_THROW( cmd_verify( cfg, log ), interface_mismatch );
}

TEST_F( cli_fixture, verify_agrees_with_estimate_on_mapped_tree )
{
  /* a fanout-free circuit: the estimate is exact */
  aig_network net;
  std::vector<qals::signal> x;
  for ( int i = 0; i < 8; ++i )
    x.push_back( net.create_pi() );
  auto const t = net.create_or( net.create_and( net.create_and( x[0], x[1] ), net.create_or( x[2], x[3] ) ),
                                net.create_and( net.create_or( x[4], !x[5] ), net.create_and( x[6], x[7] ) ) );
  net.create_po( t, "t" );
  map_config m;
  m.library = library();
  m.model = ( dir / "greedy.json" ).string();
  trained_model model;
  model.predictor = mhd_predictor{ 0u, { 32.0 } };
  model.er_max = 0.05;
  model.library_hash = library_fingerprint( read_file( test::mcnc_genlib_path() ) );
  write_file( m.model, write_model( model ) );
  m.circuits = { circuit( net, "tree" ) };
  m.out = ( dir / "tree.blif" ).string();
  m.stats = ( dir / "tree.json" ).string();
  ASSERT_EQ( cmd_map( m, log ), 0 );

  verify_config v;
  v.genlib = test::mcnc_genlib_path();
  v.exact = m.circuits[0];
  v.approx = m.out;
  v.stats = m.stats;
  v.out = ( dir / "verify.json" ).string();
  EXPECT_EQ( cmd_verify( v, log ), 0 );
  auto const r = json( v.out );
  EXPECT_NEAR( r["po_errors"][0]["measured"].get<double>(), r["po_errors"][0]["estimated"].get<double>(), 1e-9 );
}

TEST_F( cli_fixture, report_rows_and_means )
{
  auto stats = [&]( std::string const& name, double area_ratio ) {
    nlohmann::ordered_json j{ { "version", 1 },         { "circuit", name },
                              { "nodes", 10 },          { "exact", { { "area", 10.0 }, { "delay", 4.0 } } },
                              { "approx", { { "area", 10.0 * area_ratio }, { "delay", 4.0 } } },
                              { "ratio_area", area_ratio }, { "ratio_delay", 1.0 } };
    write_file( dir / "stats" / ( name + ".stats.json" ), j.dump() );
  };
  stats( "c1", 0.5 );
  report_config cfg{ { ( dir / "stats" ).string() }, ( dir / "one.csv" ).string() };
  ASSERT_EQ( cmd_report( cfg, log ), 0 );
  auto const one = read_file( cfg.out );
  EXPECT_NE( one.find( "circuit,nodes,exact_area,exact_delay,approx_area,approx_delay,area_ratio,delay_ratio\n" ), std::string::npos );
  EXPECT_NE( one.find( "c1,10,10,4,5,4,0.5,1\n" ), std::string::npos );
  EXPECT_NE( one.find( "mean,,,,,,0.5,1\n" ), std::string::npos );

  stats( "c2", 0.7 );
  cfg.out = ( dir / "two.csv" ).string();
  ASSERT_EQ( cmd_report( cfg, log ), 0 );
  EXPECT_NE( read_file( cfg.out ).find( "mean,,,,,,0.6,1\n" ), std::string::npos );

  fs::create_directories( dir / "empty" );
  EXPECT_THROW( cmd_report( report_config{ { ( dir / "empty" ).string() }, {} }, log ), std::invalid_argument );
}

TEST_F( cli_fixture, binary_exit_codes )
{
  auto const c = circuit( make_adder( 2u ), "add2" );
  auto const lib = test::mcnc_genlib_path();
  std::string const cache = std::string( " --supergate-cache " ) + QALS_SUPERGATE_CACHE;
  auto const blif = ( dir / "add2.blif" ).string();
  EXPECT_EQ( run_cli( "map --exact --lib " + lib + cache + " " + c + " --out " + blif ), 0 );
  EXPECT_TRUE( fs::exists( blif + ".stats.json" ) );
  EXPECT_EQ( run_cli( "verify --lib " + lib + " " + c + " " + blif ), 0 );
  EXPECT_EQ( run_cli( "report " + blif + ".stats.json --out " + ( dir / "r.csv" ).string() ), 0 );

  write_file( dir / "bad.aag", "aag 1 1\n" );
  EXPECT_EQ( run_cli( "map --exact --lib " + lib + cache + " " + ( dir / "bad.aag" ).string() + " --out " + blif ), 2 );
  EXPECT_NE( run_cli( "train --lib " + lib ), 0 );
  EXPECT_NE( run_cli( "map --lib " + lib + " --er-max 1.5 " + c ), 0 );
}
