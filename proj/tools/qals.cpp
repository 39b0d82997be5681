/*!
  \file qals.cpp
  \brief Command-line front end: train, map, verify, report
*/

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include <qals/cli.hpp>

namespace
{

void add_library_options( CLI::App& cmd, qals::library_config& cfg )
{
  cmd.add_option( "--lib", cfg.genlib, "genlib cell library" )->required()->check( CLI::ExistingFile );
  cmd.add_option( "--supergate-cache", cfg.cache, "supergate cache file (read if it matches, written otherwise)" );
  cmd.add_option( "--sg-depth", cfg.bounds.max_depth, "maximum supergate depth" )->capture_default_str();
  cmd.add_option( "--sg-area", cfg.bounds.max_area, "maximum supergate area" )->capture_default_str();
  cmd.add_option( "--sg-per-function", cfg.bounds.max_per_key, "supergates kept per function" )->capture_default_str();
}

void add_mapper_options( CLI::App& cmd, qals::mapper_params& ps )
{
  cmd.add_option( "--cut-limit", ps.cuts.cut_limit, "priority cuts per node" )->capture_default_str();
  cmd.add_option( "--max-drops", ps.max_drops, "gate drops per approximate variant" )->capture_default_str();
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "qals: approximate technology mapping with learned Hamming-distance budgets" };
  app.require_subcommand( 1 );

  qals::train_config train;
  auto* cmd_train = app.add_subcommand( "train", "train a budget model on a set of circuits" );
  add_library_options( *cmd_train, train.library );
  add_mapper_options( *cmd_train, train.mapper );
  cmd_train->add_option( "--circuits", train.circuits, "training circuits (.aag files or directories)" )->required();
  cmd_train->add_option( "--out", train.out, "model JSON" )->required();
  cmd_train->add_option( "--log", train.log_file, "episode trace (default <out>.log)" );
  cmd_train->add_option( "--er-max", train.er_max, "maximum output error rate" )->check( CLI::Range( 0.0, 1.0 ) )->capture_default_str();
  cmd_train->add_option( "--seed", train.seed, "random seed" )->capture_default_str();
  cmd_train->add_option( "--episodes", train.hp.episodes, "episodes per circuit" )->capture_default_str();
  cmd_train->add_option( "--alpha", train.hp.alpha, "learning rate" )->capture_default_str();
  cmd_train->add_option( "--gamma", train.hp.gamma, "discount factor" )->capture_default_str();
  cmd_train->add_option( "--epsilon-start", train.hp.epsilon_start, "initial exploration rate" )->capture_default_str();
  cmd_train->add_option( "--epsilon-end", train.hp.epsilon_end, "final exploration rate" )->capture_default_str();
  cmd_train->add_option( "--w-delay", train.hp.w_delay, "delay weight of the reward" )->capture_default_str();
  cmd_train->add_option( "--w-area", train.hp.w_area, "area weight of the reward" )->capture_default_str();
  cmd_train->add_option( "--degree", train.hp.degree, "degree of the budget polynomial" )->capture_default_str();
  cmd_train->add_flag( "!--sequential", train.parallel, "train circuits one after another" );

  qals::map_config map;
  double map_er_max = -1.0;
  auto* cmd_map = app.add_subcommand( "map", "map circuits with a trained model (or exactly)" );
  add_library_options( *cmd_map, map.library );
  add_mapper_options( *cmd_map, map.mapper );
  cmd_map->add_option( "circuits", map.circuits, "circuits (.aag files or directories)" )->required();
  cmd_map->add_option( "--model", map.model, "trained model JSON" );
  cmd_map->add_flag( "--exact", map.exact, "ignore the model and map exactly" );
  cmd_map->add_option( "--out", map.out, "output BLIF (single circuit)" );
  cmd_map->add_option( "--stats", map.stats, "stats JSON (single circuit, default <out>.stats.json)" );
  cmd_map->add_option( "--out-dir", map.out_dir, "directory for <name>.blif and <name>.stats.json" );
  cmd_map->add_option( "--er-max", map_er_max, "error bound (default: the model's)" )->check( CLI::Range( 0.0, 1.0 ) );
  cmd_map->add_option( "--seed", map.seed, "seed for sampled error measurement" )->capture_default_str();
  cmd_map->add_flag( "!--sequential", map.parallel, "map circuits one after another" );

  qals::verify_config verify;
  auto* cmd_verify = app.add_subcommand( "verify", "measure the output error rates of a mapped netlist" );
  cmd_verify->add_option( "--lib", verify.genlib, "genlib cell library" )->required()->check( CLI::ExistingFile );
  cmd_verify->add_option( "exact", verify.exact, "exact circuit (.aag)" )->required()->check( CLI::ExistingFile );
  cmd_verify->add_option( "approx", verify.approx, "approximate netlist (.blif)" )->required()->check( CLI::ExistingFile );
  cmd_verify->add_option( "--stats", verify.stats, "stats JSON of the mapping (estimated errors)" )->check( CLI::ExistingFile );
  cmd_verify->add_option( "--out", verify.out, "report JSON (default stdout)" );
  cmd_verify->add_option( "--er-max", verify.er_max, "error bound" )->check( CLI::Range( 0.0, 1.0 ) )->capture_default_str();
  cmd_verify->add_option( "--seed", verify.seed, "seed for sampled measurement" )->capture_default_str();
  cmd_verify->add_option( "--patterns", verify.num_patterns, "samples beyond 20 inputs" )->capture_default_str();

  qals::report_config report;
  auto* cmd_report = app.add_subcommand( "report", "tabulate stats JSON files as CSV" );
  cmd_report->add_option( "inputs", report.inputs, "stats files or directories" )->required();
  cmd_report->add_option( "--out", report.out, "CSV file (default stdout)" );

  CLI11_PARSE( app, argc, argv );

  qals::logger log( std::cerr, qals::logger::verbosity_from_env() );
  try
  {
    if ( *cmd_train )
      return qals::cmd_train( train, log );
    if ( *cmd_map )
    {
      if ( map_er_max >= 0.0 )
        map.er_max = map_er_max;
      return qals::cmd_map( map, log );
    }
    if ( *cmd_verify )
      return qals::cmd_verify( verify, log );
    if ( *cmd_report )
      return qals::cmd_report( report, log );
  }
  catch ( qals::mapping_invalid const& e )
  {
    log.error( e.what() );
    return static_cast<int>( qals::exit_code::failed );
  }
  catch ( std::exception const& e )
  {
    log.error( e.what() );
    return static_cast<int>( qals::exit_code::input_error );
  }
  return static_cast<int>( qals::exit_code::input_error );
}
