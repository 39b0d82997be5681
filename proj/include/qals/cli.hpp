/*!
  \file cli.hpp
  \brief Batch commands: train, map, verify, report

  Every command takes a plain configuration record, reads and writes files,
  and returns a process exit code. Logs are line-oriented text on a stream;
  machine-readable outputs are JSON or CSV files.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aiger.hpp"
#include "blif.hpp"
#include "errors.hpp"
#include "genlib.hpp"
#include "mapper.hpp"
#include "model_io.hpp"
#include "qlearning.hpp"
#include "supergate.hpp"

namespace qals
{

enum class exit_code : int
{
  success = 0,
  /*! the command ran, but a postcondition does not hold (bound violated, outputs flagged) */
  failed = 1,
  /*! unreadable or inconsistent inputs */
  input_error = 2
};

/*! \brief Line logger; verbosity 0 (errors only), 1 (progress, default) or 2 (debug). */
class logger
{
public:
  explicit logger( std::ostream& os = std::cerr, int verbosity = 1 ) : _os( &os ), _verbosity( verbosity ) {}

  /*! \brief Verbosity from the QALS_LOG environment variable (quiet/info/debug or 0/1/2). */
  static int verbosity_from_env()
  {
    char const* v = std::getenv( "QALS_LOG" );
    if ( v == nullptr )
      return 1;
    std::string const s( v );
    if ( s == "0" || s == "quiet" || s == "error" )
      return 0;
    if ( s == "2" || s == "debug" )
      return 2;
    return 1;
  }

  int verbosity() const { return _verbosity; }

  void error( std::string const& msg ) { write( "error", msg ); }
  void info( std::string const& msg )
  {
    if ( _verbosity >= 1 )
      write( "info", msg );
  }
  void debug( std::string const& msg )
  {
    if ( _verbosity >= 2 )
      write( "debug", msg );
  }

private:
  void write( char const* level, std::string const& msg )
  {
    std::lock_guard lock( _mutex );
    *_os << "[" << level << "] " << msg << '\n';
  }

  std::ostream* _os;
  int _verbosity;
  std::mutex _mutex;
};

inline std::string read_file( std::filesystem::path const& p )
{
  std::ifstream is( p, std::ios::binary );
  if ( !is )
    throw std::runtime_error( "cannot open " + p.string() );
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline void write_file( std::filesystem::path const& p, std::string const& text )
{
  if ( p.has_parent_path() )
    std::filesystem::create_directories( p.parent_path() );
  std::ofstream os( p, std::ios::binary );
  if ( !os )
    throw std::runtime_error( "cannot write " + p.string() );
  os << text;
}

/*! \brief Reads an ASCII AIGER file; the network is named after the file stem. */
inline aig_network load_circuit( std::filesystem::path const& p )
{
  auto net = read_aiger( read_file( p ) );
  net.set_name( p.stem().string() );
  return net;
}

/*! \brief Expands directories into their `.aag` files (sorted); plain files are kept. */
inline std::vector<std::filesystem::path> collect_circuits( std::vector<std::string> const& inputs )
{
  std::vector<std::filesystem::path> result;
  for ( auto const& in : inputs )
  {
    std::filesystem::path const p( in );
    if ( std::filesystem::is_directory( p ) )
    {
      std::vector<std::filesystem::path> files;
      for ( auto const& e : std::filesystem::directory_iterator( p ) )
      {
        if ( e.is_regular_file() && e.path().extension() == ".aag" )
          files.push_back( e.path() );
      }
      std::sort( files.begin(), files.end() );
      result.insert( result.end(), files.begin(), files.end() );
    }
    else if ( std::filesystem::exists( p ) )
      result.push_back( p );
    else
      throw std::runtime_error( "no such file or directory: " + in );
  }
  return result;
}

/*! \brief Cell library with its supergates and the hash tying models to it. */
struct loaded_library
{
  uint64_t hash{ 0u };
  supergate_library supergates;
};

struct library_config
{
  std::string genlib;
  /*! supergate cache file; reused when it matches library and bounds, (re)written otherwise */
  std::string cache;
  supergate_bounds bounds;
};

inline bool same_bounds( supergate_bounds const& a, supergate_bounds const& b )
{
  return a.max_depth == b.max_depth && a.max_area == b.max_area && a.max_per_key == b.max_per_key && a.num_vars == b.num_vars &&
         a.max_composed_fanin == b.max_composed_fanin && a.max_compositions == b.max_compositions;
}

inline loaded_library load_library( library_config const& cfg, logger& log )
{
  auto const text = read_file( cfg.genlib );
  std::ostringstream warnings;
  auto gates = parse_genlib( text, &warnings );
  if ( !warnings.str().empty() )
    log.info( "genlib: " + warnings.str() );
  loaded_library lib;
  lib.hash = library_fingerprint( text );

  if ( !cfg.cache.empty() && std::filesystem::exists( cfg.cache ) )
  {
    try
    {
      auto cached = read_supergate_cache( read_file( cfg.cache ), gates, lib.hash );
      if ( same_bounds( cached.bounds(), cfg.bounds ) )
      {
        log.debug( "supergates read from " + cfg.cache );
        lib.supergates = std::move( cached );
        return lib;
      }
      log.info( "supergate cache " + cfg.cache + " has different bounds; rebuilding" );
    }
    catch ( std::exception const& e )
    {
      log.info( "ignoring supergate cache " + cfg.cache + ": " + e.what() );
    }
  }
  log.info( "building supergates (depth " + std::to_string( cfg.bounds.max_depth ) + ")" );
  lib.supergates = build_supergates( gates, cfg.bounds );
  log.info( "supergates: " + std::to_string( lib.supergates.supergates().size() ) + " in " +
            std::to_string( lib.supergates.num_keys() ) + " functions" );
  if ( !cfg.cache.empty() )
    write_file( cfg.cache, write_supergate_cache( lib.supergates, lib.hash ) );
  return lib;
}

/* ---------------------------------------------------------------- train */

struct train_config
{
  library_config library;
  std::vector<std::string> circuits;
  std::string out;
  /*! episode trace; defaults to `<out>.log` */
  std::string log_file;
  double er_max{ 0.05 };
  uint64_t seed{ 42u };
  hyperparams hp;
  mapper_params mapper;
  bool parallel{ true };
};

inline void check_er_max( double er_max )
{
  if ( !( er_max >= 0.0 && er_max <= 1.0 ) )
    throw std::invalid_argument( "er_max must lie in [0, 1]" );
}

inline std::string format_trace( std::vector<network_training> const& nets )
{
  std::ostringstream os;
  os << std::setprecision( 10 );
  os << "# network episode epsilon reward valid area delay max_error best_area best_delay\n";
  for ( auto const& n : nets )
  {
    for ( auto const& r : n.trace )
      os << n.name << ' ' << r.episode << ' ' << r.epsilon << ' ' << r.reward << ' ' << ( r.valid ? 1 : 0 ) << ' ' << r.area << ' '
         << r.delay << ' ' << r.max_error << ' ' << r.best_area << ' ' << r.best_delay << '\n';
  }
  return os.str();
}

inline trained_model train_model( train_config const& cfg, loaded_library const& lib, logger& log,
                                  std::vector<network_training>* details = nullptr )
{
  check_er_max( cfg.er_max );
  auto const files = collect_circuits( cfg.circuits );
  if ( files.empty() )
    throw std::invalid_argument( "no training circuits" );
  std::vector<aig_network> nets;
  trained_model model;
  for ( auto const& f : files )
  {
    nets.push_back( load_circuit( f ) );
    model.training_set.push_back( f.stem().string() );
    log.info( "training circuit " + f.stem().string() + ": " + std::to_string( nets.back().and_nodes().size() ) + " nodes" );
  }
  auto result = train( nets, lib.supergates, cfg.er_max, cfg.hp, cfg.seed, cfg.mapper, cfg.parallel );
  for ( auto const& n : result.networks )
  {
    log.info( n.name + ": exact area " + std::to_string( n.exact.area ) + " delay " + std::to_string( n.exact.delay ) + ", best area " +
              std::to_string( n.best.area ) + " delay " + std::to_string( n.best.delay ) );
  }
  model.predictor = result.predictor;
  model.hp = cfg.hp;
  model.er_max = cfg.er_max;
  model.seed = cfg.seed;
  model.library_hash = lib.hash;
  model.bounds = lib.supergates.bounds();
  if ( details )
    *details = std::move( result.networks );
  return model;
}

inline int cmd_train( train_config const& cfg, logger& log )
{
  auto const lib = load_library( cfg.library, log );
  std::vector<network_training> details;
  auto const model = train_model( cfg, lib, log, &details );
  write_file( cfg.out, write_model( model ) );
  write_file( cfg.log_file.empty() ? cfg.out + ".log" : cfg.log_file, format_trace( details ) );
  log.info( "model written to " + cfg.out );
  return static_cast<int>( exit_code::success );
}

/* ------------------------------------------------------------------ map */

struct map_config
{
  library_config library;
  std::string model;
  /*! map with all-zero budgets instead of the model */
  bool exact{ false };
  std::vector<std::string> circuits;
  /*! output BLIF and stats for a single circuit */
  std::string out;
  std::string stats;
  /*! for several circuits: `<name>.blif` and `<name>.stats.json` in this directory */
  std::string out_dir;
  /*! error bound; defaults to the model's bound (0 for exact mapping) */
  std::optional<double> er_max;
  uint64_t seed{ 42u };
  mapper_params mapper;
  bool parallel{ true };
};

/*! \brief Mapping of one circuit with everything the stats document reports. */
struct map_outcome
{
  std::string circuit;
  uint32_t num_pis{ 0u };
  uint32_t num_pos{ 0u };
  uint32_t num_nodes{ 0u };
  double er_max{ 0.0 };
  uint64_t seed{ 42u };
  std::string mode;
  cover_cost exact{ 0.0, 0.0 };
  cover_cost approx{ 0.0, 0.0 };
  uint32_t exact_gates{ 0u };
  uint32_t approx_gates{ 0u };
  std::vector<std::string> po_names;
  std::vector<double> estimated;
  std::vector<double> measured;
  std::string measure_mode_name;
  uint32_t repairs{ 0u };
  std::vector<uint32_t> mhd;
  std::string blif;

  double ratio_area() const { return exact.area > 0.0 ? approx.area / exact.area : 1.0; }
  double ratio_delay() const { return exact.delay > 0.0 ? approx.delay / exact.delay : 1.0; }
  double max_estimated() const { return estimated.empty() ? 0.0 : *std::max_element( estimated.begin(), estimated.end() ); }
  double max_measured() const { return measured.empty() ? 0.0 : *std::max_element( measured.begin(), measured.end() ); }
};

inline map_outcome map_circuit( aig_network const& net, loaded_library const& lib, std::optional<trained_model> const& model, double er_max,
                                uint64_t seed, mapper_params const& ps )
{
  map_outcome o;
  o.circuit = net.name();
  o.num_pis = net.num_pis();
  o.num_pos = net.num_pos();
  o.num_nodes = static_cast<uint32_t>( net.and_nodes().size() );
  o.er_max = er_max;
  o.seed = seed;
  for ( auto const& po : net.pos() )
    o.po_names.push_back( po.name );

  std::optional<mapping_result> approx_opt, exact_opt;
  if ( model )
  {
    auto r = map_with_predictor( net, lib.supergates, model->predictor, er_max, ps );
    approx_opt.emplace( std::move( r.mapping ) );
    exact_opt.emplace( std::move( r.exact ) );
    o.repairs = r.repairs;
    for ( auto n : net.and_nodes() )
      o.mhd.push_back( r.mhd[n] );
    o.mode = "model";
  }
  else
  {
    approximate_mapper mapper( net, lib.supergates, ps );
    exact_opt.emplace( mapper.map( error_budget{ er_max, {} } ) );
    if ( !exact_opt->valid )
      throw mapping_invalid( exact_opt->estimate.max_po_error(), er_max );
    approx_opt = exact_opt;
    o.mhd.assign( net.and_nodes().size(), 0u );
    o.mode = "exact";
  }
  auto const& approx = *approx_opt;
  auto const& exact = *exact_opt;
  o.exact = { exact.area, exact.delay };
  o.approx = { approx.area, approx.delay };
  o.exact_gates = exact.netlist.num_gates();
  o.approx_gates = approx.netlist.num_gates();
  o.estimated = approx.estimate.po_errors;
  auto const mode = measure_mode::automatic( net.num_pis(), seed );
  o.measured = measure_po_errors( net, approx.netlist, mode ).po_errors;
  o.measure_mode_name = mode.name();
  o.blif = write_blif( approx.netlist );
  return o;
}

inline std::string write_stats( map_outcome const& o, uint64_t library_hash )
{
  nlohmann::ordered_json j;
  j["version"] = stats_format_version;
  j["circuit"] = o.circuit;
  j["mode"] = o.mode;
  j["pis"] = o.num_pis;
  j["pos"] = o.num_pos;
  j["nodes"] = o.num_nodes;
  j["er_max"] = o.er_max;
  j["seed"] = o.seed;
  j["library_hash"] = hash_to_string( library_hash );
  j["exact"] = { { "area", o.exact.area }, { "delay", o.exact.delay }, { "gates", o.exact_gates } };
  j["approx"] = { { "area", o.approx.area }, { "delay", o.approx.delay }, { "gates", o.approx_gates } };
  j["ratio_area"] = o.ratio_area();
  j["ratio_delay"] = o.ratio_delay();
  j["max_est_error"] = o.max_estimated();
  j["max_measured_error"] = o.max_measured();
  j["measure_mode"] = o.measure_mode_name;
  j["repairs"] = o.repairs;
  nlohmann::ordered_json pos = nlohmann::ordered_json::array();
  for ( size_t i = 0u; i < o.po_names.size(); ++i )
    pos.push_back( { { "name", o.po_names[i] }, { "estimated", o.estimated[i] }, { "measured", o.measured[i] } } );
  j["po_errors"] = pos;
  j["mhd"] = o.mhd;
  return j.dump( 2 ) + "\n";
}

inline std::optional<trained_model> load_model( map_config const& cfg, loaded_library const& lib )
{
  if ( cfg.exact )
    return std::nullopt;
  if ( cfg.model.empty() )
    throw std::invalid_argument( "map needs --model or --exact" );
  auto m = read_model( read_file( cfg.model ) );
  if ( m.library_hash != lib.hash )
    throw library_error( "model was trained with a different library (hash " + hash_to_string( m.library_hash ) + ", library " +
                         hash_to_string( lib.hash ) + ")" );
  return m;
}

inline int cmd_map( map_config const& cfg, logger& log )
{
  auto const files = collect_circuits( cfg.circuits );
  if ( files.empty() )
    throw std::invalid_argument( "no circuits to map" );
  if ( files.size() > 1u && cfg.out_dir.empty() )
    throw std::invalid_argument( "several circuits need --out-dir" );
  if ( files.size() == 1u && cfg.out_dir.empty() && cfg.out.empty() )
    throw std::invalid_argument( "map needs --out or --out-dir" );

  auto const lib = load_library( cfg.library, log );
  auto const model = load_model( cfg, lib );
  double const er_max = cfg.er_max ? *cfg.er_max : ( model ? model->er_max : 0.0 );
  check_er_max( er_max );

  std::vector<std::future<map_outcome>> jobs;
  for ( auto const& f : files )
  {
    auto job = [&, f] { return map_circuit( load_circuit( f ), lib, model, er_max, cfg.seed, cfg.mapper ); };
    jobs.push_back( std::async( cfg.parallel ? std::launch::async : std::launch::deferred, job ) );
  }

  bool ok = true;
  for ( size_t i = 0u; i < jobs.size(); ++i )
  {
    auto const o = jobs[i].get();
    std::filesystem::path blif = cfg.out, stats = cfg.stats;
    if ( !cfg.out_dir.empty() )
    {
      blif = std::filesystem::path( cfg.out_dir ) / ( o.circuit + ".blif" );
      stats = std::filesystem::path( cfg.out_dir ) / ( o.circuit + ".stats.json" );
    }
    else if ( stats.empty() )
      stats = blif.string() + ".stats.json";
    write_file( blif, o.blif );
    write_file( stats, write_stats( o, lib.hash ) );
    std::ostringstream msg;
    msg << o.circuit << ": area " << o.approx.area << "/" << o.exact.area << " delay " << o.approx.delay << "/" << o.exact.delay
        << " est " << o.max_estimated() << " measured " << o.max_measured();
    log.info( msg.str() );
    if ( o.max_estimated() > er_max + 1e-12 )
    {
      log.error( o.circuit + ": estimated error exceeds the bound" );
      ok = false;
    }
    if ( o.max_measured() > er_max + 1e-12 )
      log.info( o.circuit + ": measured error exceeds the bound (estimate assumes independent inputs)" );
  }
  return static_cast<int>( ok ? exit_code::success : exit_code::failed );
}

/* --------------------------------------------------------------- verify */

struct verify_config
{
  std::string genlib;
  std::string exact;
  std::string approx;
  /*! stats document of the mapping; provides the estimated output errors */
  std::string stats;
  std::string out;
  double er_max{ 0.05 };
  uint64_t seed{ 42u };
  uint64_t num_patterns{ 100'000u };
};

struct verify_entry
{
  std::string name;
  double measured;
  std::optional<double> estimated;
  bool flagged;
};

struct verify_report
{
  std::string mode;
  std::vector<verify_entry> outputs;

  bool passed() const
  {
    return std::none_of( outputs.begin(), outputs.end(), []( auto const& e ) { return e.flagged; } );
  }
};

inline verify_report verify_mapping( aig_network const& exact, mapped_netlist const& approx, std::optional<nlohmann::json> const& stats,
                                     double er_max, uint64_t seed, uint64_t num_patterns )
{
  check_er_max( er_max );
  auto mode = measure_mode::automatic( exact.num_pis(), seed );
  if ( mode.type == measure_mode::kind::monte_carlo )
    mode.num_patterns = num_patterns;
  auto const measured = measure_po_errors( exact, approx, mode );

  std::vector<std::optional<double>> estimated( exact.num_pos() );
  if ( stats )
  {
    auto const& pos = stats->at( "po_errors" );
    if ( pos.size() != exact.num_pos() )
      throw interface_mismatch( "stats document lists a different number of outputs" );
    for ( size_t i = 0u; i < pos.size(); ++i )
      estimated[i] = pos[i].at( "estimated" ).get<double>();
  }
  verify_report rep;
  rep.mode = mode.name();
  for ( uint32_t i = 0u; i < exact.num_pos(); ++i )
    rep.outputs.push_back( verify_entry{ exact.pos()[i].name, measured.po_errors[i], estimated[i], measured.po_errors[i] > er_max + 1e-12 } );
  return rep;
}

inline std::string write_verify_report( verify_report const& rep, double er_max, uint64_t seed )
{
  nlohmann::ordered_json j;
  nlohmann::ordered_json pos = nlohmann::ordered_json::array();
  double max_measured = 0.0;
  for ( auto const& e : rep.outputs )
  {
    nlohmann::ordered_json o{ { "name", e.name }, { "measured", e.measured } };
    o["estimated"] = e.estimated ? nlohmann::ordered_json( *e.estimated ) : nlohmann::ordered_json();
    o["flagged"] = e.flagged;
    pos.push_back( o );
    max_measured = std::max( max_measured, e.measured );
  }
  j["po_errors"] = pos;
  j["max_po_error"] = max_measured;
  j["er_max"] = er_max;
  j["mode"] = rep.mode;
  j["seed"] = seed;
  j["passed"] = rep.passed();
  return j.dump( 2 ) + "\n";
}

inline int cmd_verify( verify_config const& cfg, logger& log )
{
  auto const gates = parse_genlib( read_file( cfg.genlib ) );
  auto const exact = load_circuit( cfg.exact );
  auto const approx = read_blif( read_file( cfg.approx ), gates );
  std::optional<nlohmann::json> stats;
  if ( !cfg.stats.empty() )
    stats = nlohmann::json::parse( read_file( cfg.stats ) );
  auto const rep = verify_mapping( exact, approx, stats, cfg.er_max, cfg.seed, cfg.num_patterns );
  auto const text = write_verify_report( rep, cfg.er_max, cfg.seed );
  if ( cfg.out.empty() )
    std::cout << text;
  else
    write_file( cfg.out, text );
  for ( auto const& e : rep.outputs )
  {
    if ( e.flagged )
      log.error( "output " + e.name + ": measured error " + std::to_string( e.measured ) + " exceeds " + std::to_string( cfg.er_max ) );
  }
  return static_cast<int>( rep.passed() ? exit_code::success : exit_code::failed );
}

/* --------------------------------------------------------------- report */

struct report_config
{
  std::vector<std::string> inputs;
  std::string out;
};

struct report_row
{
  std::string circuit;
  uint32_t nodes;
  cover_cost exact;
  cover_cost approx;
  double ratio_area;
  double ratio_delay;
};

inline std::vector<report_row> read_report_rows( std::vector<std::string> const& inputs )
{
  std::vector<std::filesystem::path> files;
  for ( auto const& in : inputs )
  {
    std::filesystem::path const p( in );
    if ( std::filesystem::is_directory( p ) )
    {
      std::vector<std::filesystem::path> found;
      for ( auto const& e : std::filesystem::directory_iterator( p ) )
      {
        auto const name = e.path().filename().string();
        if ( e.is_regular_file() && name.size() > 11u && name.ends_with( ".stats.json" ) )
          found.push_back( e.path() );
      }
      std::sort( found.begin(), found.end() );
      files.insert( files.end(), found.begin(), found.end() );
    }
    else
      files.push_back( p );
  }
  std::vector<report_row> rows;
  for ( auto const& f : files )
  {
    auto const j = nlohmann::json::parse( read_file( f ) );
    if ( j.at( "version" ).get<int>() != stats_format_version )
      throw parse_error( 1u, f.string() + ": unsupported stats version" );
    rows.push_back( report_row{ j.at( "circuit" ).get<std::string>(),
                                j.at( "nodes" ).get<uint32_t>(),
                                { j.at( "exact" ).at( "area" ).get<double>(), j.at( "exact" ).at( "delay" ).get<double>() },
                                { j.at( "approx" ).at( "area" ).get<double>(), j.at( "approx" ).at( "delay" ).get<double>() },
                                j.at( "ratio_area" ).get<double>(),
                                j.at( "ratio_delay" ).get<double>() } );
  }
  if ( rows.empty() )
    throw std::invalid_argument( "no stats documents to report" );
  return rows;
}

inline std::string format_report( std::vector<report_row> const& rows )
{
  std::ostringstream os;
  os << std::setprecision( 6 );
  os << "circuit,nodes,exact_area,exact_delay,approx_area,approx_delay,area_ratio,delay_ratio\n";
  double sum_area = 0.0, sum_delay = 0.0;
  for ( auto const& r : rows )
  {
    os << r.circuit << ',' << r.nodes << ',' << r.exact.area << ',' << r.exact.delay << ',' << r.approx.area << ',' << r.approx.delay
       << ',' << r.ratio_area << ',' << r.ratio_delay << '\n';
    sum_area += r.ratio_area;
    sum_delay += r.ratio_delay;
  }
  os << "mean,,,,,," << sum_area / rows.size() << ',' << sum_delay / rows.size() << '\n';
  return os.str();
}

inline int cmd_report( report_config const& cfg, logger& log )
{
  auto const text = format_report( read_report_rows( cfg.inputs ) );
  if ( cfg.out.empty() )
    std::cout << text;
  else
  {
    write_file( cfg.out, text );
    log.info( "report written to " + cfg.out );
  }
  return static_cast<int>( exit_code::success );
}

} // namespace qals
