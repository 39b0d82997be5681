/*!
  \file model_io.hpp
  \brief JSON documents: trained models, mapping statistics, error reports
*/

#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error_model.hpp"
#include "errors.hpp"
#include "qlearning.hpp"
#include "supergate.hpp"

namespace qals
{

inline constexpr int model_format_version = 1;
inline constexpr int stats_format_version = 1;

struct trained_model
{
  mhd_predictor predictor;
  hyperparams hp;
  std::vector<std::string> training_set;
  double er_max{ 0.05 };
  uint64_t seed{ 42u };
  uint64_t library_hash{ 0u };
  supergate_bounds bounds;
};

inline std::string hash_to_string( uint64_t h )
{
  std::ostringstream os;
  os << std::hex << std::setw( 16 ) << std::setfill( '0' ) << h;
  return os.str();
}

inline nlohmann::ordered_json to_json( hyperparams const& hp )
{
  return { { "alpha", hp.alpha },
           { "gamma", hp.gamma },
           { "episodes", hp.episodes },
           { "epsilon_start", hp.epsilon_start },
           { "epsilon_end", hp.epsilon_end },
           { "w_delay", hp.w_delay },
           { "w_area", hp.w_area },
           { "invalid_penalty", hp.invalid_penalty } };
}

inline std::string write_model( trained_model const& m )
{
  nlohmann::ordered_json j;
  j["version"] = model_format_version;
  j["degree"] = m.predictor.degree;
  j["coefficients"] = m.predictor.coefficients;
  j["hyperparams"] = to_json( m.hp );
  j["training_set"] = m.training_set;
  j["er_max"] = m.er_max;
  j["seed"] = m.seed;
  j["library_hash"] = hash_to_string( m.library_hash );
  j["supergate_bounds"] = { { "max_depth", m.bounds.max_depth },
                            { "max_area", m.bounds.max_area },
                            { "max_per_key", m.bounds.max_per_key } };
  return j.dump( 2 ) + "\n";
}

inline trained_model read_model( std::string const& text )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw parse_error( 1u, std::string( "model is not valid JSON: " ) + e.what() );
  }
  try
  {
    if ( j.at( "version" ).get<int>() != model_format_version )
      throw parse_error( 1u, "unsupported model version" );
    trained_model m;
    m.predictor.degree = j.at( "degree" ).get<uint32_t>();
    m.predictor.coefficients = j.at( "coefficients" ).get<std::vector<double>>();
    if ( m.predictor.coefficients.size() != m.predictor.degree + 1u )
      throw parse_error( 1u, "coefficient count does not match degree" );
    auto const& h = j.at( "hyperparams" );
    m.hp.alpha = h.at( "alpha" ).get<double>();
    m.hp.gamma = h.at( "gamma" ).get<double>();
    m.hp.episodes = h.at( "episodes" ).get<uint32_t>();
    m.hp.epsilon_start = h.at( "epsilon_start" ).get<double>();
    m.hp.epsilon_end = h.at( "epsilon_end" ).get<double>();
    m.hp.w_delay = h.at( "w_delay" ).get<double>();
    m.hp.w_area = h.at( "w_area" ).get<double>();
    m.hp.invalid_penalty = h.at( "invalid_penalty" ).get<double>();
    m.hp.degree = m.predictor.degree;
    m.training_set = j.at( "training_set" ).get<std::vector<std::string>>();
    m.er_max = j.at( "er_max" ).get<double>();
    m.seed = j.at( "seed" ).get<uint64_t>();
    m.library_hash = std::stoull( j.at( "library_hash" ).get<std::string>(), nullptr, 16 );
    if ( j.contains( "supergate_bounds" ) )
    {
      auto const& b = j["supergate_bounds"];
      m.bounds.max_depth = b.at( "max_depth" ).get<uint32_t>();
      m.bounds.max_area = b.at( "max_area" ).get<double>();
      m.bounds.max_per_key = b.at( "max_per_key" ).get<uint32_t>();
    }
    return m;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( 1u, std::string( "malformed model: " ) + e.what() );
  }
}

/*! \brief Error report: `{"po_errors": {...}, "max_po_error": x, "mode": "...", "seed": n}`. */
inline nlohmann::ordered_json error_report( std::vector<std::string> const& po_names, error_profile const& prof, measure_mode const& mode )
{
  nlohmann::ordered_json j;
  nlohmann::ordered_json pos = nlohmann::ordered_json::object();
  for ( size_t i = 0u; i < po_names.size(); ++i )
    pos[po_names[i]] = prof.po_errors[i];
  j["po_errors"] = pos;
  j["max_po_error"] = prof.max_po_error();
  j["mode"] = mode.name();
  j["seed"] = mode.seed;
  return j;
}

} // namespace qals
