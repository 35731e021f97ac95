#include "ttx/census.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace ttx
{

std::string census_stats::pct_string( uint64_t count, uint64_t total )
{
  const uint64_t tenths = pct_tenths( count, total );
  return std::to_string( tenths / 10 ) + "." + std::to_string( tenths % 10 );
}

uint64_t function_space_size( int num_features )
{
  if ( num_features < 1 || num_features > 5 )
  {
    throw std::invalid_argument( "function_space_size: census supports 1 to 5 features" );
  }
  const uint64_t rows = uint64_t( 1 ) << num_features;
  return ( rows >= 64 ? ~uint64_t( 0 ) : ( uint64_t( 1 ) << rows ) - 1 ) - 1;
}

truth_table function_at( int num_features, uint64_t index )
{
  const uint64_t rows = uint64_t( 1 ) << num_features;
  if ( index < 1 || index > function_space_size( num_features ) )
  {
    throw std::out_of_range( "function_at: index outside the non-constant range" );
  }
  std::vector<uint8_t> values( rows );
  for ( uint64_t r = 0; r < rows; ++r )
  {
    values[r] = ( index >> ( rows - 1 - r ) ) & 1u;
  }
  return truth_table( num_features, std::move( values ) );
}

function_enumerator::function_enumerator( int num_features, census_mode mode, uint64_t seed,
                                          uint64_t sample_count )
    : num_features_( num_features ), exhaustive_( mode == census_mode::exhaustive )
{
  const uint64_t total = function_space_size( num_features );
  if ( exhaustive_ )
  {
    if ( num_features > 4 )
    {
      throw std::invalid_argument( "function_enumerator: exhaustive mode supports at most 4 features" );
    }
    total_ = total;
    return;
  }
  if ( sample_count < 1 || sample_count > total )
  {
    throw std::invalid_argument( "function_enumerator: sample count outside [1, " +
                                 std::to_string( total ) + "]" );
  }
  // seeded uniform draw without replacement; modulo rejection keeps the draw
  // unbiased and the mt19937_64 stream makes it reproducible everywhere
  std::mt19937_64 rng( seed );
  const uint64_t limit = UINT64_MAX - UINT64_MAX % total;
  std::unordered_set<uint64_t> taken;
  taken.reserve( sample_count );
  indices_.reserve( sample_count );
  while ( indices_.size() < sample_count )
  {
    uint64_t r = rng();
    if ( r >= limit )
    {
      continue;
    }
    const uint64_t index = 1 + r % total;
    if ( taken.insert( index ).second )
    {
      indices_.push_back( index );
    }
  }
}

std::optional<truth_table> function_enumerator::next()
{
  if ( exhaustive_ )
  {
    if ( cursor_ >= total_ )
    {
      return std::nullopt;
    }
    return function_at( num_features_, ++cursor_ );
  }
  if ( cursor_ >= indices_.size() )
  {
    return std::nullopt;
  }
  return function_at( num_features_, indices_[cursor_++] );
}

std::vector<uint64_t> function_enumerator::indices() const
{
  if ( !exhaustive_ )
  {
    return indices_;
  }
  std::vector<uint64_t> out( total_ );
  for ( uint64_t i = 0; i < total_; ++i )
  {
    out[i] = i + 1;
  }
  return out;
}

function_audit audit_function( const truth_table& table, const issue_registry& registry )
{
  if ( table.is_constant() )
  {
    throw constant_function_error( "audit_function: classifier is constant" );
  }
  function_audit out;
  out.instances.reserve( table.num_rows() );
  for ( uint64_t row = 1; row <= table.num_rows(); ++row )
  {
    const explanation_problem problem( table, point_from_row( table.num_features(), row ) );
    audit_record record = audit_instance( problem, registry );
    for ( int k = 0; k < num_issues; ++k )
    {
      out.flags[k] = out.flags[k] || record.issues.flags[k];
    }
    out.instances.push_back( std::move( record ) );
  }
  return out;
}

namespace
{

struct partial_tally
{
  std::array<issue_tally, num_issues> issues{};
  uint64_t functions = 0;
  uint64_t instances = 0;
  uint64_t implication_violations = 0;

  void add_function( const function_audit& audit )
  {
    ++functions;
    for ( int k = 0; k < num_issues; ++k )
    {
      if ( audit.flags[k] )
      {
        ++issues[k].functions;
      }
    }
    for ( const audit_record& record : audit.instances )
    {
      ++instances;
      for ( int k = 0; k < num_issues; ++k )
      {
        if ( record.issues.flags[k] )
        {
          ++issues[k].instances;
          ++( record.prediction ? issues[k].class1 : issues[k].class0 );
        }
      }
      if ( ( record.issues.flag( 4 ) && !record.issues.flag( 3 ) ) ||
           ( record.issues.flag( 5 ) && !record.issues.flag( 2 ) ) )
      {
        ++implication_violations;
      }
    }
  }

  void merge_into( census_stats& stats ) const
  {
    for ( int k = 0; k < num_issues; ++k )
    {
      stats.issues[k] += issues[k];
    }
    stats.functions_audited += functions;
    stats.instances_audited += instances;
    stats.implication_violations += implication_violations;
  }
};

const char* mode_name( census_mode mode )
{
  return mode == census_mode::exhaustive ? "exhaustive" : "sampled";
}

nlohmann::ordered_json checkpoint_params( const census_config& config, uint64_t functions_total )
{
  nlohmann::ordered_json j;
  j["m"] = config.num_features;
  j["mode"] = mode_name( config.mode );
  j["seed"] = config.seed;
  j["samples"] = config.sample_count;
  j["registry_version"] = config.registry_version;
  j["functions_total"] = functions_total;
  return j;
}

void write_checkpoint( const std::string& path, const nlohmann::ordered_json& params,
                       uint64_t position, const census_stats& stats )
{
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["params"] = params;
  j["position"] = position;
  j["functions_audited"] = stats.functions_audited;
  j["instances_audited"] = stats.instances_audited;
  j["implication_violations"] = stats.implication_violations;
  auto issues = nlohmann::ordered_json::array();
  for ( const issue_tally& t : stats.issues )
  {
    issues.push_back( { t.functions, t.instances, t.class0, t.class1 } );
  }
  j["issues"] = std::move( issues );
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out( tmp, std::ios::trunc );
    if ( !out )
    {
      throw std::runtime_error( "census: cannot write checkpoint file " + tmp );
    }
    out << j.dump( 2 ) << '\n';
  }
  if ( std::rename( tmp.c_str(), path.c_str() ) != 0 )
  {
    throw std::runtime_error( "census: cannot move checkpoint into place at " + path );
  }
}

// returns the resume position, filling partial counts into `stats`
uint64_t load_checkpoint( const std::string& path, const nlohmann::ordered_json& params,
                          census_stats& stats )
{
  std::ifstream in( path );
  if ( !in )
  {
    return 0; // nothing to resume
  }
  nlohmann::ordered_json j;
  try
  {
    in >> j;
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw checkpoint_mismatch_error( std::string( "census: unreadable checkpoint: " ) + e.what() );
  }
  if ( j.value( "version", 0 ) != 1 || j["params"] != params )
  {
    throw checkpoint_mismatch_error( "census: checkpoint parameters do not match this run" );
  }
  stats.functions_audited = j["functions_audited"].get<uint64_t>();
  stats.instances_audited = j["instances_audited"].get<uint64_t>();
  stats.implication_violations = j["implication_violations"].get<uint64_t>();
  const auto& issues = j["issues"];
  for ( int k = 0; k < num_issues; ++k )
  {
    stats.issues[k].functions = issues[k][0].get<uint64_t>();
    stats.issues[k].instances = issues[k][1].get<uint64_t>();
    stats.issues[k].class0 = issues[k][2].get<uint64_t>();
    stats.issues[k].class1 = issues[k][3].get<uint64_t>();
  }
  return j["position"].get<uint64_t>();
}

} // namespace

census_stats run_census( const census_config& config )
{
  if ( config.workers < 1 )
  {
    throw std::invalid_argument( "run_census: workers must be at least 1" );
  }
  const issue_registry& registry = issue_registry::get( config.registry_version );
  function_enumerator enumerator( config.num_features, config.mode, config.seed,
                                  config.sample_count );
  const std::vector<uint64_t> indices = enumerator.indices();

  census_stats stats;
  stats.num_features = config.num_features;
  stats.mode = config.mode;
  stats.seed = config.seed;
  stats.functions_total = function_space_size( config.num_features );
  stats.registry_version = registry.version();

  const auto params = checkpoint_params( config, stats.functions_total );
  uint64_t position = 0;
  if ( !config.checkpoint_path.empty() )
  {
    position = load_checkpoint( config.checkpoint_path, params, stats );
    if ( position > indices.size() )
    {
      throw checkpoint_mismatch_error( "census: checkpoint position beyond the function count" );
    }
  }

  const auto started = std::chrono::steady_clock::now();
  const bool keep_records = static_cast<bool>( config.instance_sink );

  while ( position < indices.size() )
  {
    const uint64_t block_end =
        std::min<uint64_t>( indices.size(), position + std::max<uint64_t>( 1, config.checkpoint_interval ) );
    const uint64_t block_size = block_end - position;
    const int workers = ( int )std::min<uint64_t>( config.workers, block_size );

    std::vector<partial_tally> partials( workers );
    std::vector<std::vector<audit_record>> records( keep_records ? workers : 0 );
    std::vector<std::exception_ptr> failures( workers );
    std::vector<std::thread> pool;
    pool.reserve( workers );

    for ( int w = 0; w < workers; ++w )
    {
      const uint64_t begin = position + block_size * w / workers;
      const uint64_t end = position + block_size * ( w + 1 ) / workers;
      pool.emplace_back( [&, w, begin, end] {
        try
        {
          for ( uint64_t pos = begin; pos < end; ++pos )
          {
            function_audit audit =
                audit_function( function_at( config.num_features, indices[pos] ), registry );
            partials[w].add_function( audit );
            if ( keep_records )
            {
              for ( audit_record& record : audit.instances )
              {
                records[w].push_back( std::move( record ) );
              }
            }
          }
        }
        catch ( ... )
        {
          failures[w] = std::current_exception();
        }
      } );
    }
    for ( std::thread& t : pool )
    {
      t.join();
    }
    for ( const std::exception_ptr& e : failures )
    {
      if ( e )
      {
        std::rethrow_exception( e );
      }
    }

    for ( int w = 0; w < workers; ++w )
    {
      partials[w].merge_into( stats );
    }
    if ( keep_records )
    {
      for ( int w = 0; w < workers; ++w )
      {
        for ( const audit_record& record : records[w] )
        {
          config.instance_sink( record );
        }
      }
    }

    position = block_end;
    if ( !config.checkpoint_path.empty() )
    {
      write_checkpoint( config.checkpoint_path, params, position, stats );
    }
  }

  stats.elapsed_seconds =
      std::chrono::duration<double>( std::chrono::steady_clock::now() - started ).count();
  return stats;
}

parity_summary parity_report( const census_stats& stats )
{
  parity_summary out;
  out.exhaustive = stats.mode == census_mode::exhaustive;
  for ( int k = 0; k < num_issues; ++k )
  {
    out.deviation[k] = ( int64_t )stats.issues[k].class1 - ( int64_t )stats.issues[k].class0;
    out.all_equal = out.all_equal && out.deviation[k] == 0;
  }
  return out;
}

} // namespace ttx
